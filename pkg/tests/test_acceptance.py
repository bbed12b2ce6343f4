"""Acceptance gate: nine numbered criteria, one test (and one pass/fail
line) each. Run with ``pytest -v`` for the per-criterion verdicts; each test
also prints its measured margins.

1. transform/projection invariant suite at stated tolerances
2. frequency/time lockstep equivalence (< 1e-9 over 100 frames, all variants)
3. sufficient-length convergence (< -60 dB, all variants)
4. under-modeling bias: Wiener match, steady-state prediction, FKF gap
5. early-stage contraction factor 0.75 +/- 0.1
6. MFKF1-faster-than-MFKF2 ordering plus analytic factor dominance
7. A-sweep monotonicity and per-A FKF pairing
8. AEC preset orderings on the bundled speech file
9. byte-identical CSV determinism
"""

import numpy as np
import pytest
from dataclasses import replace
from scipy import signal as sps

from fkflab.cli import execute, parse_args
from fkflab.filters import AlgorithmConfig, init_state, min_step, process_frame
from fkflab.oracle import (
    contraction_mfkf1,
    contraction_mfkf2,
    estimate_correlations,
    fkf_steady_state,
    frame_blocks,
    step_blocks,
    td_step,
)
from fkflab.presets import (
    FIG2_A_VALUES,
    MILD_COLORING_TAPS,
    UNDERMODEL_SYSTEM_TAPS,
    fig1,
    fig2,
    fig3,
)
from fkflab.signals import SourceSpec, SystemSpec, generate_source, system_taps
from fkflab.sim import (
    ScenarioConfig,
    ensemble_average,
    frames_to_level,
    run_scenario,
)
from fkflab.spectral import dft, idft, project_anticausal, project_causal

VARIANT_TAGS = ("fkf", "mfkf1", "mfkf2")


def final_linear_db(mis_db, window):
    """dB level of the linear mean over the last ``window`` frames."""
    return 10.0 * np.log10(np.mean(10.0 ** (np.asarray(mis_db[-window:]) / 10.0)))


# ----------------------------------------------------------- shared ensembles


@pytest.fixture(scope="module")
def fig1_results():
    sc = fig1()
    traces = run_scenario(sc)
    ens = {
        tag: ensemble_average([t for t in traces if t.algorithm == tag])
        for tag in VARIANT_TAGS
    }
    return sc, traces, ens


@pytest.fixture(scope="module")
def fig3_traces():
    return {t.algorithm: t for t in run_scenario(fig3())}


# -------------------------------------------------------------------------- 1


def test_criterion_1_transform_and_projection_suite():
    rng = np.random.default_rng(101)
    for m in (16, 20, 256, 4096):
        x = rng.standard_normal(m)
        assert np.linalg.norm(idft(dft(x)) - x) <= 1e-12 * np.linalg.norm(x)
        assert abs(np.sum(x**2) - np.sum(np.abs(dft(x)) ** 2) / m) <= 1e-10 * np.sum(x**2)

    a, b = rng.standard_normal(64), rng.standard_normal(64)
    lin = dft(1.7 * a - 0.3 * b) - (1.7 * dft(a) - 0.3 * dft(b))
    assert np.max(np.abs(lin)) <= 1e-12 * np.linalg.norm(dft(a))

    n = 32
    v = dft(rng.standard_normal(2 * n))
    for proj in (project_causal, project_anticausal):
        once = proj(v, n)
        assert np.max(np.abs(proj(once, n) - once)) <= 1e-12 * np.linalg.norm(once)
    total = project_causal(v, n) + project_anticausal(v, n)
    assert np.max(np.abs(total - v)) <= 1e-12 * np.linalg.norm(v)
    print("criterion 1 (transform/projection invariants): PASS")


# -------------------------------------------------------------------------- 2


def lockstep_divergence(variant, a, phi_ss, phi_dd, frames, source_fn, h, n, seed):
    rng = np.random.default_rng(seed)
    cfg = AlgorithmConfig(variant, a=a, phi_ss=phi_ss, phi_dd=phi_dd)
    st = init_state(cfg, n)
    w_td = np.zeros(n)
    hist = np.zeros(2 * n)
    stream = source_fn(rng, frames * n)
    d_full = np.convolve(stream, h)[: frames * n]
    worst = 0.0
    for k in range(frames):
        x_new = stream[k * n : (k + 1) * n]
        hist = np.concatenate([hist[n:], x_new])
        d = d_full[k * n : (k + 1) * n]
        res, st = process_frame(st, x_new, d)
        xi = min_step(res.mu) if variant == "mfkf2" else None
        w_td = td_step(variant, w_td, d, frame_blocks(hist), step_blocks(res.mu), a, xi=xi)
        worst = max(worst, float(np.max(np.abs(st.taps() - w_td))))
    return worst


def test_criterion_2_lockstep_equivalence():
    white = lambda rng, count: rng.standard_normal(count)
    h8 = np.random.default_rng(8).standard_normal(8)
    results = []
    for variant in VARIANT_TAGS:
        for a in (1.0, 0.999):
            div = lockstep_divergence(variant, a, 1e-2, 1e-6, 100, white, h8, 8, seed=7)
            results.append((f"{variant}@a={a}", div))
            assert div < 1e-9, f"{variant} at a={a} diverged by {div:.3e}"

    # under-modeled colored-input FKF over 1000 frames
    colored = lambda rng, count: np.convolve(
        rng.standard_normal(count), MILD_COLORING_TAPS
    )[:count]
    h16 = np.asarray(UNDERMODEL_SYSTEM_TAPS)
    div = lockstep_divergence("fkf", 1.0, 1e-2, 1e-6, 1000, colored, h16, 10, seed=11)
    assert div < 1e-9, f"1000-frame FKF lockstep diverged by {div:.3e}"
    worst = max(d for _, d in results)
    print(
        f"criterion 2 (lockstep < 1e-9): PASS - worst 100-frame divergence "
        f"{worst:.2e}, 1000-frame FKF {div:.2e}"
    )


# -------------------------------------------------------------------------- 3


def test_criterion_3_sufficient_length_convergence():
    sc = ScenarioConfig(
        source=SourceSpec("white", seed=0, variance=1.0),
        system=SystemSpec("taps", taps=tuple(np.random.default_rng(8).standard_normal(8))),
        n=8,
        frames=2000,
        a=1.0,
        seeds=(0,),
        algorithms=(
            AlgorithmConfig("fkf", phi_ss=1e-2, phi_dd=1e-6),
            AlgorithmConfig("mfkf1", phi_ss=1.0, phi_dd=1e-6),
            AlgorithmConfig("mfkf2", phi_ss=0.0, phi_dd=0.0),
        ),
    )
    finals = {t.algorithm: t.misalignment_db[-1] for t in run_scenario(sc)}
    for tag in VARIANT_TAGS:
        assert finals[tag] < -60.0, f"{tag} reached only {finals[tag]:.1f} dB"
    print(
        "criterion 3 (sufficient length < -60 dB): PASS - "
        + ", ".join(f"{tag} {finals[tag]:.0f} dB" for tag in VARIANT_TAGS)
    )


# -------------------------------------------------------------------------- 4


def test_criterion_4_under_modeling_bias(fig1_results):
    sc, traces, ens = fig1_results
    w_ref = ens["fkf"].w_ref

    # (a) the modified variants land on the Wiener solution
    err1 = np.max(np.abs(ens["mfkf1"].final_taps - w_ref))
    err2 = np.max(np.abs(ens["mfkf2"].final_taps - w_ref))
    assert err1 < 1e-2, f"mfkf1 tap error {err1:.2e}"
    assert err2 < 1e-2, f"mfkf2 tap error {err2:.2e}"

    # (b) the FKF lands on the predicted biased solution: rebuild each run's
    # step-size trajectory, average the second half, and solve the mean
    # steady-state equation
    h = system_taps(sc.system)
    algo = sc.algorithms[0]
    assert algo.variant == "fkf"
    mu_means = []
    for seed in sc.seeds:
        x = generate_source(sc.source, sc.frames * sc.n, run_seed=seed)
        d = sps.fftconvolve(x, h)[: x.size]
        st = init_state(algo, sc.n)
        acc = np.zeros(2 * sc.n)
        burn = sc.frames // 2
        for k in range(sc.frames):
            frame = slice(k * sc.n, (k + 1) * sc.n)
            res, st = process_frame(st, x[frame], d[frame])
            if k >= burn:
                acc += res.mu
        mu_means.append(acc / (sc.frames - burn))
        if seed == sc.seeds[0]:
            per_run = [t for t in traces if t.algorithm == "fkf" and t.seed == seed]
            assert np.allclose(st.taps(), per_run[0].final_taps)

    def source(count):
        rng = np.random.default_rng(999)
        x = np.convolve(rng.standard_normal(count), MILD_COLORING_TAPS)[:count]
        return x, sps.fftconvolve(x, h)[:count]

    corr = estimate_correlations(source, sc.n, frames=100_000, mu_samples=mu_means)
    predicted = fkf_steady_state(corr, sc.a)
    rel = np.max(np.abs(ens["fkf"].final_taps - predicted) / np.abs(predicted))
    assert rel < 0.05, f"FKF steady-state prediction off by {rel:.1%}"

    # (c) the bias costs the FKF > 10 dB of steady-state misalignment
    gap = final_linear_db(ens["fkf"].misalignment_db, 400) - final_linear_db(
        ens["mfkf1"].misalignment_db, 400
    )
    assert gap > 10.0, f"FKF-vs-MFKF1 misalignment gap only {gap:.1f} dB"
    print(
        f"criterion 4 (under-modeling bias): PASS - tap errors "
        f"{err1:.1e}/{err2:.1e}, prediction error {rel:.1%}, gap {gap:.1f} dB"
    )


# -------------------------------------------------------------------------- 5


def test_criterion_5_early_stage_contraction():
    n = 4
    h = np.random.default_rng(4).standard_normal(n)
    frames = 21
    seeds = range(50)
    v_sum = np.zeros((frames, n))
    for seed in seeds:
        rng = np.random.default_rng([4, seed])
        st = init_state(AlgorithmConfig("mfkf2", phi_ss=0.0, phi_dd=0.0), n)
        stream = rng.standard_normal(frames * n)
        d_full = np.convolve(stream, h)[: frames * n]
        for k in range(frames):
            frame = slice(k * n, (k + 1) * n)
            _, st = process_frame(st, stream[frame], d_full[frame])
            v_sum[k] += st.taps() - h
    norms = np.linalg.norm(v_sum / len(seeds), axis=1)
    k = np.arange(2, 21)  # regression over frames 2..20
    slope = np.polyfit(k, np.log(norms[k - 1]), 1)[0]
    factor = float(np.exp(slope))
    assert abs(factor - 0.75) <= 0.1, f"contraction factor {factor:.3f}"
    assert abs(contraction_mfkf1(n, 2 * n) - 0.75) == 0.0
    print(f"criterion 5 (early contraction 0.75 +/- 0.1): PASS - measured {factor:.3f}")


# -------------------------------------------------------------------------- 6


def test_criterion_6_mfkf1_faster_than_mfkf2():
    sc = ScenarioConfig(
        source=SourceSpec("fir_colored", seed=0, taps=MILD_COLORING_TAPS),
        system=SystemSpec("taps", taps=UNDERMODEL_SYSTEM_TAPS),
        n=10,
        frames=20,
        a=1.0,
        seeds=tuple(range(20)),
        algorithms=(
            AlgorithmConfig("mfkf1", phi_ss=3.0, phi_dd=0.0),
            AlgorithmConfig("mfkf2", phi_ss=3.0, phi_dd=0.0),
        ),
    )
    traces = run_scenario(sc)
    ens = {
        tag: ensemble_average([t for t in traces if t.algorithm == tag])
        for tag in ("mfkf1", "mfkf2")
    }
    margin = ens["mfkf2"].misalignment_db - ens["mfkf1"].misalignment_db
    assert np.all(margin >= 0.0), f"ordering violated, min margin {margin.min():.2f} dB"

    psd = np.abs(dft(np.concatenate([MILD_COLORING_TAPS, np.zeros(16)]))) ** 2
    factors = contraction_mfkf2(psd, 10, 20)
    base = contraction_mfkf1(10, 20)
    assert np.all(factors >= base - 1e-15)
    print(
        f"criterion 6 (MFKF1 faster than MFKF2): PASS - min ensemble margin "
        f"{margin.min():.2f} dB over the first {sc.frames} frames, factors in "
        f"[{factors.min():.3f}, {factors.max():.3f}] vs base {base:.2f}"
    )


# -------------------------------------------------------------------------- 7


def test_criterion_7_transition_parameter_sweep():
    base = fig2()
    steady = {}
    for a in FIG2_A_VALUES:
        traces = run_scenario(replace(base, a=a))
        for tag in ("fkf", "mfkf1"):
            ens = ensemble_average([t for t in traces if t.algorithm == tag])
            steady[(tag, a)] = final_linear_db(ens.misalignment_db, 400)

    m1 = [steady[("mfkf1", a)] for a in FIG2_A_VALUES]  # A ascending
    assert m1[0] >= m1[1] >= m1[2], f"MFKF1 steady state not monotone in A: {m1}"
    margins = []
    for a in FIG2_A_VALUES:
        margin = steady[("fkf", a)] - steady[("mfkf1", a)]
        margins.append(margin)
        assert margin > 0.0, f"MFKF1 does not beat FKF at A={a} ({margin:.2f} dB)"
    print(
        "criterion 7 (A-sweep): PASS - MFKF1 steady state "
        + "/".join(f"{v:.1f}" for v in m1)
        + " dB at A=0.99/0.999/1.0, per-A margins over FKF "
        + "/".join(f"{v:.1f}" for v in margins)
        + " dB"
    )


# -------------------------------------------------------------------------- 8


def test_criterion_8_aec_preset_orderings(fig3_traces):
    finals = {
        tag: final_linear_db(fig3_traces[tag].misalignment_db, 31)
        for tag in VARIANT_TAGS
    }
    conv = {
        tag: frames_to_level(fig3_traces[tag].misalignment_db, final_window=31)
        for tag in ("mfkf1", "mfkf2")
    }
    assert finals["mfkf1"] < finals["fkf"], f"MFKF1 {finals['mfkf1']:.2f} vs FKF {finals['fkf']:.2f}"
    assert finals["mfkf2"] < finals["fkf"], f"MFKF2 {finals['mfkf2']:.2f} vs FKF {finals['fkf']:.2f}"
    assert conv["mfkf1"] < conv["mfkf2"], f"convergence frames {conv}"
    print(
        "criterion 8 (AEC orderings): PASS - final-second misalignment "
        f"fkf {finals['fkf']:.2f} / mfkf1 {finals['mfkf1']:.2f} / "
        f"mfkf2 {finals['mfkf2']:.2f} dB; convergence frames "
        f"mfkf1 {conv['mfkf1']} < mfkf2 {conv['mfkf2']}"
    )


# -------------------------------------------------------------------------- 9


def test_criterion_9_deterministic_csv(tmp_path):
    blobs = []
    for sub in ("first", "second"):
        out = tmp_path / sub
        cmd = parse_args(["preset", "fig1", "--seeds", "0,1", "--out", str(out)])
        assert execute(cmd) == 0
        blobs.append(
            (
                (out / "trace.csv").read_bytes(),
                (out / "steady_state_taps.csv").read_bytes(),
            )
        )
    assert blobs[0][0] == blobs[1][0], "trace.csv differs between invocations"
    assert blobs[0][1] == blobs[1][1], "steady_state_taps.csv differs between invocations"

    rows = blobs[0][0].decode().splitlines()[1:]
    tags = {(r.split(",")[2], r.split(",")[3]) for r in rows}
    assert tags == {(v, s) for v in VARIANT_TAGS for s in ("0", "1")}
    size = len(blobs[0][0])
    print(f"criterion 9 (deterministic CSV): PASS - {size} bytes, byte-identical")
