"""Anatomy of the under-modeling bias.

A 16-tap system driven by colored noise is identified with 10-tap adaptive
filters. The FKF's causality constraint is applied after the step-size
diagonal; with colored input the two do not commute and the converged weights
are pulled away from the Wiener solution. MFKF1 (constraint before the
diagonal) and MFKF2 (scalar step) both remove the bias.

This script runs a reduced ensemble, compares the converged taps of all three
variants against the Wiener reference, and checks the FKF's biased solution
against the analytical steady-state prediction built from Monte-Carlo
correlation estimates and the FKF's own measured step sizes.

Runs in roughly 10 s. Full-scale version: python3 -m fkflab preset fig1
"""

from dataclasses import replace
from pathlib import Path

import numpy as np
from scipy import signal as sps

from fkflab import (
    ensemble_average,
    estimate_correlations,
    fkf_steady_state,
    generate_source,
    init_state,
    process_frame,
    run_scenario,
    system_taps,
)
from fkflab.output import write_taps_csv, write_trace_csv
from fkflab.presets import MILD_COLORING_TAPS, fig1
from fkflab.svgplot import line_chart

OUT = Path("demo_results") / "undermodeling_bias"
SEEDS = tuple(range(8))
FRAMES = 3000
MC_FRAMES = 30_000


def collect_fkf_mu(scenario, seed):
    """Rerun the FKF on one seed's exact streams, averaging late step sizes."""
    n = scenario.n
    algo = next(a for a in scenario.algorithms if a.variant == "fkf")
    x = generate_source(scenario.source, scenario.frames * n, run_seed=seed)
    d = sps.fftconvolve(x, system_taps(scenario.system))[: x.size]
    st = init_state(replace(algo, a=scenario.a), n)
    acc = np.zeros(2 * n)
    burn = scenario.frames // 2
    for k in range(scenario.frames):
        frame = slice(k * n, (k + 1) * n)
        res, st = process_frame(st, x[frame], d[frame])
        if k >= burn:
            acc += res.mu
    return acc / (scenario.frames - burn)


def main():
    scenario = replace(fig1(), seeds=SEEDS, frames=FRAMES)
    traces = run_scenario(scenario)
    ens = {
        tag: ensemble_average([t for t in traces if t.algorithm == tag])
        for tag in ("fkf", "mfkf1", "mfkf2")
    }
    w_ref = ens["fkf"].w_ref

    print("ensemble misalignment after %d frames (%d seeds):" % (FRAMES, len(SEEDS)))
    for tag in ("fkf", "mfkf1", "mfkf2"):
        print("  %-6s %8.1f dB" % (tag, ens[tag].misalignment_db[-1]))
    print()

    print("converged taps vs the Wiener solution (max absolute error):")
    for tag in ("fkf", "mfkf1", "mfkf2"):
        err = np.max(np.abs(ens[tag].final_taps - w_ref))
        print("  %-6s %.2e" % (tag, err))
    print("the FKF error above is bias, not noise; the prediction below nails it")
    print()

    # analytical steady state: MC correlations + the FKF's own step sizes
    mu_means = [collect_fkf_mu(scenario, s) for s in SEEDS[:4]]
    h = system_taps(scenario.system)

    def source(count):
        rng = np.random.default_rng(999)
        x = np.convolve(rng.standard_normal(count), MILD_COLORING_TAPS)[:count]
        return x, sps.fftconvolve(x, h)[:count]

    corr = estimate_correlations(source, scenario.n, frames=MC_FRAMES, mu_samples=mu_means)
    predicted = fkf_steady_state(corr, scenario.a)
    rel = np.max(np.abs(ens["fkf"].final_taps - predicted) / np.abs(predicted))
    print("FKF steady-state prediction, per-tap relative error: %.1f%%" % (100 * rel))
    print()
    print("  tap   wiener      fkf (meas)  fkf (pred)  mfkf1 (meas)")
    for i in range(scenario.n):
        print(
            "  %3d  %10.6f  %10.6f  %10.6f  %10.6f"
            % (i, w_ref[i], ens["fkf"].final_taps[i], predicted[i], ens["mfkf1"].final_taps[i])
        )

    OUT.mkdir(parents=True, exist_ok=True)
    write_trace_csv(OUT / "trace.csv", traces, scenario.n, scenario.effective_fs)
    write_taps_csv(OUT / "steady_state_taps.csv", [ens[t] for t in ("fkf", "mfkf1", "mfkf2")])
    line_chart(
        [(t, ens[t].frame_index, ens[t].misalignment_db) for t in ("fkf", "mfkf1", "mfkf2")],
        OUT / "misalignment.svg",
        title="under-modeling bias: ensemble misalignment",
    )
    print("\nartifacts in %s" % OUT)


if __name__ == "__main__":
    main()
