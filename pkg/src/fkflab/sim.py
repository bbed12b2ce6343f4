"""Scenario execution: signals in, per-frame metric traces out.

A scenario bundles a reference source, an unknown system, a filter length,
and a list of algorithm configurations; running it produces one
:class:`MetricsTrace` per (algorithm, seed) pair. Runs are embarrassingly
parallel and deterministic: the trace depends only on the scenario config.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy import signal as sps

from .filters import AlgorithmConfig, init_state, process_frame
from .oracle import wiener_estimate
from .signals import SourceSpec, SystemSpec, generate_source, source_rate, system_taps

__all__ = [
    "ScenarioConfig",
    "MetricsTrace",
    "run_scenario",
    "wiener_reference",
    "misalignment",
    "erle",
    "ErleSmoother",
    "ensemble_average",
    "frames_to_level",
    "thread_count",
]

MISALIGNMENT_FLOOR_DB = -300.0
# Relative diagonal loading for WAV-based Wiener references. Measured speech
# leaves the length-N normal equations in a flat valley (many tap vectors
# with near-identical residual); the loading pins the minimum-norm member.
WAV_WIENER_LOADING = 1e-2
# Samples used for the long-run normal-equations reference of colored noise.
COLORED_REFERENCE_SAMPLES = 1_000_000
_COLORED_REFERENCE_SEED = 999


@dataclass(frozen=True)
class ScenarioConfig:
    """Complete description of one experiment.

    ``a`` (the transition parameter) is scenario-level and applies to every
    algorithm; ``fs`` defaults to the WAV rate or the synthetic RIR rate and
    to 1.0 otherwise (then ``time_s`` in CSV output counts samples).
    """

    source: SourceSpec
    system: SystemSpec
    n: int
    frames: int
    algorithms: tuple
    seeds: tuple = (0,)
    a: float = 1.0
    snr_db: float | None = None
    fs: float | None = None
    erle_smoothing: float = 0.9

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"filter length n must be >= 1, got {self.n}")
        if self.frames < 0:
            raise ValueError(f"frames must be >= 0, got {self.frames}")
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"transition parameter a must be in (0, 1], got {self.a}")
        if not self.algorithms:
            raise ValueError("scenario needs at least one algorithm")
        if not self.seeds:
            raise ValueError("scenario needs at least one seed")
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        tags = [alg.tag for alg in self.algorithms]
        if len(set(tags)) != len(tags):
            raise ValueError(f"algorithm tags must be unique, got {tags}")
        if not 0.0 <= self.erle_smoothing < 1.0:
            raise ValueError("erle_smoothing must be in [0, 1)")

    @property
    def effective_fs(self):
        if self.fs is not None:
            return float(self.fs)
        if self.source.kind == "wav":
            return source_rate(self.source)
        if self.system.kind == "synthetic_rir":
            return float(self.system.fs)
        return 1.0


@dataclass
class MetricsTrace:
    """Per-frame metrics of one run (or of an ensemble average)."""

    algorithm: str
    seed: int | None
    frame_index: np.ndarray
    misalignment_db: np.ndarray
    erle_db: np.ndarray
    final_taps: np.ndarray
    w_ref: np.ndarray

    def __len__(self):
        return self.frame_index.size


def misalignment(w, w_o):
    """Normalized weight-error power in dB, clamped at -300 dB."""
    w_o = np.asarray(w_o, dtype=float)
    denom = np.sum(w_o**2)
    if denom <= 0.0:
        raise ValueError("misalignment reference must be nonzero")
    ratio = np.sum((np.asarray(w, dtype=float) - w_o) ** 2) / denom
    return 10.0 * np.log10(max(ratio, 10.0 ** (MISALIGNMENT_FLOOR_DB / 10.0)))


class ErleSmoother:
    """Streaming echo-return-loss enhancement with exponential smoothing.

    Frame powers are smoothed as p' = s p + (1 - s) mean(frame^2); both
    powers are floored at 1e-12 so silent frames report 0 dB instead of
    blowing up the log.
    """

    def __init__(self, smoothing=0.0):
        if not 0.0 <= smoothing < 1.0:
            raise ValueError("smoothing must be in [0, 1)")
        self.smoothing = smoothing
        self._pd = 0.0
        self._pe = 0.0

    def update(self, d_frame, e_frame):
        pd = float(np.mean(np.square(d_frame)))
        pe = float(np.mean(np.square(e_frame)))
        s = self.smoothing
        self._pd = s * self._pd + (1.0 - s) * pd
        self._pe = s * self._pe + (1.0 - s) * pe
        return 10.0 * np.log10(max(self._pd, 1e-12) / max(self._pe, 1e-12))


def erle(d_frame, e_frame, smoothing=0.0):
    """One-shot ERLE of a single frame pair (see :class:`ErleSmoother` for
    streaming use; for a single call the smoothing factor cancels)."""
    return ErleSmoother(smoothing).update(d_frame, e_frame)


def ensemble_average(traces):
    """Average traces of one algorithm across seeds, in the linear power
    domain (dB-domain averaging would bias the result low)."""
    if not traces:
        raise ValueError("ensemble_average needs at least one trace")
    first = traces[0]
    for t in traces[1:]:
        if t.algorithm != first.algorithm:
            raise ValueError("ensemble_average mixes algorithms")
        if len(t) != len(first):
            raise ValueError("ensemble_average mixes trace lengths")
    mis = 10.0 * np.log10(
        np.maximum(
            np.mean([10.0 ** (t.misalignment_db / 10.0) for t in traces], axis=0),
            10.0 ** (MISALIGNMENT_FLOOR_DB / 10.0),
        )
    ) if len(first) else first.misalignment_db.copy()
    erle_db = 10.0 * np.log10(
        np.maximum(np.mean([10.0 ** (t.erle_db / 10.0) for t in traces], axis=0), 1e-30)
    ) if len(first) else first.erle_db.copy()
    return MetricsTrace(
        algorithm=first.algorithm,
        seed=None,
        frame_index=first.frame_index.copy(),
        misalignment_db=mis,
        erle_db=erle_db,
        final_taps=np.mean([t.final_taps for t in traces], axis=0),
        w_ref=first.w_ref.copy(),
    )


def frames_to_level(mis_db, margin_db=3.0, smooth=15, final_window=31):
    """Frames needed to reach the trace's own final level.

    The final level is the linear mean over the last ``final_window`` frames;
    the answer is one past the last frame where the ``smooth``-frame moving
    average still exceeds final + ``margin_db``. Returns 0 for traces that
    start inside the margin.
    """
    lin = 10.0 ** (np.asarray(mis_db, dtype=float) / 10.0)
    if lin.size == 0:
        return 0
    kernel = np.ones(smooth) / smooth
    smoothed = np.convolve(lin, kernel, mode="same")
    final = lin[-final_window:].mean()
    above = np.nonzero(smoothed > final * 10.0 ** (margin_db / 10.0))[0]
    return int(above[-1]) + 1 if above.size else 0


def wiener_reference(cfg):
    """Length-N reference taps for misalignment.

    white noise  : truncation of the true impulse response (exact).
    fir_colored  : normal-equations estimate over 1e6 fresh samples from a
                   dedicated seed, via Levinson recursion.
    wav          : normal-equations estimate over the scenario's own samples
                   with relative diagonal loading WAV_WIENER_LOADING; falls
                   back to truncation when the file is degenerate (silent).
    """
    h = system_taps(cfg.system)
    n = cfg.n
    truncated = np.zeros(n)
    truncated[: min(n, h.size)] = h[: min(n, h.size)]
    if cfg.source.kind == "white":
        return truncated
    if cfg.source.kind == "fir_colored":
        rng = np.random.default_rng(_COLORED_REFERENCE_SEED)
        white = rng.standard_normal(COLORED_REFERENCE_SAMPLES)
        x = np.convolve(white, cfg.source.taps)[: white.size]
        d = sps.fftconvolve(x, h)[: x.size]
        return wiener_estimate(x, d, n)
    n_samples = cfg.frames * n
    x = generate_source(cfg.source, n_samples) if n_samples else np.zeros(0)
    if n_samples == 0 or not np.any(x):
        return truncated
    d = sps.fftconvolve(x, h)[: x.size]
    try:
        return wiener_estimate(x, d, n, loading=WAV_WIENER_LOADING)
    except np.linalg.LinAlgError:
        return truncated


def _run_single(cfg, algo, seed, w_o, h):
    n = cfg.n
    n_samples = cfg.frames * n
    x = generate_source(cfg.source, n_samples, run_seed=seed)
    d = sps.fftconvolve(x, h)[: x.size] if n_samples else np.zeros(0)
    if cfg.snr_db is not None and n_samples:
        p_echo = float(np.mean(d**2))
        noise_var = p_echo * 10.0 ** (-cfg.snr_db / 10.0)
        noise_rng = np.random.default_rng([cfg.source.seed, seed, 1])
        d = d + noise_rng.standard_normal(n_samples) * np.sqrt(noise_var)

    state = init_state(replace(algo, a=cfg.a), n)
    smoother = ErleSmoother(cfg.erle_smoothing)
    mis = np.empty(cfg.frames)
    erle_db = np.empty(cfg.frames)
    for k in range(cfg.frames):
        frame = slice(k * n, (k + 1) * n)
        result, state = process_frame(state, x[frame], d[frame])
        mis[k] = misalignment(state.taps(), w_o)
        erle_db[k] = smoother.update(d[frame], result.e_frame)
    if not (np.all(np.isfinite(mis)) and np.all(np.isfinite(erle_db))):
        bad = int(np.nonzero(~np.isfinite(mis))[0][0]) if not np.all(np.isfinite(mis)) \
            else int(np.nonzero(~np.isfinite(erle_db))[0][0])
        raise FloatingPointError(
            f"run diverged: algorithm={algo.tag} seed={seed} frame={bad} "
            f"produced a non-finite metric"
        )
    return MetricsTrace(
        algorithm=algo.tag,
        seed=seed,
        frame_index=np.arange(cfg.frames),
        misalignment_db=mis,
        erle_db=erle_db,
        final_taps=state.taps(),
        w_ref=w_o.copy(),
    )


def thread_count(explicit=None):
    """Worker count: explicit argument, else FKF_LAB_THREADS (0 = auto),
    else one worker per CPU (capped at 8)."""
    value = explicit
    if value is None:
        raw = os.environ.get("FKF_LAB_THREADS", "0")
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"FKF_LAB_THREADS must be an integer, got {raw!r}") from None
    if value < 0:
        raise ValueError(f"thread count must be >= 0, got {value}")
    if value == 0:
        return min(os.cpu_count() or 1, 8)
    return value


def run_scenario(cfg, threads=None):
    """Run every (algorithm, seed) pair of a scenario.

    Returns traces ordered by (algorithm position, seed position). Runs
    execute on a thread pool (FFT and BLAS kernels release the GIL); results
    are collected in deterministic order regardless of completion order.
    """
    w_o = wiener_reference(cfg)
    h = system_taps(cfg.system)
    jobs = [(algo, seed) for algo in cfg.algorithms for seed in cfg.seeds]
    workers = thread_count(threads)
    if workers == 1 or len(jobs) == 1:
        return [_run_single(cfg, algo, seed, w_o, h) for algo, seed in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_single, cfg, algo, seed, w_o, h) for algo, seed in jobs]
        return [f.result() for f in futures]
