"""Frequency-domain Kalman adaptive filters: FKF, MFKF1, MFKF2.

All three variants share the same per-frame skeleton on length-M blocks
(M = 2N): transform the newest M input samples, compute the block output and
a-priori error, form per-bin step sizes from the diagonal state covariance,
update the weights with a causal-constraint projection, then update the
covariance and (optionally) the noise PSD estimates.

They differ only in where the constraint projection sits in the weight
update and in how the step size enters:

- FKF:   W' = A * (W + project_causal(mu * conj(X) * E))
- MFKF1: W' = A * (W + mu * project_causal(conj(X) * E)), and the block
  output is computed from the constrained weights project_causal(W).
- MFKF2: W' = A * (W + min(mu) * project_causal(conj(X) * E)); the scalar
  minimum step commutes with the projection, which keeps the update exactly
  constraint-consistent at the cost of adapting every bin at the slowest
  bin's rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spectral import dft, project_causal

__all__ = [
    "VARIANTS",
    "AlgorithmConfig",
    "FilterState",
    "FrameResult",
    "init_state",
    "step_size",
    "filter_output",
    "update_weights",
    "min_step",
    "update_covariance",
    "estimate_observation_psd",
    "estimate_process_psd",
    "process_frame",
]

VARIANTS = ("fkf", "mfkf1", "mfkf2")
PSD_MODES = ("fixed", "estimated")


@dataclass(frozen=True)
class AlgorithmConfig:
    """Static per-algorithm parameters.

    Parameters
    ----------
    variant : str
        One of ``"fkf"``, ``"mfkf1"``, ``"mfkf2"``.
    a : float
        Transition parameter in (0, 1]. 1 models a static echo path.
    p_init : float
        Initial diagonal covariance level (power units).
    psd_mode : str
        ``"fixed"`` uses the given phi_ss / phi_dd for every frame;
        ``"estimated"`` tracks the observation-noise PSD from the error
        spectrum (smoothing ``lambda_s``) and the process-noise PSD from
        the weight spectrum.
    phi_ss, phi_dd : float
        Fixed observation / process noise PSD levels (fixed mode), also the
        initial values in estimated mode.
    lambda_s : float
        Smoothing factor of the observation-PSD estimator, in [0, 1).
    denom_floor : float
        Small positive regularizer in the step-size denominator.
    label : str or None
        Display/CSV tag; defaults to ``variant``.
    """

    variant: str
    a: float = 1.0
    p_init: float = 10.0
    psd_mode: str = "fixed"
    phi_ss: float = 0.0
    phi_dd: float = 0.0
    lambda_s: float = 0.9
    denom_floor: float = 1e-10
    label: str | None = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}, expected one of {VARIANTS}")
        if not 0.0 < self.a <= 1.0:
            raise ValueError(f"transition parameter a must be in (0, 1], got {self.a}")
        if self.p_init <= 0:
            raise ValueError(f"p_init must be positive, got {self.p_init}")
        if self.psd_mode not in PSD_MODES:
            raise ValueError(f"unknown psd_mode {self.psd_mode!r}, expected one of {PSD_MODES}")
        if not 0.0 <= self.lambda_s < 1.0:
            raise ValueError(f"lambda_s must be in [0, 1), got {self.lambda_s}")
        if self.denom_floor <= 0:
            raise ValueError(f"denom_floor must be positive, got {self.denom_floor}")
        if self.phi_ss < 0 or self.phi_dd < 0:
            raise ValueError("phi_ss and phi_dd must be nonnegative")

    @property
    def tag(self):
        return self.label if self.label is not None else self.variant


@dataclass
class FilterState:
    """Mutable per-run filter state (single owner, one frame at a time)."""

    config: AlgorithmConfig
    n: int
    W: np.ndarray           # complex, length M: frequency-domain weights
    P: np.ndarray           # real >= 0, length M: diagonal covariance
    phi_ss: np.ndarray      # real >= 0, length M
    phi_dd: np.ndarray      # real >= 0, length M
    x_history: np.ndarray   # real, length M: last M reference samples
    frame_index: int = 0
    clamp_count: int = 0    # covariance entries clamped at zero (diagnostic)

    @property
    def m(self):
        return 2 * self.n

    def taps(self):
        """Current time-domain weights (first N samples of the inverse
        transform; identical for all variants since the causal projection
        leaves the first half untouched)."""
        return np.fft.ifft(self.W)[: self.n].real


@dataclass(frozen=True)
class FrameResult:
    """Output of one frame: a-priori error, echo estimate, step sizes."""

    e_frame: np.ndarray
    y_frame: np.ndarray
    mu: np.ndarray


def init_state(config, n):
    """Fresh zero-weight state for a length-N filter (block size M = 2N)."""
    if n < 1:
        raise ValueError(f"filter length must be >= 1, got {n}")
    m = 2 * n
    return FilterState(
        config=config,
        n=n,
        W=np.zeros(m, dtype=complex),
        P=np.full(m, float(config.p_init)),
        phi_ss=np.full(m, float(config.phi_ss)),
        phi_dd=np.full(m, float(config.phi_dd)),
        x_history=np.zeros(m),
    )


def step_size(P, X, phi_ss, m, floor):
    """Per-bin step sizes mu_i = P_i / (|X_i|^2 P_i + M phi_ss_i + floor)."""
    ax2 = np.abs(X) ** 2
    return P / (ax2 * P + m * phi_ss + floor)


def filter_output(state, X, d_frame):
    """Block output, a-priori error, and error spectrum for one frame.

    The echo estimate is the last N samples of the inverse transform of
    X * W (X * project_causal(W) for MFKF1, whose extra projection removes
    the wraparound contribution of the weight tail before the output is
    formed). Returns ``(y_frame, e_frame, E)``.
    """
    n = state.n
    Wc = project_causal(state.W, n) if state.config.variant == "mfkf1" else state.W
    y_frame = np.fft.ifft(X * Wc)[n:].real
    e_frame = np.asarray(d_frame, dtype=float) - y_frame
    E = dft(np.concatenate([np.zeros(n), e_frame]))
    return y_frame, e_frame, E


def update_weights(state, X, E, mu):
    """One weight update; returns the new frequency-domain weights."""
    cfg = state.config
    n = state.n
    if cfg.variant == "fkf":
        step = project_causal(mu * np.conj(X) * E, n)
    elif cfg.variant == "mfkf1":
        step = mu * project_causal(np.conj(X) * E, n)
    else:
        step = min_step(mu) * project_causal(np.conj(X) * E, n)
    return cfg.a * (state.W + step)


def min_step(mu):
    """Scalar minimum of the per-bin step sizes (the MFKF2 step)."""
    mu = np.asarray(mu)
    if mu.size == 0:
        raise ValueError("min_step of an empty step-size vector")
    return float(mu.min())


def update_covariance(P, mu, X, a, phi_dd, n, m):
    """Diagonal covariance recursion.

    P'_i = a^2 (1 - (N/M) mu_i |X_i|^2) P_i + M phi_dd_i. The N/M factor
    reflects that only the causal half of each update block carries
    adaptation. Returns ``(P', clamped)`` where ``clamped`` counts entries
    that had to be clipped at zero (expected 0; kept as a diagnostic).
    """
    ax2 = np.abs(X) ** 2
    out = a * a * (1.0 - (n / m) * mu * ax2) * P + m * phi_dd
    neg = out < 0.0
    clamped = int(np.count_nonzero(neg))
    if clamped:
        out = np.where(neg, 0.0, out)
    return out, clamped


def estimate_observation_psd(E, prev, lambda_s, m):
    """Recursive periodogram estimate of the observation-noise PSD."""
    return lambda_s * prev + (1.0 - lambda_s) * np.abs(E) ** 2 / m


def estimate_process_psd(W, a, m):
    """Process-noise PSD implied by a stationary first-order weight model:
    var(increment) = (1 - a^2) var(weight) per bin."""
    return (1.0 - a * a) * np.abs(W) ** 2 / m


def process_frame(state, x_new, d_frame):
    """Advance one frame: returns ``(FrameResult, state)``.

    Shifts the reference history, computes the output/error, applies the
    variant's weight and covariance updates, and in estimated PSD mode
    refreshes the noise estimates afterwards (so the step size of frame k
    always uses the estimates through frame k-1).
    """
    cfg = state.config
    n, m = state.n, state.m
    x_new = np.asarray(x_new, dtype=float)
    if x_new.shape != (n,) or np.asarray(d_frame).shape != (n,):
        raise ValueError(f"process_frame expects length-{n} sample blocks")

    state.x_history = np.concatenate([state.x_history[n:], x_new])
    X = dft(state.x_history)

    y_frame, e_frame, E = filter_output(state, X, d_frame)
    mu = step_size(state.P, X, state.phi_ss, m, cfg.denom_floor)
    state.W = update_weights(state, X, E, mu)
    state.P, clamped = update_covariance(state.P, mu, X, cfg.a, state.phi_dd, n, m)
    state.clamp_count += clamped

    if cfg.psd_mode == "estimated":
        state.phi_ss = estimate_observation_psd(E, state.phi_ss, cfg.lambda_s, m)
        state.phi_dd = estimate_process_psd(state.W, cfg.a, m)

    state.frame_index += 1
    return FrameResult(e_frame=e_frame, y_frame=y_frame, mu=mu), state
