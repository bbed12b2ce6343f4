"""Dense time-domain reference implementations and analytical predictors.

Everything here trades speed for transparency: explicit circulant matrices,
dense solves, Monte-Carlo expectation estimates. The fast frequency-domain
filters in :mod:`fkflab.filters` are validated against these references in
lockstep, and the steady-state / convergence predictors quantify where each
variant settles and how fast it gets there.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import get_lapack_funcs, lu_factor, lu_solve, solve_toeplitz, toeplitz

__all__ = [
    "CirculantPair",
    "CorrelationSet",
    "circulant_of",
    "decompose_blocks",
    "td_step",
    "estimate_correlations",
    "wiener",
    "fir_autocorr",
    "wiener_fir",
    "fkf_steady_state",
    "contraction_mfkf1",
    "contraction_mfkf2",
]

# Condition-estimate cutoff for dense solves: beyond this the normal
# equations carry no trustworthy information at double precision.
COND_LIMIT = 1e12


@dataclass(frozen=True)
class CirculantPair:
    """Top row of N x N blocks of a circulant 2N x 2N matrix.

    A circulant with first row r splits into [[B1, B2], [B2, B1]]; B1 is the
    top-left block, B2 the top-right.
    """

    b1: np.ndarray
    b2: np.ndarray


@dataclass(frozen=True)
class CorrelationSet:
    """Second-order statistics of the framed input/desired streams.

    R    : E{X2 X2^T}, N x N (equals N times the input autocorrelation)
    r    : E{X2 d}, length N
    R_hat: E{X1 X2^T}, N x N (cross block from the frame's older half)
    r_hat: E{X1 d}, length N
    lam1, lam2 : mean step-size circulant blocks, or None when no step-size
    samples were supplied.
    """

    R: np.ndarray
    R_hat: np.ndarray
    r: np.ndarray
    r_hat: np.ndarray
    lam1: np.ndarray | None = None
    lam2: np.ndarray | None = None


def circulant_of(first_row):
    """Dense circulant matrix: row i is ``first_row`` cyclically
    right-shifted by i, i.e. C[i, j] = first_row[(j - i) mod M]."""
    r = np.asarray(first_row)
    if r.ndim != 1 or r.size < 1:
        raise ValueError("circulant_of expects a nonempty 1-D first row")
    mm = r.size
    idx = (np.arange(mm)[None, :] - np.arange(mm)[:, None]) % mm
    return r[idx]


def decompose_blocks(c):
    """Split a circulant 2N x 2N matrix into its (B1, B2) block pair.

    Validates the circulant structure first; a non-circulant input means the
    caller built the matrix inconsistently, which is worth failing loudly.
    """
    c = np.asarray(c)
    mm = c.shape[0]
    if c.ndim != 2 or c.shape[1] != mm or mm % 2:
        raise ValueError("decompose_blocks expects a square even-sized matrix")
    if np.abs(c - circulant_of(c[0])).max() > 1e-12 * max(1.0, np.abs(c).max()):
        raise ValueError("matrix is not circulant")
    n = mm // 2
    return CirculantPair(b1=c[:n, :n].copy(), b2=c[:n, n:].copy())


def td_step(variant, w, d_frame, x_blocks, m_blocks, a, xi=None):
    """One dense time-domain update of the length-N weight vector.

    ``x_blocks`` are the (X1, X2) blocks of the circulant built from the
    current M input samples, ``m_blocks`` the (M1, M2) blocks of the
    circulant realization of the per-bin step sizes. The a-priori error is
    e = d - X2^T w for every variant; the updates are

    - fkf:   w' = a w + a (M1 X2 + M2 X1) e
    - mfkf1: w' = a w + a (M1 X2) e
    - mfkf2: w' = a (w + xi X2 e)   with the scalar step xi

    and each one is the exact time-domain image of the corresponding
    frequency-domain weight recursion.
    """
    w = np.asarray(w, dtype=float)
    d_frame = np.asarray(d_frame, dtype=float)
    x1, x2 = x_blocks.b1, x_blocks.b2
    if w.shape[0] != x2.shape[0] or d_frame.shape[0] != x2.shape[0]:
        raise ValueError("td_step dimension mismatch")
    e = d_frame - x2.T @ w
    if variant == "fkf":
        m1, m2 = m_blocks.b1, m_blocks.b2
        return a * w + a * (m1 @ x2 + m2 @ x1) @ e
    if variant == "mfkf1":
        return a * w + a * (m_blocks.b1 @ x2) @ e
    if variant == "mfkf2":
        if xi is None:
            raise ValueError("mfkf2 td_step requires the scalar step xi")
        return a * (w + xi * x2 @ e)
    raise ValueError(f"unknown variant {variant!r}")


def frame_blocks(x_history):
    """(X1, X2) circulant blocks of one frame's M-sample input history."""
    return decompose_blocks(circulant_of(np.asarray(x_history, dtype=float)))


def step_blocks(mu):
    """(M1, M2) circulant blocks realizing the per-bin step sizes mu."""
    row = np.fft.ifft(np.asarray(mu, dtype=float))
    return decompose_blocks(circulant_of(row.real))


def estimate_correlations(sample_source, n, frames=100_000, mu_samples=None, chunk=4000):
    """Monte-Carlo estimate of the framed second-order statistics.

    Parameters
    ----------
    sample_source : callable
        ``sample_source(n_samples) -> (x, d)`` returning aligned reference
        and desired streams of at least ``n_samples`` samples.
    n : int
        Filter length N (frame advance; block size is 2N).
    frames : int
        Number of frames averaged. 1e5 gives ~1e-2 relative accuracy on
        unit-variance inputs.
    mu_samples : sequence of length-2N step-size vectors, optional
        When given, the mean step-size circulant blocks (lam1, lam2) are
        estimated from their average.
    """
    m = 2 * n
    need = frames * n + m
    x, d = sample_source(need)
    x = np.asarray(x, dtype=float)[:need]
    d = np.asarray(d, dtype=float)[:need]

    i_id = np.arange(n)
    # gather maps from a frame's M history samples into the circulant blocks:
    # X2[i, j] = hist[N + j - i], X1[i, j] = hist[(j - i) mod M]
    x2_idx = n + i_id[None, :] - i_id[:, None]
    x1_idx = (i_id[None, :] - i_id[:, None]) % m

    R = np.zeros((n, n))
    R_hat = np.zeros((n, n))
    r = np.zeros(n)
    r_hat = np.zeros(n)
    count = 0
    for s in range(1, frames, chunk):  # frame 1 onward: history always full
        ks = np.arange(s, min(s + chunk, frames))
        hs = np.stack([x[(k + 1) * n - m : (k + 1) * n] for k in ks])
        ds = np.stack([d[k * n : (k + 1) * n] for k in ks])
        x2 = hs[:, x2_idx]
        x1 = hs[:, x1_idx]
        R += np.einsum("kij,klj->il", x2, x2)
        R_hat += np.einsum("kij,klj->il", x1, x2)
        r += np.einsum("kij,kj->i", x2, ds)
        r_hat += np.einsum("kij,kj->i", x1, ds)
        count += len(ks)

    lam1 = lam2 = None
    if mu_samples is not None:
        mu_mean = np.mean(np.asarray(mu_samples, dtype=float), axis=0)
        pair = step_blocks(mu_mean)
        lam1, lam2 = pair.b1, pair.b2
    return CorrelationSet(R / count, R_hat / count, r / count, r_hat / count, lam1, lam2)


def _solve_checked(a, b):
    """Pivoted LU solve with a 1-norm condition estimate."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore")  # exact-singular warning; gecon decides
        lu, piv = lu_factor(a)
    gecon = get_lapack_funcs("gecon", (a,))
    rcond, _ = gecon(lu, np.linalg.norm(a, 1))
    if not np.isfinite(rcond) or rcond <= 0 or 1.0 / rcond > COND_LIMIT:
        estimate = "inf" if rcond <= 0 else f"{1.0 / rcond:.2e}"
        raise np.linalg.LinAlgError(
            f"system is numerically singular (condition estimate "
            f"{estimate} exceeds {COND_LIMIT:g})"
        )
    return lu_solve((lu, piv), b)


def wiener(r_x, r_xd):
    """Solve the normal equations R_x w = r_xd for the optimal taps."""
    return _solve_checked(r_x, r_xd)


def fir_autocorr(taps, variance, max_lag):
    """Autocorrelation sequence of white noise filtered by an FIR:
    R(tau) = variance * sum_k c_k c_{k+tau}, zero beyond the filter span."""
    taps = np.asarray(taps, dtype=float)
    full = np.correlate(taps, taps, "full") * variance
    lags = np.zeros(max_lag + 1)
    span = min(max_lag + 1, taps.size)
    lags[:span] = full[taps.size - 1 : taps.size - 1 + span]
    return lags


def wiener_fir(coloring_taps, variance, system_taps, n):
    """Closed-form length-N Wiener solution for an FIR-colored input passed
    through a known FIR system (used as a cross-check for the Monte-Carlo
    normal-equations estimates)."""
    system_taps = np.asarray(system_taps, dtype=float)
    lags = fir_autocorr(coloring_taps, variance, n + system_taps.size + 1)
    r_x = toeplitz(lags[:n])
    r_xd = np.array(
        [np.dot(system_taps, lags[np.abs(i - np.arange(system_taps.size))]) for i in range(n)]
    )
    return wiener(r_x, r_xd), r_x, r_xd


def wiener_estimate(x, d, n, loading=0.0):
    """Normal-equations estimate of the length-N Wiener taps from sample
    streams, via Levinson recursion on the empirical correlations.

    ``loading`` adds relative diagonal loading: the zero-lag autocorrelation
    is scaled by (1 + loading). Use it when the input spectrum leaves the
    normal equations nearly singular (measured speech needs ~1e-2; the
    solution family is then pinned to its minimum-norm representative).
    """
    x = np.asarray(x, dtype=float)
    d = np.asarray(d, dtype=float)
    num = x.size
    ac = np.array([np.dot(x[: num - k], x[k:]) for k in range(n)]) / num
    cc = np.array([np.dot(x[: num - k], d[k:]) for k in range(n)]) / num
    col = ac.copy()
    col[0] *= 1.0 + loading
    return solve_toeplitz(col, cc)


def fkf_steady_state(c, a):
    """Predicted mean steady-state taps of the FKF.

    Solves a [(1-a) I + a (lam1 R + lam2 R_hat)] w = a [lam1 r + lam2 r_hat]
    ... rearranged as w = a * solve((1-a) I + a (lam1 R + lam2 R_hat),
    lam1 r + lam2 r_hat). The cross blocks (lam2, R_hat) are exactly what a
    Wiener solve does not contain; they carry the constraint-placement bias
    that keeps the FKF away from the Wiener solution under colored input.
    """
    if c.lam1 is None or c.lam2 is None:
        raise ValueError("fkf_steady_state needs lam1/lam2 step-size blocks")
    n = c.R.shape[0]
    lhs = (1.0 - a) * np.eye(n) + a * (c.lam1 @ c.R + c.lam2 @ c.R_hat)
    rhs = c.lam1 @ c.r + c.lam2 @ c.r_hat
    return a * _solve_checked(lhs, rhs)


def contraction_mfkf1(n, m):
    """Early-stage per-frame contraction factor of the MFKF1 mean error:
    1 - (N/M)^2, i.e. 0.75 whenever M = 2N."""
    if m != 2 * n:
        raise ValueError("contraction_mfkf1 expects M = 2N")
    return 1.0 - (n / m) ** 2


def contraction_mfkf2(psd, n, m):
    """Early-stage per-bin contraction factors of the MFKF2 mean error:
    1 - (N/M)^2 * psd_i / max(psd). Every factor dominates the MFKF1 value,
    with equality exactly at maximal-PSD bins, so MFKF2 is never faster."""
    psd = np.asarray(psd, dtype=float)
    if psd.ndim != 1 or psd.size != m:
        raise ValueError(f"psd must have length M = {m}")
    if np.any(psd < 0) or not np.any(psd > 0):
        raise ValueError("psd must be nonnegative with a positive maximum")
    return 1.0 - (n / m) ** 2 * psd / psd.max()
