"""Block transforms and causal/anticausal constraint projections.

All frequency-domain processing in this package runs on length-M blocks with
M = 2N: the first N time samples of a block are the "causal" half (filter
taps, old input) and the last N samples are the "anticausal" half (new input,
valid output). The forward transform is unnormalized; the inverse carries the
1/M factor, so ``idft(dft(x)) == x``.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "dft",
    "idft",
    "idft_real",
    "project_causal",
    "project_anticausal",
]

# Imaginary residual allowed when an inverse transform is declared real,
# relative to the block norm. Well above FFT rounding noise, far below
# any signal scale.
REAL_RESIDUAL_TOL = 1e-10


def dft(block):
    """Unnormalized forward transform of a real or complex block.

    Parameters
    ----------
    block : array_like, shape (M,)
        Time-domain samples, M >= 2.

    Returns
    -------
    ndarray of complex, shape (M,)
    """
    block = np.asarray(block)
    if block.ndim != 1 or block.shape[0] < 2:
        raise ValueError("dft expects a 1-D block of length >= 2")
    if not np.all(np.isfinite(block)):
        raise ValueError("dft input contains non-finite values")
    return np.fft.fft(block)


def idft(spec):
    """Inverse of :func:`dft` (carries the 1/M normalization).

    Returns the complex time block; use :func:`idft_real` when the spectrum
    is expected to be conjugate-symmetric.
    """
    spec = np.asarray(spec)
    if spec.ndim != 1 or spec.shape[0] < 2:
        raise ValueError("idft expects a 1-D spectrum of length >= 2")
    return np.fft.ifft(spec)


def idft_real(spec):
    """Inverse transform that asserts a real-representable result.

    The imaginary residual must stay below ``REAL_RESIDUAL_TOL`` times the
    block norm; anything larger signals symmetry corruption upstream and
    raises instead of being silently discarded.
    """
    t = idft(spec)
    norm = np.linalg.norm(t)
    resid = np.abs(t.imag).max() if t.size else 0.0
    if norm > 0 and resid > REAL_RESIDUAL_TOL * norm:
        raise ValueError(
            f"spectrum is not real-representable: imaginary residual "
            f"{resid:.3e} exceeds {REAL_RESIDUAL_TOL:g} * norm {norm:.3e}"
        )
    return t.real


def _check_projection_size(spec, n):
    spec = np.asarray(spec)
    if spec.ndim != 1 or spec.shape[0] != 2 * n:
        raise ValueError(f"projection expects length M = 2N = {2 * n}, got {spec.shape}")
    return spec


def project_causal(spec, n):
    """Zero the last N time-domain samples of a length-2N spectrum.

    Equivalent to the dense operator F diag(I_N, 0_N) F^-1 applied to the
    spectrum; implemented as transform-zero-transform.
    """
    spec = _check_projection_size(spec, n)
    t = np.fft.ifft(spec)
    t[n:] = 0.0
    return np.fft.fft(t)


def project_anticausal(spec, n):
    """Zero the first N time-domain samples of a length-2N spectrum.

    Complement of :func:`project_causal`: the two projections sum to the
    identity exactly.
    """
    spec = _check_projection_size(spec, n)
    t = np.fft.ifft(spec)
    t[:n] = 0.0
    return np.fft.fft(t)
