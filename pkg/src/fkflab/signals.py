"""Reference-signal sources, unknown systems, and audio fixtures.

Sources and systems are described by small frozen spec objects so scenario
configurations stay hashable and serializable. All randomness flows through
``numpy.random.default_rng`` seeded from (spec seed, ensemble seed) pairs, so
every run is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as sps
from scipy.io import wavfile

__all__ = [
    "SourceSpec",
    "SystemSpec",
    "generate_source",
    "system_taps",
    "synthetic_rir",
    "load_wav",
    "save_wav",
    "synthetic_speech",
]


@dataclass(frozen=True)
class SourceSpec:
    """Reference-signal source: white noise, FIR-colored noise, or a WAV file.

    ``seed`` is the source's base seed; the harness mixes in a per-run
    ensemble seed so different ensemble members draw independent streams.
    """

    kind: str                      # "white" | "fir_colored" | "wav"
    seed: int = 0
    variance: float = 1.0          # white only
    taps: tuple | None = None      # fir_colored only
    path: str | None = None        # wav only

    def __post_init__(self):
        if self.kind not in ("white", "fir_colored", "wav"):
            raise ValueError(f"unknown source kind {self.kind!r}")
        if self.kind == "white" and self.variance <= 0:
            raise ValueError("white source needs a positive variance")
        if self.kind == "fir_colored":
            if not self.taps:
                raise ValueError("fir_colored source needs a nonempty taps sequence")
            object.__setattr__(self, "taps", tuple(float(t) for t in self.taps))
        if self.kind == "wav" and not self.path:
            raise ValueError("wav source needs a file path")


@dataclass(frozen=True)
class SystemSpec:
    """Unknown system: explicit taps or a synthetic exponentially decaying
    room impulse response."""

    kind: str                      # "taps" | "synthetic_rir"
    taps: tuple | None = None
    fs: float = 16000.0
    t60: float = 0.6
    length: int = 8192
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("taps", "synthetic_rir"):
            raise ValueError(f"unknown system kind {self.kind!r}")
        if self.kind == "taps":
            if not self.taps:
                raise ValueError("system needs a nonempty taps sequence")
            object.__setattr__(self, "taps", tuple(float(t) for t in self.taps))
        else:
            if self.fs <= 0 or self.t60 <= 0 or self.length < 1:
                raise ValueError("synthetic_rir needs fs > 0, t60 > 0, length >= 1")


def generate_source(spec, n, run_seed=0):
    """Materialize ``n`` reference samples for one ensemble member.

    white       : i.i.d. Gaussian, requested variance.
    fir_colored : unit-variance white noise convolved with the coloring FIR
                  (full history, zero initial state).
    wav         : PCM16 mono file, normalized to [-1, 1); ensemble seeds do
                  not alter file playback.
    """
    if spec.kind == "white":
        rng = np.random.default_rng([spec.seed, run_seed, 0])
        return rng.standard_normal(n) * np.sqrt(spec.variance)
    if spec.kind == "fir_colored":
        rng = np.random.default_rng([spec.seed, run_seed, 0])
        white = rng.standard_normal(n)
        return np.convolve(white, spec.taps)[:n]
    rate, samples = load_wav(spec.path)
    if samples.size < n:
        raise ValueError(
            f"wav file {spec.path!r} has {samples.size} samples, scenario needs {n}"
        )
    return samples[:n]


def source_rate(spec, default=1.0):
    """Sampling rate implied by a source (WAV files carry one), else default."""
    if spec.kind == "wav":
        rate, _ = load_wav(spec.path)
        return float(rate)
    return float(default)


def system_taps(spec):
    """Materialize the unknown system's impulse response."""
    if spec.kind == "taps":
        return np.asarray(spec.taps, dtype=float)
    return synthetic_rir(spec.fs, spec.t60, spec.length, spec.seed)


def synthetic_rir(fs, t60, length, seed):
    """Unit-energy exponentially decaying Gaussian room impulse response.

    h[n] = g[n] exp(-3 ln(10) n / (t60 fs)) with g seeded unit Gaussian, so
    the envelope decays exactly 60 dB over t60 seconds.
    """
    if fs <= 0 or t60 <= 0 or length < 1:
        raise ValueError("synthetic_rir needs fs > 0, t60 > 0, length >= 1")
    rng = np.random.default_rng(seed)
    n = np.arange(length)
    h = rng.standard_normal(length) * np.exp(-3.0 * np.log(10.0) * n / (t60 * fs))
    return h / np.linalg.norm(h)


def load_wav(path):
    """Read a PCM16 mono WAV file; returns (rate, samples in [-1, 1))."""
    rate, data = wavfile.read(path)
    if data.dtype != np.int16:
        raise ValueError(f"{path!r}: expected 16-bit signed PCM, got dtype {data.dtype}")
    if data.ndim != 1:
        raise ValueError(f"{path!r}: expected mono audio, got shape {data.shape}")
    return rate, data.astype(np.float64) / 32768.0


def save_wav(path, fs, samples):
    """Write float samples in [-1, 1) as PCM16 mono.

    Quantization is round(x * 32768) clipped to the int16 range, the exact
    inverse of the /32768 normalization in :func:`load_wav`, so samples
    already on the PCM16 grid survive a save/load roundtrip unchanged.
    """
    pcm = np.clip(np.round(np.asarray(samples) * 32768.0), -32768, 32767)
    wavfile.write(path, int(fs), pcm.astype(np.int16))


# Fixed formant targets (Hz) for the voiced segments of the synthetic speech
# signal: six vowel-like triples spanning the usual F1/F2/F3 ranges.
_VOWELS = (
    (730, 1090, 2440),
    (390, 1990, 2550),
    (440, 1020, 2240),
    (530, 1840, 2480),
    (660, 1720, 2410),
    (300, 870, 2240),
)


def synthetic_speech(duration=48.0, fs=16000, seed=2024, pause_prob=0.0, floor_amp=0.06):
    """Deterministic speech-like test signal (PCM16 grid, [-1, 1)).

    Concatenates voiced segments (harmonic source with 1/sqrt(k) rolloff plus
    glottal noise, shaped by three formant resonators) and band-passed noise
    bursts, over a continuous broadband floor. The floor and the default
    absence of long pauses keep every analysis frame spectrally alive, which
    matters for adaptive filters whose step collapses on silent frames.

    Returns the float samples after PCM16 quantization, so a save/load
    roundtrip reproduces the array exactly.
    """
    rng = np.random.default_rng(seed)
    n_total = int(duration * fs)
    out = np.zeros(n_total)
    pos = 0
    while pos < n_total:
        u = rng.uniform()
        if u < pause_prob:
            pos += int(rng.uniform(0.06, 0.22) * fs)
            continue
        if u < pause_prob + 0.25:
            # unvoiced burst: band-passed noise with a raised-cosine envelope
            seg = int(rng.uniform(0.06, 0.14) * fs)
            burst = rng.standard_normal(seg)
            fc = rng.uniform(2000, 4500)
            lo = max(fc - 1200, 300) / (fs / 2)
            hi = min(fc + 1200, 0.95 * fs / 2) / (fs / 2)
            b, a = sps.butter(2, [lo, hi], "bandpass")
            piece = 0.35 * sps.lfilter(b, a, burst) * np.hanning(seg)
        else:
            # voiced segment: gliding-pitch harmonic source through formants
            seg = int(rng.uniform(0.10, 0.26) * fs)
            f0a = rng.uniform(95, 175)
            f0b = f0a * rng.uniform(0.85, 1.2)
            phase = 2 * np.pi * np.cumsum(np.linspace(f0a, f0b, seg)) / fs
            src = np.zeros(seg)
            for k in range(1, int(4500 / max(f0a, f0b)) + 1):
                src += np.sin(k * phase) / np.sqrt(k)
            src += 0.4 * rng.standard_normal(seg)
            piece = src
            for fc, bw in zip(_VOWELS[rng.integers(len(_VOWELS))], (180, 240, 320)):
                b, a = sps.iirpeak(fc / (fs / 2), Q=fc / bw)
                piece = sps.lfilter(b, a, piece)
            att = max(int(0.015 * fs), 8)
            env = np.ones(seg)
            env[:att] = np.linspace(0, 1, att)
            env[-att:] = np.linspace(1, 0, att)
            piece = piece * env
            piece = 0.7 * piece / max(np.abs(piece).max(), 1e-9)
        end = min(pos + seg, n_total)
        out[pos:end] += piece[: end - pos]
        pos = end
    rms = np.sqrt(np.mean(out**2))
    out += floor_amp * rms * rng.standard_normal(n_total)
    out = 0.5 * out / np.abs(out).max()
    return np.round(out * 32768.0) / 32768.0
