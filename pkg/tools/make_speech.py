"""Regenerate the bundled synthetic speech excerpt.

Writes ``src/fkflab/data/speech.wav``: 48 s of deterministic formant-filtered
speech (16 kHz mono PCM16, generator seed 2024). Run from the repository root:

    python3 tools/make_speech.py
"""

from pathlib import Path
import sys

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fkflab.signals import save_wav, synthetic_speech  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "fkflab" / "data" / "speech.wav"


def main():
    samples = synthetic_speech()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    save_wav(OUT, 16000, samples)
    print(f"wrote {OUT} ({len(samples)} samples)")


if __name__ == "__main__":
    main()
