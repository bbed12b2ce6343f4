"""CSV artifact writers.

Both writers emit UTF-8 with LF line endings and format floats with 17
significant digits, enough to reproduce IEEE doubles exactly, so repeated
runs with the same configuration are byte-identical.
"""

from __future__ import annotations

import csv

__all__ = ["write_trace_csv", "write_taps_csv"]

TRACE_HEADER = ("frame", "time_s", "algorithm", "seed", "misalignment_db", "erle_db")
TAPS_HEADER = ("tap", "algorithm", "value", "wiener_value")


def _fmt(x):
    return format(float(x), ".17g")


def _open_writer(path):
    fh = open(path, "w", encoding="utf-8", newline="")
    return fh, csv.writer(fh, lineterminator="\n")


def write_trace_csv(path, traces, n, fs):
    """One row per frame per run: frame, time_s, algorithm, seed, metrics."""
    fh, writer = _open_writer(path)
    with fh:
        writer.writerow(TRACE_HEADER)
        for trace in traces:
            for k in range(len(trace)):
                writer.writerow(
                    (
                        int(trace.frame_index[k]),
                        _fmt(trace.frame_index[k] * n / fs),
                        trace.algorithm,
                        trace.seed,
                        _fmt(trace.misalignment_db[k]),
                        _fmt(trace.erle_db[k]),
                    )
                )


def write_taps_csv(path, averaged_traces):
    """Final (ensemble-mean) taps per algorithm next to the Wiener taps."""
    fh, writer = _open_writer(path)
    with fh:
        writer.writerow(TAPS_HEADER)
        for trace in averaged_traces:
            for i, (w_i, ref_i) in enumerate(zip(trace.final_taps, trace.w_ref)):
                writer.writerow((i, trace.algorithm, _fmt(w_i), _fmt(ref_i)))
