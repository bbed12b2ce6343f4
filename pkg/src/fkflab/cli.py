"""Command-line front end: scenario files in, CSV/SVG artifacts out.

Verbs
-----
run      : execute a scenario file as-is.
compare  : execute a scenario file with all three variants (missing ones are
           added with default settings).
sweep-a  : execute a scenario file once per requested transition parameter.
preset   : run a named built-in experiment (fig1, fig2, fig3).

Every invocation writes ``trace.csv`` (one row per frame per run) and
``steady_state_taps.csv`` (ensemble-mean final taps next to the Wiener taps)
into the output directory, plus ``misalignment.svg`` with ``--plot``.

Exit status: 0 success, 1 runtime failure, 2 usage error. The environment
variable ``FKF_LAB_THREADS`` caps run parallelism (0 or unset = auto).
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .config import ConfigError, load_scenario
from .filters import VARIANTS, AlgorithmConfig
from .output import write_taps_csv, write_trace_csv
from .presets import FIG2_A_VALUES, preset
from .sim import ensemble_average, frames_to_level, run_scenario
from .svgplot import line_chart

__all__ = ["Command", "parse_args", "execute", "main"]

DEFAULT_OUT = "fkflab_results"


@dataclass(frozen=True)
class Command:
    """Parsed invocation."""

    verb: str
    preset_name: str | None = None
    config_path: str | None = None
    output_dir: str = DEFAULT_OUT
    plot: bool = False
    seeds_override: tuple | None = None
    a_values: tuple | None = None


def _int_list(text):
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text):
    try:
        return tuple(float(part) for part in text.split(",") if part != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def parse_args(argv):
    """Parse CLI arguments into a Command (argparse exits 2 on usage errors)."""
    parser = argparse.ArgumentParser(
        prog="fkflab",
        description="Frequency-domain Kalman adaptive-filter experiments",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    def add_common(p, config_required):
        if config_required:
            p.add_argument("--config", required=True, help="scenario TOML file")
        p.add_argument("--out", default=DEFAULT_OUT, help="output directory")
        p.add_argument("--plot", action="store_true", help="also write misalignment.svg")
        p.add_argument("--seeds", type=_int_list, default=None,
                       help="override ensemble seeds, e.g. 0,1,2")

    add_common(sub.add_parser("run", help="run a scenario file"), True)
    add_common(sub.add_parser("compare", help="run a scenario with all three variants"), True)
    p_sweep = sub.add_parser("sweep-a", help="run a scenario at several transition parameters")
    add_common(p_sweep, True)
    p_sweep.add_argument("--a", type=_float_list, required=True,
                         help="transition parameters, e.g. 0.99,0.999,1.0")
    p_preset = sub.add_parser("preset", help="run a built-in experiment")
    p_preset.add_argument("name", choices=["fig1", "fig2", "fig3"])
    add_common(p_preset, False)

    ns = parser.parse_args(argv)
    return Command(
        verb=ns.verb,
        preset_name=getattr(ns, "name", None),
        config_path=getattr(ns, "config", None),
        output_dir=ns.out,
        plot=ns.plot,
        seeds_override=ns.seeds,
        a_values=getattr(ns, "a", None),
    )


def _load(cmd):
    if cmd.verb == "preset":
        scenario = preset(cmd.preset_name)
    else:
        scenario = load_scenario(cmd.config_path)
    if cmd.seeds_override:
        scenario = replace(scenario, seeds=cmd.seeds_override)
    if cmd.verb == "compare":
        present = {alg.variant for alg in scenario.algorithms}
        extra = tuple(AlgorithmConfig(v) for v in VARIANTS if v not in present)
        scenario = replace(scenario, algorithms=scenario.algorithms + extra)
    return scenario


def _sweep_values(cmd, scenario):
    if cmd.verb == "sweep-a":
        return cmd.a_values
    if cmd.verb == "preset" and cmd.preset_name == "fig2":
        return FIG2_A_VALUES
    return (scenario.a,)


def execute(cmd):
    """Run a parsed command; returns the process exit status."""
    try:
        scenario = _load(cmd)
        sweep = _sweep_values(cmd, scenario)

        all_traces = []
        averaged = []
        for a in sweep:
            run_cfg = replace(scenario, a=a)
            traces = run_scenario(run_cfg)
            suffix = f"@A={a:g}" if len(sweep) > 1 else ""
            for trace in traces:
                trace.algorithm = trace.algorithm + suffix
            all_traces.extend(traces)
            for alg in run_cfg.algorithms:
                tagged = alg.tag + suffix
                group = [t for t in traces if t.algorithm == tagged]
                averaged.append(ensemble_average(group))

        out = Path(cmd.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_trace_csv(out / "trace.csv", all_traces, scenario.n, scenario.effective_fs)
        write_taps_csv(out / "steady_state_taps.csv", averaged)
        if cmd.plot:
            series = [(t.algorithm, t.frame_index, t.misalignment_db) for t in averaged]
            line_chart(series, out / "misalignment.svg",
                       title=cmd.preset_name or Path(cmd.config_path or "").stem)

        for t in averaged:
            if len(t):
                print(
                    f"{t.algorithm}: final misalignment "
                    f"{t.misalignment_db[-1]:.2f} dB, reaches its final level "
                    f"in {frames_to_level(t.misalignment_db)} frames"
                )
        print(f"wrote {out / 'trace.csv'} and {out / 'steady_state_taps.csv'}")
        return 0
    except ConfigError as exc:
        print(f"fkflab: config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failures: missing files, diverged runs
        print(f"fkflab: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    return sys.exit(execute(parse_args(sys.argv[1:] if argv is None else argv)))
