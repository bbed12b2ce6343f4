"""Scenario files: flat TOML with strict key checking.

A scenario file mirrors :class:`fkflab.sim.ScenarioConfig`:

.. code-block:: toml

    n = 10
    frames = 5000
    a = 1.0
    seeds = [0, 1, 2]
    # snr_db = 30.0          # optional observation noise
    # erle_smoothing = 0.9   # optional
    # fs = 16000.0           # optional, overrides the inferred rate

    [source]
    kind = "fir_colored"     # white | fir_colored | wav
    seed = 0
    taps = [1.0, 0.9, 0.81, 0.729]
    # white sources use: variance = 1.0
    # wav sources use:   path = "speech.wav"

    [system]
    kind = "taps"            # taps | synthetic_rir
    taps = [0.1, -0.4, 0.2]
    # synthetic_rir uses: fs, t60, length, seed

    [[algorithm]]
    variant = "fkf"          # fkf | mfkf1 | mfkf2
    phi_ss = 1e-2
    phi_dd = 1e-6
    # p_init, psd_mode, lambda_s, denom_floor, label are optional

Unknown keys anywhere are hard errors naming the key: silent typos corrupt
experiments. The transition parameter lives at scenario level only and is
applied to every algorithm.
"""

from __future__ import annotations

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .filters import AlgorithmConfig
from .signals import SourceSpec, SystemSpec
from .sim import ScenarioConfig

__all__ = ["load_scenario", "parse_scenario", "ConfigError"]


class ConfigError(ValueError):
    """Malformed scenario file (bad key, bad type, bad value)."""


_TOP_KEYS = {"n", "frames", "a", "seeds", "snr_db", "erle_smoothing", "fs",
             "source", "system", "algorithm"}
_SOURCE_KEYS = {
    "white": {"kind", "seed", "variance"},
    "fir_colored": {"kind", "seed", "taps"},
    "wav": {"kind", "path"},
}
_SYSTEM_KEYS = {
    "taps": {"kind", "taps"},
    "synthetic_rir": {"kind", "fs", "t60", "length", "seed"},
}
_ALGO_KEYS = {"variant", "p_init", "psd_mode", "phi_ss", "phi_dd",
              "lambda_s", "denom_floor", "label"}


def _reject_unknown(table, allowed, where):
    unknown = sorted(set(table) - allowed)
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} in {where}")


def _require(table, key, where):
    if key not in table:
        raise ConfigError(f"missing required key {key!r} in {where}")
    return table[key]


def parse_scenario(data):
    """Build a ScenarioConfig from a parsed TOML document (a dict)."""
    if not isinstance(data, dict):
        raise ConfigError("scenario file must be a TOML table")
    _reject_unknown(data, _TOP_KEYS, "scenario")

    src_tab = _require(data, "source", "scenario")
    kind = _require(src_tab, "kind", "[source]")
    if kind not in _SOURCE_KEYS:
        raise ConfigError(f"unknown source kind {kind!r} in [source]")
    _reject_unknown(src_tab, _SOURCE_KEYS[kind], "[source]")

    sys_tab = _require(data, "system", "scenario")
    sys_kind = _require(sys_tab, "kind", "[system]")
    if sys_kind not in _SYSTEM_KEYS:
        raise ConfigError(f"unknown system kind {sys_kind!r} in [system]")
    _reject_unknown(sys_tab, _SYSTEM_KEYS[sys_kind], "[system]")

    algo_tabs = _require(data, "algorithm", "scenario")
    if not isinstance(algo_tabs, list) or not algo_tabs:
        raise ConfigError("scenario needs at least one [[algorithm]] table")
    algorithms = []
    for i, tab in enumerate(algo_tabs):
        where = f"[[algorithm]] #{i + 1}"
        if "a" in tab:
            raise ConfigError(
                f"unknown key 'a' in {where}: the transition parameter is "
                f"scenario-level and applies to every algorithm"
            )
        _reject_unknown(tab, _ALGO_KEYS, where)
        _require(tab, "variant", where)
        try:
            algorithms.append(AlgorithmConfig(**tab))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from None

    try:
        source = SourceSpec(**src_tab)
        system = SystemSpec(**sys_tab)
        return ScenarioConfig(
            source=source,
            system=system,
            n=int(_require(data, "n", "scenario")),
            frames=int(_require(data, "frames", "scenario")),
            a=float(data.get("a", 1.0)),
            seeds=tuple(data.get("seeds", (0,))),
            snr_db=data.get("snr_db"),
            fs=data.get("fs"),
            erle_smoothing=float(data.get("erle_smoothing", 0.9)),
            algorithms=tuple(algorithms),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def load_scenario(path):
    """Parse a scenario TOML file into a ScenarioConfig."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_scenario(data)
