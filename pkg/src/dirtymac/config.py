"""Run configuration: INI-style files, --set overrides, bundled presets.

Sections and keys (all optional, defaults below):

[scenario] receiver, user1, user2, ris1, ris2 (comma triples, m);
           p1_dbm, p2_dbm, noise_dbm; alpha_direct, alpha_user_ris,
           alpha_ris_rx; m1, m2
[query]    model (doubly|single); rt_doubly, rt_single, r2_single (bps/Hz);
           rho (required for single runs, no default)
[sweep]    path (gamma_tilde_db), start, stop, points, scale (db|linear),
           lock (true: scale both users' average-SNR pairs jointly), m_list
[mc]       n_trials, seed, workers
[mixture]  policy (adaptive|fixed), l_fixed
[region]   mode (mean-snr|per-realization|ergodic-mc), m_list, n_trials
[output]   format (csv|json), path ("-" for stdout)
"""

import configparser
from dataclasses import dataclass
from importlib import resources
from typing import List, Optional, Tuple

from .channel import Scenario
from .errors import ConfigError, GeometryError
from .outage import OutageQuery

_TRIPLE_KEYS = {"receiver", "user1", "user2", "ris1", "ris2"}

_DEFAULTS = {
    "scenario": {
        "receiver": "0,0,6",
        "user1": "20,0,1",
        "user2": "-20,0,1",
        "ris1": "20,0,2",
        "ris2": "-20,0,2",
        "p1_dbm": "60",
        "p2_dbm": "60",
        "noise_dbm": "-10",
        "alpha_direct": "3",
        "alpha_user_ris": "3",
        "alpha_ris_rx": "3.5",
        "m1": "32",
        "m2": "32",
    },
    "query": {
        "model": "doubly",
        "rt_doubly": "1",
        "rt_single": "1",
        "r2_single": "0.5",
        # rho intentionally absent: single runs must set it explicitly
    },
    "mc": {"n_trials": "1000000", "seed": "20260822", "workers": "1"},
    "mixture": {"policy": "adaptive", "l_fixed": "50"},
    "region": {"mode": "mean-snr", "m_list": "0,32,64", "n_trials": "100000"},
    "output": {"format": "csv", "path": "-"},
}

_KNOWN_SECTIONS = {"scenario", "query", "sweep", "mc", "mixture", "region", "output"}


@dataclass(frozen=True)
class SweepSpec:
    path: str = "gamma_tilde_db"
    start: float = -10.0
    stop: float = 20.0
    points: int = 20
    scale: str = "db"
    lock: bool = True
    m_list: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.points < 2:
            raise ConfigError("sweep.points must be >= 2")
        if self.scale not in ("db", "linear"):
            raise ConfigError(f"sweep.scale must be db or linear, got {self.scale!r}")
        if self.path != "gamma_tilde_db":
            raise ConfigError(f"unsupported sweep.path {self.path!r}")


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario
    query: OutageQuery
    sweep: Optional[SweepSpec]
    n_trials: int
    seed: int
    workers: int
    mixture_policy: str
    mixture_l: int
    region_mode: str
    region_m_list: Tuple[int, ...]
    region_trials: int
    out_format: str
    out_path: str

    def __post_init__(self):
        if self.n_trials < 1:
            raise ConfigError("mc.n_trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("mc.workers must be >= 1")
        if self.mixture_policy not in ("adaptive", "fixed"):
            raise ConfigError("mixture.policy must be adaptive or fixed")
        if self.mixture_policy == "fixed" and self.mixture_l < 1:
            raise ConfigError("mixture.l_fixed must be >= 1")
        if self.region_mode not in ("mean-snr", "per-realization", "ergodic-mc"):
            raise ConfigError(f"unknown region.mode {self.region_mode!r}")
        if self.out_format not in ("csv", "json"):
            raise ConfigError("output.format must be csv or json")

    def truncation_policy(self):
        if self.mixture_policy == "adaptive":
            return "adaptive"
        return ("fixed", self.mixture_l)


def _parse_triple(raw: str, key: str) -> Tuple[float, float, float]:
    parts = [p.strip() for p in raw.split(",")]
    if len(parts) != 3:
        raise ConfigError(f"scenario.{key} must be three comma-separated numbers, got {raw!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError as e:
        raise ConfigError(f"scenario.{key}: {e}") from None


def _get(table: dict, section: str, key: str, conv, what: str):
    raw = table[section][key]
    try:
        return conv(raw)
    except (ValueError, TypeError):
        raise ConfigError(f"{section}.{key} must be {what}, got {raw!r}") from None


def _parse_bool(raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _parse_int_list(raw: str) -> Tuple[int, ...]:
    if not raw.strip():
        return ()
    return tuple(int(p.strip()) for p in raw.split(","))


def preset_path(name: str) -> str:
    """Filesystem path of a bundled preset such as fig2 or fig3."""
    ref = resources.files("dirtymac").joinpath("presets", f"{name}.cfg")
    if not ref.is_file():
        raise ConfigError(f"no bundled preset named {name!r}")
    return str(ref)


def load_config(path: Optional[str] = None, overrides: List[str] = ()) -> RunConfig:
    """Parse a config file and apply key=value overrides.

    Overrides use dotted keys, e.g. --set mc.n_trials=50000. Unknown sections
    or keys, malformed values, and violated invariants all raise ConfigError
    naming the offender; file syntax errors keep the parser's line number.
    """
    table = {sec: dict(kv) for sec, kv in _DEFAULTS.items()}

    parser = configparser.ConfigParser(interpolation=None)
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh, source=path)
        except OSError:
            raise
        except configparser.Error as e:
            raise ConfigError(f"config parse error: {e}") from None
        for sec in parser.sections():
            if sec not in _KNOWN_SECTIONS:
                raise ConfigError(f"unknown config section [{sec}]")
            table.setdefault(sec, {})
            for key, val in parser.items(sec):
                _check_key(sec, key)
                table[sec][key] = val

    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like section.key=value, got {item!r}")
        dotted, val = item.split("=", 1)
        if "." not in dotted:
            raise ConfigError(f"override key must be section.key, got {dotted!r}")
        sec, key = dotted.split(".", 1)
        if sec not in _KNOWN_SECTIONS:
            raise ConfigError(f"unknown config section [{sec}]")
        _check_key(sec, key)
        table.setdefault(sec, {})
        table[sec][key] = val

    sc = table["scenario"]
    try:
        scenario = Scenario(
            receiver_pos=_parse_triple(sc["receiver"], "receiver"),
            user_pos=(_parse_triple(sc["user1"], "user1"), _parse_triple(sc["user2"], "user2")),
            ris_pos=(_parse_triple(sc["ris1"], "ris1"), _parse_triple(sc["ris2"], "ris2")),
            tx_power_dbm=(
                _get(table, "scenario", "p1_dbm", float, "a number"),
                _get(table, "scenario", "p2_dbm", float, "a number"),
            ),
            noise_dbm=_get(table, "scenario", "noise_dbm", float, "a number"),
            alpha_direct=_get(table, "scenario", "alpha_direct", float, "a number"),
            alpha_user_ris=_get(table, "scenario", "alpha_user_ris", float, "a number"),
            alpha_ris_rx=_get(table, "scenario", "alpha_ris_rx", float, "a number"),
            ris_elements=(
                _get(table, "scenario", "m1", int, "an integer"),
                _get(table, "scenario", "m2", int, "an integer"),
            ),
        )
    except (ValueError, GeometryError) as e:
        raise ConfigError(f"scenario: {e}") from None

    qt = table["query"]
    rho = None
    if "rho" in qt and qt["rho"].strip() != "":
        rho = _get(table, "query", "rho", float, "a number")
    try:
        query = OutageQuery(
            model=qt["model"].strip(),
            rt_doubly=_get(table, "query", "rt_doubly", float, "a number"),
            rt_single=_get(table, "query", "rt_single", float, "a number"),
            r2_single=_get(table, "query", "r2_single", float, "a number"),
            rho=rho,
        )
    except ValueError as e:
        raise ConfigError(f"query: {e}") from None

    sweep = None
    if "sweep" in table:
        sw = table["sweep"]
        sweep = SweepSpec(
            path=sw.get("path", "gamma_tilde_db").strip(),
            start=_get(table, "sweep", "start", float, "a number") if "start" in sw else -10.0,
            stop=_get(table, "sweep", "stop", float, "a number") if "stop" in sw else 20.0,
            points=_get(table, "sweep", "points", int, "an integer") if "points" in sw else 20,
            scale=sw.get("scale", "db").strip().lower(),
            lock=_get(table, "sweep", "lock", _parse_bool, "a boolean") if "lock" in sw else True,
            m_list=_get(table, "sweep", "m_list", _parse_int_list, "a list of integers")
            if "m_list" in sw
            else (),
        )

    return RunConfig(
        scenario=scenario,
        query=query,
        sweep=sweep,
        n_trials=_get(table, "mc", "n_trials", int, "an integer"),
        seed=_get(table, "mc", "seed", int, "an integer"),
        workers=_get(table, "mc", "workers", int, "an integer"),
        mixture_policy=table["mixture"]["policy"].strip().lower(),
        mixture_l=_get(table, "mixture", "l_fixed", int, "an integer"),
        region_mode=table["region"]["mode"].strip(),
        region_m_list=_get(table, "region", "m_list", _parse_int_list, "a list of integers"),
        region_trials=_get(table, "region", "n_trials", int, "an integer"),
        out_format=table["output"]["format"].strip().lower(),
        out_path=table["output"]["path"].strip(),
    )


_KNOWN_KEYS = {
    "scenario": set(_DEFAULTS["scenario"]),
    "query": set(_DEFAULTS["query"]) | {"rho"},
    "sweep": {"path", "start", "stop", "points", "scale", "lock", "m_list"},
    "mc": set(_DEFAULTS["mc"]),
    "mixture": set(_DEFAULTS["mixture"]),
    "region": set(_DEFAULTS["region"]),
    "output": set(_DEFAULTS["output"]),
}


def _check_key(sec: str, key: str):
    if key not in _KNOWN_KEYS[sec]:
        raise ConfigError(f"unknown key {sec}.{key}")
