"""Run configuration: flat key=value files, env and CLI overrides.

Precedence, lowest to highest: schema default, config file, MEDGATE_<KEY>
environment variable, --set KEY=VALUE on the command line. Unknown keys and
malformed values are reported with the offending line number.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

ENV_PREFIX = "MEDGATE_"

MODES = ("dynamic-map", "adiabatic-map", "spectrum", "cphase-scan",
         "decoherence", "interference")


class ConfigError(Exception):
    """Invalid configuration; message carries file/line context."""


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_float_list(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


_PARSERS = {
    "int": int,
    "float": float,
    "bool": _parse_bool,
    "str": str,
    "floats": _parse_float_list,
}


@dataclass(frozen=True)
class Key:
    name: str
    kind: str
    default: object
    help: str = ""


_COMMON = [
    Key("e_c", "float", 0.1, "control Zeeman splitting, ps^-1"),
    Key("e_q", "float", None, "qubit Q Zeeman splitting, ps^-1"),
    Key("e_qp", "float", None, "qubit Q' Zeeman splitting, ps^-1"),
    Key("r", "float", None, "R = 2 E_Q/E_C - 1; sets e_q = e_qp when given"),
    Key("alpha", "float", 1.0, "exchange anisotropy, 0 Heisenberg to 1 XY"),
]

_SCHEMAS = {
    "dynamic-map": _COMMON + [
        Key("n", "int", 1, "revival index"),
        Key("j1p_min", "float", 0.0, "J1' grid start"),
        Key("j1p_max", "float", 2.0, "J1' grid end"),
        Key("j1p_count", "int", 50, "J1' grid points"),
        Key("j2p_min", "float", 0.0, "J2' grid start"),
        Key("j2p_max", "float", 2.0, "J2' grid end"),
        Key("j2p_count", "int", 50, "J2' grid points"),
    ],
    "adiabatic-map": _COMMON + [
        Key("j1_min", "float", 0.0, "J1 grid start, ps^-1"),
        Key("j1_max", "float", 0.2, "J1 grid end, ps^-1"),
        Key("j1_count", "int", 12, "J1 grid points"),
        Key("j2_min", "float", 0.0, "J2 grid start, ps^-1"),
        Key("j2_max", "float", 0.2, "J2 grid end, ps^-1"),
        Key("j2_count", "int", 12, "J2 grid points"),
        Key("tau", "float", 500.0, "Gaussian pulse width, ps"),
        Key("omega0", "float", 0.3, "peak Rabi frequency, ps^-1"),
        Key("delta", "float", 0.5, "laser detuning, ps^-1"),
        Key("tol", "float", 1e-8, "propagator tolerance"),
        Key("leakage_limit", "float", 1e-3, "validity threshold"),
    ],
    "spectrum": _COMMON + [
        Key("j1", "float", 0.05, "J1, ps^-1"),
        Key("j2", "float", 0.05, "J2, ps^-1"),
        Key("omega0", "float", 0.3, "Rabi frequency, ps^-1"),
        Key("ratio_min", "float", 0.1, "Delta/Omega grid start"),
        Key("ratio_max", "float", 5.0, "Delta/Omega grid end"),
        Key("ratio_count", "int", 200, "grid points"),
    ],
    "cphase-scan": _COMMON + [
        Key("j1", "float", 0.12, "J1, ps^-1"),
        Key("j2", "float", 0.12, "J2, ps^-1"),
        Key("omega0", "float", 0.3, "peak Rabi frequency, ps^-1"),
        Key("delta", "float", 0.5, "laser detuning, ps^-1"),
        Key("tau_min", "float", 250.0, "scan start, ps"),
        Key("tau_max", "float", 1100.0, "scan end, ps"),
        Key("tau_count", "int", 18, "scan points"),
        Key("tol", "float", 1e-8, "propagator tolerance"),
    ],
    "decoherence": _COMMON + [
        Key("j1", "float", 0.05, "J1, ps^-1"),
        Key("j2", "float", 0.05, "J2, ps^-1"),
        Key("gate", "str", "both", "dynamic, adiabatic or both"),
        Key("gamma0_list", "floats", (0.1, 0.5, 1.0, 1.5, 2.0),
            "decay rates, ns^-1 (comma separated)"),
        Key("n", "int", 1, "dynamic revival index"),
        Key("omega0_dynamic", "float", 5.0, "pi-pulse Rabi frequency, ps^-1"),
        Key("tau", "float", 500.0, "adiabatic pulse width, ps"),
        Key("omega0_adiabatic", "float", 0.1, "adiabatic Rabi peak, ps^-1"),
        Key("delta", "float", None, "adiabatic detuning; calibrated when unset"),
        Key("delta_min", "float", 0.15, "calibration range start, ps^-1"),
        Key("delta_max", "float", 0.92, "calibration range end, ps^-1"),
        Key("delta_step", "float", 0.01, "calibration scan step"),
        Key("delta_from_low", "bool", True,
            "calibrate upward from delta_min (else downward)"),
        Key("tol", "float", 1e-8, "master-equation tolerance"),
    ],
    "interference": _COMMON + [
        Key("j1", "float", 0.07, "J1, ps^-1"),
        Key("j2", "float", 0.07, "J2, ps^-1"),
        Key("omega0", "float", 0.3, "peak Rabi frequency, ps^-1"),
        Key("delta", "float", 0.5, "laser detuning, ps^-1"),
        Key("tau", "float", 150.0, "Gaussian pulse width, ps"),
        Key("amp_100_re", "float", 0.7071067811865476, "Re amplitude on |100>"),
        Key("amp_100_im", "float", 0.0, "Im amplitude on |100>"),
        Key("amp_001_re", "float", 0.7071067811865476, "Re amplitude on |001>"),
        Key("amp_001_im", "float", 0.0, "Im amplitude on |001>"),
        Key("n_times", "int", 4001, "trace sample count"),
        Key("tol", "float", 1e-10, "propagation tolerance"),
    ],
}

# defaults that differ between modes for the shared keys
_MODE_COMMON_DEFAULTS = {
    "adiabatic-map": {"e_q": 0.1, "e_qp": 0.1, "e_c": 0.1},
    "decoherence": {"r": 1.2},
    "cphase-scan": {"e_c": 0.2, "e_q": 0.1, "e_qp": 0.14},
    "interference": {"e_c": 0.14, "e_q": 0.1, "e_qp": 0.2},
    "spectrum": {"e_q": 0.11, "e_qp": 0.11},
    "dynamic-map": {"r": 1.0},
}


def schema_for(mode):
    if mode not in _SCHEMAS:
        raise ConfigError(f"unknown mode {mode!r}; expected one of {MODES}")
    keys = {}
    for key in _SCHEMAS[mode]:
        default = _MODE_COMMON_DEFAULTS.get(mode, {}).get(key.name, key.default)
        keys[key.name] = Key(key.name, key.kind, default, key.help)
    return keys


@dataclass
class RunConfig:
    mode: str
    values: dict = field(default_factory=dict)
    seed: int = 0
    threads: int = 1
    sources: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.values[name]

    def resolved_energies(self):
        """(e_q, e_c, e_qp) after applying the r shorthand."""
        e_c = self.values["e_c"]
        r = self.values.get("r")
        e_q, e_qp = self.values.get("e_q"), self.values.get("e_qp")
        r_explicit = self.sources.get("r", "default") != "default"
        eq_explicit = (self.sources.get("e_q", "default") != "default"
                       or self.sources.get("e_qp", "default") != "default")
        if r_explicit and eq_explicit:
            raise ConfigError("give either r or e_q/e_qp, not both")
        if eq_explicit or r is None:
            if e_q is None or e_qp is None:
                raise ConfigError("e_q and e_qp must both be set (or give r)")
            return e_q, e_c, e_qp
        e_q = 0.5 * e_c * (r + 1.0)
        return e_q, e_c, e_q


def _set_value(cfg, schema, name, raw, where):
    if name not in schema:
        known = ", ".join(sorted(schema))
        raise ConfigError(f"{where}: unknown key {name!r} (known: {known})")
    key = schema[name]
    try:
        value = _PARSERS[key.kind](raw) if isinstance(raw, str) else raw
    except ValueError as exc:
        raise ConfigError(f"{where}: bad value for {name!r}: {exc}") from None
    cfg.values[name] = value
    cfg.sources[name] = where


def load_config(mode, path=None, overrides=(), env=None, seed=0, threads=1):
    """Assemble a RunConfig from defaults, file, environment and --set pairs."""
    schema = schema_for(mode)
    cfg = RunConfig(mode=mode, seed=seed, threads=threads)
    for name, key in schema.items():
        cfg.values[name] = key.default
        cfg.sources[name] = "default"

    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                lines = fh.readlines()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        for lineno, line in enumerate(lines, start=1):
            text = line.split("#", 1)[0].strip()
            if not text:
                continue
            if "=" not in text:
                raise ConfigError(f"{path}:{lineno}: expected KEY = VALUE, "
                                  f"got {line.strip()!r}")
            name, raw = (part.strip() for part in text.split("=", 1))
            _set_value(cfg, schema, name, raw, f"{path}:{lineno}")

    env = os.environ if env is None else env
    for name in schema:
        env_name = ENV_PREFIX + name.upper()
        if env_name in env:
            _set_value(cfg, schema, name, env[env_name], f"env {env_name}")

    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected KEY=VALUE")
        name, raw = (part.strip() for part in item.split("=", 1))
        _set_value(cfg, schema, name, raw, f"--set {name}")

    _validate(cfg)
    return cfg


def _validate(cfg):
    for name, value in cfg.values.items():
        if name.endswith("_count") and value is not None and value < 1:
            raise ConfigError(f"{name} must be >= 1, got {value}")
    if cfg.mode == "decoherence":
        if not cfg.values["gamma0_list"]:
            raise ConfigError("gamma0_list must not be empty")
        if cfg.values["gate"] not in ("dynamic", "adiabatic", "both"):
            raise ConfigError("gate must be dynamic, adiabatic or both")
    if cfg.threads < 1:
        raise ConfigError(f"threads must be >= 1, got {cfg.threads}")
