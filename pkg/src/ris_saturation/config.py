"""Flat ``key = value`` experiment configs.

Syntax: one assignment per line, ``#`` starts a comment, lists are comma
separated, integer ranges may be written ``start:stop[:step]`` (inclusive).
Angles are radians unless the loader is told otherwise; ``pi``, ``pi/4`` and
``3*pi/8`` are accepted.  Keys not in the subcommand schema are rejected.

Example (``gain-vs-n``, angles in degrees)::

    curves = gaussian:3, gaussian:6, laplacian:23
    n_elements = 1, 2, 4, 8, 16, 32, 64, 128
    mean_angle = 45
    source = exact
"""

import hashlib
import math
import re

from .exceptions import ConfigError

_PI_EXPR = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")

COMMON_KEYS = {"seed", "spacing", "mean_angle", "departure_angle", "source", "n_restarts"}

SCHEMAS = {
    "corr": COMMON_KEYS | {"family", "angular_spread", "kappa", "lags"},
    "gain-vs-n": COMMON_KEYS | {"curves", "n_elements", "benchmark_samples"},
    "gain-vs-spread": COMMON_KEYS | {"families", "spreads", "n_elements"},
    "snr-vs-n": COMMON_KEYS | {"curves", "n_elements", "n_bs", "link_budget_db", "samples"},
}

_deg = math.radians

PRESETS = {
    "fig1": {
        "seed": 0, "spacing": 0.5, "mean_angle": math.pi / 4, "departure_angle": math.pi / 2,
        "source": "approx", "n_restarts": 5,
        "curves": [("gaussian", _deg(3)), ("gaussian", _deg(6)), ("gaussian", _deg(17)),
                   ("laplacian", _deg(6)), ("laplacian", _deg(23))],
        "n_elements": [1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64, 96, 128, 160, 200],
        "benchmark_samples": 2000,
        "family": "gaussian", "angular_spread": _deg(3), "kappa": 0.5, "lags": 32,
        "families": ["gaussian", "laplacian"],
        "spreads": [_deg(s) for s in range(1, 41)],
        "n_bs": 10, "link_budget_db": -10.0, "samples": 20_000,
    },
}
PRESETS["fig2"] = {
    **PRESETS["fig1"],
    "mean_angle": math.pi / 2,
    "n_elements": 100,
    "families": ["gaussian", "laplacian"],
    "spreads": [_deg(s) for s in range(1, 41)],
    "curves": [("gaussian", _deg(10)), ("laplacian", _deg(10))],
    "angular_spread": _deg(10),
}
PRESETS["fig3"] = {
    **PRESETS["fig1"],
    "departure_angle": _deg(80),
    "curves": [("gaussian", _deg(3)), ("laplacian", _deg(23))],
    "n_elements": [1, 2, 4, 8, 16, 32, 64, 128],
    "n_bs": 10, "link_budget_db": -10.0, "samples": 20_000,
}

DEFAULT_PRESET = {"corr": "fig1", "gain-vs-n": "fig1", "gain-vs-spread": "fig2", "snr-vs-n": "fig3"}

FAMILIES = ("gaussian", "laplacian", "exponential")


def preset(command, name=None):
    """Resolved parameters of a figure preset restricted to ``command``'s keys."""
    name = name or DEFAULT_PRESET[command]
    base = PRESETS[name]
    out = {k: v for k, v in base.items() if k in SCHEMAS[command]}
    if command == "gain-vs-spread" and isinstance(out["n_elements"], list):
        out["n_elements"] = 100
    if command in ("gain-vs-n", "snr-vs-n") and isinstance(out["n_elements"], int):
        out["n_elements"] = PRESETS["fig1"]["n_elements"]
    return out


def parse_angle(text, degrees):
    text = text.strip()
    m = _PI_EXPR.match(text)
    if m:
        k = float(m.group(1)) if m.group(1) else 1.0
        d = float(m.group(2)) if m.group(2) else 1.0
        return k * math.pi / d
    value = float(text)
    return math.radians(value) if degrees else value


def _int(text):
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"expected an integer, got {text!r}")
    return int(value)


def _int_list(text):
    out = []
    for part in _split(text):
        if ":" in part:
            bits = [_int(b) for b in part.split(":")]
            if len(bits) not in (2, 3) or (len(bits) == 3 and bits[2] <= 0):
                raise ValueError(f"bad range {part!r}")
            step = bits[2] if len(bits) == 3 else 1
            out.extend(range(bits[0], bits[1] + 1, step))
        else:
            out.append(_int(part))
    return out


def _split(text):
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise ValueError("empty list element")
    return parts


def _family(text):
    text = text.strip().lower()
    if text not in FAMILIES:
        raise ValueError(f"unknown family {text!r}; expected one of {', '.join(FAMILIES)}")
    return text


def _curves(text, degrees):
    out = []
    for part in _split(text):
        if ":" not in part:
            raise ValueError(f"curve {part!r} must look like family:parameter")
        fam, param = part.split(":", 1)
        fam = _family(fam)
        value = float(param) if fam == "exponential" else parse_angle(param, degrees)
        out.append((fam, value))
    return out


def _source(text):
    text = text.strip().lower()
    if text not in ("exact", "approx"):
        raise ValueError("source must be 'exact' or 'approx'")
    return text


def _parser(key, degrees):
    angle = lambda t: parse_angle(t, degrees)  # noqa: E731
    table = {
        "seed": _int, "n_restarts": _int, "lags": _int, "benchmark_samples": _int,
        "n_bs": _int, "samples": _int,
        "spacing": float, "kappa": float, "link_budget_db": float,
        "mean_angle": angle, "departure_angle": angle, "angular_spread": angle,
        "source": _source, "family": _family,
        "families": lambda t: [_family(p) for p in _split(t)],
        "spreads": lambda t: [angle(p) for p in _split(t)],
        "curves": lambda t: _curves(t, degrees),
        "n_elements": _int_list,
    }
    return table[key]


def parse_config(text, command, *, degrees=False):
    """Parse config ``text`` for ``command``; returns ``{key: value}``.

    Raises
    ------
    ConfigError
        With the offending line number on syntax errors, unknown or repeated
        keys, and unparseable values.
    """
    allowed = SCHEMAS[command]
    out, seen = {}, {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in allowed:
            raise ConfigError(f"unknown key {key!r} for '{command}'; allowed: "
                              f"{', '.join(sorted(allowed))}", lineno)
        if key in seen:
            raise ConfigError(f"key {key!r} repeated (first set on line {seen[key]})", lineno)
        if not value:
            raise ConfigError(f"key {key!r} has no value", lineno)
        try:
            parsed = _parser(key, degrees)(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno) from None
        seen[key] = lineno
        out[key] = parsed
    for key, lineno in seen.items():
        _check_value(key, out[key], command, lineno)
    return out


def _check_value(key, value, command, line=None):
    if key in ("n_elements", "spreads") and isinstance(value, list):
        if not value:
            raise ConfigError(f"{key} must be nonempty", line)
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ConfigError(f"{key} must be strictly increasing", line)
        if key == "n_elements" and value[0] < 1:
            raise ConfigError("n_elements must be >= 1", line)
    if key == "n_elements" and command == "gain-vs-spread":
        if not isinstance(value, list) or len(value) != 1:
            raise ConfigError("gain-vs-spread takes a single n_elements value", line)
    if key in ("lags", "n_bs", "samples", "benchmark_samples") and value < 1:
        raise ConfigError(f"{key} must be >= 1", line)
    if key == "benchmark_samples" and value < 1000:
        raise ConfigError("benchmark_samples must be >= 1000", line)
    if key in ("seed", "n_restarts") and value < 0:
        raise ConfigError(f"{key} must be >= 0", line)
    if key == "spacing" and not value > 0:
        raise ConfigError("spacing must be > 0", line)


def resolve(command, *, text=None, preset_name=None, degrees=False, seed=None):
    """Preset values overlaid with a parsed config and a seed override."""
    params = preset(command, preset_name)
    if text is not None:
        parsed = parse_config(text, command, degrees=degrees)
        if command == "gain-vs-spread" and "n_elements" in parsed:
            parsed["n_elements"] = parsed["n_elements"][0]
        params.update(parsed)
    if seed is not None:
        if seed < 0:
            raise ConfigError("seed must be >= 0")
        params["seed"] = int(seed)
    return params


def config_hash(command, params):
    """SHA-256 of the canonical ``key=repr(value)`` listing."""
    lines = [f"command={command}"] + [f"{k}={params[k]!r}" for k in sorted(params)]
    return hashlib.sha256("\n".join(lines).encode()).hexdigest()
