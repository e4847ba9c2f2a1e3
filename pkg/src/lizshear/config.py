"""Run configuration: a single JSON document validated before any computation."""
from __future__ import annotations

import copy
import hashlib
import json
import math
from pathlib import Path

from .exceptions import ConfigError
from .numerics import Grid1D
from .shearlet import (ParamGrid, builtin_admissible_vector, complex_admissible_vector,
                       zero_admissible_vector)

GENERATORS = {
    "builtin": builtin_admissible_vector,
    "complex": complex_admissible_vector,
    "zero": zero_admissible_vector,
}

DEFAULTS = {
    # b = [max, n] for both translation axes, s = [max, n], a = [min, max, n per sign]
    "grid": {"b": [4.0, 33], "s": [3.0, 17], "a": [0.05, 4.0, 16]},
    "generator": "builtin",
    "input": "builtin:gaussian",
    "tolerances": {},
    "output_dir": "lizshear-out",
    "threads": 1,
    # the wall-clock total is the only run-dependent number in a verify report
    "record_runtime": True,
    # theta = n angles over [-pi, pi); q, v, t = [max, n] symmetric grids
    "radon": {"theta": 64, "q": [4.0, 81], "v": [3.0, 13], "t": [4.0, 33]},
    # synthesize: output field grid [max, n] on both axes
    "field_grid": [4.0, 65],
    "decay_orders": [[0, 0, 0, 0], [1, 1, 1, 1], [2, 2, 2, 2], [2, 0, 0, 0],
                     [0, 2, 0, 0], [0, 0, 2, 0], [0, 0, 0, 1], [0, 0, 0, 3]],
}


def _fail(msg):
    raise ConfigError(msg)


def _merge(base: dict, over: dict, path: str = "") -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if k not in base:
            _fail(f"unknown configuration key {path + k!r}")
        if isinstance(base[k], dict) and k != "tolerances":
            if not isinstance(v, dict):
                _fail(f"{path + k!r} must be an object")
            out[k] = _merge(base[k], v, f"{path}{k}.")
        else:
            out[k] = v
    return out


def _num(x, name, positive=True):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        _fail(f"{name} must be a number")
    if positive and not x > 0:
        _fail(f"{name} must be > 0")
    return float(x)


def _count(x, name, minimum=2):
    if isinstance(x, bool) or not isinstance(x, int) or x < minimum:
        _fail(f"{name} must be an integer >= {minimum}")
    return x


def _pair(x, name):
    if not isinstance(x, list) or len(x) != 2:
        _fail(f"{name} must be [max, n]")
    return [_num(x[0], f"{name}[0]"), _count(x[1], f"{name}[1]")]


def validate(cfg: dict, known_checks=()) -> dict:
    """Merge ``cfg`` over :data:`DEFAULTS` and check every invariant.

    Raises
    ------
    ConfigError
        On unknown keys, wrong types, non-positive tolerances or counts below 2.
    """
    if not isinstance(cfg, dict):
        _fail("configuration must be a JSON object")
    c = _merge(DEFAULTS, cfg)
    g = c["grid"]
    g["b"] = _pair(g["b"], "grid.b")
    g["s"] = _pair(g["s"], "grid.s")
    a = g["a"]
    if not isinstance(a, list) or len(a) != 3:
        _fail("grid.a must be [min, max, n]")
    g["a"] = [_num(a[0], "grid.a[0]"), _num(a[1], "grid.a[1]"), _count(a[2], "grid.a[2]")]
    if not g["a"][1] > g["a"][0]:
        _fail("grid.a needs max > min")
    if c["generator"] not in GENERATORS:
        _fail(f"generator must be one of {sorted(GENERATORS)}")
    if not isinstance(c["input"], str) or not c["input"]:
        _fail("input must be a non-empty string")
    if not isinstance(c["tolerances"], dict):
        _fail("tolerances must be an object")
    for k, v in c["tolerances"].items():
        if known_checks and k not in known_checks:
            _fail(f"tolerance for unknown check {k!r}")
        c["tolerances"][k] = _num(v, f"tolerances.{k}")
    if not isinstance(c["output_dir"], str) or not c["output_dir"]:
        _fail("output_dir must be a non-empty string")
    c["threads"] = _count(c["threads"], "threads", 1)
    if not isinstance(c["record_runtime"], bool):
        _fail("record_runtime must be true or false")
    r = c["radon"]
    r["theta"] = _count(r["theta"], "radon.theta")
    for k in ("q", "v", "t"):
        r[k] = _pair(r[k], f"radon.{k}")
    c["field_grid"] = _pair(c["field_grid"], "field_grid")
    orders = c["decay_orders"]
    if not isinstance(orders, list) or not orders:
        _fail("decay_orders must be a non-empty list")
    for o in orders:
        if (not isinstance(o, list) or len(o) != 4
                or any(isinstance(k, bool) or not isinstance(k, int) or k < 0 for k in o)):
            _fail("each decay order must be four non-negative integers")
    return c


def load(path=None, known_checks=()) -> dict:
    """Read and validate a JSON config; ``None`` gives the defaults."""
    if path is None:
        return validate({}, known_checks)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed config {path}: {exc}") from None
    return validate(raw, known_checks)


def digest(cfg: dict) -> str:
    """SHA-256 of the canonical JSON form of a validated config.

    The output directory is left out: it decides where results go, not what they are.
    """
    body = {k: v for k, v in cfg.items() if k != "output_dir"}
    blob = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def param_grid(cfg: dict) -> ParamGrid:
    g = cfg["grid"]
    return ParamGrid.from_spec(g["b"], g["s"], g["a"])


def generator(cfg: dict):
    return GENERATORS[cfg["generator"]]()


def symmetric_grid(spec) -> Grid1D:
    return Grid1D(-float(spec[0]), float(spec[0]), int(spec[1]))


def theta_grid(n: int) -> Grid1D:
    """``n`` equispaced angles covering ``[-pi, pi)``."""
    return Grid1D(-math.pi, math.pi - 2.0 * math.pi / n, n)

