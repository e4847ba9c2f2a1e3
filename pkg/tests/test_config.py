import json

import pytest
from hypothesis import given, strategies as st

from lizshear import config
from lizshear.exceptions import ConfigError
from lizshear.shearlet import ParamGrid
from lizshear.verify import CHECKS

KNOWN = tuple(CHECKS)


def test_defaults_give_default_grid():
    cfg = config.load(None, KNOWN)
    assert config.param_grid(cfg) == ParamGrid.default()
    assert cfg["record_runtime"] is True and cfg["threads"] == 1


@pytest.mark.parametrize("raw,match", [
    ({"bogus": 1}, "unknown configuration key"),
    ({"grid": {"q": 1}}, "grid.q"),
    ({"grid": {"b": [4.0, 1]}}, "grid.b"),
    ({"grid": {"a": [0.5, 0.1, 4]}}, "max > min"),
    ({"tolerances": {"moments": 0}}, "> 0"),
    ({"tolerances": {"moments": -1e-3}}, "> 0"),
    ({"tolerances": {"nope": 1e-3}}, "unknown check"),
    ({"threads": 0}, "threads"),
    ({"generator": "fancy"}, "generator"),
    ({"record_runtime": "yes"}, "record_runtime"),
    ({"decay_orders": [[1, 2, 3]]}, "decay order"),
    ({"radon": {"theta": 1}}, "radon.theta"),
    ([], "JSON object"),
])
def test_invalid_configs(raw, match):
    with pytest.raises(ConfigError, match=match):
        config.validate(raw, KNOWN)


def test_load_errors(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="malformed"):
        config.load(p, KNOWN)
    with pytest.raises(ConfigError, match="cannot read"):
        config.load(tmp_path / "missing.json", KNOWN)


def test_overrides_merge(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"grid": {"s": [2.0, 9]}, "tolerances": {"moments": 1e-6}}))
    cfg = config.load(p, KNOWN)
    assert cfg["grid"]["s"] == [2.0, 9] and cfg["grid"]["b"] == [4.0, 33]
    assert cfg["tolerances"] == {"moments": 1e-6}


@given(st.text(min_size=1, max_size=20))
def test_digest_ignores_output_dir_only(out):
    base = config.validate({}, KNOWN)
    moved = config.validate({"output_dir": out}, KNOWN)
    assert config.digest(base) == config.digest(moved)
    assert config.digest(base) != config.digest(config.validate({"threads": 2}, KNOWN))


@given(st.integers(2, 400))
def test_theta_grid_is_half_open(n):
    g = config.theta_grid(n)
    assert g.n == n and g.min == pytest.approx(-3.141592653589793)
    assert g.max < 3.141592653589793
    assert g.spacing == pytest.approx(2 * 3.141592653589793 / n)
