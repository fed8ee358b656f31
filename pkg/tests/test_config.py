import math

import pytest
from hypothesis import given, strategies as st

from rotweingarten import ConfigError, RunConfig, parse_config, serialize_config
from rotweingarten.config import OUTPUT_DIR_ENV, load_config, parse_number

SAMPLE = """
# catenoid in H^2 x R
family = sqrtshift:a=0.5
epsilon = -1
phi0 = 1.0
sigma = 1
s_max = 20
tolerances = 1e-10, 1e-12
output_dir = out     # trailing comment
mesh_theta_segments = 16
sweep_range = pi/8, 3*pi/8, 5
"""


def test_parse_sample():
    cfg = parse_config(SAMPLE)
    assert cfg.family == "sqrtshift:a=0.5"
    assert cfg.epsilon == -1 and cfg.sigma == 1
    assert cfg.phi0 == 1.0 and cfg.s_max == 20.0
    assert cfg.tolerances == (1e-10, 1e-12)
    assert cfg.output_dir == "out"
    assert cfg.mesh_theta_segments == 16
    assert cfg.sweep_range == (math.pi / 8, 3 * math.pi / 8, 5)


def test_round_trip_sample():
    cfg = parse_config(SAMPLE)
    assert parse_config(serialize_config(cfg)) == cfg
    assert serialize_config(parse_config(serialize_config(cfg))) == serialize_config(cfg)


configs = st.builds(
    RunConfig,
    family=st.sampled_from(["zero", "rational:c=1.2", "sqrtshift:a=-1", "sqrtshift:a=0.3333333333333333"]),
    epsilon=st.sampled_from([1, -1]),
    phi0=st.floats(0.001, 10.0),
    sigma=st.sampled_from([1, -1]),
    s_max=st.one_of(st.none(), st.floats(0.1, 100.0)),
    tolerances=st.tuples(st.floats(1e-14, 1e-3), st.floats(1e-16, 1e-3)),
    output_dir=st.sampled_from(["out", "/tmp/a b", "runs/x"]),
    mesh_theta_segments=st.integers(8, 512),
    sweep_range=st.one_of(st.none(), st.tuples(st.floats(0.01, 3.0), st.floats(0.01, 3.0), st.integers(2, 100))),
    poincare=st.booleans(),
    diagnostic=st.booleans(),
)


@given(configs)
def test_round_trip(cfg):
    assert parse_config(serialize_config(cfg)) == cfg


@pytest.mark.parametrize("text,value", [
    ("0.5", 0.5), ("pi", math.pi), ("pi/4", math.pi / 4), ("3*pi/8", 3 * math.pi / 8),
    ("-pi/2", -math.pi / 2), ("2 * pi / 3", 2 * math.pi / 3), ("1e-3", 1e-3),
])
def test_parse_number(text, value):
    assert parse_number(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["", "abc", "inf", "nan", "pi/0x", "e"])
def test_parse_number_rejects(text):
    with pytest.raises(ConfigError):
        parse_number(text)


@pytest.mark.parametrize("text", [
    "family = cubic",
    "epsilon = 0",
    "sigma = 2",
    "phi0 = inf",
    "s_max = -1",
    "tolerances = 1e-10",
    "tolerances = 0, 1",
    "mesh_theta_segments = 7",
    "sweep_range = 0.1, 1",
    "sweep_range = 0.1, 1, 1",
    "sweep_range = 0.1, 1, 0",
    "colour = blue",
    "just a line",
    "poincare = maybe",
])
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_overrides_take_precedence():
    cfg = parse_config(SAMPLE, phi0=2.0, family="zero", sigma=None)
    assert cfg.phi0 == 2.0 and cfg.family == "zero" and cfg.sigma == 1


def test_output_dir_from_environment(monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, "/tmp/wg")
    assert parse_config("").output_dir == "/tmp/wg"
    assert parse_config("output_dir = here").output_dir == "here"
    monkeypatch.delenv(OUTPUT_DIR_ENV)
    assert parse_config("").output_dir == "."


def test_load_config(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text(SAMPLE)
    assert load_config(p) == parse_config(SAMPLE)
