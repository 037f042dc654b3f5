import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reject_gate import config
from reject_gate.config import ExperimentConfig
from reject_gate.errors import ConfigError


def test_round_trip_default():
    cfg = ExperimentConfig()
    assert config.loads(cfg.dumps()) == cfg


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**64 - 1),
    trials=st.integers(1, 5000),
    ms=st.lists(st.integers(0, 500), min_size=1, max_size=6),
    degree=st.integers(0, 4),
    var=st.floats(1e-6, 1e3),
    a=st.floats(1e-9, 10),
    b=st.floats(0, 1),
)
def test_round_trip(seed, trials, ms, degree, var, a, b):
    cfg = ExperimentConfig(master_seed=seed, trials=trials, m_values=tuple(ms), degree=degree,
                           prior_variances=(var,) * (degree + 1), noise_a=a, noise_b=b,
                           output_dir="out dir")
    assert config.loads(cfg.dumps()) == cfg


def test_comments_and_whitespace():
    text = ExperimentConfig().dumps().replace("trials = 300", "  trials=12   # quick")
    assert config.loads("# header\n\n" + text).trials == 12


@pytest.mark.parametrize("field", ["trials", "m_values", "noise_a", "output_dir"])
def test_missing_field_named(field):
    lines = [ln for ln in ExperimentConfig().dumps().splitlines() if not ln.startswith(field + " ")]
    with pytest.raises(ConfigError, match=field) as err:
        config.loads("\n".join(lines))
    assert err.value.field == field


@pytest.mark.parametrize("key, value", [
    ("trials", "0"), ("degree", "-1"), ("prior_variances", "1, 0.1"), ("noise_a", "0"),
    ("noise_b", "-0.1"), ("trials", "many"), ("n_test", "0"),
])
def test_invalid_values(key, value):
    text = "\n".join(f"{key} = {value}" if ln.startswith(key + " ") else ln
                     for ln in ExperimentConfig().dumps().splitlines())
    with pytest.raises(ConfigError, match=key):
        config.loads(text)


def test_unknown_and_duplicate_keys():
    with pytest.raises(ConfigError, match="colour"):
        config.loads(ExperimentConfig().dumps() + "colour = red\n")
    with pytest.raises(ConfigError, match="trials"):
        config.loads(ExperimentConfig().dumps() + "trials = 4\n")
