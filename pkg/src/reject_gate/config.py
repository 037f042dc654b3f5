"""Experiment configuration in flat ``key = value`` text.

Lists are comma separated, ``#`` starts a comment. Every field is
required; validation errors name the offending field.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

_FIELDS = (
    "master_seed",
    "trials",
    "m_values",
    "degree",
    "prior_variances",
    "noise_a",
    "noise_b",
    "noise_c",
    "n_test",
    "output_dir",
)


@dataclass(frozen=True)
class ExperimentConfig:
    master_seed: int = 20240601
    trials: int = 300
    m_values: tuple = (5, 10, 20, 50, 100, 200)
    degree: int = 3
    prior_variances: tuple = (1.0, 0.1, 0.1, 0.1)
    noise_a: float = 0.1
    noise_b: float = 0.04
    noise_c: float = 8.0
    n_test: int = 1000
    output_dir: str = "results"

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials", "must be at least 1")
        if self.degree < 0:
            raise ConfigError("degree", "must be nonnegative")
        if not self.m_values or any(m < 0 for m in self.m_values):
            raise ConfigError("m_values", "must be a nonempty list of nonnegative counts")
        if len(self.prior_variances) != self.degree + 1:
            raise ConfigError("prior_variances", f"needs degree + 1 = {self.degree + 1} entries")
        if any(not v > 0 for v in self.prior_variances):
            raise ConfigError("prior_variances", "all entries must be > 0")
        if not self.noise_a > 0:
            raise ConfigError("noise_a", "must be > 0")
        if self.noise_b < 0:
            raise ConfigError("noise_b", "must be >= 0")
        if self.n_test < 1:
            raise ConfigError("n_test", "must be at least 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed", "must be a 64-bit unsigned integer")

    def noise(self):
        from .synthetic import NoiseSpec

        return NoiseSpec(self.noise_a, self.noise_b, self.noise_c)

    def prior(self):
        from .gaussian import GaussianPrior

        return GaussianPrior.diagonal(self.prior_variances)

    def replace(self, **changes) -> "ExperimentConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update(changes)
        return ExperimentConfig(**values)

    def dumps(self) -> str:
        lines = []
        for name in _FIELDS:
            value = getattr(self, name)
            if isinstance(value, tuple):
                value = ", ".join(repr(v) for v in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{name} = {value}")
        return "\n".join(lines) + "\n"


def _parse_int(field, text):
    try:
        return int(text)
    except ValueError:
        raise ConfigError(field, f"expected an integer, got {text!r}") from None


def _parse_float(field, text):
    try:
        return float(text)
    except ValueError:
        raise ConfigError(field, f"expected a number, got {text!r}") from None


def loads(text: str) -> ExperimentConfig:
    raw = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}", "expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _FIELDS:
            raise ConfigError(key, "unknown field")
        if key in raw:
            raise ConfigError(key, "given more than once")
        raw[key] = value
    for name in _FIELDS:
        if name not in raw:
            raise ConfigError(name, "missing required field")

    def int_list(name):
        return tuple(_parse_int(name, v.strip()) for v in raw[name].split(",") if v.strip())

    def float_list(name):
        return tuple(_parse_float(name, v.strip()) for v in raw[name].split(",") if v.strip())

    return ExperimentConfig(
        master_seed=_parse_int("master_seed", raw["master_seed"]),
        trials=_parse_int("trials", raw["trials"]),
        m_values=int_list("m_values"),
        degree=_parse_int("degree", raw["degree"]),
        prior_variances=float_list("prior_variances"),
        noise_a=_parse_float("noise_a", raw["noise_a"]),
        noise_b=_parse_float("noise_b", raw["noise_b"]),
        noise_c=_parse_float("noise_c", raw["noise_c"]),
        n_test=_parse_int("n_test", raw["n_test"]),
        output_dir=raw["output_dir"],
    )


def load(path) -> ExperimentConfig:
    return loads(Path(path).read_text(encoding="utf-8"))
