"""Data-generating processes: the linear running example and random cubics.

Polynomial coefficients are stored in ascending degree order,
``[intercept, x, x**2, ...]``. A two-parameter feature vector written as
``[x, 1]`` elsewhere is the reversal of this convention.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from .errors import DimensionMismatch
from .numerics import RngStream

if TYPE_CHECKING:
    from .gaussian import GaussianPrior


@dataclass(frozen=True)
class NoiseSpec:
    """Heteroscedastic noise variance ``v(x) = a + b * (x + c)**2``."""

    a: float = 0.1
    b: float = 0.04
    c: float = 8.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("noise floor a must be strictly positive")
        if self.b < 0:
            raise ValueError("noise slope b must be nonnegative")

    def variance(self, x):
        return noise_variance(self, x)


def noise_variance(spec: NoiseSpec, x):
    x = np.asarray(x, dtype=np.float64)
    out = spec.a + spec.b * (x + spec.c) ** 2
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TrueProcess:
    theta_star: np.ndarray
    degree: int
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        theta = np.asarray(self.theta_star, dtype=np.float64)
        if theta.shape != (self.degree + 1,):
            raise DimensionMismatch(
                f"theta_star has shape {theta.shape}, expected ({self.degree + 1},)"
            )
        object.__setattr__(self, "theta_star", theta)

    def mean(self, x):
        """Noise-free regression function f(x; theta_star)."""
        out = np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), self.theta_star)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class Dataset:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64).reshape(-1)
        y = np.asarray(self.y, dtype=np.float64).reshape(-1)
        if x.shape != y.shape:
            raise DimensionMismatch(f"x has {x.size} entries, y has {y.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
            raise ValueError("dataset values must be finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def m(self) -> int:
        return self.x.size

    def __len__(self):
        return self.x.size

    def to_csv(self) -> str:
        buf = io.StringIO(newline="")
        buf.write("x,y\n")
        for xi, yi in zip(self.x.tolist(), self.y.tolist()):
            buf.write(f"{xi!r},{yi!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Dataset":
        lines = [ln for ln in text.split("\n") if ln.strip()]
        if not lines or lines[0].strip() != "x,y":
            raise ValueError("dataset CSV must start with header 'x,y'")
        rows = [tuple(float(v) for v in ln.split(",")) for ln in lines[1:]]
        if any(len(r) != 2 for r in rows):
            raise ValueError("each dataset row must have exactly two fields")
        x = [r[0] for r in rows]
        y = [r[1] for r in rows]
        return cls(np.array(x), np.array(y))


def experiment_prior(degree: int = 3, intercept_var: float = 1.0, coef_var: float = 0.1):
    """Zero-mean diagonal prior used by the cubic-polynomial experiments."""
    from .gaussian import GaussianPrior

    variances = np.full(degree + 1, coef_var)
    variances[0] = intercept_var
    return GaussianPrior.diagonal(variances)


def sample_true_process(
    prior: "GaussianPrior", degree: int, rng: RngStream, noise: NoiseSpec | None = None
) -> TrueProcess:
    mean = np.asarray(prior.mean, dtype=np.float64)
    cov = np.asarray(prior.covariance, dtype=np.float64)
    if mean.shape != (degree + 1,) or cov.shape != (degree + 1, degree + 1):
        raise DimensionMismatch(
            f"prior has dimension {mean.size}, degree {degree} needs {degree + 1}"
        )
    if np.any(cov - np.diag(np.diag(cov))):
        raise ValueError("prior covariance must be diagonal")
    std = np.sqrt(np.diag(cov))
    theta = mean + std * rng.generator.standard_normal(degree + 1)
    return TrueProcess(theta, degree, noise if noise is not None else NoiseSpec())


def sample_dataset(process: TrueProcess, m: int, rng: RngStream) -> Dataset:
    """Draw ``m`` pairs with ``x ~ N(0, 1)`` and ``y ~ N(f(x), v(x))``.

    Inputs and noise come from separate child streams, so the dataset for
    a smaller ``m`` is a prefix of the one for a larger ``m``. The stream
    itself is not advanced: the same stream always yields the same data.
    """
    if m < 0:
        raise ValueError("m must be nonnegative")
    x = rng.child(0).generator.standard_normal(m)
    eps = rng.child(1).generator.standard_normal(m)
    y = process.mean(x) + np.sqrt(noise_variance(process.noise, x)) * eps
    return Dataset(x, y)


def example1_process() -> TrueProcess:
    """Linear process with mean ``0.5 x + 1`` and the default noise spec."""
    return TrueProcess(np.array([1.0, 0.5]), 1, NoiseSpec())
