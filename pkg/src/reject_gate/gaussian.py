"""Polynomial regression with known heteroscedastic Gaussian noise.

Both learners are closed form: weighted least squares for the
maximum-likelihood estimate, and the conjugate Gaussian update for the
Bayesian posterior over coefficients.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotPositiveDefinite, SingularDesign
from .numerics import quadratic_form, solve_spd
from .synthetic import Dataset, NoiseSpec, noise_variance

ML_CONDITION_LIMIT = 1e10


@dataclass(frozen=True)
class GaussianPrior:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(self.covariance, dtype=np.float64)
        if cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(f"mean has {mean.size} entries, covariance {cov.shape}")
        if np.any(cov - np.diag(np.diag(cov))):
            raise ValueError("prior covariance must be diagonal")
        # zero variances are allowed for sampling a fixed truth; fitting rejects them
        if np.any(np.diag(cov) < 0):
            raise ValueError("prior variances must be nonnegative")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def diagonal(cls, variances, mean=None):
        variances = np.asarray(variances, dtype=np.float64)
        if mean is None:
            mean = np.zeros_like(variances)
        return cls(np.asarray(mean, dtype=np.float64), np.diag(variances))

    @property
    def dim(self) -> int:
        return self.mean.size


@dataclass(frozen=True)
class GaussianPosterior:
    mean: np.ndarray
    covariance: np.ndarray
    degree: int
    noise: NoiseSpec

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=np.float64).reshape(-1)
        cov = np.asarray(self.covariance, dtype=np.float64)
        if mean.shape != (self.degree + 1,) or cov.shape != (mean.size, mean.size):
            raise DimensionMismatch(
                f"degree {self.degree} needs {self.degree + 1} coefficients; got mean "
                f"{mean.shape}, covariance {cov.shape}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "gaussian_posterior",
                "degree": self.degree,
                "noise": _noise_dict(self.noise),
                "mean": self.mean.tolist(),
                "covariance": self.covariance.reshape(-1).tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "GaussianPosterior":
        rec = json.loads(text)
        if rec.get("kind") != "gaussian_posterior":
            raise ValueError("record is not a gaussian_posterior")
        d = int(rec["degree"]) + 1
        return cls(
            np.array(rec["mean"], dtype=np.float64),
            np.array(rec["covariance"], dtype=np.float64).reshape(d, d),
            int(rec["degree"]),
            NoiseSpec(**rec["noise"]),
        )


@dataclass(frozen=True)
class PredictiveNormal:
    mean: float
    variance: float
    aleatoric: float
    epistemic: float


@dataclass(frozen=True)
class MlEstimate:
    theta_hat: np.ndarray
    degree: int
    noise: NoiseSpec

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": "ml_estimate",
                "degree": self.degree,
                "noise": _noise_dict(self.noise),
                "mean": np.asarray(self.theta_hat).tolist(),
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "MlEstimate":
        rec = json.loads(text)
        if rec.get("kind") != "ml_estimate":
            raise ValueError("record is not an ml_estimate")
        return cls(
            np.array(rec["mean"], dtype=np.float64),
            int(rec["degree"]),
            NoiseSpec(**rec["noise"]),
        )


def _noise_dict(noise: NoiseSpec) -> dict:
    return {"a": noise.a, "b": noise.b, "c": noise.c}


def features(x, degree: int) -> np.ndarray:
    """Ascending-power features; a vector for scalar ``x``, rows otherwise."""
    x = np.asarray(x, dtype=np.float64)
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    if x.ndim == 0:
        return x ** np.arange(degree + 1)
    return np.vander(x.reshape(-1), degree + 1, increasing=True)


def design_matrix(data: Dataset, degree: int) -> np.ndarray:
    return features(data.x, degree)


def _weighted_normal_equations(data, degree, noise):
    X = design_matrix(data, degree)
    w = 1.0 / noise_variance(noise, data.x)
    gram = X.T @ (w[:, None] * X)
    rhs = X.T @ (w * data.y)
    return gram, rhs


def fit_ml(data: Dataset, degree: int, noise: NoiseSpec) -> MlEstimate:
    """Weighted least squares ``(X^T S^-1 X)^-1 X^T S^-1 y`` with ``S = diag(v(x_i))``."""
    if data.m < degree + 1:
        raise SingularDesign(f"{data.m} points cannot determine {degree + 1} coefficients")
    gram, rhs = _weighted_normal_equations(data, degree, noise)
    if not np.isfinite(np.linalg.cond(gram)) or np.linalg.cond(gram) > ML_CONDITION_LIMIT:
        raise SingularDesign("weighted normal equations are ill-conditioned")
    try:
        theta = solve_spd(gram, rhs)
    except NotPositiveDefinite as exc:
        raise SingularDesign(str(exc)) from None
    return MlEstimate(theta, degree, noise)


def fit_posterior(
    data: Dataset, prior: GaussianPrior, degree: int, noise: NoiseSpec
) -> GaussianPosterior:
    if prior.dim != degree + 1:
        raise DimensionMismatch(f"prior has dimension {prior.dim}, degree {degree}")
    prior_var = np.diag(prior.covariance)
    if np.any(prior_var <= 0):
        raise NotPositiveDefinite("prior variances must be strictly positive to fit")
    if data.m == 0:
        return GaussianPosterior(prior.mean.copy(), prior.covariance.copy(), degree, noise)
    gram, rhs = _weighted_normal_equations(data, degree, noise)
    prior_precision = 1.0 / prior_var
    precision = gram + np.diag(prior_precision)
    rhs = rhs + prior_precision * prior.mean
    mean = solve_spd(precision, rhs)
    cov = solve_spd(precision, np.eye(degree + 1))
    cov = 0.5 * (cov + cov.T)
    return GaussianPosterior(mean, cov, degree, noise)


def predictive(post: GaussianPosterior, x: float) -> PredictiveNormal:
    phi = features(float(x), post.degree)
    epistemic = quadratic_form(post.covariance, phi)
    aleatoric = noise_variance(post.noise, float(x))
    return PredictiveNormal(
        mean=float(phi @ post.mean),
        variance=epistemic + aleatoric,
        aleatoric=aleatoric,
        epistemic=epistemic,
    )


def predictive_batch(post: GaussianPosterior, xs):
    """Vectorized ``predictive``: returns ``(mean, aleatoric, epistemic)`` arrays."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1)
    phi = features(xs, post.degree)
    mean = phi @ post.mean
    epistemic = np.einsum("ij,jk,ik->i", phi, post.covariance, phi)
    return mean, noise_variance(post.noise, xs), epistemic


def ml_predict(est: MlEstimate, x):
    """Plug-in prediction and plug-in conditional risk.

    Under squared loss with known noise the plug-in risk is just ``v(x)``.
    Works elementwise on arrays.
    """
    phi = features(x, est.degree)
    return phi @ est.theta_hat, noise_variance(est.noise, x)
