"""Finite parameter grid classifier with exact Bayesian updating.

A model is a likelihood table ``p(y | x, theta)`` of shape
``(num_params, num_inputs, num_classes)`` together with a prior over the
grid and a marginal over the inputs. Everything downstream (predictive
distributions, closed-form uncertainty decompositions, exhaustive optimality checks)
is exact enumeration over these tables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, ZeroEvidence

SIMPLEX_ATOL = 1e-12


def _check_simplex(p, name, axis=-1):
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError(f"{name} has entries outside [0, 1]")
    if np.any(np.abs(p.sum(axis=axis) - 1.0) > SIMPLEX_ATOL):
        raise ValueError(f"{name} does not sum to 1 within {SIMPLEX_ATOL}")


@dataclass(frozen=True)
class DiscreteModel:
    likelihood: np.ndarray
    prior: np.ndarray
    input_marginal: np.ndarray

    def __post_init__(self):
        lik = np.asarray(self.likelihood, dtype=np.float64)
        prior = np.asarray(self.prior, dtype=np.float64).reshape(-1)
        px = np.asarray(self.input_marginal, dtype=np.float64).reshape(-1)
        if lik.ndim != 3:
            raise DimensionMismatch("likelihood must be indexed [theta][x][y]")
        if lik.shape[0] != prior.size or lik.shape[1] != px.size:
            raise DimensionMismatch(
                f"likelihood {lik.shape} vs prior {prior.size} and inputs {px.size}"
            )
        _check_simplex(lik, "likelihood")
        _check_simplex(prior, "prior")
        _check_simplex(px, "input_marginal")
        object.__setattr__(self, "likelihood", lik)
        object.__setattr__(self, "prior", prior)
        object.__setattr__(self, "input_marginal", px)

    @property
    def num_params(self) -> int:
        return self.likelihood.shape[0]

    @property
    def num_inputs(self) -> int:
        return self.likelihood.shape[1]

    @property
    def num_classes(self) -> int:
        return self.likelihood.shape[2]

    def to_dict(self) -> dict:
        return {
            "classes": self.num_classes,
            "params": self.num_params,
            "inputs": self.num_inputs,
            "prior": self.prior.tolist(),
            "input_marginal": self.input_marginal.tolist(),
            "likelihood": self.likelihood.tolist(),
        }

    @classmethod
    def from_dict(cls, rec: dict) -> "DiscreteModel":
        missing = [
            k
            for k in ("classes", "params", "inputs", "prior", "input_marginal", "likelihood")
            if k not in rec
        ]
        if missing:
            raise ValueError(f"discrete model is missing fields: {', '.join(missing)}")
        model = cls(rec["likelihood"], rec["prior"], rec["input_marginal"])
        declared = (int(rec["params"]), int(rec["inputs"]), int(rec["classes"]))
        if declared != model.likelihood.shape:
            raise DimensionMismatch(
                f"declared (params, inputs, classes) {declared} but table is "
                f"{model.likelihood.shape}"
            )
        return model

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path) -> "DiscreteModel":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class DiscretePosterior:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        _check_simplex(w, "posterior weights")
        object.__setattr__(self, "weights", w)


def posterior_update(model: DiscreteModel, data, prior=None) -> DiscretePosterior:
    """Bayes rule over the grid for observations ``[(x_index, y_index), ...]``.

    ``prior`` overrides the model prior, which allows sequential updating
    from an earlier posterior. Products are accumulated in log space.
    """
    base = model.prior if prior is None else np.asarray(getattr(prior, "weights", prior))
    data = list(data)
    if not data:
        return DiscretePosterior(base.copy())
    xs = np.array([d[0] for d in data], dtype=np.intp)
    ys = np.array([d[1] for d in data], dtype=np.intp)
    if xs.min() < 0 or xs.max() >= model.num_inputs or ys.min() < 0 or ys.max() >= model.num_classes:
        raise IndexError("observation index out of range")
    with np.errstate(divide="ignore"):
        log_lik = np.log(model.likelihood[:, xs, ys]).sum(axis=1)
        log_w = np.log(base) + log_lik
    top = log_w.max()
    if not np.isfinite(top):
        raise ZeroEvidence("data has zero likelihood under every parameter")
    w = np.exp(log_w - top)
    return DiscretePosterior(w / w.sum())


def predictive_pmf(model: DiscreteModel, post: DiscretePosterior, x: int) -> np.ndarray:
    """Posterior mixture of the grid conditionals at input ``x``."""
    if not 0 <= x < model.num_inputs:
        raise IndexError(f"input index {x} out of range")
    return post.weights @ model.likelihood[:, x, :]


def random_model(gen: np.random.Generator, num_params=2, num_inputs=3, num_classes=2,
                 concentration=1.0) -> DiscreteModel:
    """Model with Dirichlet-distributed tables, for property tests and verification."""
    lik = gen.dirichlet(np.full(num_classes, concentration), size=(num_params, num_inputs))
    prior = gen.dirichlet(np.ones(num_params))
    px = gen.dirichlet(np.ones(num_inputs))
    return DiscreteModel(lik, prior, px)
