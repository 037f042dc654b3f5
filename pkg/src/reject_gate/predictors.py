"""Reject-option decision rules and the regret-based reject loss.

Four rules share one shape, predict-or-abstain by thresholding an
uncertainty score (accept on ``score <= threshold``):

* ``aleatoric_oracle`` knows the true process and gates on ``v(x)``;
* ``plug_in_reject`` uses the ML fit and its plug-in risk;
* ``bayesian_reject`` gates the Bayesian prediction on total uncertainty;
* ``epistemic_reject`` gates the same prediction on conditional regret.

``verify_theorem1`` checks by exhaustive enumeration that the epistemic
rule attains the minimum expected regret-reject loss at every reachable
``(x, D)`` of a small discrete model.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .discrete import DiscreteModel, DiscretePosterior, posterior_update, predictive_pmf
from .errors import EnumerationTooLarge
from .gaussian import GaussianPosterior, MlEstimate, predictive
from .synthetic import TrueProcess
from .uncertainty import (
    Loss,
    UncertaintyTriple,
    bayes_class,
    discrete_uncertainty,
    loss_value,
    squared_uncertainty,
)


@dataclass(frozen=True)
class Decision:
    """Either a prediction payload or an abstention."""

    value: object = None
    rejected: bool = False

    def __post_init__(self):
        if self.rejected and self.value is not None:
            raise ValueError("a rejection carries no prediction")
        if isinstance(self.value, np.ndarray):
            if abs(self.value.sum() - 1.0) > 1e-12 or np.any(self.value < 0):
                raise ValueError("distribution payload must lie on the simplex")

    @classmethod
    def predict(cls, value):
        return cls(value=value)

    @property
    def accepted(self) -> bool:
        return not self.rejected

    def __repr__(self):
        return "Reject" if self.rejected else f"Predict({self.value!r})"


REJECT = Decision(rejected=True)


@dataclass(frozen=True)
class RejectConfig:
    epsilon: float = 1.0
    delta: float = 1.0

    def __post_init__(self):
        for name in ("epsilon", "delta"):
            val = getattr(self, name)
            if not np.isfinite(val) or val < 0:
                raise ValueError(f"{name} must be finite and nonnegative")


def _gate(score, threshold, payload) -> Decision:
    return Decision.predict(payload) if score <= threshold else REJECT


def aleatoric_oracle(process: TrueProcess, x: float, epsilon: float) -> Decision:
    return _gate(process.noise.variance(x), epsilon, process.mean(x))


def plug_in_reject(est: MlEstimate, x: float, epsilon: float) -> Decision:
    from .gaussian import ml_predict

    prediction, risk = ml_predict(est, x)
    return _gate(risk, epsilon, float(prediction))


def bayesian_prediction(post, x, loss):
    """Bayesian prediction ``H_B(x, D)`` and the loss-matched uncertainty triple.

    ``post`` is a ``GaussianPosterior`` (squared loss) or a
    ``(DiscreteModel, DiscretePosterior)`` pair (0/1 or cross-entropy).
    """
    loss = Loss(loss)
    if isinstance(post, GaussianPosterior):
        if loss is not Loss.SQUARED:
            raise ValueError("Gaussian posteriors only support squared loss")
        return predictive(post, x).mean, squared_uncertainty(post, x)
    model, weights = post
    triple = discrete_uncertainty(model, weights, x, loss)
    p_d = predictive_pmf(model, weights, x)
    action = bayes_class(p_d) if loss is Loss.ZERO_ONE else p_d
    return action, triple


def bayesian_reject(post, x, epsilon: float, loss=Loss.SQUARED) -> Decision:
    action, triple = bayesian_prediction(post, x, loss)
    return _gate(triple.total, epsilon, action)


def epistemic_reject(post, x, delta: float, loss=Loss.SQUARED) -> Decision:
    action, triple = bayesian_prediction(post, x, loss)
    return _gate(triple.epistemic, delta, action)


def regret_reject_loss(decision: Decision, bayes_action, y, delta: float, loss) -> float:
    """Per-sample regret-based reject loss; negative values are kept."""
    if decision.rejected:
        return float(delta)
    return loss_value(loss, y, decision.value) - loss_value(loss, y, bayes_action)


@dataclass
class Theorem1Report:
    loss: Loss
    max_suboptimality: float = 0.0
    cases: int = 0
    rejections: int = 0
    worst_case: tuple | None = None
    tolerance: float = 1e-12

    @property
    def passed(self) -> bool:
        return self.max_suboptimality <= self.tolerance


def _simplex_lattice(num_classes, resolution):
    for combo in itertools.product(range(resolution + 1), repeat=num_classes - 1):
        if sum(combo) <= resolution:
            yield np.array([*combo, resolution - sum(combo)], dtype=np.float64) / resolution


def _candidate_actions(model, post, x, loss):
    if loss is Loss.ZERO_ONE:
        return [Decision.predict(c) for c in range(model.num_classes)]
    cands = [Decision.predict(predictive_pmf(model, post, x))]
    cands += [Decision.predict(model.likelihood[k, x, :].copy()) for k in range(model.num_params)]
    cands += [Decision.predict(p) for p in _simplex_lattice(model.num_classes, 20)]
    return cands


def _expected_regret_reject_loss(model, post, x, decision, delta, loss):
    total = 0.0
    for k in range(model.num_params):
        cond = model.likelihood[k, x, :]
        own = bayes_class(cond) if loss is Loss.ZERO_ONE else cond
        for y in range(model.num_classes):
            mass = post.weights[k] * cond[y]
            if mass == 0.0:
                continue
            total += mass * regret_reject_loss(decision, own, y, delta, loss)
    return total


def verify_theorem1(model: DiscreteModel, m: int, deltas, loss, predictor=epistemic_reject,
                    max_cells: int = 64) -> Theorem1Report:
    """Exhaustively confirm pointwise optimality of the epistemic rule.

    Every ordered dataset of size ``m`` with positive probability and
    every input with positive marginal is visited. At each ``(x, D)`` and
    threshold, the exact expected regret-reject loss of the predictor's
    action is compared with Reject and every class (0/1) or a set of
    candidate distributions (cross-entropy: the predictive pmf, each grid
    conditional and a simplex lattice of step 1/20).
    """
    loss = Loss(loss)
    if loss is Loss.SQUARED:
        raise ValueError("enumeration needs a finite label set")
    cells = model.num_params * model.num_inputs * model.num_classes
    if cells > max_cells or m > 2:
        raise EnumerationTooLarge(f"{cells} table cells with m={m} exceeds the enumeration budget")
    report = Theorem1Report(loss)
    pairs = [(xi, yi) for xi in range(model.num_inputs) for yi in range(model.num_classes)]
    for data in itertools.product(pairs, repeat=m):
        p_data = model.prior.copy()
        for xi, yi in data:
            p_data = p_data * model.input_marginal[xi] * model.likelihood[:, xi, yi]
        if p_data.sum() <= 0:
            continue
        post = posterior_update(model, data)
        for x in range(model.num_inputs):
            if model.input_marginal[x] <= 0:
                continue
            options = _candidate_actions(model, post, x, loss)
            option_losses = None
            for delta in deltas:
                decision = predictor((model, post), x, delta, loss)
                if option_losses is None:
                    option_losses = [
                        _expected_regret_reject_loss(model, post, x, d, 0.0, loss) for d in options
                    ]
                best = min(min(option_losses), float(delta))
                chosen = _expected_regret_reject_loss(model, post, x, decision, delta, loss)
                gap = chosen - best
                report.cases += 1
                report.rejections += decision.rejected
                if gap > report.max_suboptimality:
                    report.max_suboptimality = gap
                    report.worst_case = (tuple(data), x, float(delta))
    return report
