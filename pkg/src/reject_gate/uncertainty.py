"""Total, aleatoric and epistemic uncertainty for squared, 0/1 and CE losses.

The epistemic part is the conditional regret: the expected loss gap, over
``(theta, y) ~ p(theta, y | x, D)``, between the Bayesian prediction and
the prediction that knows ``theta``. Closed forms live next to two
independent checks: full enumeration over a discrete grid, and a generic
Monte-Carlo estimator.

Entropies and KL divergences are in nats.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.special import entr, rel_entr

from .discrete import DiscreteModel, DiscretePosterior, predictive_pmf
from .gaussian import GaussianPosterior, features, predictive
from .numerics import RngStream


class Loss(str, enum.Enum):
    SQUARED = "squared"
    ZERO_ONE = "zero_one"
    CROSS_ENTROPY = "cross_entropy"


@dataclass(frozen=True)
class UncertaintyTriple:
    total: float
    aleatoric: float
    epistemic: float
    loss: Loss


def bayes_class(p) -> int:
    """Most probable class; ties go to the lowest index."""
    return int(np.argmax(p))


def squared_uncertainty(post: GaussianPosterior, x: float) -> UncertaintyTriple:
    pred = predictive(post, x)
    return UncertaintyTriple(pred.variance, pred.aleatoric, pred.epistemic, Loss.SQUARED)


def zero_one_uncertainty(model: DiscreteModel, post: DiscretePosterior, x: int) -> UncertaintyTriple:
    p_d = predictive_pmf(model, post, x)
    peak = model.likelihood[:, x, :].max(axis=1)
    total = 1.0 - p_d.max()
    epistemic = float(post.weights @ peak - p_d.max())
    # expected Bayes risk of the parameter-aware predictor
    aleatoric = float(post.weights @ (1.0 - peak))
    return UncertaintyTriple(float(total), aleatoric, epistemic, Loss.ZERO_ONE)


def cross_entropy_uncertainty(
    model: DiscreteModel, post: DiscretePosterior, x: int
) -> UncertaintyTriple:
    p_d = predictive_pmf(model, post, x)
    live = post.weights > 0
    w = post.weights[live]
    cond = model.likelihood[live, x, :]
    total = float(entr(p_d).sum())
    aleatoric = float(w @ entr(cond).sum(axis=1))
    kl = rel_entr(cond, p_d[None, :]).sum(axis=1)
    assert np.all(np.isfinite(kl)), "predictive mixture lost support of a live component"
    return UncertaintyTriple(total, aleatoric, float(w @ kl), Loss.CROSS_ENTROPY)


def discrete_uncertainty(model, post, x, loss) -> UncertaintyTriple:
    loss = Loss(loss)
    if loss is Loss.ZERO_ONE:
        return zero_one_uncertainty(model, post, x)
    if loss is Loss.CROSS_ENTROPY:
        return cross_entropy_uncertainty(model, post, x)
    raise ValueError("squared loss needs a Gaussian posterior, not a discrete model")


def loss_value(loss, y, action) -> float:
    """Prediction loss of a single action on label/target ``y``."""
    loss = Loss(loss)
    if loss is Loss.SQUARED:
        return (float(y) - float(action)) ** 2
    if loss is Loss.ZERO_ONE:
        return 0.0 if int(y) == int(action) else 1.0
    p = float(np.asarray(action)[int(y)])
    return np.inf if p == 0.0 else -np.log(p)


def loss_values(loss, ys, actions) -> np.ndarray:
    """Vectorized ``loss_value``.

    ``actions`` is broadcast against ``ys``; for cross-entropy it holds
    one distribution per row (or a single shared distribution).
    """
    loss = Loss(loss)
    ys = np.asarray(ys)
    if loss is Loss.SQUARED:
        return (ys - np.asarray(actions, dtype=np.float64)) ** 2
    if loss is Loss.ZERO_ONE:
        return (ys != np.asarray(actions)).astype(np.float64)
    probs = np.broadcast_to(np.asarray(actions, dtype=np.float64), (ys.size, _width(actions)))
    picked = probs[np.arange(ys.size), ys.astype(np.intp)]
    with np.errstate(divide="ignore"):
        return -np.log(picked)


def _width(actions):
    return np.asarray(actions).shape[-1]


def exact_conditional_regret(model: DiscreteModel, post: DiscretePosterior, x: int, loss) -> float:
    """Conditional regret by explicit double summation over ``(theta, y)``.

    Deliberately written as plain loops over the loss function so it shares
    no algebra with the closed forms it is used to check.
    """
    loss = Loss(loss)
    if loss is Loss.SQUARED:
        raise ValueError("enumeration needs a finite label set")
    p_d = predictive_pmf(model, post, x)
    base = bayes_class(p_d) if loss is Loss.ZERO_ONE else p_d
    total = 0.0
    for k in range(model.num_params):
        cond = model.likelihood[k, x, :]
        own = bayes_class(cond) if loss is Loss.ZERO_ONE else cond
        for y in range(model.num_classes):
            mass = post.weights[k] * cond[y]
            if mass == 0.0:
                continue
            total += mass * (loss_value(loss, y, base) - loss_value(loss, y, own))
    return float(total)


def mc_conditional_regret(theta_sampler, y_sampler, bayes_rule, base_prediction, loss,
                          n: int, rng: RngStream):
    """Monte-Carlo conditional regret with the standard error of the mean.

    Parameters
    ----------
    theta_sampler : callable ``(generator, n) -> thetas``
        Draws from the parameter posterior.
    y_sampler : callable ``(generator, thetas) -> ys``
        Draws one target per parameter draw from ``p(y | x, theta)``.
    bayes_rule : callable ``thetas -> actions``
        Parameter-aware optimal prediction ``h(x, theta)`` per draw.
    base_prediction
        The Bayesian prediction ``H_B(x, D)``.
    loss : Loss or str
    n : int
        Number of joint draws; at least 1000.
    rng : RngStream
    """
    if n < 1000:
        raise ValueError("n must be at least 1000")
    gen = rng.generator
    thetas = theta_sampler(gen, n)
    ys = y_sampler(gen, thetas)
    gap = loss_values(loss, ys, base_prediction) - loss_values(loss, ys, bayes_rule(thetas))
    return float(gap.mean()), float(gap.std(ddof=1) / np.sqrt(n))


def gaussian_regret_samplers(post: GaussianPosterior, x: float):
    """Sampler triple for ``mc_conditional_regret`` on a Gaussian posterior.

    Returns ``(theta_sampler, y_sampler, bayes_rule, base_prediction)``.
    """
    phi = features(float(x), post.degree)
    v = post.noise.variance(float(x))
    chol = np.linalg.cholesky(post.covariance) if np.any(post.covariance) else None

    def theta_sampler(gen, n):
        z = gen.standard_normal((n, phi.size))
        return post.mean + (z @ chol.T if chol is not None else 0.0 * z)

    def y_sampler(gen, thetas):
        return thetas @ phi + np.sqrt(v) * gen.standard_normal(thetas.shape[0])

    def bayes_rule(thetas):
        return thetas @ phi

    return theta_sampler, y_sampler, bayes_rule, float(phi @ post.mean)


def discrete_regret_samplers(model: DiscreteModel, post: DiscretePosterior, x: int, loss):
    """Sampler triple for ``mc_conditional_regret`` on a discrete grid."""
    loss = Loss(loss)
    cond = model.likelihood[:, x, :]
    cum = np.cumsum(cond, axis=1)

    def theta_sampler(gen, n):
        return gen.choice(model.num_params, size=n, p=post.weights)

    def y_sampler(gen, thetas):
        u = gen.random(thetas.size)
        ys = (u[:, None] > cum[thetas]).sum(axis=1)
        return np.minimum(ys, model.num_classes - 1)

    if loss is Loss.ZERO_ONE:
        own = np.argmax(cond, axis=1)

        def bayes_rule(thetas):
            return own[thetas]

        base = bayes_class(predictive_pmf(model, post, x))
    else:

        def bayes_rule(thetas):
            return cond[thetas]

        base = predictive_pmf(model, post, x)
    return theta_sampler, y_sampler, bayes_rule, base
