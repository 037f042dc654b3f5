"""Oracle suite: closed forms checked against enumeration and Monte Carlo."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discrete import posterior_update, random_model
from .gaussian import GaussianPrior, fit_posterior, predictive
from .numerics import RngStream
from .predictors import Decision, REJECT, bayesian_prediction, epistemic_reject, verify_theorem1
from .synthetic import NoiseSpec, sample_dataset, sample_true_process
from .uncertainty import (
    Loss,
    discrete_uncertainty,
    exact_conditional_regret,
    gaussian_regret_samplers,
    mc_conditional_regret,
    squared_uncertainty,
)

DELTA_GRID = np.linspace(0.0, 1.0, 21)


@dataclass(frozen=True)
class CheckResult:
    name: str
    deviation: float
    tolerance: float
    passed: bool
    detail: str = ""


def random_discrete_case(gen, num_params=None, num_inputs=None, num_classes=None, max_obs=6):
    """Random grid model plus a posterior from a few random observations."""
    k = num_params or int(gen.integers(2, 5))
    nx = num_inputs or int(gen.integers(1, 4))
    ny = num_classes or int(gen.integers(2, 5))
    model = random_model(gen, k, nx, ny, concentration=float(gen.choice([0.3, 1.0, 3.0])))
    n_obs = int(gen.integers(0, max_obs + 1))
    data = [(int(gen.integers(nx)), int(gen.integers(ny))) for _ in range(n_obs)]
    return model, posterior_update(model, data), int(gen.integers(nx))


def random_gaussian_case(gen_stream: RngStream, degree=None):
    """Posterior of a random polynomial model fit on random data, and a probe input."""
    gen = gen_stream.generator
    degree = int(gen.integers(1, 4)) if degree is None else degree
    variances = gen.uniform(0.05, 2.0, degree + 1)
    prior = GaussianPrior.diagonal(variances)
    noise = NoiseSpec(float(gen.uniform(0.05, 1.0)), float(gen.uniform(0.0, 0.1)),
                      float(gen.uniform(-3, 3)))
    process = sample_true_process(prior, degree, gen_stream.child(0), noise)
    m = int(gen.integers(0, 40))
    data = sample_dataset(process, m, gen_stream.child(1))
    return fit_posterior(data, prior, degree, noise), float(gen.normal(0.0, 1.5))


def check_theorem1(seed=0, n_models=20, predictor=epistemic_reject) -> CheckResult:
    gen = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        model = random_model(gen, 2, 3, 2)
        for loss in (Loss.ZERO_ONE, Loss.CROSS_ENTROPY):
            report = verify_theorem1(model, 1, DELTA_GRID, loss, predictor=predictor)
            worst = max(worst, report.max_suboptimality)
    return CheckResult("theorem1", worst, 1e-12, worst <= 1e-12,
                       f"{n_models} models x 2 losses x {DELTA_GRID.size} thresholds")


def check_table1_enumeration(seed=1, n_models=500) -> CheckResult:
    gen = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_models):
        model, post, x = random_discrete_case(gen)
        for loss in (Loss.ZERO_ONE, Loss.CROSS_ENTROPY):
            closed = discrete_uncertainty(model, post, x, loss).epistemic
            worst = max(worst, abs(closed - exact_conditional_regret(model, post, x, loss)))
    return CheckResult("table1_enumeration", worst, 1e-12, worst <= 1e-12, f"{n_models} models")


def check_decomposition(seed=2, n_discrete=500, n_gaussian=100) -> CheckResult:
    gen = np.random.default_rng(seed)
    worst_d = 0.0
    for _ in range(n_discrete):
        model, post, x = random_discrete_case(gen)
        for loss in (Loss.ZERO_ONE, Loss.CROSS_ENTROPY):
            t = discrete_uncertainty(model, post, x, loss)
            worst_d = max(worst_d, abs(t.total - t.aleatoric - t.epistemic))
    worst_g = 0.0
    for i in range(n_gaussian):
        post, x = random_gaussian_case(RngStream(seed, i))
        t = squared_uncertainty(post, x)
        worst_g = max(worst_g, abs(predictive(post, x).variance - t.aleatoric - t.epistemic))
    ok = worst_d <= 1e-12 and worst_g <= 1e-9
    return CheckResult("decomposition", max(worst_d, worst_g), 1e-12, ok,
                       f"discrete {worst_d:.2e} (tol 1e-12), gaussian {worst_g:.2e} (tol 1e-9)")


def check_mc_regret(seed=3, n_cases=20, n=200_000, required=19) -> CheckResult:
    hits = 0
    worst_z = 0.0
    for i in range(n_cases):
        post, x = random_gaussian_case(RngStream(seed, i))
        est, se = mc_conditional_regret(*gaussian_regret_samplers(post, x), Loss.SQUARED, n,
                                        RngStream(seed, 10_000 + i))
        z = abs(est - squared_uncertainty(post, x).epistemic) / se
        worst_z = max(worst_z, z)
        hits += z <= 3.0
    return CheckResult("mc_regret", worst_z, 3.0, hits >= required,
                       f"{hits}/{n_cases} within 3 standard errors (need {required})")


def perturbed_epistemic_reject(offset: float):
    """Epistemic rule with a shifted regret estimate; used to prove the gate bites."""

    def predictor(post, x, delta, loss=Loss.SQUARED) -> Decision:
        action, triple = bayesian_prediction(post, x, loss)
        return Decision.predict(action) if triple.epistemic + offset <= delta else REJECT

    return predictor


def run_suite(epistemic_offset: float = 0.0):
    """All checks in order; theorem1 runs first."""
    predictor = epistemic_reject if epistemic_offset == 0.0 else perturbed_epistemic_reject(
        epistemic_offset)
    return [
        check_theorem1(predictor=predictor),
        check_table1_enumeration(),
        check_decomposition(),
        check_mc_regret(),
    ]
