"""Regret-coverage curves, AuReC and the seeded Monte-Carlo trial harness."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import ExperimentConfig
from .errors import EmptyInput, SingularDesign
from .gaussian import (
    GaussianPrior,
    MlEstimate,
    features,
    fit_ml,
    fit_posterior,
    predictive_batch,
)
from .numerics import RngStream
from .synthetic import (
    TrueProcess,
    example1_process,
    noise_variance,
    sample_dataset,
    sample_true_process,
)

log = logging.getLogger(__name__)

METHODS = ("plug_in", "bayesian", "epistemic", "aleatoric_oracle")

# child stream keys inside one trial
_THETA, _DATA, _TEST = 0, 1, 2


def per_point_regret(model, process: TrueProcess, x):
    """Expected squared-loss regret of a fitted model against the truth.

    Under squared loss the noise terms cancel in expectation over ``y``,
    leaving ``(prediction(x) - f(x; theta_star))**2``. ``model`` is a
    ``GaussianPosterior`` (posterior-mean prediction) or an ``MlEstimate``.
    """
    coef = model.theta_hat if isinstance(model, MlEstimate) else model.mean
    phi = features(x, model.degree)
    gap = phi @ coef - process.mean(x)
    return gap**2


@dataclass(frozen=True)
class RegretCoverageCurve:
    coverage: np.ndarray
    mean_regret: np.ndarray
    aurec: float

    @property
    def points(self):
        return list(zip(self.coverage.tolist(), self.mean_regret.tolist()))


def build_curve(scores, regrets=None) -> RegretCoverageCurve:
    """Regret-coverage curve from per-point uncertainty and regret.

    Accepts either a sequence of ``(uncertainty, regret)`` pairs or two
    parallel arrays. Points are accepted in order of increasing
    uncertainty (ties keep input order); coverage ``k/n`` carries the mean
    regret of the first ``k`` accepted points, with 0 at coverage 0.
    """
    if regrets is None:
        pairs = np.asarray(scores, dtype=np.float64).reshape(-1, 2)
        scores, regrets = pairs[:, 0], pairs[:, 1]
    scores = np.asarray(scores, dtype=np.float64).reshape(-1)
    regrets = np.asarray(regrets, dtype=np.float64).reshape(-1)
    if scores.size == 0:
        raise EmptyInput("regret-coverage curve needs at least one point")
    if scores.shape != regrets.shape:
        raise ValueError("scores and regrets differ in length")
    if not (np.all(np.isfinite(scores)) and np.all(np.isfinite(regrets))):
        raise ValueError("scores and regrets must be finite")
    n = scores.size
    order = np.argsort(scores, kind="stable")
    k = np.arange(1, n + 1)
    mean_regret = np.concatenate(([0.0], np.cumsum(regrets[order]) / k))
    coverage = np.arange(n + 1) / n
    aurec = float(np.sum(np.diff(coverage) * (mean_regret[1:] + mean_regret[:-1]) / 2))
    return RegretCoverageCurve(coverage, mean_regret, aurec)


@dataclass(frozen=True)
class TrialResult:
    m: int
    aurec: dict
    seed: int
    trial_index: int


def trial_scores(config: ExperimentConfig, m: int, seed: int, trial_index: int):
    """Per-method ``(scores, regrets)`` on the trial's test inputs.

    ``plug_in`` maps to ``None`` when the ML fit is singular.
    """
    rng = RngStream(seed, trial_index)
    noise = config.noise()
    prior = config.prior()
    process = sample_true_process(prior, config.degree, rng.child(_THETA), noise)
    data = sample_dataset(process, m, rng.child(_DATA))
    post = fit_posterior(data, prior, config.degree, noise)
    xs = rng.child(_TEST).generator.standard_normal(config.n_test)

    mean, aleatoric, epistemic = predictive_batch(post, xs)
    truth = process.mean(xs)
    bayes_regret = (mean - truth) ** 2
    out = {
        "bayesian": (aleatoric + epistemic, bayes_regret),
        "epistemic": (epistemic, bayes_regret),
        "aleatoric_oracle": (aleatoric, bayes_regret),
    }
    try:
        est = fit_ml(data, config.degree, noise)
    except SingularDesign:
        out["plug_in"] = None
    else:
        out["plug_in"] = (noise_variance(noise, xs), per_point_regret(est, process, xs))
    return out


def run_trial(config: ExperimentConfig, m: int, seed: int, trial_index: int) -> TrialResult:
    scores = trial_scores(config, m, seed, trial_index)
    aurec = {}
    for method in METHODS:
        pair = scores[method]
        aurec[method] = float("nan") if pair is None else build_curve(*pair).aurec
    return TrialResult(m, aurec, seed, trial_index)


def _trial_task(args):
    config, m, trial_index = args
    res = run_trial(config, m, config.master_seed, trial_index)
    return [res.aurec[k] for k in METHODS]


@dataclass(frozen=True)
class SummaryRow:
    m: int
    method: str
    mean_aurec: float
    q40: float
    q60: float
    trials: int
    stderr: float


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    values: np.ndarray  # (len(m_values), trials, len(METHODS)); nan marks a failed fit
    rows: list = field(default_factory=list)

    def per_trial(self, m: int, method: str) -> np.ndarray:
        i = self.config.m_values.index(m)
        return self.values[i, :, METHODS.index(method)]

    def row(self, m: int, method: str) -> SummaryRow:
        for r in self.rows:
            if r.m == m and r.method == method:
                return r
        raise KeyError((m, method))

    def to_csv(self) -> str:
        lines = ["m,method,mean_aurec,q40,q60,trials"]
        for r in self.rows:
            lines.append(f"{r.m},{r.method},{r.mean_aurec!r},{r.q40!r},{r.q60!r},{r.trials}")
        return "\n".join(lines) + "\n"


def _summarize(m, method, vals) -> SummaryRow:
    ok = vals[np.isfinite(vals)]
    if ok.size == 0:
        nan = float("nan")
        return SummaryRow(m, method, nan, nan, nan, 0, nan)
    q40, q60 = np.percentile(ok, [40.0, 60.0])
    stderr = float(ok.std(ddof=1) / np.sqrt(ok.size)) if ok.size > 1 else 0.0
    return SummaryRow(m, method, float(ok.mean()), float(q40), float(q60), int(ok.size), stderr)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    """Run ``config.trials`` trials per training-set size and aggregate AuReC.

    Trials are keyed by index, so results do not depend on ``workers``.
    Trial ``t`` shares its true process and test inputs across all sizes,
    and smaller training sets are prefixes of larger ones.
    """
    tasks = [(config, m, t) for m in config.m_values for t in range(config.trials)]
    if workers > 1:
        chunk = max(1, len(tasks) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_trial_task, tasks, chunksize=chunk))
    else:
        flat = [_trial_task(t) for t in tasks]
    values = np.array(flat, dtype=np.float64).reshape(
        len(config.m_values), config.trials, len(METHODS)
    )
    result = ExperimentResult(config, values)
    for i, m in enumerate(config.m_values):
        for j, method in enumerate(METHODS):
            vals = values[i, :, j]
            missing = int(np.sum(~np.isfinite(vals)))
            if missing:
                log.info("m=%d %s: %d of %d trials had no fit", m, method, missing, vals.size)
            result.rows.append(_summarize(m, method, vals))
    return result


DEMO_GRID = (-15.0, 5.0, 0.01)
DEMO_PRIOR_VARIANCES = (1.0, 1.0)
DEMO_TRAIN_SIZE = 10
DEMO_SEED = 7


@dataclass(frozen=True)
class DemoTable:
    which: str
    x: np.ndarray
    prediction: np.ndarray
    uncertainty: np.ndarray
    threshold: float
    accepted: np.ndarray
    train_x: np.ndarray = field(default_factory=lambda: np.empty(0))
    train_y: np.ndarray = field(default_factory=lambda: np.empty(0))

    def to_csv(self) -> str:
        lines = ["x,prediction,uncertainty,threshold,accepted"]
        for x, p, u, a in zip(
            self.x.tolist(), self.prediction.tolist(), self.uncertainty.tolist(), self.accepted
        ):
            lines.append(f"{x!r},{p!r},{u!r},{self.threshold!r},{int(a)}")
        return "\n".join(lines) + "\n"


def demo_grid() -> np.ndarray:
    lo, hi, step = DEMO_GRID
    n = int(round((hi - lo) / step))
    return np.round(lo + step * np.arange(n + 1), 2)


def demo_posterior(seed: int = DEMO_SEED):
    """Linear-model posterior on ``DEMO_TRAIN_SIZE`` draws from the running example."""
    process = example1_process()
    data = sample_dataset(process, DEMO_TRAIN_SIZE, RngStream(seed, 0))
    prior = GaussianPrior.diagonal(DEMO_PRIOR_VARIANCES)
    return fit_posterior(data, prior, 1, process.noise), data


def figure_demo_data(which: str, seed: int = DEMO_SEED) -> DemoTable:
    """Tables behind the three illustration figures.

    ``fig1`` is the aleatoric rule on the running example (threshold 1).
    ``fig2a``/``fig2b`` gate the Bayesian prediction of a linear model fit
    on 10 seeded draws by total uncertainty (threshold 2) and by epistemic
    uncertainty (threshold 1).
    """
    xs = demo_grid()
    if which == "fig1":
        process = example1_process()
        v = noise_variance(process.noise, xs)
        return DemoTable(which, xs, process.mean(xs), v, 1.0, v <= 1.0)
    if which not in ("fig2a", "fig2b"):
        raise ValueError(f"unknown demo {which!r}; expected fig1, fig2a or fig2b")
    post, data = demo_posterior(seed)
    mean, aleatoric, epistemic = predictive_batch(post, xs)
    if which == "fig2a":
        score, threshold = aleatoric + epistemic, 2.0
    else:
        score, threshold = epistemic, 1.0
    return DemoTable(which, xs, mean, score, threshold, score <= threshold, data.x, data.y)
