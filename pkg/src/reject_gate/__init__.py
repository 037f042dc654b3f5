"""Aleatoric, Bayesian and epistemic reject-option predictors.

Closed-form Bayesian polynomial regression with known heteroscedastic
noise, exact discrete-grid classifiers, uncertainty decompositions for
squared, 0/1 and cross-entropy loss, and the regret-coverage experiment
harness.
"""

from .discrete import DiscreteModel, DiscretePosterior, posterior_update, predictive_pmf
from .errors import (
    ConfigError,
    DimensionMismatch,
    EmptyInput,
    EnumerationTooLarge,
    NotPositiveDefinite,
    SingularDesign,
    ZeroEvidence,
)
from .gaussian import (
    GaussianPosterior,
    GaussianPrior,
    MlEstimate,
    PredictiveNormal,
    design_matrix,
    fit_ml,
    fit_posterior,
    ml_predict,
    predictive,
)
from .numerics import RngStream, quadratic_form, sample_standard_normal, solve_spd
from .predictors import (
    REJECT,
    Decision,
    RejectConfig,
    aleatoric_oracle,
    bayesian_reject,
    epistemic_reject,
    plug_in_reject,
    regret_reject_loss,
    verify_theorem1,
)
from .synthetic import (
    Dataset,
    NoiseSpec,
    TrueProcess,
    example1_process,
    noise_variance,
    sample_dataset,
    sample_true_process,
)
from .uncertainty import (
    Loss,
    UncertaintyTriple,
    cross_entropy_uncertainty,
    exact_conditional_regret,
    mc_conditional_regret,
    squared_uncertainty,
    zero_one_uncertainty,
)

__version__ = "0.1.0"
