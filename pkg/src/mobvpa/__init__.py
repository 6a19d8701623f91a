"""Bayesian estimation for the three-parameter singular Marshall-Olkin
bivariate Pareto distribution."""
from .em import EmConfig, em_fit, em_iterates, numeric_mle
from .errors import (
    ConvergenceError,
    DataFormatError,
    DegenerateDataError,
    DomainError,
    MobvpaError,
    SliceError,
)
from .lindley import LindleyWorkspace, build_workspace, lindley_estimates, lindley_fit
from .model import (
    BivariateSample,
    LocationScale,
    Partition,
    ShapeParams,
    log_pdf,
    loglik,
    loglik_grad,
    partition,
    pdf,
    sample,
    survival,
)
from .posterior import log_conditional, log_full_posterior_gamma
from .priors import GammaHyper, PriorSpec, ReferencePrior, log_gamma_pdf, log_ref_conditional
from .slice_gibbs import GibbsConfig, PosteriorChain, SliceConfig, run_chain, slice_step
from .summary import (
    CredibleInterval,
    chen_shao_interval,
    credible_intervals,
    posterior_mean,
    posterior_variance,
    replication_stats,
)

__version__ = "0.1.0"
