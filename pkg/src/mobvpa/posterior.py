"""Unnormalized log posteriors: the joint one under gamma priors and the
univariate full conditionals used by the Gibbs sweep."""
from __future__ import annotations

import math

from .errors import DomainError
from .model import Partition, ShapeParams, loglik
from .priors import GammaHyper, PriorSpec, ReferencePrior, log_ref_conditional


def log_full_posterior_gamma(p, pt: Partition, h: GammaHyper) -> float:
    a = ShapeParams(*p).validated()
    prior = sum(
        (k - 1) * math.log(x) - x / t for x, k, t in zip(a, h.shapes, h.scales)
    )
    return loglik(a, pt.resolve(a)) + prior


def log_conditional(which: int, p, pt: Partition, prior: PriorSpec) -> float:
    """Log full conditional of ``alpha_which`` up to an additive constant.

    The data part is the whole log-likelihood; terms free of
    ``alpha_which`` only shift the result by a constant. ``pt`` may be any
    object with a ``resolve(p)`` method returning a :class:`Partition`,
    which is how fractional counts enter.
    """
    x = p[which]
    if not x > 0:
        raise DomainError(f"alpha{which} must be positive, got {x!r}")
    counts = pt.resolve(p)
    data = loglik(p, counts)
    if isinstance(prior, GammaHyper):
        k = prior.shapes[which]
        t = prior.scales[which]
        return data + (k - 1) * math.log(x) - x / t
    if isinstance(prior, ReferencePrior):
        return data + log_ref_conditional(which, p, counts)
    raise TypeError(f"unsupported prior {prior!r}")
