"""Gamma priors and the data-dependent reference conditional priors."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError
from .model import Partition


@dataclass(frozen=True)
class GammaHyper:
    """Independent ``Gamma(k_i, theta_i)`` priors, ``theta`` being a scale.

    The defaults are the hyperparameters used in the simulation study.
    """

    k0: float = 2.0
    k1: float = 4.0
    k2: float = 3.0
    t0: float = 3.0
    t1: float = 3.0
    t2: float = 2.0

    def __post_init__(self):
        for name in ("k0", "k1", "k2", "t0", "t1", "t2"):
            value = getattr(self, name)
            if not value > 0:
                raise DomainError(f"{name} must be positive, got {value!r}")

    @property
    def shapes(self) -> tuple[float, float, float]:
        return (self.k0, self.k1, self.k2)

    @property
    def scales(self) -> tuple[float, float, float]:
        return (self.t0, self.t1, self.t2)


@dataclass(frozen=True)
class ReferencePrior:
    """Marker for the reference conditional priors (no hyperparameters)."""


PriorSpec = Union[GammaHyper, ReferencePrior]


def log_gamma_pdf(x: float, k: float, theta: float) -> float:
    """Log density of ``Gamma(k, theta)`` at ``x > 0``."""
    if not x > 0:
        raise DomainError(f"gamma density needs x > 0, got {x!r}")
    return (k - 1) * math.log(x) - x / theta - math.lgamma(k) - k * math.log(theta)


def ref_information(which: int, p, pt: Partition) -> float:
    """Observed information ``-d^2 L / d alpha_which^2`` at ``p``."""
    a0, a1, a2 = p
    n0, n1, n2 = pt.n0, pt.n1, pt.n2
    if which == 0:
        return n0 / a0**2 + n2 / (a0 + a1) ** 2 + n1 / (a0 + a2) ** 2
    if which == 1:
        return n1 / a1**2 + n2 / (a0 + a1) ** 2
    if which == 2:
        return n2 / a2**2 + n1 / (a0 + a2) ** 2
    raise ValueError(f"which must be 0, 1 or 2, got {which!r}")


def log_ref_conditional(which: int, p, pt: Partition) -> float:
    """Unnormalized log reference prior of ``alpha_which`` given the others.

    This is half the log of the observed information on that coordinate.
    """
    if min(p) <= 0:
        raise DomainError("all shape parameters must be positive")
    info = ref_information(which, p, pt)
    if info <= 0:
        raise DomainError(
            f"reference prior for alpha{which} is undefined: no observations inform it"
        )
    return 0.5 * math.log(info)
