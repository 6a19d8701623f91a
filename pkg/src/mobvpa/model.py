"""Three-parameter singular Marshall-Olkin bivariate Pareto model.

The pair ``(X1, X2)`` is built from three independent Pareto type II
variables ``U0, U1, U2`` with unit scale, zero location and shapes
``alpha0, alpha1, alpha2``::

    X1 = min(U0, U1)
    X2 = min(U0, U2)

The common shock ``U0`` puts positive mass on the diagonal ``x1 == x2``.
The likelihood factors over the three cells ``x1 == x2``, ``x1 < x2`` and
``x1 > x2``, so everything downstream works on a :class:`Partition` of
counts and log-sums instead of the raw pairs.

The diagonal cell uses the exponent ``-(alpha0 + alpha1 + alpha2 + 1)``
that matches the singular density, in both :func:`pdf` and
:func:`loglik`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DomainError


class ShapeParams(NamedTuple):
    """Shape parameters ``(alpha0, alpha1, alpha2)``; all must be positive."""

    alpha0: float
    alpha1: float
    alpha2: float

    @property
    def total(self) -> float:
        return self.alpha0 + self.alpha1 + self.alpha2

    def validated(self) -> "ShapeParams":
        """Return ``self`` after checking every component is finite and > 0."""
        for name, value in zip(self._fields, self):
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")
        return self

    def replace_at(self, index: int, value: float) -> "ShapeParams":
        vals = list(self)
        vals[index] = value
        return ShapeParams(*vals)


@dataclass(frozen=True)
class LocationScale:
    """Location and scale of the two margins, used to standardize raw data."""

    mu1: float = 0.0
    mu2: float = 0.0
    sigma1: float = 1.0
    sigma2: float = 1.0

    def __post_init__(self):
        if not (self.sigma1 > 0 and self.sigma2 > 0):
            raise DomainError("scale parameters must be positive")


@dataclass(frozen=True)
class BivariateSample:
    """Observed pairs as an ``(n, 2)`` float array."""

    pairs: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pairs, dtype=float).reshape(-1, 2)
        object.__setattr__(self, "pairs", arr)

    @property
    def n(self) -> int:
        return self.pairs.shape[0]

    @property
    def x1(self) -> np.ndarray:
        return self.pairs[:, 0]

    @property
    def x2(self) -> np.ndarray:
        return self.pairs[:, 1]

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class Partition:
    """Sufficient statistics of a sample.

    Counts ``n0, n1, n2`` of the cells ``x1 == x2``, ``x1 < x2`` and
    ``x1 > x2``, plus the log-sums of ``log(1 + x)``:

    - ``s0``: first coordinate over the diagonal cell
    - ``s1a``, ``s1b``: first and second coordinate over ``x1 < x2``
    - ``s2a``, ``s2b``: first and second coordinate over ``x1 > x2``

    Counts may be non-integral when they come from fractional smoothing.
    """

    n0: float = 0
    n1: float = 0
    n2: float = 0
    s0: float = 0.0
    s1a: float = 0.0
    s1b: float = 0.0
    s2a: float = 0.0
    s2b: float = 0.0

    @property
    def n(self) -> float:
        return self.n0 + self.n1 + self.n2

    @property
    def exposures(self) -> tuple[float, float, float]:
        """Total log-scale time each latent variable was at risk."""
        return (
            self.s0 + self.s1b + self.s2a,
            self.s0 + self.s1a + self.s2a,
            self.s0 + self.s1b + self.s2b,
        )

    def resolve(self, p) -> "Partition":
        # Counts do not depend on the parameters here; see FractionalPartition.
        return self


def _check_point(x1: float, x2: float) -> None:
    if x1 < 0 or x2 < 0:
        raise DomainError(f"coordinates must be non-negative, got ({x1}, {x2})")


def log_pdf(p: Sequence[float], x1: float, x2: float) -> float:
    """Log of :func:`pdf`."""
    _check_point(x1, x2)
    a0, a1, a2 = ShapeParams(*p).validated()
    l1, l2 = math.log1p(x1), math.log1p(x2)
    if x1 < x2:
        return math.log(a1 * (a0 + a2)) - (a1 + 1) * l1 - (a0 + a2 + 1) * l2
    if x1 > x2:
        return math.log(a2 * (a0 + a1)) - (a0 + a1 + 1) * l1 - (a2 + 1) * l2
    return math.log(a0) - (a0 + a1 + a2 + 1) * l1


def pdf(p: Sequence[float], x1: float, x2: float) -> float:
    """Joint density at ``(x1, x2)``.

    Off the diagonal this is the usual two-dimensional density; on the
    diagonal ``x1 == x2`` it is the one-dimensional density of the
    singular part.
    """
    return math.exp(log_pdf(p, x1, x2))


def survival(p: Sequence[float], x1: float, x2: float) -> float:
    """Joint survival ``P(X1 > x1, X2 > x2)``."""
    _check_point(x1, x2)
    a0, a1, a2 = ShapeParams(*p).validated()
    return (1 + max(x1, x2)) ** -a0 * (1 + x1) ** -a1 * (1 + x2) ** -a2


def pareto2_rvs(alpha: float, size, rng: np.random.Generator) -> np.ndarray:
    """Pareto II(0, 1, alpha) draws by inverting ``(1 + x)**-alpha``."""
    v = rng.random(size)
    # (1 - v)**(-1/alpha) - 1, written to keep precision for small draws
    return np.expm1(-np.log1p(-v) / alpha)


def sample(p: Sequence[float], n: int, seed=None) -> BivariateSample:
    """Draw ``n`` pairs; deterministic for a given ``seed``.

    ``seed`` may be anything :func:`numpy.random.default_rng` accepts,
    including an existing generator.
    """
    if n < 1:
        raise DomainError("n must be at least 1")
    a0, a1, a2 = ShapeParams(*p).validated()
    rng = np.random.default_rng(seed)
    u0 = pareto2_rvs(a0, n, rng)
    u1 = pareto2_rvs(a1, n, rng)
    u2 = pareto2_rvs(a2, n, rng)
    return BivariateSample(np.column_stack([np.minimum(u0, u1), np.minimum(u0, u2)]))


def partition(data: BivariateSample | np.ndarray) -> Partition:
    """Split a standardized sample into cells by exact comparison."""
    pairs = data.pairs if isinstance(data, BivariateSample) else BivariateSample(data).pairs
    if pairs.size and pairs.min() < 0:
        raise DomainError("partition requires standardized (non-negative) data")
    x1, x2 = pairs[:, 0], pairs[:, 1]
    y1, y2 = np.log1p(x1), np.log1p(x2)
    diag = x1 == x2
    lower = x1 < x2
    upper = x1 > x2
    return Partition(
        n0=int(diag.sum()),
        n1=int(lower.sum()),
        n2=int(upper.sum()),
        s0=float(y1[diag].sum()),
        s1a=float(y1[lower].sum()),
        s1b=float(y2[lower].sum()),
        s2a=float(y1[upper].sum()),
        s2b=float(y2[upper].sum()),
    )


def _xlogy(n: float, x: float) -> float:
    if n == 0:
        return 0.0
    if x <= 0:
        return -math.inf
    return n * math.log(x)


def loglik(p: Sequence[float], pt: Partition) -> float:
    """Log-likelihood from the sufficient statistics.

    Returns ``-inf`` when a non-empty cell is paired with a non-positive
    parameter.
    """
    a0, a1, a2 = p
    if a0 < 0 or a1 < 0 or a2 < 0:
        return -math.inf
    n0, n1, n2 = pt.n0, pt.n1, pt.n2
    return (
        _xlogy(n0, a0)
        + _xlogy(n1, a1)
        + _xlogy(n2, a2)
        + _xlogy(n1, a0 + a2)
        + _xlogy(n2, a0 + a1)
        - (a1 + 1) * pt.s1a
        - (a0 + a2 + 1) * pt.s1b
        - (a0 + a1 + 1) * pt.s2a
        - (a2 + 1) * pt.s2b
        - (a0 + a1 + a2 + 1) * pt.s0
    )


def loglik_grad(p: Sequence[float], pt: Partition) -> np.ndarray:
    """Gradient of :func:`loglik` with respect to ``(alpha0, alpha1, alpha2)``."""
    a0, a1, a2 = ShapeParams(*p).validated()
    n0, n1, n2 = pt.n0, pt.n1, pt.n2
    d0, d1, d2 = pt.exposures
    return np.array([
        n0 / a0 + n1 / (a0 + a2) + n2 / (a0 + a1) - d0,
        n1 / a1 + n2 / (a0 + a1) - d1,
        n2 / a2 + n1 / (a0 + a2) - d2,
    ])
