"""Maximum likelihood for the shape parameters.

On the log scale ``y = log(1 + x)`` the latent Pareto variables become
independent exponentials with rates ``alpha0, alpha1, alpha2``, and each
observed pair is a pair of minima of those exponentials. The only missing
information is which latent variable produced the larger coordinate off
the diagonal. EM splits that event between the two candidates in
proportion to their rates, and the M-step is events over exposure for
each rate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from scipy import optimize

from .errors import ConvergenceError, DegenerateDataError, DomainError
from .model import Partition, ShapeParams


@dataclass(frozen=True)
class EmConfig:
    max_iters: int = 500
    tol: float = 1e-10
    init: ShapeParams = field(default_factory=lambda: ShapeParams(1.0, 1.0, 1.0))

    def __post_init__(self):
        if self.max_iters < 1:
            raise DomainError("max_iters must be at least 1")
        if not self.tol > 0:
            raise DomainError("tol must be positive")
        ShapeParams(*self.init).validated()


def _check_data(pt: Partition) -> tuple[float, float, float]:
    if pt.n < 1:
        raise DegenerateDataError("EM needs at least one observation")
    d = pt.exposures
    for i, di in enumerate(d):
        if not di > 0:
            raise DegenerateDataError(f"zero exposure for alpha{i}; the data are degenerate")
    return d


def em_step(p, pt: Partition) -> ShapeParams:
    """One EM update from ``p``."""
    a0, a1, a2 = p
    n0, n1, n2 = pt.n0, pt.n1, pt.n2
    d0, d1, d2 = pt.exposures
    # Expected share of the off-diagonal maximum owed to the common shock.
    w1 = a0 / (a0 + a2) if n1 else 0.0
    w2 = a0 / (a0 + a1) if n2 else 0.0
    return ShapeParams(
        (n0 + n1 * w1 + n2 * w2) / d0,
        (n1 + n2 * (1 - w2)) / d1,
        (n2 + n1 * (1 - w1)) / d2,
    )


def em_iterates(pt: Partition, cfg: EmConfig = EmConfig()) -> Iterator[ShapeParams]:
    """Yield the starting point and then every EM iterate.

    Stops after the first iterate whose maximum relative change is below
    ``cfg.tol``, or after ``cfg.max_iters`` updates.
    """
    _check_data(pt)
    p = ShapeParams(*cfg.init).validated()
    yield p
    for _ in range(cfg.max_iters):
        new = em_step(p, pt)
        if min(new) <= 0:
            yield new
            return
        change = max(abs(b - a) / b for a, b in zip(p, new))
        p = new
        yield p
        if change < cfg.tol:
            return


def em_fit(pt: Partition, cfg: EmConfig = EmConfig()) -> ShapeParams:
    """EM estimate of ``(alpha0, alpha1, alpha2)``.

    Raises
    ------
    DegenerateDataError
        If a parameter has no event information (its MLE is on the
        boundary) or an exposure is zero.
    ConvergenceError
        If ``cfg.max_iters`` updates do not meet ``cfg.tol``; the last
        iterate is attached.
    """
    _check_data(pt)
    if pt.n1 == 0 and pt.n2 == 0:
        first = em_step(cfg.init, pt)
        raise DegenerateDataError(
            "no off-diagonal observations: alpha1 and alpha2 have their MLE on the "
            f"boundary (alpha0 = {first.alpha0:.6g})"
        )
    steps = 0
    prev = None
    for p in em_iterates(pt, cfg):
        if min(p) <= 0:
            raise DegenerateDataError(f"EM reached the boundary at {tuple(p)}")
        if prev is not None:
            steps += 1
            if max(abs(b - a) / b for a, b in zip(prev, p)) < cfg.tol:
                return p
        prev = p
    raise ConvergenceError(f"EM did not converge in {steps} iterations", last=prev)


def numeric_mle(
    objective: Callable[[ShapeParams], float],
    init=(1.0, 1.0, 1.0),
    *,
    xatol: float = 1e-9,
    max_evals: int = 20000,
    boundary_tol: float = 1e-8,
) -> ShapeParams:
    """Maximize an arbitrary log-likelihood over positive triples.

    Nelder-Mead on the log parameters. Used as an independent check on
    EM and for the fractional-count likelihood, which has no EM form.
    A component smaller than ``boundary_tol`` times the largest one is
    reported as a boundary maximum.
    """

    def neg(z):
        value = objective(ShapeParams(*np.exp(z)))
        return -value if math.isfinite(value) else math.inf

    z0 = np.log(np.asarray(init, dtype=float))
    res = optimize.minimize(
        neg,
        z0,
        method="Nelder-Mead",
        options={"xatol": xatol, "fatol": 1e-9, "maxfev": max_evals, "maxiter": max_evals},
    )
    # One restart from the optimum shakes off a collapsed simplex.
    res = optimize.minimize(
        neg,
        res.x,
        method="Nelder-Mead",
        options={"xatol": xatol, "fatol": 1e-9, "maxfev": max_evals, "maxiter": max_evals},
    )
    est = ShapeParams(*map(float, np.exp(res.x)))
    if not res.success:
        raise ConvergenceError(f"numerical MLE failed: {res.message}", last=est)
    if min(est) < boundary_tol * max(est):
        raise DegenerateDataError(f"likelihood is maximized on the boundary near {tuple(est)}")
    return est
