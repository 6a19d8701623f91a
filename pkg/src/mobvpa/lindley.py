"""Lindley approximation to the posterior means under gamma priors.

For ``g = alpha_m`` the second-order expansion around the MLE reduces to::

    alpha_m + b_m + 1/2 * sum_k T_k * sigma[k, m]

with ``T_k = sum_ij L_ijk * sigma[i, j]`` (``T = (A, B, C)``),
``b = sigma @ rho`` and ``sigma`` the inverse of the observed information
``-L_ij``. Derivatives of ``g`` beyond the first vanish, so those terms
are omitted.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .em import EmConfig, em_fit, numeric_mle
from .errors import DegenerateDataError
from .model import Partition, ShapeParams, loglik
from .priors import GammaHyper


@dataclass(frozen=True)
class LindleyWorkspace:
    """Every quantity the Lindley correction needs, evaluated at the MLE."""

    mle: ShapeParams
    Lij: np.ndarray  # Hessian of the log-likelihood
    sigma: np.ndarray  # inverse of -Lij
    Lijk: np.ndarray  # third-derivative tensor
    A: float
    B: float
    C: float
    rho: np.ndarray  # gradient of the log prior
    b: np.ndarray  # sigma @ rho


def hessian(pt: Partition, p) -> np.ndarray:
    """Analytic second derivatives of the log-likelihood."""
    a0, a1, a2 = p
    n0, n1, n2 = pt.n0, pt.n1, pt.n2
    q01 = n2 / (a0 + a1) ** 2
    q02 = n1 / (a0 + a2) ** 2
    return -np.array([
        [n0 / a0**2 + q01 + q02, q01, q02],
        [q01, n1 / a1**2 + q01, 0.0],
        [q02, 0.0, n2 / a2**2 + q02],
    ])


def third_derivatives(pt: Partition, p) -> np.ndarray:
    """Analytic third derivatives of the log-likelihood as a 3x3x3 tensor."""
    a0, a1, a2 = p
    n0, n1, n2 = pt.n0, pt.n1, pt.n2
    c01 = 2 * n2 / (a0 + a1) ** 3
    c02 = 2 * n1 / (a0 + a2) ** 3
    t = np.zeros((3, 3, 3))
    t[0, 0, 0] = 2 * n0 / a0**3 + c01 + c02
    t[1, 1, 1] = 2 * n1 / a1**3 + c01
    t[2, 2, 2] = 2 * n2 / a2**3 + c02
    for idx in ((0, 0, 1), (0, 1, 0), (1, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)):
        t[idx] = c01
    for idx in ((0, 0, 2), (0, 2, 0), (2, 0, 0), (0, 2, 2), (2, 0, 2), (2, 2, 0)):
        t[idx] = c02
    return t


def build_workspace(pt: Partition, mle, h: GammaHyper) -> LindleyWorkspace:
    mle = ShapeParams(*mle).validated()
    Lij = hessian(pt, mle)
    info = -Lij
    if np.linalg.cond(info) > 1e12:
        raise DegenerateDataError("observed information is singular: a parameter is not identified")
    sigma = np.linalg.inv(info)
    Lijk = third_derivatives(pt, mle)
    A, B, C = np.einsum("ijk,ij->k", Lijk, sigma)
    rho = np.array([(k - 1) / a - 1 / t for a, k, t in zip(mle, h.shapes, h.scales)])
    return LindleyWorkspace(
        mle=mle,
        Lij=Lij,
        sigma=sigma,
        Lijk=Lijk,
        A=float(A),
        B=float(B),
        C=float(C),
        rho=rho,
        b=sigma @ rho,
    )


def lindley_estimates(w: LindleyWorkspace) -> ShapeParams:
    curvature = 0.5 * (np.array([w.A, w.B, w.C]) @ w.sigma)
    est = np.asarray(w.mle) + w.b + curvature
    return ShapeParams(*map(float, est))


def lindley_fit(
    pt: Partition,
    h: GammaHyper = GammaHyper(),
    *,
    seed_method: str = "em",
    em_config: EmConfig = EmConfig(),
) -> tuple[ShapeParams, LindleyWorkspace]:
    """Seed with an MLE and return ``(estimates, workspace)``.

    ``seed_method`` is ``"em"`` (default) or ``"numeric"`` for direct
    maximization of the log-likelihood.
    """
    if seed_method == "em":
        mle = em_fit(pt, em_config)
    elif seed_method == "numeric":
        mle = numeric_mle(lambda p: loglik(p, pt.resolve(p)), em_config.init)
    else:
        raise ValueError(f"unknown seed_method {seed_method!r}")
    w = build_workspace(pt.resolve(mle), mle, h)
    return lindley_estimates(w), w
