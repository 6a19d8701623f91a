"""Point estimates, Chen-Shao intervals and replication summaries."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .model import ShapeParams


@dataclass(frozen=True)
class CredibleInterval:
    lo: float
    hi: float
    gamma: float
    j_star: int  # 1-based index of the lower order statistic


def _samples(chain) -> np.ndarray:
    arr = getattr(chain, "samples", chain)
    arr = np.asarray(arr, dtype=float).reshape(-1, 3)
    if arr.shape[0] == 0:
        raise DomainError("chain is empty")
    return arr


def posterior_mean(chain) -> ShapeParams:
    """Coordinate-wise mean of the draws (a chain or a ``(M, 3)`` array)."""
    return ShapeParams(*map(float, _samples(chain).mean(axis=0)))


def posterior_variance(chain) -> np.ndarray:
    arr = _samples(chain)
    return arr.var(axis=0, ddof=1) if arr.shape[0] > 1 else np.zeros(3)


def _excluded_count(m: int, gamma: float) -> int:
    # M * gamma is meant as an integer; absorb representation error before flooring
    return math.floor(m * gamma + 1e-9)


def chen_shao_interval(draws: Sequence[float], gamma: float = 0.05) -> CredibleInterval:
    """Shortest interval between order statistics covering ``M - floor(M*gamma)`` gaps.

    The candidates are ``(x_(j), x_(j + M - g))`` for ``j = 1..g`` with
    ``g = floor(M * gamma)``; the narrowest wins and ties go to the
    smallest ``j``.
    """
    if not 0 < gamma < 1:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma!r}")
    x = np.sort(np.asarray(draws, dtype=float).ravel())
    m = x.size
    if m < 2:
        raise DomainError("need at least two draws")
    g = _excluded_count(m, gamma)
    if g < 1:
        raise DomainError(f"M * gamma = {m * gamma:g} < 1: no candidate intervals")
    widths = x[m - g:] - x[:g]
    j = int(np.argmin(widths))
    return CredibleInterval(float(x[j]), float(x[j + m - g]), gamma, j + 1)


def credible_intervals(chain, gamma: float = 0.05) -> list[CredibleInterval]:
    arr = _samples(chain)
    return [chen_shao_interval(arr[:, i], gamma) for i in range(3)]


def replication_stats(estimates, truth) -> tuple[np.ndarray, np.ndarray]:
    """Per-coordinate ``(bias, mse)`` of replicated estimates against ``truth``."""
    est = np.asarray(estimates, dtype=float).reshape(-1, 3)
    if est.shape[0] == 0:
        raise DomainError("need at least one replication")
    err = est - np.asarray(truth, dtype=float)
    return err.mean(axis=0), (err**2).mean(axis=0)
