"""Step-out slice sampling of each full conditional inside a Gibbs sweep."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, SliceError
from .model import Partition, ShapeParams
from .posterior import log_conditional
from .priors import PriorSpec

#: Starting point of the n = 1000 gamma-prior runs in the simulation study.
DEFAULT_INIT = ShapeParams(0.9295, 0.9741, 0.0754)


@dataclass(frozen=True)
class SliceConfig:
    width: float = 1.0
    max_stepout: int = 64
    max_shrink: int = 1000

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("width must be positive")
        if self.max_stepout < 1 or self.max_shrink < 1:
            raise DomainError("step-out and shrink limits must be at least 1")


@dataclass(frozen=True)
class GibbsConfig:
    burn_in: int = 500
    draws: int = 2000
    init: ShapeParams = DEFAULT_INIT
    seed: int | None = 0
    slice: SliceConfig = field(default_factory=SliceConfig)

    def __post_init__(self):
        if self.draws < 1:
            raise DomainError("draws must be at least 1")
        if self.burn_in < 0:
            raise DomainError("burn_in must be non-negative")
        object.__setattr__(self, "init", ShapeParams(*self.init).validated())


@dataclass(frozen=True)
class PosteriorChain:
    """Post-burn-in draws as a ``(draws, 3)`` array plus the run settings."""

    samples: np.ndarray
    config: GibbsConfig

    def __len__(self):
        return self.samples.shape[0]

    def params(self) -> list[ShapeParams]:
        return [ShapeParams(*map(float, row)) for row in self.samples]


def slice_step(
    logf: Callable[[float], float],
    x0: float,
    cfg: SliceConfig,
    rng: np.random.Generator,
) -> float:
    """One step-out slice sampling update of a density on ``(0, inf)``.

    ``logf`` is only evaluated at positive points. The bracket is grown in
    steps of ``cfg.width`` (at most ``cfg.max_stepout`` in total, split at
    random between the two ends), clipped at zero, then shrunk toward
    ``x0`` until a point inside the slice is found.
    """
    fx0 = logf(x0)
    if not math.isfinite(fx0):
        raise DomainError(f"log density is not finite at the current point {x0!r}")
    level = fx0 - rng.standard_exponential()
    w = cfg.width

    left = x0 - w * rng.random()
    right = left + w
    j = math.floor(cfg.max_stepout * rng.random())
    k = cfg.max_stepout - 1 - j
    while j > 0 and left > 0 and logf(left) > level:
        left -= w
        j -= 1
    while k > 0 and logf(right) > level:
        right += w
        k -= 1
    left = max(left, 0.0)

    for _ in range(cfg.max_shrink):
        x1 = left + rng.random() * (right - left)
        if x1 > 0 and logf(x1) >= level:
            return x1
        if x1 < x0:
            left = x1
        else:
            right = x1
    raise SliceError(f"no point accepted after {cfg.max_shrink} shrinkage steps from x0={x0!r}")


def run_chain(pt: Partition, prior: PriorSpec, cfg: GibbsConfig = GibbsConfig()) -> PosteriorChain:
    """Gibbs sampling over ``(alpha0, alpha1, alpha2)`` in that order.

    Each coordinate is refreshed by :func:`slice_step` on its full
    conditional. The first ``cfg.burn_in`` sweeps are dropped and the next
    ``cfg.draws`` are kept. ``pt`` may also be a fractional partition.
    """
    rng = np.random.default_rng(cfg.seed)
    state = list(cfg.init)
    out = np.empty((cfg.draws, 3))
    total = cfg.burn_in + cfg.draws
    for sweep in range(total):
        for which in range(3):

            def logf(x, which=which):
                state[which] = x
                return log_conditional(which, state, pt, prior)

            x0 = state[which]
            try:
                new = slice_step(logf, x0, cfg.slice, rng)
            except SliceError as exc:
                raise SliceError(f"sweep {sweep}, alpha{which}: {exc}") from exc
            state[which] = new
        if sweep >= cfg.burn_in:
            out[sweep - cfg.burn_in] = state
    return PosteriorChain(out, cfg)
