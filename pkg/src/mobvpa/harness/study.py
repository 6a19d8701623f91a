"""Replicated simulation studies and their tabular/JSON reports."""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

import numpy as np

from ..em import EmConfig, em_fit
from ..errors import DomainError, MobvpaError
from ..lindley import lindley_fit
from ..model import ShapeParams, partition, sample
from ..priors import GammaHyper, ReferencePrior
from ..slice_gibbs import GibbsConfig, run_chain
from ..summary import credible_intervals, posterior_mean, posterior_variance, replication_stats

METHODS = ("gibbs-gamma", "gibbs-reference", "lindley", "em")

_TITLES = {
    "gibbs-gamma": ("Slice-cum-Gibbs", "Gamma Prior"),
    "gibbs-reference": ("Slice-cum-Gibbs", "Reference Prior"),
    "lindley": ("Lindley", "Gamma Prior"),
    "em": ("EM", "Maximum Likelihood"),
}


@dataclass(frozen=True)
class StudyConfig:
    truth: ShapeParams = ShapeParams(0.1, 0.2, 0.4)
    n: int = 1000
    replications: int = 50
    methods: tuple[str, ...] = ("gibbs-gamma",)
    hyper: GammaHyper = field(default_factory=GammaHyper)
    gibbs: GibbsConfig = field(default_factory=GibbsConfig)
    gamma_level: float = 0.05
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "truth", ShapeParams(*self.truth).validated())
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.n < 1 or self.replications < 1:
            raise DomainError("n and replications must be at least 1")
        if not self.methods:
            raise DomainError("at least one method is required")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise DomainError(f"unknown method(s): {', '.join(sorted(unknown))}")
        if not 0 < self.gamma_level < 1:
            raise DomainError("gamma_level must lie in (0, 1)")


@dataclass
class MethodResult:
    """Outcome of one method on one replicated dataset."""

    estimate: tuple | None = None
    intervals: list | None = None
    posterior_variance: list | None = None
    error: str | None = None


@dataclass
class MethodSummary:
    method: str
    estimates: list
    bias: list
    mse: list
    intervals: list | None
    coverage: list | None
    posterior_variance: list | None
    excluded: int
    failures: list = field(default_factory=list)


@dataclass
class StudyReport:
    config: StudyConfig
    rows: list[MethodSummary]

    def to_dict(self) -> dict:
        cfg = self.config
        return {
            "config": {
                "truth": list(cfg.truth),
                "n": cfg.n,
                "replications": cfg.replications,
                "methods": list(cfg.methods),
                "hyper": [*cfg.hyper.shapes, *cfg.hyper.scales],
                "burn_in": cfg.gibbs.burn_in,
                "draws": cfg.gibbs.draws,
                "init": list(cfg.gibbs.init),
                "level": cfg.gamma_level,
                "seed": cfg.seed,
            },
            "results": [
                {
                    "method": r.method,
                    "estimates": r.estimates,
                    "mse": r.mse,
                    "intervals": r.intervals,
                    "excluded": r.excluded,
                    "seed": cfg.seed,
                    "bias": r.bias,
                    "coverage": r.coverage,
                    "posterior_variance": r.posterior_variance,
                    "failures": [{"replication": i, "error": e} for i, e in r.failures],
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(_nan_to_none(self.to_dict()), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        return format_report(self)


def _nan_to_none(obj):
    if isinstance(obj, float):
        return None if math.isnan(obj) else obj
    if isinstance(obj, dict):
        return {k: _nan_to_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_nan_to_none(v) for v in obj]
    return obj


def replication_seeds(seed: int, rep: int) -> tuple[int, int, int]:
    """Independent integer seeds for (data, gamma chain, reference chain)."""
    children = np.random.SeedSequence([seed, rep]).spawn(3)
    return tuple(int(c.generate_state(1, dtype=np.uint64)[0]) for c in children)


def _gibbs(pt, prior, cfg: StudyConfig, seed: int) -> MethodResult:
    gcfg = GibbsConfig(
        burn_in=cfg.gibbs.burn_in,
        draws=cfg.gibbs.draws,
        init=cfg.gibbs.init,
        seed=seed,
        slice=cfg.gibbs.slice,
    )
    chain = run_chain(pt, prior, gcfg)
    return MethodResult(
        estimate=tuple(posterior_mean(chain)),
        intervals=[(ci.lo, ci.hi) for ci in credible_intervals(chain, cfg.gamma_level)],
        posterior_variance=[float(v) for v in posterior_variance(chain)],
    )


def run_replication(cfg: StudyConfig, rep: int) -> dict[str, MethodResult]:
    """Simulate one dataset and apply every requested method to it."""
    data_seed, gamma_seed, ref_seed = replication_seeds(cfg.seed, rep)
    pt = partition(sample(cfg.truth, cfg.n, data_seed))
    out = {}
    for method in cfg.methods:
        try:
            if method == "gibbs-gamma":
                out[method] = _gibbs(pt, cfg.hyper, cfg, gamma_seed)
            elif method == "gibbs-reference":
                out[method] = _gibbs(pt, ReferencePrior(), cfg, ref_seed)
            elif method == "lindley":
                est, _ = lindley_fit(pt, cfg.hyper)
                out[method] = MethodResult(estimate=tuple(est))
            elif method == "em":
                out[method] = MethodResult(estimate=tuple(em_fit(pt, EmConfig())))
        except (MobvpaError, ArithmeticError, np.linalg.LinAlgError) as exc:
            out[method] = MethodResult(error=f"{type(exc).__name__}: {exc}")
    return out


def _summarize(method: str, results: list[MethodResult], truth) -> MethodSummary:
    ok = [r for r in results if r.error is None]
    failures = [(i, r.error) for i, r in enumerate(results) if r.error is not None]
    nan3 = [math.nan] * 3
    if not ok:
        return MethodSummary(method, nan3, nan3, nan3, None, None, None, len(failures), failures)
    est = np.array([r.estimate for r in ok])
    bias, mse = replication_stats(est, truth)
    intervals = coverage = post_var = None
    if ok[0].intervals is not None:
        iv = np.array([r.intervals for r in ok])  # (reps, 3, 2)
        intervals = iv.mean(axis=0).tolist()
        t = np.asarray(truth)
        coverage = ((iv[:, :, 0] <= t) & (t <= iv[:, :, 1])).mean(axis=0).tolist()
        post_var = np.mean([r.posterior_variance for r in ok], axis=0).tolist()
    return MethodSummary(
        method=method,
        estimates=est.mean(axis=0).tolist(),
        bias=bias.tolist(),
        mse=mse.tolist(),
        intervals=intervals,
        coverage=coverage,
        posterior_variance=post_var,
        excluded=len(failures),
        failures=failures,
    )


def run_study(cfg: StudyConfig) -> StudyReport:
    """Run every replication and summarize per method.

    Replications run in a process pool when ``cfg.workers > 1``; results
    are gathered in replication order so the report does not depend on
    scheduling.
    """
    job = partial(run_replication, cfg)
    reps = range(cfg.replications)
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            per_rep = list(pool.map(job, reps))
    else:
        per_rep = [job(r) for r in reps]
    rows = [_summarize(m, [r[m] for r in per_rep], cfg.truth) for m in cfg.methods]
    return StudyReport(cfg, rows)


def _fmt_row(label: str, cells) -> str:
    return f"{label:<26}" + "".join(f"{c:>22}" for c in cells)


def _num(x) -> str:
    return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.4f}"


def format_report(report: StudyReport) -> str:
    cfg = report.config
    lines = []
    for row in report.rows:
        title, prior = _TITLES[row.method]
        lines.append(title)
        lines.append(prior)
        lines.append(f"n = {cfg.n}")
        lines.append(_fmt_row(
            "Original Parameter Sets",
            [f"alpha{i} = {a:g}" for i, a in enumerate(cfg.truth)],
        ))
        if row.method.startswith("gibbs"):
            lines.append(_fmt_row("Starting Value", [_num(a) for a in cfg.gibbs.init]))
        lines.append(_fmt_row("Bayes Estimates" if row.method != "em" else "Estimates",
                              [_num(v) for v in row.estimates]))
        lines.append(_fmt_row("Mean Square Error", [_num(v) for v in row.mse]))
        if row.intervals is not None:
            lines.append(_fmt_row(
                "Credible Intervals",
                [f"[{_num(lo)}, {_num(hi)}]" for lo, hi in row.intervals],
            ))
            lines.append(_fmt_row("Coverage", [_num(c) for c in row.coverage]))
        lines.append(f"Replications used: {cfg.replications - row.excluded} "
                     f"(excluded {row.excluded}), seed {cfg.seed}")
        lines.append("")
    return "\n".join(lines)
