"""Command-line interface.

Every long option can also be given in a ``--config`` file as a
``key = value`` line (``burn-in = 500``, ``prior = reference`` ...).
Options on the command line override the file.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from ..em import EmConfig, em_fit, numeric_mle
from ..errors import (
    ConvergenceError,
    DataFormatError,
    DegenerateDataError,
    DomainError,
    SliceError,
)
from ..lindley import lindley_fit
from ..model import LocationScale, ShapeParams, partition, sample
from ..priors import GammaHyper, ReferencePrior
from ..slice_gibbs import DEFAULT_INIT, GibbsConfig, SliceConfig, run_chain
from ..summary import credible_intervals, posterior_mean, posterior_variance
from .data import FractionalPartition, ingest_csv, loglik_fractional, write_csv
from .study import METHODS, StudyConfig, run_study

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(n):
    def parse(text):
        try:
            vals = [float(v) for v in str(text).split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
        return vals

    return parse


def _prior(text):
    if text not in ("gamma", "reference"):
        raise argparse.ArgumentTypeError(f"prior must be 'gamma' or 'reference', got {text!r}")
    return text


def _methods(text):
    vals = [m.strip() for m in str(text).split(",") if m.strip()]
    bad = [m for m in vals if m not in METHODS]
    if bad or not vals:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {', '.join(METHODS)}")
    return vals


def _bool(text):
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise UsageError(f"expected a boolean, got {text!r}")


def read_config(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _add_common(p):
    p.add_argument("--config", help="key = value file mirroring the long options")
    p.add_argument("--seed", type=int, default=0)


def _add_data(p):
    p.add_argument("data", nargs="?", help="two-column CSV of pairs")
    p.add_argument("--data", dest="data_opt", help=argparse.SUPPRESS)
    p.add_argument("--header", action=argparse.BooleanOptionalAction, default=None,
                   help="force skipping (or keeping) the first line; detected by default")
    p.add_argument("--loc-scale", type=_floats(4), default=None, metavar="MU1,MU2,SIGMA1,SIGMA2")
    p.add_argument("--fractional", action="store_true", default=False,
                   help="use multinomial fractional cell counts (for real data)")
    p.add_argument("--json", action="store_true", default=False, help="print JSON")


def _add_gibbs(p):
    p.add_argument("--burn-in", type=int, default=500)
    p.add_argument("--draws", type=int, default=2000)
    p.add_argument("--level", type=float, default=0.05, help="gamma of the 100(1-gamma)%% interval")
    p.add_argument("--init", type=_floats(3), default=list(DEFAULT_INIT))
    p.add_argument("--width", type=float, default=1.0, help="slice bracket width")


def _add_hyper(p):
    p.add_argument("--hyper", type=_floats(6), default=[2, 4, 3, 3, 3, 2],
                   metavar="K0,K1,K2,T0,T1,T2")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mobvpa",
        description="Bayesian estimation for the singular Marshall-Olkin bivariate Pareto model.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="write simulated pairs as CSV")
    _add_common(p)
    p.add_argument("--alpha", type=_floats(3), default=None, required=False)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--out", default=None)

    p = sub.add_parser("fit-gibbs", help="slice-within-Gibbs posterior summary")
    _add_common(p)
    _add_data(p)
    _add_gibbs(p)
    _add_hyper(p)
    p.add_argument("--prior", type=_prior, default="gamma")
    p.add_argument("--chain-out", default=None, help="write the kept draws as CSV")

    p = sub.add_parser("fit-lindley", help="Lindley approximation under gamma priors")
    _add_common(p)
    _add_data(p)
    _add_hyper(p)
    p.add_argument("--mle", choices=("em", "numeric"), default="em")

    p = sub.add_parser("fit-em", help="maximum likelihood by EM")
    _add_common(p)
    _add_data(p)

    p = sub.add_parser("study", help="replicated simulation study")
    _add_common(p)
    _add_gibbs(p)
    _add_hyper(p)
    p.add_argument("--alpha", type=_floats(3), default=[0.1, 0.2, 0.4])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--replications", type=int, default=50)
    p.add_argument("--methods", type=_methods, default=["gibbs-gamma"])
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None, help="write OUT.txt and OUT.json")
    p.add_argument("--json", action="store_true", default=False)
    parser._subparsers_by_name = sub.choices
    return parser


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not args.config:
        return args
    values = read_config(args.config)
    subparser = parser._subparsers_by_name[args.command]
    actions = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in values.items():
        if key == "data":
            key = "data_opt"
        if key not in actions or key == "config":
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        if actions[key].choices and value not in actions[key].choices:
            raise UsageError(f"config key {key!r} must be one of {', '.join(actions[key].choices)}")
        if isinstance(actions[key], (argparse._StoreTrueAction, argparse.BooleanOptionalAction)):
            defaults[key] = _bool(value)
        else:
            defaults[key] = value
    subparser.set_defaults(**defaults)
    return parser.parse_args(argv)


def _load(args):
    path = args.data or args.data_opt
    if not path:
        raise UsageError("a data file is required")
    ls = LocationScale(*args.loc_scale) if args.loc_scale else LocationScale()
    try:
        data = ingest_csv(path, ls, header=args.header)
    except OSError as exc:
        raise DataFormatError(f"cannot read {path}: {exc}") from None
    if data.n == 0:
        raise DataFormatError(f"{path} contains no observations")
    return FractionalPartition.from_sample(data) if args.fractional else partition(data)


def _hyper(args) -> GammaHyper:
    k0, k1, k2, t0, t1, t2 = args.hyper
    return GammaHyper(k0, k1, k2, t0, t1, t2)


def _emit(args, payload: dict, rows) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
        return
    for label, values in rows:
        print(f"{label:<22}" + "".join(f"{v:>22}" for v in values))


def cmd_simulate(args):
    if args.alpha is None:
        raise UsageError("--alpha is required")
    data = sample(ShapeParams(*args.alpha).validated(), args.n, args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            write_csv(data, fh)
    else:
        write_csv(data, sys.stdout)


def cmd_fit_gibbs(args):
    pt = _load(args)
    prior = _hyper(args) if args.prior == "gamma" else ReferencePrior()
    cfg = GibbsConfig(
        burn_in=args.burn_in,
        draws=args.draws,
        init=ShapeParams(*args.init),
        seed=args.seed,
        slice=SliceConfig(width=args.width),
    )
    chain = run_chain(pt, prior, cfg)
    est = posterior_mean(chain)
    cis = credible_intervals(chain, args.level)
    var = posterior_variance(chain)
    if args.chain_out:
        np.savetxt(args.chain_out, chain.samples, delimiter=",", header="alpha0,alpha1,alpha2",
                   comments="", fmt="%.17g")
    payload = {
        "method": f"gibbs-{args.prior}",
        "estimates": list(est),
        "intervals": [[c.lo, c.hi] for c in cis],
        "posterior_variance": var.tolist(),
        "level": args.level,
        "seed": args.seed,
    }
    _emit(args, payload, [
        ("Bayes Estimates", [f"{v:.4f}" for v in est]),
        ("Credible Intervals", [f"[{c.lo:.4f}, {c.hi:.4f}]" for c in cis]),
        ("Posterior Variance", [f"{v:.3g}" for v in var]),
    ])


def cmd_fit_lindley(args):
    pt = _load(args)
    seed_method = "numeric" if args.fractional else args.mle
    est, w = lindley_fit(pt, _hyper(args), seed_method=seed_method)
    payload = {"method": "lindley", "estimates": list(est), "mle": list(w.mle), "seed": args.seed}
    _emit(args, payload, [
        ("MLE", [f"{v:.4f}" for v in w.mle]),
        ("Bayes Estimates", [f"{v:.4f}" for v in est]),
    ])


def cmd_fit_em(args):
    pt = _load(args)
    if args.fractional:
        est = numeric_mle(lambda p: loglik_fractional(p, pt))
    else:
        est = em_fit(pt, EmConfig())
    _emit(args, {"method": "em", "estimates": list(est), "seed": args.seed},
          [("Estimates", [f"{v:.4f}" for v in est])])


def cmd_study(args):
    cfg = StudyConfig(
        truth=ShapeParams(*args.alpha),
        n=args.n,
        replications=args.replications,
        methods=tuple(args.methods),
        hyper=_hyper(args),
        gibbs=GibbsConfig(
            burn_in=args.burn_in,
            draws=args.draws,
            init=ShapeParams(*args.init),
            seed=args.seed,
            slice=SliceConfig(width=args.width),
        ),
        gamma_level=args.level,
        seed=args.seed,
        workers=args.workers,
    )
    report = run_study(cfg)
    if args.out:
        Path(f"{args.out}.txt").write_text(report.to_text(), encoding="utf-8")
        Path(f"{args.out}.json").write_text(report.to_json(), encoding="utf-8")
    elif args.json:
        sys.stdout.write(report.to_json())
    else:
        sys.stdout.write(report.to_text())


COMMANDS = {
    "simulate": cmd_simulate,
    "fit-gibbs": cmd_fit_gibbs,
    "fit-lindley": cmd_fit_lindley,
    "fit-em": cmd_fit_em,
    "study": cmd_study,
}


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
        COMMANDS[args.command](args)
    except (UsageError, DomainError) as exc:
        print(f"mobvpa: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, DegenerateDataError) as exc:
        print(f"mobvpa: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ConvergenceError, SliceError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"mobvpa: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


if __name__ == "__main__":
    sys.exit(main())
