"""
Command-line front end.

    cubicsieve constants --tau 5/67 --tol 5e-4
    cubicsieve census --X 10 --eta 0.5 --Ylo 4 --Yhi 6
    cubicsieve hb-identity --k 2 --U 20
    cubicsieve selftest --quick

Exit codes: 0 success, 2 validation or parse failure, 3 selftest failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from .report import RunManifest, build_document, dumps, to_csv, versions

EXIT_OK, EXIT_INVALID, EXIT_SELFTEST = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse already exits 2; keep the message short
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def rational(text: str) -> Fraction:
    """Exact rational: integers, finite decimals and p/q are all exact."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}")


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return v


def read_config(path: str) -> Dict[str, str]:
    """Flat key=value file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


# ---------------------------------------------------------------------------
# subcommands; each returns (result, seed)


def _cfg(args, **extra):
    from .densities import SieveConfig

    return SieveConfig(args.X, args.eta, args.gamma, tau=args.tau, delta=args.delta, **extra)


def _constants_result(rep) -> Dict[str, Any]:
    from .report import to_plain

    out = to_plain(rep)
    out["evals"] = rep.evals
    return out


def cmd_constants(args):
    from .sieve_numerics import constants_report

    rep = constants_report(args.tau, args.gamma, args.tol, args.gamma_mode, args.jlower, args.jupper,
                           args.rtilde8)
    return _constants_result(rep), None


def cmd_census(args):
    from .densities import sigma0
    from .sequence import WindowSpec, census_A0, census_B0

    if (args.Ylo is None) != (args.Yhi is None):
        raise ValueError("--Ylo and --Yhi go together")
    if args.Ylo is not None:
        x_hi = int(args.X * (1 + args.eta))
        src = WindowSpec(args.X, x_hi, args.Ylo, args.Yhi)
        rep = census_A0(src, threads=args.threads)
        return {**rep.__dict__, "window": src.__dict__}, None
    cfg = _cfg(args)
    sig = sigma0(args.sigma_pmax)
    rep = census_A0(cfg, sig.value, args.threads)
    b = census_B0(cfg) if args.with_B else None
    return {**rep.__dict__, "config": cfg.snapshot(), "sigma0": sig.__dict__,
            "B0": b.__dict__ if b else None}, None


def cmd_typeI(args):
    from .sequence import typeI_residuals

    cfg = _cfg(args)
    rep = typeI_residuals(cfg, args.Q, args.samples, args.seed)
    rows = [{"R": str(r.R.factors), "norm": r.norm, "observed": r.observed, "dual": r.dual, "main": r.main,
             "residual": r.residual} for r in rep.rows]
    return {"config": cfg.snapshot(), "Q": args.Q, "rows": rows,
            "aggregate_abs_residual": rep.aggregate_abs_residual, "agreement": rep.agreement}, args.seed


def cmd_buchstab(args):
    from .buchstab import Boundaries, decompose, patterns_A, patterns_B, verify_buchstab

    cfg = _cfg(args)
    b = Boundaries.from_config(cfg, contiguous=not args.literal)
    C = patterns_A(cfg) if args.collection == "A" else patterns_B(cfg)
    d = decompose(C, cfg, b)
    res = verify_buchstab(C, cfg, b, d)
    return {"collection": args.collection, "config": cfg.snapshot(), "decomposition": d.as_dict(),
            "residuals": res.__dict__, "all_zero": res.all_zero}, None


def cmd_hb(args):
    from .ideals import verify_hb_identity

    bound = args.bound if args.bound is not None else min(args.U ** args.k, 8000)
    return verify_hb_identity(args.k, args.U, bound).__dict__, None


def cmd_sigma0(args):
    from .densities import gamma0, sigma0

    s = sigma0(args.pmax)
    return {**s.__dict__, "gamma0": gamma0()}, None


def cmd_selftest(args):
    from .acceptance import run_all

    results = run_all(quick=args.quick, only=args.only)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"passed": all(r.passed for r in results), "quick": args.quick,
            "criteria": [r.__dict__ for r in results]}, 0


def cmd_report(args):
    from .densities import SieveConfig, gamma0, sigma0
    from .ideals import verify_hb_identity
    from .sieve_numerics import constants_report

    rep = constants_report(args.tau, args.gamma, args.tol, args.gamma_mode)
    s = sigma0(args.sigma_pmax)
    hb = [verify_hb_identity(k, U, min(U ** k, 8000)).__dict__ for k in (1, 2, 3) for U in (10, 20)]
    return {"constants": _constants_result(rep), "sigma0": s.__dict__, "gamma0": gamma0(),
            "heath_brown": hb}, None


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--config", help="key=value file; command-line flags take precedence")
    p.add_argument("--threads", type=positive_int, default=None,
                   help="worker cap (default: CSL_THREADS or 1)")
    p.add_argument("--timing", action="store_true", help="keep wall-time fields in the output")


def _sieve_params(p, X=None, eta=None):
    p.add_argument("--X", type=positive_int, default=X)
    p.add_argument("--eta", type=rational, default=eta)
    p.add_argument("--gamma", type=rational, default=Fraction(7, 100), help="sparsity gamma_s")
    p.add_argument("--tau", type=rational, default=None)
    p.add_argument("--delta", type=rational, default=Fraction(1, 6))


def _numeric_params(p):
    from .sieve_numerics import TAU_DEFAULT

    p.add_argument("--tau", type=rational, default=TAU_DEFAULT)
    p.add_argument("--gamma", type=rational, default=TAU_DEFAULT, help="gamma_s used on the A side")
    p.add_argument("--gamma-mode", choices=("gamma_s", "zero"), default="gamma_s")
    p.add_argument("--tol", type=positive_float, default=5e-4)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cubicsieve", description="Computational lab for primes of the form x^3 + 2y^3.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="sieve constants c3..c8")
    _common(p)
    _numeric_params(p)
    p.add_argument("--jlower", choices=("derived", "printed"), default="derived")
    p.add_argument("--jupper", choices=("derived", "printed"), default="derived")
    p.add_argument("--rtilde8", choices=("default", "printed"), default="default")
    p.set_defaults(fn=cmd_constants)

    p = sub.add_parser("census", help="prime census of the pair sequence")
    _common(p)
    _sieve_params(p, X=30_000, eta=Fraction(1, 10))
    p.add_argument("--Ylo", type=positive_int, default=None)
    p.add_argument("--Yhi", type=positive_int, default=None)
    p.add_argument("--sigma-pmax", type=positive_int, default=10 ** 7)
    p.add_argument("--with-B", action="store_true", help="also count primes in the norm interval")
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("typeI", help="Type-I residual table")
    _common(p)
    _sieve_params(p, X=500, eta=Fraction(1, 5))
    p.add_argument("--Q", type=positive_int, default=5000)
    p.add_argument("--samples", type=positive_int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_typeI)

    p = sub.add_parser("buchstab", help="exact Buchstab decomposition and residuals")
    _common(p)
    _sieve_params(p, X=500, eta=Fraction(1, 5))
    p.add_argument("--collection", choices=("A", "B"), default="A")
    p.add_argument("--literal", action="store_true", help="use the non-contiguous boundaries as displayed")
    p.set_defaults(fn=cmd_buchstab)

    p = sub.add_parser("hb-identity", help="verify the Heath-Brown identity")
    _common(p)
    p.add_argument("--k", type=positive_int, default=2)
    p.add_argument("--U", type=positive_int, default=20)
    p.add_argument("--bound", type=positive_int, default=None)
    p.set_defaults(fn=cmd_hb)

    p = sub.add_parser("sigma0", help="partial singular series")
    _common(p)
    p.add_argument("--pmax", type=positive_int, default=10 ** 6)
    p.set_defaults(fn=cmd_sigma0)

    p = sub.add_parser("selftest", help="run the acceptance suite")
    _common(p)
    p.add_argument("--quick", action="store_true", help="skip the census statistics")
    p.add_argument("--only", type=positive_int, nargs="+", default=None)
    p.set_defaults(fn=cmd_selftest)

    p = sub.add_parser("report", help="constants, sigma0 and identity checks in one document")
    _common(p)
    _numeric_params(p)
    p.add_argument("--sigma-pmax", type=positive_int, default=10 ** 6)
    p.set_defaults(fn=cmd_report)
    return parser


def _apply_config(parser: argparse.ArgumentParser, args: argparse.Namespace, argv: Sequence[str]) -> None:
    """Fill options from --config unless given on the command line."""
    values = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions}
    given = {a.dest for a in sub._actions for s in a.option_strings if s in argv}
    for k, v in values.items():
        if k not in actions or k in ("config", "fn"):
            raise ValueError(f"unknown config key {k!r}")
        if k in given:
            continue
        act = actions[k]
        if act.type is not None:
            try:
                v = act.type(v)
            except argparse.ArgumentTypeError as exc:
                raise ValueError(f"config {k}: {exc}")
        elif isinstance(act, argparse._StoreTrueAction):
            v = v.lower() in ("1", "true", "yes")
        setattr(args, k, v)


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.config:
            _apply_config(parser, args, argv)
        if args.threads is None and "CSL_THREADS" in os.environ:
            args.threads = positive_int(os.environ["CSL_THREADS"])
        start = time.perf_counter()
        result, seed = args.fn(args)
    except (ValueError, TypeError, OverflowError, argparse.ArgumentTypeError) as exc:
        print(f"cubicsieve: error: {exc}", file=sys.stderr)
        return EXIT_INVALID

    config = {k: v for k, v in vars(args).items() if k not in ("fn", "format", "out", "timing", "config")}
    manifest = RunManifest(args.command, config, versions(), seed,
                           time.perf_counter() - start if args.timing else None,
                           [args.out] if args.out else [])
    doc = build_document(manifest, result, timing=args.timing)
    text = to_csv(doc) if args.format == "csv" else dumps(doc) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "selftest" and not result["passed"]:
        return EXIT_SELFTEST
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
