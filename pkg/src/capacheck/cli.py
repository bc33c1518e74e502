"""Command-line front end.

Exit status: 0 on success, 1 when a verification suite or census audit finds a
violation, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import engine, enumeration, oracle, suites
from .linalg import FieldError, check_prime
from .phi import ParameterError, build
from .presentations import PresentationError, RelatorError, build_extraspecial, parse, to_subspace

SCHEMA = "capacheck/1"

log = logging.getLogger("capacheck")


class UsageError(Exception):
    pass


def _prime(text: str) -> int:
    try:
        return check_prime(int(text))
    except (ValueError, FieldError) as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _dims(text: str) -> list[int]:
    """``a..b`` (inclusive), ``a,b,c`` or a single integer."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension range {text!r}; use a..b") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="capacheck",
        description="Capability of class-two groups of odd prime exponent via X = Z_X.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="decide capability of a presented group")
    c.add_argument("file", help="presentation file, or '-' for stdin")
    c.add_argument("--format", choices=["json", "text"], default="json")

    f = sub.add_parser("phi", help="dump the phi_r matrices")
    f.add_argument("--n", type=int, required=True)
    f.add_argument("--p", type=_prime, required=True)

    s = sub.add_parser("census", help="capability census over subspaces of V")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=_prime, required=True)
    s.add_argument("--dims", type=_dims, default=None, help="dimensions of X, e.g. 0..3")
    s.add_argument("--sample", type=int, default=None, help="uniform draws per dimension")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--budget", type=int, default=None, help="max subspaces visited (env CAPACHECK_BUDGET)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--resume", default=None, help="checkpoint file")
    s.add_argument("--no-reduction-audit", action="store_true")
    s.add_argument("--format", choices=["json", "csv"], default="json")

    y = sub.add_parser("dimy", help="histogram of dim Y_X over k-dimensional X")
    y.add_argument("--n", type=int, required=True)
    y.add_argument("--p", type=_prime, required=True)
    y.add_argument("--k", type=int, required=True)
    y.add_argument("--samples", type=int, default=None, help="sample instead of enumerating")
    y.add_argument("--seed", type=int, default=0)

    o = sub.add_parser("oracle", help="group oracle utilities")
    o.add_argument("--selftest", action="store_true", required=True)
    o.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run a named property suite")
    v.add_argument("--suite", choices=sorted(suites.SUITES), required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--p", type=_prime, required=True)
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    return parser


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=False)
    sys.stdout.write("\n")


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise UsageError(f"cannot read {path}: {err.strerror}") from None


def _text_report(rep: engine.CapabilityReport) -> str:
    ps = build(rep.n, rep.p)
    lines = [f"n={rep.n} p={rep.p}  dim V={ps.dimV}  dim X={rep.dimX}  dim Y={rep.dimY}  dim Z={rep.dimZ}"]
    if rep.capable:
        lines.append("Z_X = X, therefore G is capable.")
    else:
        lines.append("Z_X != X, therefore G is not capable.")
        lines.append("witnesses in Z_X \\ X:")
        lines.extend("  " + ps.format_v(w) for w in rep.witnesses)
    lines.append(f"dim Z(G)/[G,G] = {rep.central_dim}")
    m = rep.n - rep.central_dim
    lines.append(
        f"Heineken-Nikolova: dim[G,G] = {rep.commutator_dim}, needs >= {engine.hn_bound(m)}"
        f" -> {'ok' if rep.hn_ok else 'fails'}"
    )
    return "\n".join(lines)


def cmd_check(args) -> int:
    pres = parse(_read_input(args.file))
    X = to_subspace(pres)
    ps = build(pres.n, pres.p)
    rep = engine.is_capable(ps, X)
    if args.format == "text":
        print(_text_report(rep))
    else:
        out = {"schema": SCHEMA, "kind": "check", **rep.to_json()}
        out["witnesses_v"] = [ps.format_v(w) for w in rep.witnesses]
        _emit(out)
    return 0


def cmd_phi(args) -> int:
    ps = build(args.n, args.p)
    _emit({"schema": SCHEMA, "kind": "phi", **ps.to_json()})
    return 0


def cmd_census(args) -> int:
    watch = {}
    if args.n == 4:
        watch["extraspecial"] = to_subspace(build_extraspecial(args.p))
    report = enumeration.census(
        args.n,
        args.p,
        dims=args.dims,
        sample=args.sample,
        workers=args.workers,
        budget=args.budget,
        seed=args.seed,
        resume=args.resume,
        watch=watch,
        check_reduction=not args.no_reduction_audit,
    )
    if args.format == "csv":
        sys.stdout.write(report.to_csv())
    else:
        _emit(report.to_json())
    return 0 if report.ok else 1


def cmd_dimy(args) -> int:
    hist = enumeration.dimY_profile(args.n, args.p, args.k, args.samples, args.seed)
    _emit(
        {
            "schema": SCHEMA,
            "kind": "dimy",
            "n": args.n,
            "p": args.p,
            "k": args.k,
            "samples": args.samples,
            "histogram": {str(y): c for y, c in sorted(hist.items())},
        }
    )
    return 0


def cmd_oracle(args) -> int:
    rows = oracle.selftest(seed=args.seed)
    width = max(len(name) for name, _, _ in rows)
    for name, ok, detail in rows:
        print(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
    return 0 if all(ok for _, ok, _ in rows) else 1


def cmd_verify(args) -> int:
    res = suites.run_suite(args.suite, args.n, args.p, args.trials, args.seed)
    _emit(res.to_json())
    return 0 if res.passed else 1


COMMANDS = {
    "check": cmd_check,
    "phi": cmd_phi,
    "census": cmd_census,
    "dimy": cmd_dimy,
    "oracle": cmd_oracle,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, PresentationError, RelatorError, FieldError, ParameterError, ValueError) as err:
        # BudgetExceededError is a RuntimeError, handled below
        print(f"capacheck: error: {err}", file=sys.stderr)
        return 2
    except enumeration.BudgetExceededError as err:
        print(f"capacheck: error: {err}; raise --budget or use --sample", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
