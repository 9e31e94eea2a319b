"""Command-line front end.

Every subcommand prints one JSON report (or writes it to ``--out``).  Exit
status is 0 on success, 1 when the checked object fails validation (set not
avoiding, pattern not full-rank, tensor not diagonal, triangle not
equilateral) and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Optional, Sequence

from . import __version__
from .bounds import BoundsError, avoidance_bound, monomial_count
from .formats import dumps, load_json, load_pattern, load_point_set, report, write_json
from .gf import FieldError, field_of_order
from .geometry import BUILTINS, builtin_pattern, is_equilateral, sq_dist, spread
from .linalg import LinalgError, Point
from .pattern import PatternError, count_instances, validate_full_rank
from .search import DEFAULT_BUDGET, SearchError, certify, exact_max, greedy
from .tensor import BudgetExceeded, NotAvoidingError, TensorContext, check_diagonal

OK, INVALID, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _add_pattern_args(p: argparse.ArgumentParser, need_n: bool = True):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pattern", help=f"pattern-spec file or builtin name ({', '.join(BUILTINS)})")
    src.add_argument("--builtin", choices=BUILTINS, help="builtin pattern name")
    p.add_argument("--q", type=_positive, help="field order (required for builtins)")
    p.add_argument("--root", type=int, help="square root choice for rot45/equilateral")
    if need_n:
        p.add_argument("--n", type=_positive, default=None, help="component dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patternlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="avoidance bound for full-rank r-point patterns")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--n", type=_positive, required=True,
                   help="component dimension (with --n-max: the first of a range)")
    p.add_argument("--n-max", type=_positive, help="report every n up to this value")
    p.add_argument("--r", type=int, default=3)
    p.add_argument("--table", action="store_true", help="print a text table instead of JSON")

    p = sub.add_parser("search", help="find a large avoiding set")
    _add_pattern_args(p)
    p.add_argument("--mode", choices=("greedy", "exact"), default="exact")
    p.add_argument("--order", choices=("lexicographic", "seeded-random"), default=None,
                   help="greedy scan order (default: seeded-random if --seed is given)")
    p.add_argument("--seed", type=int)
    p.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET, help="node limit")
    p.add_argument("--deterministic", action="store_true", help="single worker, stable output")
    p.add_argument("--save-set", help="also write the found set as a point-set file")

    p = sub.add_parser("certify", help="check that a point set avoids a pattern")
    _add_pattern_args(p)
    p.add_argument("--set", required=True, help="point-set file or inline list like {0,1,2}")

    p = sub.add_parser("verify-tensor", help="check diagonality of T on an avoiding set")
    _add_pattern_args(p)
    p.add_argument("--set", required=True)
    p.add_argument("--budget", type=_positive, default=10**6, help="max evaluations")

    p = sub.add_parser("validate", help="full-rank check of a pattern's generators")
    _add_pattern_args(p, need_n=False)

    p = sub.add_parser("count", help="count instances in a set, or exponent vectors")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pattern")
    src.add_argument("--builtin", choices=BUILTINS)
    src.add_argument("--monomials", action="store_true",
                     help="count exponent vectors under the degree threshold")
    p.add_argument("--q", type=_positive)
    p.add_argument("--root", type=int)
    p.add_argument("--n", type=_positive)
    p.add_argument("--set")
    p.add_argument("--D", type=_positive, help="number of coordinates (k*n) for --monomials")
    p.add_argument("--r", type=int, default=3)

    p = sub.add_parser("geometry", help="builtin pattern files, spreads, squared distances")
    geo = p.add_subparsers(dest="action", required=True)
    g = geo.add_parser("pattern", help="emit a builtin pattern-spec file")
    g.add_argument("--builtin", choices=BUILTINS, required=True)
    g.add_argument("--q", type=_positive, required=True)
    g.add_argument("--root", type=int)
    g = geo.add_parser("spread", help="spread and squared lengths of two vectors")
    g.add_argument("--q", type=_positive, required=True)
    g.add_argument("--u", required=True, help="inline coordinates, e.g. 1,0")
    g.add_argument("--v", required=True)
    g.add_argument("--k", type=_positive, default=2)

    p = sub.add_parser("triangle-check", help="equilateral test for point triples")
    p.add_argument("--q", type=_positive, required=True)
    p.add_argument("--n", type=_positive, default=1)
    p.add_argument("--points", required=True,
                   help='file {"n": int, "triples": [[p1, p2, p3], ...]} or inline 6n integers')
    return parser


def _pattern(args):
    return load_pattern(args.pattern or args.builtin, args.q, getattr(args, "root", None))


def _require(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.command} needs {', '.join(missing)}")


def cmd_bound(args):
    last = args.n_max or args.n
    if last < args.n:
        raise UsageError("--n-max must be >= --n")
    rows = [avoidance_bound(args.q, args.k, n, args.r) for n in range(args.n, last + 1)]
    if args.table:
        return OK, _bound_table(rows)
    if len(rows) == 1:
        return OK, report("bound", rows[0].to_json())
    return OK, report("bound-table", {"rows": [r.to_json() for r in rows]})


def _bound_table(rows) -> str:
    head = f"{'q':>4} {'k':>3} {'n':>3} {'r':>3} {'c/q':>8} {'exact bound':>20} {'analytic bound':>16}"
    lines = [head, "-" * len(head)]
    for b in rows:
        analytic = "-" if b.analytic_bound is None else f"{b.analytic_bound:.6g}"
        lines.append(f"{b.q:>4} {b.k:>3} {b.n:>3} {b.r:>3} {b.c_value / b.q:>8.5f} "
                     f"{b.exact_bound:>20} {analytic:>16}")
    return "\n".join(lines) + "\n"


def cmd_search(args):
    _require(args, "n")
    P = _pattern(args)
    if args.mode == "greedy":
        order = args.order or ("seeded-random" if args.seed is not None else "lexicographic")
        res = greedy(P, args.n, order=order, seed=args.seed)
    else:
        res = exact_max(P, args.n, budget=args.budget, deterministic=args.deterministic)
    if args.save_set:
        write_json(args.save_set, res.best_set.to_json())
    body = {"pattern": P.to_json(), "n": args.n, **res.to_json()}
    return OK if res.certificate is None else INVALID, report("search", body)


def cmd_certify(args):
    P = _pattern(args)
    A = load_point_set(args.set, P, args.n)
    ok, witness = certify(P, A)
    body = {"avoiding": ok, "size": len(A), "witness": None if ok else witness.to_json()}
    return OK if ok else INVALID, report("certify", body)


def cmd_verify_tensor(args):
    P = _pattern(args)
    A = load_point_set(args.set, P, args.n)
    ctx = TensorContext(P, A.n)
    try:
        rep = check_diagonal(ctx, A, budget=args.budget)
    except NotAvoidingError as exc:
        body = {"precondition": "failed", "witness": exc.witness.to_json(),
                "evaluations": 0, "diagonal": False, "offender": None}
        return INVALID, report("diagonality", body)
    body = {"precondition": "ok", **rep.to_json()}
    return OK if rep.diagonal else INVALID, report("diagonality", body)


def cmd_validate(args):
    P = _pattern(args)
    rep = validate_full_rank(P)
    body = {"pattern": P.to_json(), **rep.to_json()}
    return OK if rep.full_rank else INVALID, report("validation", body)


def cmd_count(args):
    if args.monomials:
        _require(args, "q", "D")
        N = monomial_count(args.q, args.D, args.r)
        body = {"q": args.q, "D": args.D, "r": args.r, "count": str(N), "bound": str(args.r * N)}
        return OK, report("monomial-count", body)
    _require(args, "set")
    P = _pattern(args)
    A = load_point_set(args.set, P, args.n)
    return OK, report("instance-count", {"size": len(A), "instances": count_instances(P, A)})


def cmd_geometry(args):
    if args.action == "pattern":
        P = builtin_pattern(args.builtin, field_of_order(args.q), root=args.root)
        return OK, {**P.to_json(), "name": args.builtin}
    F = field_of_order(args.q)
    u = _inline_point(F, args.k, args.u)
    v = _inline_point(F, args.k, args.v)
    s = spread(u, v)
    body = {
        "u": u.to_json(), "v": v.to_json(),
        "u_dot_u": sq_dist(u, Point.zero(F, u.k, u.n)).to_json(),
        "v_dot_v": sq_dist(v, Point.zero(F, v.k, v.n)).to_json(),
        "spread": None if s is None else s.to_json(),
    }
    return OK, report("spread", body)


def _inline_point(F, k: int, text: str) -> Point:
    vals = [int(x) for x in text.replace(";", ",").split(",") if x.strip()]
    if len(vals) % k:
        raise UsageError(f"{len(vals)} coordinates do not split into {k} blocks")
    return Point.from_flat(F, k, len(vals) // k, vals)


def cmd_triangle(args):
    F = field_of_order(args.q)
    triples = []
    try:
        doc = load_json(args.points)
    except (FileNotFoundError, IsADirectoryError, ValueError):
        flat = [int(v) for v in re.findall(r"-?\d+", args.points)]
        dim = 2 * args.n
        if not flat or len(flat) % (3 * dim):
            raise UsageError(f"inline triples need a multiple of {3 * dim} integers")
        chunk = [Point.from_flat(F, 2, args.n, flat[i:i + dim]) for i in range(0, len(flat), dim)]
        triples = [chunk[i:i + 3] for i in range(0, len(chunk), 3)]
    else:
        n = int(doc.get("n", args.n))
        triples = [[Point.from_flat(F, 2, n, p) for p in t] for t in doc["triples"]]
    results = []
    for t in triples:
        results.append({
            "points": [p.to_json() for p in t],
            "sq_dists": [sq_dist(t[0], t[1]).to_json(), sq_dist(t[0], t[2]).to_json(),
                         sq_dist(t[1], t[2]).to_json()],
            "equilateral": is_equilateral(*t),
        })
    status = OK if all(r["equilateral"] for r in results) else INVALID
    return status, report("triangle-check", {"triples": results})


COMMANDS = {
    "bound": cmd_bound,
    "search": cmd_search,
    "certify": cmd_certify,
    "verify-tensor": cmd_verify_tensor,
    "validate": cmd_validate,
    "count": cmd_count,
    "geometry": cmd_geometry,
    "triangle-check": cmd_triangle,
}


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        status, doc = COMMANDS[args.command](args)
    except (UsageError, FieldError, LinalgError, PatternError, BoundsError, SearchError,
            BudgetExceeded, KeyError, OSError) as exc:
        print(f"patternlab {args.command}: {exc}", file=stderr)
        return USAGE
    text = doc if isinstance(doc, str) else dumps(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
