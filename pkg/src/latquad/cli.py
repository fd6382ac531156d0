"""Command-line front end.

Subcommands: cbc, points, wce, integrate, converge, bound.  Results go to
stdout, diagnostics to stderr.  Exit codes: 0 success, 1 invalid input or
usage, 2 computation failure (truncation budget or quadrature accuracy).
All reals are printed with 17 significant digits, so output is reproducible
bit for bit.
"""
from __future__ import annotations

import argparse
import io
import os
import re
import sys

import numpy as np

from .bench import TestFunction, converge_study, integrate, records_to_csv
from .cbc import cbc_construct
from .kernels import (
    FAMILIES,
    QuadratureAccuracyError,
    SpaceSpec,
    TruncationBudgetError,
    TruncationPolicy,
)
from .points import (
    LatticeRule,
    WeightedPointSet,
    lattice_points,
    read_vector_file,
    symmetrize,
    tent_transform,
    write_vector_file,
)
from .wce import (
    cbc_bound_constant,
    wce_cosine_sym,
    wce_cosine_tent,
    wce_double_sum,
    wce_korcos_sym,
    wce_korobov_lattice,
)

__all__ = ["main", "parse_gammas"]

_SPACES = ("korobov", "cosine-tent", "korcos-sym", "cosine-sym", "double-sum")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def parse_gammas(text: str, s: int) -> tuple[float, ...]:
    """Weight grammar: a constant, 'c/j^p' for decaying weights, or a comma list."""
    text = text.strip()
    if "," in text:
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != s:
            raise ValueError(f"expected {s} comma-separated weights, got {len(parts)}")
        return tuple(float(p) for p in parts)
    m = re.fullmatch(r"([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)?\s*/\s*j\^([0-9]*\.?[0-9]+)", text)
    if m:
        c = float(m.group(1)) if m.group(1) else 1.0
        p = float(m.group(2))
        return tuple(c * float(j) ** (-p) for j in range(1, s + 1))
    return (float(text),) * s


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _rule_from_args(args) -> LatticeRule:
    if getattr(args, "vector_file", None):
        return read_vector_file(args.vector_file)
    if getattr(args, "n", None) is not None and getattr(args, "g", None):
        g = tuple(int(v) for v in args.g.split(","))
        return LatticeRule(args.n, g)
    raise ValueError("a rule is required: --vector-file, or --n with --g")


def _policy_from_args(args) -> TruncationPolicy:
    return TruncationPolicy(tol=args.tol, max_terms=args.max_terms)


def _read_points_file(path: str, s: int) -> WeightedPointSet:
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for ln, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            vals = [float(t) for t in line.split()]
            if len(vals) not in (s, s + 1):
                raise ValueError(f"line {ln}: expected {s} or {s + 1} columns, got {len(vals)}")
            rows.append(vals)
    if not rows:
        raise ValueError("points file is empty")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ValueError("points file mixes weighted and unweighted lines")
    arr = np.asarray(rows, dtype=np.float64)
    if widths == {s + 1}:
        return WeightedPointSet(arr[:, :s], arr[:, s])
    return WeightedPointSet(arr, np.full(len(arr), 1.0 / len(arr)))


def _write_points(ps: WeightedPointSet, dest, with_weights: bool) -> None:
    lines = []
    for i in range(len(ps)):
        cols = [_fmt(v) for v in ps.points[i]]
        if with_weights:
            cols.append(_fmt(ps.weights[i]))
        lines.append(" ".join(cols))
    dest.write("\n".join(lines) + "\n")


def _open_out(path: str):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="ascii"), True


def cmd_cbc(args) -> int:
    gammas = parse_gammas(args.gamma, args.s)
    res = cbc_construct(args.n, args.s, args.alpha, gammas)
    out, close = _open_out(args.output)
    try:
        write_vector_file(res.rule, out)
    finally:
        if close:
            out.close()
    if args.report:
        for d, (e2, ok) in enumerate(zip(res.per_dim_e2, res.bound_ok), start=1):
            print(f"dim {d}: e2={_fmt(e2)} bound_ok={ok}", file=sys.stderr)
    return 0


def cmd_points(args) -> int:
    rule = _rule_from_args(args)
    if args.variant == "plain":
        ps = lattice_points(rule)
    elif args.variant == "tent":
        ps = tent_transform(lattice_points(rule))
    else:
        ps = symmetrize(rule, dedupe=not args.no_dedupe)
    out, close = _open_out(args.output)
    try:
        _write_points(ps, out, with_weights=args.variant == "sym")
    finally:
        if close:
            out.close()
    return 0


def cmd_wce(args) -> int:
    policy = _policy_from_args(args)
    if args.space == "double-sum":
        if not args.family:
            raise ValueError("--family is required for --space double-sum")
        if args.points_file:
            if args.s is None:
                raise ValueError("--s is required with --points-file")
            ps = _read_points_file(args.points_file, args.s)
        else:
            rule = _rule_from_args(args)
            if args.variant == "plain":
                ps = lattice_points(rule)
            elif args.variant == "tent":
                ps = tent_transform(lattice_points(rule))
            else:
                ps = symmetrize(rule)
        gammas = parse_gammas(args.gamma, ps.s)
        spec = SpaceSpec(args.family, args.alpha, gammas)
        res = wce_double_sum(spec, ps, policy, threads=args.threads)
    else:
        rule = _rule_from_args(args)
        gammas = parse_gammas(args.gamma, rule.s)
        fn = {
            "korobov": wce_korobov_lattice,
            "cosine-tent": wce_cosine_tent,
            "korcos-sym": wce_korcos_sym,
            "cosine-sym": wce_cosine_sym,
        }[args.space]
        res = fn(rule, args.alpha, gammas, policy)
    print(f"e2={_fmt(res.e2)} tail={_fmt(res.tail_bound)} method={res.method.value}")
    return 0


def cmd_integrate(args) -> int:
    rule = _rule_from_args(args)
    f = TestFunction(args.family, rule.s, args.w)
    est = integrate(rule, args.variant, f)
    print(f"estimate={_fmt(est)} abs_error={_fmt(abs(est - f.exact_integral))}")
    return 0


def cmd_converge(args) -> int:
    f = TestFunction(args.family, args.s, args.w)
    Ns = [2**m for m in range(args.nmin, args.nmax + 1)]
    gammas = parse_gammas(args.gamma, args.s) if args.gamma else None
    variants = [v.strip() for v in args.variants.split(",") if v.strip()]
    records = []
    for variant in variants:
        records.extend(converge_study(f, variant, Ns, cbc_alpha=args.alpha, cbc_gammas=gammas))
    out, close = _open_out(args.output)
    try:
        out.write(records_to_csv(records))
    finally:
        if close:
            out.close()
    return 0


def cmd_bound(args) -> int:
    gammas = parse_gammas(args.gamma, args.s)
    c = cbc_bound_constant(args.alpha, gammas, tau=args.tau)
    print(f"C={_fmt(c)}")
    return 0


def _add_rule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--vector-file", help="two-line generating-vector file")
    p.add_argument("--n", type=int, help="modulus (alternative to --vector-file)")
    p.add_argument("--g", help="comma-separated generating vector components")


def _add_policy_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol", type=float, default=1e-6, help="per-factor truncation tolerance")
    p.add_argument("--max-terms", type=int, default=2_000_000, help="series term cap")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="latquad", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cbc", help="construct a generating vector", parents=[])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--alpha", type=int, default=1, choices=(1, 2, 3))
    p.add_argument("--gamma", default="1")
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--report", action="store_true", help="per-dimension e2 to stderr")
    p.set_defaults(func=cmd_cbc)

    p = sub.add_parser("points", help="emit node coordinates")
    _add_rule_flags(p)
    p.add_argument("--variant", choices=("plain", "tent", "sym"), required=True)
    p.add_argument("--no-dedupe", action="store_true", help="keep duplicate symmetrized nodes")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_points)

    p = sub.add_parser("wce", help="squared worst-case error")
    _add_rule_flags(p)
    p.add_argument("--space", choices=_SPACES, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--gamma", default="1")
    p.add_argument("--family", choices=FAMILIES, help="kernel for --space double-sum")
    p.add_argument("--points-file", help="explicit nodes for --space double-sum")
    p.add_argument("--s", type=int, help="dimension of the points file")
    p.add_argument("--variant", choices=("plain", "tent", "sym"), default="plain",
                   help="node variant when double-sum reads a vector file")
    p.add_argument("--threads", type=int, default=os.cpu_count(),
                   help="worker threads for the double sum (result is identical)")
    _add_policy_flags(p)
    p.set_defaults(func=cmd_wce)

    p = sub.add_parser("integrate", help="quadrature estimate of a test integrand")
    _add_rule_flags(p)
    p.add_argument("--variant", choices=("plain", "tent", "sym"), required=True)
    p.add_argument("--family", choices=("g", "h"), required=True)
    p.add_argument("--w", type=float, required=True)
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("converge", help="convergence study CSV")
    p.add_argument("--family", choices=("g", "h"), required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--variants", default="plain,tent,sym")
    p.add_argument("--nmin", type=int, required=True, help="smallest exponent: N = 2^nmin")
    p.add_argument("--nmax", type=int, required=True, help="largest exponent: N = 2^nmax")
    p.add_argument("--alpha", type=int, default=1, choices=(1, 2, 3), help="CBC smoothness")
    p.add_argument("--gamma", help="CBC weights (default w^j)")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("bound", help="CBC error-bound constant")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", default="1")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--tau", type=float, default=1.0)
    p.set_defaults(func=cmd_bound)

    return top


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except (TruncationBudgetError, QuadratureAccuracyError) as exc:
        print(f"latquad: computation failed: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"latquad: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
