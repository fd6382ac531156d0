"""Convergence benchmarks: smooth product test integrands and rate fitting.

Two families of integrands on [0,1]^s, both with exact integral 1 and a
product structure whose coordinate influence decays like w^j:

    g: factor 1 + (w^j / 21) (-10 + 42 x^2 - 42 x^5 + 21 x^6)
    h: factor 1 + (w^j / 8) (31 - 84 x^2 + 8 x^3 + 70 x^4 - 28 x^6 + 8 x^7
                             - 16 cos(1) - 16 sin(x))

g's factors are reflection-symmetric about x = 1/2 up to odd terms that the
symmetrized rule kills exactly; h is deliberately not symmetric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .cbc import cbc_construct
from .points import (
    LatticeRule,
    lattice_points,
    symmetrize,
    symmetrized_node_count,
    tent_transform,
)

__all__ = [
    "TestFunction",
    "ConvergenceRecord",
    "VARIANTS",
    "SYM_NODE_CAP",
    "eval_g",
    "eval_h",
    "integrate",
    "converge_study",
    "fit_slope",
    "records_to_csv",
]

VARIANTS = ("plain", "tent", "sym")
SYM_NODE_CAP = 1 << 24
_ERROR_FLOOR = 1e-13


def eval_g(s: int, w: float, x) -> np.ndarray:
    """Polynomial product integrand; coordinates on the last axis."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != s:
        raise ValueError(f"last axis must have {s} coordinates")
    wj = w ** np.arange(1, s + 1)
    poly = -10.0 + 42.0 * x**2 - 42.0 * x**5 + 21.0 * x**6
    return np.prod(1.0 + (wj / 21.0) * poly, axis=-1)


def eval_h(s: int, w: float, x) -> np.ndarray:
    """Polynomial-plus-sine product integrand; coordinates on the last axis."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != s:
        raise ValueError(f"last axis must have {s} coordinates")
    wj = w ** np.arange(1, s + 1)
    poly = (
        31.0
        - 84.0 * x**2
        + 8.0 * x**3
        + 70.0 * x**4
        - 28.0 * x**6
        + 8.0 * x**7
        - 16.0 * math.cos(1.0)
        - 16.0 * np.sin(x)
    )
    return np.prod(1.0 + (wj / 8.0) * poly, axis=-1)


@dataclass(frozen=True)
class TestFunction:
    """Benchmark integrand 'g' or 'h' with decay parameter w; integral is 1."""

    family: str
    s: int
    w: float
    exact_integral: float = field(default=1.0, init=False)

    def __post_init__(self) -> None:
        if self.family not in ("g", "h"):
            raise ValueError(f"family must be 'g' or 'h', got {self.family!r}")
        if self.s < 1:
            raise ValueError("dimension must be at least 1")
        if not 0.0 < self.w <= 1.0:
            raise ValueError("w must be in (0, 1]")

    def __call__(self, x) -> np.ndarray:
        if self.family == "g":
            return eval_g(self.s, self.w, x)
        return eval_h(self.s, self.w, x)


@dataclass(frozen=True)
class ConvergenceRecord:
    variant: str
    N: int
    nodes: int
    estimate: float
    abs_error: float


def integrate(rule: LatticeRule, variant: str, f) -> float:
    """Quadrature estimate of f under the plain, tent, or sym node variant.

    Accumulation is fully compensated (exact summation of the weighted terms),
    which matters once node counts reach the millions.
    """
    if variant == "plain":
        ps = lattice_points(rule)
    elif variant == "tent":
        ps = tent_transform(lattice_points(rule))
    elif variant == "sym":
        ps = symmetrize(rule, dedupe=True)
    else:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    vals = np.asarray(f(ps.points), dtype=np.float64)
    if variant == "sym":
        return math.fsum((vals * ps.weights).tolist())
    return math.fsum(vals.tolist()) / len(ps)


@lru_cache(maxsize=128)
def _cbc_cached(N: int, s: int, alpha: int, gammas: tuple[float, ...]) -> LatticeRule:
    return cbc_construct(N, s, alpha, gammas).rule


def converge_study(
    f: TestFunction,
    variant: str,
    N_list,
    cbc_alpha: int = 1,
    cbc_gammas=None,
    out=None,
) -> list[ConvergenceRecord]:
    """Error records over increasing N with CBC-constructed vectors.

    The construction weights default to gamma_j = w^j, matching the product
    decay of the integrand.  ``out`` (path or file object) gets the records as
    CSV when given.
    """
    Ns = [int(N) for N in N_list]
    if Ns != sorted(Ns) or len(set(Ns)) != len(Ns):
        raise ValueError("N_list must be strictly increasing")
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    if cbc_gammas is None:
        gammas = tuple(float(f.w) ** j for j in range(1, f.s + 1))
    else:
        gammas = tuple(float(g) for g in cbc_gammas)
    if variant == "sym":
        if f.s > 10:
            raise ValueError("symmetrized studies are supported up to dimension 10")
        worst = (1 << (f.s - 1)) * max(Ns)
        if worst > SYM_NODE_CAP:
            raise ValueError(f"symmetrized study needs {worst} nodes (cap {SYM_NODE_CAP})")

    records = []
    for N in Ns:
        rule = _cbc_cached(N, f.s, int(cbc_alpha), gammas)
        est = integrate(rule, variant, f)
        nodes = symmetrized_node_count(N, f.s) if variant == "sym" else N
        records.append(
            ConvergenceRecord(variant, N, nodes, est, abs(est - f.exact_integral))
        )
    if out is not None:
        text = records_to_csv(records)
        if hasattr(out, "write"):
            out.write(text)
        else:
            with open(out, "w", encoding="ascii") as fh:
                fh.write(text)
    return records


def fit_slope(records, floor: float = _ERROR_FLOOR) -> float:
    """Least-squares slope of log2(abs_error) against log2(N).

    Errors at or below ``floor`` sit in rounding noise and are excluded; at
    least four usable records are required.
    """
    xs = [math.log2(r.N) for r in records if r.abs_error > floor]
    ys = [math.log2(r.abs_error) for r in records if r.abs_error > floor]
    if len(xs) < 4:
        raise ValueError(f"need at least 4 records above the error floor, have {len(xs)}")
    return float(np.polyfit(xs, ys, 1)[0])


def records_to_csv(records) -> str:
    """CSV with header variant,N,nodes,estimate,abs_error; 17 significant digits."""
    lines = ["variant,N,nodes,estimate,abs_error"]
    for r in records:
        lines.append(f"{r.variant},{r.N},{r.nodes},{r.estimate:.17g},{r.abs_error:.17g}")
    return "\n".join(lines) + "\n"
