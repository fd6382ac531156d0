"""Worst-case quadrature errors in the kernel spaces, plus the CBC error bound.

Every family is normalized so that both the double integral of the kernel and
its single integral against either argument equal 1, which collapses the
worst-case error to

    e^2 = -1 + sum_{n,n'} w_n w_{n'} K(x_n, x_{n'}).

``wce_double_sum`` evaluates that quadratic form directly and is the expensive,
assumption-free oracle.  For rank-1 lattices the group structure reduces the
Korobov-space error to a single sum over nodes, and the tent-transform /
symmetrization identities reduce the cosine-space errors to that same Korobov
value, which is what the cheap production paths compute.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .kernels import (
    DEFAULT_POLICY,
    SpaceSpec,
    TruncationBudgetError,
    TruncationPolicy,
    kernel_factor,
    korobov_omega,
    r_weight_product,
    zeta,
)
from .points import LatticeRule, WeightedPointSet, dual_lattice

__all__ = [
    "WceMethod",
    "WceResult",
    "MAX_DOUBLE_SUM_NODES",
    "wce_double_sum",
    "wce_korobov_lattice",
    "wce_cosine_tent",
    "wce_korcos_sym",
    "wce_cosine_sym",
    "cbc_bound_constant",
]

MAX_DOUBLE_SUM_NODES = 4096
_ROW_BLOCK = 512


class WceMethod(str, Enum):
    KERNEL_DOUBLE_SUM = "kernel-double-sum"
    CLOSED_FORM_SINGLE_SUM = "closed-form-single-sum"
    DUAL_LATTICE_TRUNCATED = "dual-lattice-truncated"
    THEOREM_EQUIVALENCE = "theorem-equivalence"


@dataclass(frozen=True)
class WceResult:
    """Squared worst-case error with its computation method and tail bound."""

    e2: float
    method: WceMethod
    tail_bound: float


def _check_gammas(gammas: Sequence[float], s: int) -> tuple[float, ...]:
    out = tuple(float(g) for g in gammas)
    if len(out) != s:
        raise ValueError(f"expected {s} weights, got {len(out)}")
    if out and min(out) <= 0.0:
        raise ValueError("weights gamma_j must be positive")
    return out


def wce_double_sum(
    spec: SpaceSpec,
    ps: WeightedPointSet,
    policy: TruncationPolicy = DEFAULT_POLICY,
    threads: int | None = None,
) -> WceResult:
    """e^2 by the full weighted double sum of kernel values.

    Capped at MAX_DOUBLE_SUM_NODES nodes.  Processed in fixed row blocks with
    a fixed-order compensated reduction, so the result is identical whether or
    not a thread pool is used.  The reported tail bound sums, per coordinate,
    the factor truncation bound times the largest magnitudes of the remaining
    factors over all node pairs.
    """
    X, w = ps.points, ps.weights
    M, s = X.shape
    if s != spec.s:
        raise ValueError(f"point set dimension {s} does not match spec dimension {spec.s}")
    if M > MAX_DOUBLE_SUM_NODES:
        raise ValueError(f"double sum capped at {MAX_DOUBLE_SUM_NODES} nodes, got {M}")

    blocks = [(i, min(i + _ROW_BLOCK, M)) for i in range(0, M, _ROW_BLOCK)]

    def run_block(block: tuple[int, int]):
        i0, i1 = block
        prod = None
        maxv = np.empty(s)
        bnds = np.empty(s)
        for j in range(s):
            vals, bj = kernel_factor(
                spec.family, spec.alpha, spec.gammas[j],
                X[i0:i1, j][:, None], X[None, :, j], policy,
            )
            bnds[j] = bj
            maxv[j] = float(np.abs(vals).max())
            prod = vals if prod is None else prod * vals
        return float(w[i0:i1] @ (prod @ w)), maxv, bnds

    if threads is not None and threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_block, blocks))
    else:
        results = [run_block(b) for b in blocks]

    e2 = math.fsum(q for q, _, _ in results) - 1.0
    maxv = np.max(np.stack([mv for _, mv, _ in results]), axis=0)
    factor_bounds = results[0][2]
    mags = maxv + factor_bounds
    tail = 0.0
    for j in range(s):
        if factor_bounds[j]:
            tail += factor_bounds[j] * float(np.prod(np.delete(mags, j)))
    return WceResult(e2, WceMethod.KERNEL_DOUBLE_SUM, tail)


def wce_korobov_lattice(
    rule: LatticeRule,
    alpha: float,
    gammas: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
    dual_cap: int = 10_000_000,
) -> WceResult:
    """Korobov-space e^2 of a rank-1 lattice.

    Integer alpha in 1..3: exact single sum over nodes,
        e^2 = -1 + (1/N) sum_n prod_j (1 + gamma_j omega(frac(n g_j / N))).
    Other alpha: truncated dual-lattice sum of the Fourier weights, with the
    box half-width H sized so each per-coordinate tail is at most
    policy.tol / (3 s).
    """
    N, s = rule.N, rule.s
    gammas = _check_gammas(gammas, s)

    if float(alpha).is_integer() and int(alpha) in (1, 2, 3):
        om = korobov_omega(int(alpha), np.arange(N) / N)
        n = np.arange(N, dtype=np.int64)
        prod = np.ones(N)
        for g_j, gamma_j in zip(rule.g, gammas):
            prod *= 1.0 + gamma_j * om[(n * g_j) % N]
        e2 = math.fsum(prod) / N - 1.0
        return WceResult(e2, WceMethod.CLOSED_FORM_SINGLE_SUM, 0.0)

    if not alpha > 0.5:
        raise ValueError("alpha must exceed 1/2")
    # 2 gamma H^(1-2a)/(2a-1) <= tol/(3s), per coordinate
    per_dim = policy.tol / (3.0 * s)
    H = max(
        1,
        math.ceil(
            max(
                (2.0 * g / (per_dim * (2.0 * alpha - 1.0))) ** (1.0 / (2.0 * alpha - 1.0))
                for g in gammas
            )
        ),
    )
    if (2 * H + 1) ** s > dual_cap:
        raise TruncationBudgetError(
            f"dual-lattice box H={H} needs {(2 * H + 1) ** s} candidates (cap {dual_cap})"
        )
    hs = dual_lattice(rule, H, max_candidates=dual_cap)
    e2 = math.fsum(r_weight_product(alpha, gammas, h) for h in hs)
    z2a = zeta(2.0 * alpha)
    tails = [2.0 * g * H ** (1.0 - 2.0 * alpha) / (2.0 * alpha - 1.0) for g in gammas]
    full = [1.0 + 2.0 * g * z2a for g in gammas]
    tail = 0.0
    for j in range(s):
        rest = 1.0
        for i in range(s):
            if i != j:
                rest *= full[i]
        tail += tails[j] * rest
    return WceResult(e2, WceMethod.DUAL_LATTICE_TRUNCATED, tail)


def wce_cosine_tent(
    rule: LatticeRule,
    alpha: float,
    gammas: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> WceResult:
    """Cosine-space e^2 of the tent-transformed lattice.

    Tent-folding the nodes makes the cosine-space error coincide with the
    Korobov-space error of the unfolded lattice, which is what gets computed.
    """
    base = wce_korobov_lattice(rule, alpha, gammas, policy)
    return WceResult(base.e2, WceMethod.THEOREM_EQUIVALENCE, base.tail_bound)


def wce_korcos_sym(
    rule: LatticeRule,
    alpha: float,
    gammas: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> WceResult:
    """e^2 of the symmetrized lattice in the mean-of-kernels space.

    Symmetrization over all coordinate reflections reproduces the Korobov
    error of the base lattice exactly.
    """
    base = wce_korobov_lattice(rule, alpha, gammas, policy)
    return WceResult(base.e2, WceMethod.THEOREM_EQUIVALENCE, base.tail_bound)


def wce_cosine_sym(
    rule: LatticeRule,
    alpha: float,
    gammas: Sequence[float],
    policy: TruncationPolicy = DEFAULT_POLICY,
) -> WceResult:
    """Cosine-space e^2 of the symmetrized lattice.

    Only the doubled frequencies survive symmetrization, so this equals the
    Korobov error with every weight rescaled by 4^(-alpha); the rescaled
    computation is exact, not an approximation.
    """
    gammas = _check_gammas(gammas, rule.s)
    scale = 4.0 ** (-float(alpha))
    base = wce_korobov_lattice(rule, alpha, [g * scale for g in gammas], policy)
    return WceResult(base.e2, WceMethod.THEOREM_EQUIVALENCE, base.tail_bound)


def cbc_bound_constant(alpha: float, gammas: Sequence[float], tau: float = 1.0) -> float:
    """Constant C in the CBC guarantee e <= C * (N-1)^(-tau/2).

    C = (-1 + prod_j (1 + 2 zeta(2 alpha / tau) gamma_j^(1/tau)))^(tau/2),
    valid for 1 <= tau < 2 alpha.
    """
    gammas = tuple(float(g) for g in gammas)
    if not gammas or min(gammas) <= 0.0:
        raise ValueError("weights gamma_j must be positive and nonempty")
    tau = float(tau)
    if not 1.0 <= tau < 2.0 * float(alpha):
        raise ValueError(f"tau must satisfy 1 <= tau < 2*alpha, got tau={tau}, alpha={alpha}")
    z = zeta(2.0 * float(alpha) / tau)
    prod = 1.0
    for g in gammas:
        prod *= 1.0 + 2.0 * z * g ** (1.0 / tau)
    return (prod - 1.0) ** (tau / 2.0)
