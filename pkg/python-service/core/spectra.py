"""Binary weights modulo 2^n - 1 and the CRT pairing of exponents.

For n = 2m the exponent ring Z/(2^n-1) splits as Z/(2^m-1) x Z/(2^m+1);
exponent i corresponds to the pair (i mod 2^m-1, i mod 2^m+1).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import FrozenSet, Tuple

import numpy as np

from app.errors import InvalidArgumentError
from app.state import CheckReport
from tools.gf2 import popcount

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class WeightContext:
    m: int

    def __post_init__(self) -> None:
        if self.m < 1:
            raise InvalidArgumentError(f"half-dimension must be positive, got m={self.m}")

    @property
    def n(self) -> int:
        return 2 * self.m

    @property
    def modulus(self) -> int:
        return (1 << self.n) - 1

    @property
    def half(self) -> int:
        return 1 << (self.m - 1)

    @property
    def j_order(self) -> int:
        return (1 << self.m) - 1

    @property
    def k_order(self) -> int:
        return (1 << self.m) + 1


def wt_n(u: int, ctx: WeightContext) -> int:
    return bin(int(u) % ctx.modulus).count("1")


def wt_n_vec(values: np.ndarray, ctx: WeightContext) -> np.ndarray:
    return popcount(np.mod(np.asarray(values, dtype=np.int64), ctx.modulus))


def pair_to_exponent(j: int, k: int, ctx: WeightContext) -> int:
    if not 0 <= j < ctx.j_order:
        raise InvalidArgumentError(f"j must lie in [0, {ctx.j_order - 1}], got {j}")
    if not 0 <= k < ctx.k_order:
        raise InvalidArgumentError(f"k must lie in [0, {ctx.k_order - 1}], got {k}")
    return (ctx.half * (ctx.k_order * j + ctx.j_order * k)) % ctx.modulus


def exponent_to_pair(i: int, ctx: WeightContext) -> Tuple[int, int]:
    if not 0 <= i < ctx.modulus:
        raise InvalidArgumentError(f"exponent must lie in [0, {ctx.modulus - 1}], got {i}")
    return i % ctx.j_order, i % ctx.k_order


def _pair_weights(ctx: WeightContext, j: np.ndarray, k: np.ndarray) -> np.ndarray:
    return wt_n_vec(ctx.k_order * j[:, None] + ctx.j_order * k[None, :], ctx)


def verify_lemma1(ctx: WeightContext) -> CheckReport:
    """wt((2^m+1)(2^m-1-j) + (2^m-1)k) = n - wt((2^m+1)j + (2^m-1)k) for k >= 1."""
    report = CheckReport(target="lemma1", m=ctx.m)
    j = np.arange(ctx.j_order, dtype=np.int64)
    k = np.arange(1, ctx.k_order, dtype=np.int64)
    lhs = _pair_weights(ctx, ctx.j_order - j, k)
    rhs = ctx.n - _pair_weights(ctx, j, k)
    bad_j, bad_k = np.nonzero(lhs != rhs)
    for a, b in zip(bad_j.tolist(), bad_k.tolist()):
        report.record((a, int(k[b])))
    report.details["pairs_checked"] = int(lhs.size)
    return report


@dataclass(frozen=True)
class SkSet:
    k: int
    members: FrozenSet[int]

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, j: object) -> bool:
        return j in self.members


def _check_k(ctx: WeightContext, k: int) -> None:
    if not 0 <= k < ctx.k_order:
        raise InvalidArgumentError(f"k must lie in [0, {ctx.k_order - 1}], got {k}")


def _column_weights(ctx: WeightContext, k: int) -> np.ndarray:
    j = np.arange(ctx.j_order, dtype=np.int64)
    return wt_n_vec(ctx.k_order * j + ctx.j_order * k, ctx)


def s_k(ctx: WeightContext, k: int) -> SkSet:
    _check_k(ctx, k)
    members = np.flatnonzero(_column_weights(ctx, k) < ctx.m)
    return SkSet(k=k, members=frozenset(members.tolist()))


def t_k(ctx: WeightContext, k: int) -> SkSet:
    _check_k(ctx, k)
    members = np.flatnonzero(_column_weights(ctx, k) > ctx.m)
    return SkSet(k=k, members=frozenset(members.tolist()))


def _cardinalities(ctx: WeightContext) -> Tuple[np.ndarray, np.ndarray]:
    j = np.arange(ctx.j_order, dtype=np.int64)
    k = np.arange(ctx.k_order, dtype=np.int64)
    weights = _pair_weights(ctx, j, k)
    return (weights < ctx.m).sum(axis=0), (weights > ctx.m).sum(axis=0)


def s0_closed_form(m: int) -> int:
    if m % 2:
        return 1 << (m - 1)
    return (1 << (m - 1)) - comb(m, m // 2) // 2


def verify_prop3(ctx: WeightContext) -> CheckReport:
    """|S_k| <= 2^(m-1), with equality exactly when m is odd and k = 0."""
    report = CheckReport(target="prop3", m=ctx.m)
    bound = ctx.half
    s_sizes, _ = _cardinalities(ctx)
    for k in np.flatnonzero(s_sizes > bound).tolist():
        report.record({"k": k, "size": int(s_sizes[k])})
    equality = np.flatnonzero(s_sizes == bound).tolist()
    expected = [0] if ctx.m % 2 else []
    if equality != expected:
        report.record({"equality_cases": equality, "expected": expected})
    if int(s_sizes[0]) != s0_closed_form(ctx.m):
        report.record({"k": 0, "size": int(s_sizes[0]), "closed_form": s0_closed_form(ctx.m)})
    report.details.update(max_card=int(s_sizes.max()), bound=bound, equality_cases=equality)
    return report


def verify_sk_symmetry(ctx: WeightContext) -> CheckReport:
    report = CheckReport(target="sk_symmetry", m=ctx.m)
    s_sizes, t_sizes = _cardinalities(ctx)
    limit = (1 << ctx.m) - 2
    for k in range(1, ctx.k_order):
        s, t = int(s_sizes[k]), int(t_sizes[k])
        if s != t or s + t > limit:
            report.record({"k": k, "s": s, "t": t})
    return report


__all__ = [
    "SkSet",
    "WeightContext",
    "exponent_to_pair",
    "pair_to_exponent",
    "s0_closed_form",
    "s_k",
    "t_k",
    "verify_lemma1",
    "verify_prop3",
    "verify_sk_symmetry",
    "wt_n",
    "wt_n_vec",
]
