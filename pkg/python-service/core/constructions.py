"""Function families built from the polar decomposition GF(2^2m)* = GF(2^m)* x U.

All supports are assembled on discrete logarithms: beta = alpha^(2^m+1)
generates GF(2^m)* and xi = alpha^(2^m-1) generates U, so
beta^t * xi^k = alpha^((2^m+1)t + (2^m-1)k).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.errors import InvalidArgumentError
from app.state import CheckReport
from core.boolfun import TruthTable, UnivariateForm
from core.field import FieldElement, FieldSpec, is_in_u

logger = logging.getLogger(__name__)


class Family(str, Enum):
    C1 = "c1"
    C1_SHIFT = "c1shift"
    C2 = "c2"
    C2_ALT = "c2alt"
    C2_GENERAL = "c2general"
    CARLET_FENG = "cf"

    @classmethod
    def parse(cls, value: str) -> "Family":
        key = value.strip().lower().replace("-", "").replace("_", "")
        for member in cls:
            if member.value == key or member.name.lower().replace("_", "") == key:
                return member
        raise InvalidArgumentError(f"unknown family '{value}'; expected one of {', '.join(m.value for m in cls)}")


def _require_even(spec: FieldSpec) -> None:
    if spec.n % 2 or spec.m < 2:
        raise InvalidArgumentError(f"construction needs n = 2m with m >= 2, got n={spec.n}")


def _product_logs(spec: FieldSpec, ts: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """Logs of beta^t * xi^k for every (t, k) pair."""
    grid = spec.u_order * ts[:, None] + spec.subfield_order * ks[None, :]
    return (grid % spec.order).ravel()


def _table_from_logs(spec: FieldSpec, *log_groups: np.ndarray, include_zero: bool = False) -> TruthTable:
    logs = np.concatenate([np.asarray(g, dtype=np.int64).ravel() for g in log_groups])
    bits = np.zeros(spec.size, dtype=np.uint8)
    bits[spec.exp_table[logs % spec.order]] = 1
    if include_zero:
        bits[0] = 1
    return TruthTable(spec.n, bits)


def construction1(spec: FieldSpec, s: int = 0) -> TruthTable:
    """Supp = {beta^(s+t) z : 0 <= t < 2^(m-1), z in U}."""
    _require_even(spec)
    if not 0 <= s <= spec.subfield_order - 1:
        raise InvalidArgumentError(f"shift must lie in [0, {spec.subfield_order - 1}], got {s}")
    half = 1 << (spec.m - 1)
    ts = np.arange(s, s + half, dtype=np.int64)
    ks = np.arange(spec.u_order, dtype=np.int64)
    return _table_from_logs(spec, _product_logs(spec, ts, ks))


def _balanced_c2(spec: FieldSpec, gamma: np.ndarray, pivot: int, lambda_logs: np.ndarray) -> TruthTable:
    ks = np.arange(spec.u_order, dtype=np.int64)
    head = _product_logs(spec, gamma, ks)
    tail = (spec.u_order * pivot + lambda_logs) % spec.order
    table = _table_from_logs(spec, head, tail)
    if not table.is_balanced():
        raise InvalidArgumentError("support overlaps; the lambda set must consist of distinct elements of U")
    return table


def _lambda_logs(spec: FieldSpec) -> np.ndarray:
    half = 1 << (spec.m - 1)
    return spec.subfield_order * np.arange(half + 1, dtype=np.int64)


def construction2(spec: FieldSpec) -> TruthTable:
    """Supp = {beta^t z : 1 <= t < 2^(m-1), z in U} + {xi^k : 0 <= k <= 2^(m-1)}."""
    _require_even(spec)
    half = 1 << (spec.m - 1)
    return _balanced_c2(spec, np.arange(1, half, dtype=np.int64), 0, _lambda_logs(spec))


def construction2_alt(spec: FieldSpec) -> TruthTable:
    """Gamma moved to {1, ..., beta^(2^(m-1)-2)}; Lambda sits over beta^(2^(m-1)-1)."""
    _require_even(spec)
    half = 1 << (spec.m - 1)
    return _balanced_c2(spec, np.arange(0, half - 1, dtype=np.int64), half - 1, _lambda_logs(spec))


def construction2_general(spec: FieldSpec, lambda_prime: Iterable[FieldElement]) -> TruthTable:
    _require_even(spec)
    chosen = list(lambda_prime)
    half = 1 << (spec.m - 1)
    if len(chosen) != half + 1:
        raise InvalidArgumentError(
            f"lambda' must have exactly 2^(m-1)+1 = {half + 1} elements, got {len(chosen)}"
        )
    spec.check(*chosen)
    outside = [z for z in chosen if not is_in_u(z)]
    if outside:
        raise InvalidArgumentError(f"lambda' elements must lie in U; {outside[0]!r} does not")
    if len({z.bits for z in chosen}) != len(chosen):
        raise InvalidArgumentError("lambda' elements must be distinct")
    logs = spec.log_table[np.array([z.bits for z in chosen], dtype=np.int64)]
    return _balanced_c2(spec, np.arange(1, half, dtype=np.int64), 0, logs)


def carlet_feng(spec: FieldSpec) -> TruthTable:
    """Supp = {0, 1, alpha, ..., alpha^(2^(n-1)-2)}."""
    logs = np.arange((1 << (spec.n - 1)) - 1, dtype=np.int64)
    return _table_from_logs(spec, logs, include_zero=True)


def sample_lambda_prime(spec: FieldSpec, seed: Optional[int] = None) -> List[FieldElement]:
    _require_even(spec)
    rng = np.random.default_rng(seed)
    half = 1 << (spec.m - 1)
    ks = np.sort(rng.choice(spec.u_order, size=half + 1, replace=False))
    return [spec.alpha_power(spec.subfield_order * int(k)) for k in ks]


def support_sets(spec: FieldSpec) -> Dict[str, FrozenSet[int]]:
    """Gamma, Delta, Lambda and U as sets of element bits."""
    _require_even(spec)
    half = 1 << (spec.m - 1)
    exp = spec.exp_table

    def bits_of(logs: np.ndarray) -> FrozenSet[int]:
        return frozenset(exp[logs % spec.order].tolist())

    return {
        "gamma": bits_of(spec.u_order * np.arange(1, half, dtype=np.int64)),
        "delta": bits_of(spec.u_order * np.arange(half, dtype=np.int64)),
        "lambda": bits_of(_lambda_logs(spec)),
        "u": bits_of(spec.subfield_order * np.arange(spec.u_order, dtype=np.int64)),
    }


# ----------------------------------------------------------------------
# closed-form univariate representation
# ----------------------------------------------------------------------


def _div(spec: FieldSpec, num: np.ndarray, den: np.ndarray) -> np.ndarray:
    log = spec.log_table
    out = spec.exp_table[(log[num] - log[den]) % spec.order]
    return np.where(num == 0, 0, out)


def closed_form_coeffs(spec: FieldSpec) -> UnivariateForm:
    """Coefficients F_i of the balanced function from its two geometric-sum cases.

    For (2^m+1) not dividing i only the Lambda part contributes,
    (1 - w^(2^(m-1)+1)) / (1 - w) with w = alpha^(-i 2^(m-1) (2^m-1)).
    Otherwise F_i = 1 + a (1 - a^(2^(m-1)-1)) / (1 - a) with a = alpha^-i.
    The exponent indexing places the support at x -> x^(2^(m-1)) of
    ``construction2``.
    """
    _require_even(spec)
    order = spec.order
    exp = spec.exp_table
    half = 1 << (spec.m - 1)
    i = np.arange(1, order, dtype=np.int64)
    divisible = (i % spec.u_order) == 0

    w_log = (-i * half * spec.subfield_order) % order
    w = exp[w_log]
    lam_num = 1 ^ exp[(w_log * (half + 1)) % order]
    lam_den = 1 ^ w
    if np.any(lam_den[~divisible] == 0):
        raise ArithmeticError("vanishing denominator outside the divisible branch")
    lam_part = np.where(divisible, 1, _div(spec, lam_num, np.where(lam_den == 0, 1, lam_den)))

    idx = i[divisible]
    a_log = (-idx) % order
    a = exp[a_log]
    num = 1 ^ exp[(a_log * (half - 1)) % order]
    den = 1 ^ a
    quotient = spec.mul_vec(a, _div(spec, num, den))
    singular = num == 0
    if singular.any():
        t = np.arange(1, half, dtype=np.int64)
        explicit = exp[(a_log[singular, None] * t[None, :]) % order]
        quotient[singular] = np.bitwise_xor.reduce(explicit, axis=1) if t.size else 0
    gamma_part = np.zeros(i.size, dtype=np.int64)
    gamma_part[divisible] = quotient

    coeffs = np.zeros(spec.size, dtype=np.int64)
    coeffs[1:order] = lam_part ^ gamma_part
    return UnivariateForm(spec, coeffs)


# ----------------------------------------------------------------------
# family registry
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    family: Family
    m: int
    shift: int = 0
    lambda_prime: Optional[Tuple[int, ...]] = None
    lambda_seed: Optional[int] = None

    def __post_init__(self) -> None:
        if self.shift and self.family is not Family.C1_SHIFT:
            raise InvalidArgumentError(f"family {self.family.value} takes no shift")
        if self.family is not Family.C2_GENERAL and (self.lambda_prime is not None or self.lambda_seed is not None):
            raise InvalidArgumentError(f"family {self.family.value} takes no lambda' set or seed")
        if self.lambda_prime is not None and self.lambda_seed is not None:
            raise InvalidArgumentError("give either an explicit lambda' set or a seed, not both")

    def resolve_lambda(self, spec: FieldSpec) -> List[FieldElement]:
        if self.lambda_prime is not None:
            return [spec.element(v) for v in self.lambda_prime]
        return sample_lambda_prime(spec, self.lambda_seed)

    def build(self, spec: FieldSpec) -> TruthTable:
        if spec.n != 2 * self.m:
            raise InvalidArgumentError(f"family spec has m={self.m} but the field has n={spec.n}")
        if self.family is Family.C2_GENERAL:
            return construction2_general(spec, self.resolve_lambda(spec))
        if self.family is Family.C1_SHIFT:
            return construction1(spec, self.shift)
        return _BUILDERS[self.family](spec)

    def describe(self) -> str:
        if self.family is Family.C1_SHIFT:
            return f"{self.family.value}:s={self.shift}"
        if self.family is Family.C2_GENERAL:
            if self.lambda_prime is not None:
                return f"{self.family.value}:lambda=" + ",".join(format(v, "x") for v in self.lambda_prime)
            return f"{self.family.value}:seed={self.lambda_seed}"
        return self.family.value


_BUILDERS: Dict[Family, Callable[[FieldSpec], TruthTable]] = {
    Family.C1: construction1,
    Family.C2: construction2,
    Family.C2_ALT: construction2_alt,
    Family.CARLET_FENG: carlet_feng,
}


def registry() -> Sequence[Family]:
    return tuple(Family)


def verify_weights(spec: FieldSpec, seed: Optional[int] = None) -> CheckReport:
    """Weights of every family and the Delta x U versus Construction 2 set algebra."""
    _require_even(spec)
    m = spec.m
    report = CheckReport(target="weight", m=m)
    balanced = 1 << (spec.n - 1)
    expected = {
        "c1": balanced + (1 << (m - 1)),
        "c2": balanced,
        "c2alt": balanced,
        "c2general": balanced,
        "cf": balanced,
    }
    tables = {
        "c1": construction1(spec),
        "c2": construction2(spec),
        "c2alt": construction2_alt(spec),
        "c2general": construction2_general(spec, sample_lambda_prime(spec, seed)),
        "cf": carlet_feng(spec),
    }
    weights = {name: table.weight for name, table in tables.items()}
    for name, weight in weights.items():
        if weight != expected[name]:
            report.record({"family": name, "weight": weight, "expected": expected[name]})
    sets = support_sets(spec)
    c1 = frozenset(tables["c1"].support().tolist())
    c2 = frozenset(tables["c2"].support().tolist())
    if not c2 <= c1 or c1 - c2 != sets["u"] - sets["lambda"]:
        report.record({"set_algebra": "c1 minus c2 differs from U minus Lambda"})
    report.details["weights"] = weights
    return report


__all__ = [
    "Family",
    "FamilySpec",
    "carlet_feng",
    "closed_form_coeffs",
    "construction1",
    "construction2",
    "construction2_alt",
    "construction2_general",
    "registry",
    "sample_lambda_prime",
    "support_sets",
    "verify_weights",
]

