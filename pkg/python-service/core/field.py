"""Exact arithmetic in GF(2^n), n = 2m, and the polar decomposition x = y*z.

Elements are polynomial-basis bit vectors: bit i is the coefficient of x^i.
Each field carries a designated primitive element ``alpha`` (the residue of
the indeterminate by default) and lazily built discrete-log tables.
"""

from __future__ import annotations

import logging
import threading
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.errors import DomainError, FieldMismatchError, InvalidArgumentError
from tools.gf2 import parity

logger = logging.getLogger(__name__)

# Conway polynomials over GF(2) for the even degrees we support.
CONWAY_POLYNOMIALS: Dict[int, int] = {
    2: 0b111,
    4: 0x13,
    6: 0x5B,
    8: 0x11D,
    10: 0x46F,
    12: 0x10EB,
    14: 0x40A9,
    16: 0x1002D,
    18: 0x41403,
    20: 0x1006F3,
}

MAX_DEGREE = 20


def _clmul_mod(a: int, b: int, n: int, modulus: int) -> int:
    result = 0
    top = 1 << n
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


def _clmul_const(values: np.ndarray, const: int, n: int, modulus: int) -> np.ndarray:
    """Multiply every element of ``values`` by the constant ``const``."""
    acc = np.zeros_like(values)
    shifted = values.copy()
    top = 1 << n
    for b in range(n):
        if (const >> b) & 1:
            acc ^= shifted
        shifted = shifted << 1
        shifted ^= np.where(shifted & top, modulus, 0).astype(shifted.dtype)
    return acc


def _poly_mod(a: int, b: int) -> int:
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


def is_irreducible(modulus: int) -> bool:
    """Trial division by every polynomial of degree <= deg/2."""
    degree = modulus.bit_length() - 1
    if degree < 1:
        return False
    for divisor in range(2, 1 << (degree // 2 + 1)):
        if _poly_mod(modulus, divisor) == 0:
            return False
    return True


@dataclass
class _FieldTables:
    exp: np.ndarray
    log: np.ndarray
    trace_mask: int


_TABLES: Dict[Tuple[int, int, int], _FieldTables] = {}
_TABLES_LOCK = threading.Lock()


@dataclass(frozen=True)
class FieldSpec:
    n: int
    modulus: int
    alpha: int = 0b10

    # ------------------------------------------------------------------
    # derived constants
    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def size(self) -> int:
        return 1 << self.n

    @property
    def order(self) -> int:
        return (1 << self.n) - 1

    @property
    def u_order(self) -> int:
        return (1 << self.m) + 1

    @property
    def subfield_order(self) -> int:
        return (1 << self.m) - 1

    @property
    def beta(self) -> "FieldElement":
        """Generator of GF(2^m)^*: alpha^(2^m+1)."""
        return self.alpha_power(self.u_order)

    @property
    def xi(self) -> "FieldElement":
        """Generator of U: alpha^(2^m-1)."""
        return self.alpha_power(self.subfield_order)

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    def describe_generator(self) -> str:
        return "x" if self.alpha == 0b10 else format(self.alpha, "b")

    # ------------------------------------------------------------------
    # tables
    # ------------------------------------------------------------------

    def _tables(self) -> _FieldTables:
        key = (self.n, self.modulus, self.alpha)
        tables = _TABLES.get(key)
        if tables is not None:
            return tables
        with _TABLES_LOCK:
            tables = _TABLES.get(key)
            if tables is None:
                tables = _build_tables(self)
                _TABLES[key] = tables
        return tables

    @property
    def exp_table(self) -> np.ndarray:
        """exp_table[k] = bits of alpha^k for 0 <= k < 2^n - 1."""
        return self._tables().exp

    @property
    def log_table(self) -> np.ndarray:
        """log_table[v] = k with alpha^k = v; -1 at v = 0."""
        return self._tables().log

    @property
    def trace_mask(self) -> int:
        """Bit i is tr(x^i); the absolute trace is the parity of ``v & trace_mask``."""
        return self._tables().trace_mask

    # ------------------------------------------------------------------
    # element helpers
    # ------------------------------------------------------------------

    def element(self, bits: int) -> "FieldElement":
        bits = int(bits)
        if bits < 0 or bits >= self.size:
            raise InvalidArgumentError(f"{bits} is not an element of GF(2^{self.n})")
        return FieldElement(bits, self)

    def elements(self) -> List["FieldElement"]:
        return [FieldElement(v, self) for v in range(self.size)]

    def alpha_power(self, k: int) -> "FieldElement":
        return FieldElement(int(self.exp_table[k % self.order]), self)

    def log(self, x: "FieldElement") -> int:
        self.check(x)
        if x.bits == 0:
            raise DomainError("discrete logarithm of 0 is undefined")
        return int(self.log_table[x.bits])

    def check(self, *elements: "FieldElement") -> None:
        for element in elements:
            if element.spec != self:
                raise FieldMismatchError(
                    f"element of GF(2^{element.spec.n}) mod {element.spec.modulus:b} used with "
                    f"GF(2^{self.n}) mod {self.modulus:b}"
                )

    def mul_vec(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Element-wise product of two bit arrays."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        log = self.log_table
        la, lb = log[a], log[b]
        out = self.exp_table[(la + lb) % self.order]
        return np.where((a == 0) | (b == 0), 0, out)

    def trace_vec(self, bits: np.ndarray) -> np.ndarray:
        return parity(np.asarray(bits, dtype=np.int64) & self.trace_mask)


def _build_tables(spec: FieldSpec) -> _FieldTables:
    n, modulus, alpha = spec.n, spec.modulus, spec.alpha
    order = spec.order
    exp = np.empty(order, dtype=np.int64)
    exp[0] = 1
    filled = 1
    power = alpha
    # doubling: exp[f:2f] = exp[0:f] * alpha^f
    while filled < order:
        take = min(filled, order - filled)
        exp[filled:filled + take] = _clmul_const(exp[:take], power, n, modulus)
        filled += take
        power = _clmul_mod(power, power, n, modulus)
    closing = _clmul_mod(int(exp[-1]), alpha, n, modulus)
    if closing != 1 or np.count_nonzero(exp == 1) != 1:
        raise InvalidArgumentError(
            f"alpha={alpha:b} is not primitive modulo {modulus:b}; cannot build GF(2^{n}) tables"
        )
    log = np.full(spec.size, -1, dtype=np.int64)
    log[exp] = np.arange(order, dtype=np.int64)

    trace_mask = 0
    for i in range(n):
        acc = 0
        x = 1 << i
        for _ in range(n):
            acc ^= x
            x = _clmul_mod(x, x, n, modulus)
        if acc not in (0, 1):
            raise InvalidArgumentError(f"trace of x^{i} left GF(2); modulus {modulus:b} is not irreducible")
        trace_mask |= acc << i
    logger.debug("Built GF(2^%d) tables (modulus=%s)", n, format(modulus, "b"))
    for arr in (exp, log):
        arr.setflags(write=False)
    return _FieldTables(exp=exp, log=log, trace_mask=trace_mask)


@dataclass(frozen=True)
class FieldElement:
    bits: int
    spec: FieldSpec

    def __add__(self, other: "FieldElement") -> "FieldElement":
        return add(self, other)

    __sub__ = __add__

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, other)

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        return mul(self, inv(other))

    def __pow__(self, exponent: int) -> "FieldElement":
        return power(self, exponent)

    def __bool__(self) -> bool:
        return self.bits != 0

    def __repr__(self) -> str:
        return f"FieldElement({self.bits:#x}, n={self.spec.n})"


@dataclass(frozen=True)
class PolarPair:
    y: FieldElement
    z: FieldElement


def conway_modulus(n: int) -> int:
    if n % 2:
        raise InvalidArgumentError(f"n must be even, got {n}")
    try:
        return CONWAY_POLYNOMIALS[n]
    except KeyError:
        raise InvalidArgumentError(f"no modulus table entry for n={n} (supported: 2..{MAX_DEGREE}, even)") from None


def make_field(n: int, modulus: Optional[int] = None, alpha: int = 0b10) -> FieldSpec:
    """GF(2^n) for even n, with the Conway polynomial unless a modulus is given."""
    if n % 2:
        raise InvalidArgumentError(f"n must be even, got {n}")
    if modulus is None:
        modulus = conway_modulus(n)
    elif modulus.bit_length() - 1 != n:
        raise InvalidArgumentError(f"modulus {modulus:b} does not have degree {n}")
    if not 2 <= n <= MAX_DEGREE:
        raise InvalidArgumentError(f"no modulus table entry for n={n} (supported: 2..{MAX_DEGREE}, even)")
    spec = FieldSpec(n=n, modulus=modulus, alpha=alpha)
    spec._tables()  # rejects non-primitive generators up front
    return spec


def verify_field(spec: FieldSpec) -> bool:
    """Irreducible modulus and alpha of order exactly 2^n - 1."""
    if not is_irreducible(spec.modulus):
        return False
    order = spec.order
    prime_factors = _prime_factors(order)
    alpha = spec.element(spec.alpha)
    if power(alpha, order) != spec.one:
        return False
    return all(power(alpha, order // p) != spec.one for p in prime_factors)


def _prime_factors(value: int) -> List[int]:
    factors: List[int] = []
    d = 2
    while d * d <= value:
        if value % d == 0:
            factors.append(d)
            while value % d == 0:
                value //= d
        d += 1
    if value > 1:
        factors.append(value)
    return factors


# ----------------------------------------------------------------------
# arithmetic
# ----------------------------------------------------------------------


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    a.spec.check(b)
    return FieldElement(a.bits ^ b.bits, a.spec)


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    spec = a.spec
    spec.check(b)
    if a.bits == 0 or b.bits == 0:
        return spec.zero
    log = spec.log_table
    return FieldElement(int(spec.exp_table[(int(log[a.bits]) + int(log[b.bits])) % spec.order]), spec)


def inv(a: FieldElement) -> FieldElement:
    if a.bits == 0:
        raise ZeroDivisionError("inverse of 0 in GF(2^n)")
    spec = a.spec
    return FieldElement(int(spec.exp_table[(-int(spec.log_table[a.bits])) % spec.order]), spec)


def power(a: FieldElement, exponent: int) -> FieldElement:
    spec = a.spec
    if a.bits == 0:
        if exponent < 0:
            raise ZeroDivisionError("negative power of 0 in GF(2^n)")
        return spec.one if exponent == 0 else spec.zero
    k = int(spec.log_table[a.bits]) * exponent
    return FieldElement(int(spec.exp_table[k % spec.order]), spec)


def sqrt(a: FieldElement) -> FieldElement:
    return power(a, 1 << (a.spec.n - 1))


def frobenius(a: FieldElement, k: int) -> FieldElement:
    return power(a, 1 << (k % a.spec.n))


def trace(x: FieldElement, to_degree: int = 1) -> int:
    """Absolute trace tr_1^n(x)."""
    if to_degree != 1:
        raise InvalidArgumentError("only the absolute trace (to_degree=1) is supported")
    return int(bin(x.bits & x.spec.trace_mask).count("1") & 1)


def is_in_subfield(x: FieldElement) -> bool:
    return frobenius(x, x.spec.m) == x


def is_in_u(z: FieldElement) -> bool:
    return z.bits != 0 and power(z, z.spec.u_order) == z.spec.one


def subfield_trace(x: FieldElement) -> int:
    """tr_1^m(x) for x in GF(2^m), computed inside GF(2^n)."""
    if not is_in_subfield(x):
        raise DomainError(f"{x!r} is not in the subfield GF(2^{x.spec.m})")
    acc = x.spec.zero
    y = x
    for _ in range(x.spec.m):
        acc = acc + y
        y = y * y
    if acc.bits not in (0, 1):
        raise DomainError(f"subfield trace of {x!r} left GF(2)")
    return acc.bits


def polar_decompose(x: FieldElement) -> PolarPair:
    """x = y*z with y in GF(2^m)^* and z in U."""
    if x.bits == 0:
        raise DomainError("0 has no polar decomposition")
    spec = x.spec
    y = sqrt(power(x, spec.u_order))
    z = x * inv(y)
    return PolarPair(y=y, z=z)


def subgroup_u(spec: FieldSpec) -> List[FieldElement]:
    """[xi^0, xi^1, ..., xi^(2^m)]."""
    step = spec.subfield_order
    return [spec.alpha_power(step * k) for k in range(spec.u_order)]


def subfield_elements(spec: FieldSpec) -> List[FieldElement]:
    """0 followed by beta^0, beta^1, ..., beta^(2^m-2)."""
    step = spec.u_order
    return [spec.zero] + [spec.alpha_power(step * t) for t in range(spec.subfield_order)]


__all__ = [
    "CONWAY_POLYNOMIALS",
    "FieldElement",
    "FieldSpec",
    "PolarPair",
    "add",
    "conway_modulus",
    "frobenius",
    "inv",
    "is_in_subfield",
    "is_in_u",
    "is_irreducible",
    "make_field",
    "mul",
    "polar_decompose",
    "power",
    "sqrt",
    "subfield_elements",
    "subfield_trace",
    "subgroup_u",
    "trace",
    "verify_field",
]
