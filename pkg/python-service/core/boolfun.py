"""Boolean-function representations and the conversions between them.

A point v in [0, 2^n) is the field element whose polynomial-basis
coordinates are the bits of v (bit i <-> coefficient of x^i).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Optional

import numpy as np

from app.errors import FieldMismatchError, InvalidArgumentError
from core.field import FieldElement, FieldSpec
from core.spectra import WeightContext, exponent_to_pair, pair_to_exponent
from tools.gf2 import moebius, popcount

logger = logging.getLogger(__name__)

_INTERPOLATION_CHUNK = 1 << 22


def _frozen(values: np.ndarray, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruthTable:
    n: int
    bits: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.bits)
        if arr.shape != (1 << self.n,):
            raise InvalidArgumentError(f"truth table of {self.n} variables needs {1 << self.n} entries, got {arr.shape}")
        if arr.size and int(arr.max(initial=0)) > 1:
            raise InvalidArgumentError("truth table entries must be 0 or 1")
        object.__setattr__(self, "bits", _frozen(arr, np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TruthTable):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash((self.n, self.bits.tobytes()))

    @classmethod
    def zeros(cls, n: int) -> "TruthTable":
        return cls(n, np.zeros(1 << n, dtype=np.uint8))

    @classmethod
    def from_indices(cls, n: int, indices: Iterable[int]) -> "TruthTable":
        bits = np.zeros(1 << n, dtype=np.uint8)
        idx = np.fromiter((int(v) for v in indices), dtype=np.int64)
        if idx.size:
            if idx.min() < 0 or idx.max() >= (1 << n):
                raise InvalidArgumentError(f"support index out of range for n={n}")
            bits[idx] = 1
        return cls(n, bits)

    @property
    def weight(self) -> int:
        return int(self.bits.sum(dtype=np.int64))

    def is_balanced(self) -> bool:
        return 2 * self.weight == (1 << self.n)

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.bits)

    def complement(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ 1)

    def __call__(self, point: int) -> int:
        return int(self.bits[point])

    def __mul__(self, other: "TruthTable") -> "TruthTable":
        if other.n != self.n:
            raise InvalidArgumentError("product of tables with different variable counts")
        return TruthTable(self.n, self.bits & other.bits)

    def to_int(self) -> int:
        packed = np.packbits(self.bits, bitorder="little")
        return int.from_bytes(packed.tobytes(), "little")

    def hex(self) -> str:
        digits = max(1, (1 << self.n) // 4)
        return format(self.to_int(), f"0{digits}x")

    @classmethod
    def from_hex(cls, n: int, payload: str) -> "TruthTable":
        digits = max(1, (1 << n) // 4)
        if len(payload) != digits:
            raise InvalidArgumentError(f"payload for n={n} must have {digits} hex digits, got {len(payload)}")
        value = int(payload, 16)
        if value >> (1 << n):
            raise InvalidArgumentError(f"payload has bits beyond 2^{n} points")
        size = 1 << n
        raw = value.to_bytes(max(1, size // 8), "little")
        bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
        return cls(n, bits)


@dataclass(frozen=True, eq=False)
class AnfForm:
    n: int
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs)
        if arr.shape != (1 << self.n,):
            raise InvalidArgumentError(f"ANF of {self.n} variables needs {1 << self.n} coefficients")
        object.__setattr__(self, "coeffs", _frozen(arr & 1, np.uint8))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnfForm):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.n, self.coeffs.tobytes()))

    @property
    def degree(self) -> int:
        masks = np.flatnonzero(self.coeffs)
        if masks.size == 0:
            return 0
        return int(popcount(masks).max())

    def monomials(self) -> List[int]:
        return [int(v) for v in np.flatnonzero(self.coeffs)]

    def evaluate(self, point: int) -> int:
        """Sum of a_I over I contained in ``point``."""
        masks = np.flatnonzero(self.coeffs)
        return int(np.count_nonzero((masks & point) == masks) & 1)

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def hex(self) -> str:
        return TruthTable(self.n, self.coeffs).hex()

    def describe(self) -> str:
        terms = []
        for mask in self.monomials():
            if mask == 0:
                terms.append("1")
            else:
                terms.append("*".join(f"x{i + 1}" for i in range(self.n) if (mask >> i) & 1))
        return " + ".join(terms) if terms else "0"


def anf_of(tt: TruthTable) -> AnfForm:
    return AnfForm(tt.n, moebius(tt.bits))


def tt_of(anf: AnfForm) -> TruthTable:
    return TruthTable(anf.n, moebius(anf.coeffs))


def algebraic_degree(tt: TruthTable) -> int:
    return anf_of(tt).degree


def from_support(spec: FieldSpec, support: Iterable[FieldElement]) -> TruthTable:
    indices = []
    for element in support:
        spec.check(element)
        indices.append(element.bits)
    return TruthTable.from_indices(spec.n, indices)


# ----------------------------------------------------------------------
# univariate representation
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class UnivariateForm:
    """f(x) = sum_i f_i x^i; ``coeffs[i]`` holds the bits of f_i."""

    spec: FieldSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.coeffs)
        if arr.shape != (self.spec.size,):
            raise InvalidArgumentError(f"univariate form over GF(2^{self.spec.n}) needs {self.spec.size} coefficients")
        object.__setattr__(self, "coeffs", _frozen(arr, np.int64))

    @property
    def n(self) -> int:
        return self.spec.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UnivariateForm):
            return NotImplemented
        return self.spec == other.spec and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.spec, self.coeffs.tobytes()))

    def coefficient(self, i: int) -> FieldElement:
        return FieldElement(int(self.coeffs[i]), self.spec)

    def nonzero_indices(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    def satisfies_frobenius_closure(self) -> bool:
        """f_{2i mod (2^n-1)} = f_i^2 for 1 <= i <= 2^n-2 and f_0, f_{2^n-1} in {0,1}."""
        spec = self.spec
        order = spec.order
        if self.coeffs[0] not in (0, 1) or self.coeffs[order] not in (0, 1):
            return False
        i = np.arange(1, order, dtype=np.int64)
        squared = spec.mul_vec(self.coeffs[i], self.coeffs[i])
        return bool(np.array_equal(self.coeffs[(2 * i) % order], squared))


def _cyclotomic_leaders(order: int, n: int) -> np.ndarray:
    seen = np.zeros(order, dtype=bool)
    leaders: List[int] = []
    for i in range(1, order):
        if seen[i]:
            continue
        leaders.append(i)
        j = i
        for _ in range(n):
            seen[j] = True
            j = (2 * j) % order
    return np.array(leaders, dtype=np.int64)


def _mattson_solomon(spec: FieldSpec, logs: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """sum over t in ``logs`` of alpha^(-i t), for every i in ``indices``."""
    out = np.zeros(indices.size, dtype=np.int64)
    if logs.size == 0 or indices.size == 0:
        return out
    exp = spec.exp_table
    order = spec.order
    rows = max(1, _INTERPOLATION_CHUNK // logs.size)
    for start in range(0, indices.size, rows):
        block = indices[start:start + rows]
        exps = (-np.outer(block, logs)) % order
        out[start:start + rows] = np.bitwise_xor.reduce(exp[exps], axis=1)
    return out


def univariate_interpolate(tt: TruthTable, spec: FieldSpec, *, use_cyclotomic: bool = True) -> UnivariateForm:
    """Coefficients f_i = sum_{c != 0} f(c) c^(-i) with f_0 = f(0) and f_{2^n-1} = wt(f) mod 2.

    With ``use_cyclotomic`` only one index per cyclotomic coset is summed and
    the rest follow from f_{2i} = f_i^2.
    """
    if tt.n != spec.n:
        raise FieldMismatchError(f"table has {tt.n} variables but the field is GF(2^{spec.n})")
    order = spec.order
    support = tt.support()
    logs = spec.log_table[support[support != 0]]
    coeffs = np.zeros(spec.size, dtype=np.int64)
    coeffs[0] = tt(0)
    coeffs[order] = tt.weight & 1
    if use_cyclotomic:
        leaders = _cyclotomic_leaders(order, spec.n)
        values = _mattson_solomon(spec, logs, leaders)
        positions = leaders.copy()
        # cosets shorter than n wrap onto themselves with the same values
        for _ in range(spec.n):
            coeffs[positions] = values
            positions = (2 * positions) % order
            values = spec.mul_vec(values, values)
    else:
        indices = np.arange(1, order, dtype=np.int64)
        coeffs[1:order] = _mattson_solomon(spec, logs, indices)
    return UnivariateForm(spec, coeffs)


def evaluate_univariate(uf: UnivariateForm) -> np.ndarray:
    """Value of the polynomial at every point, as field-element bits."""
    spec = uf.spec
    order = spec.order
    values = np.zeros(spec.size, dtype=np.int64)
    values[0] = uf.coeffs[0]
    idx = uf.nonzero_indices()
    if idx.size == 0:
        return values
    coeff_logs = spec.log_table[uf.coeffs[idx]]
    points = np.arange(1, spec.size, dtype=np.int64)
    point_logs = spec.log_table[points]
    rows = max(1, _INTERPOLATION_CHUNK // idx.size)
    for start in range(0, points.size, rows):
        block = point_logs[start:start + rows]
        exps = (coeff_logs[None, :] + np.outer(block, idx)) % order
        values[1 + start:1 + start + block.size] = np.bitwise_xor.reduce(spec.exp_table[exps], axis=1)
    return values


def truth_table_of(uf: UnivariateForm) -> TruthTable:
    values = evaluate_univariate(uf)
    if values.max(initial=0) > 1:
        raise InvalidArgumentError("polynomial takes values outside GF(2); not a Boolean function")
    return TruthTable(uf.n, values.astype(np.uint8))


def univariate_degree(uf: UnivariateForm) -> int:
    idx = uf.nonzero_indices()
    if idx.size == 0:
        return 0
    return int(popcount(idx).max())


# ----------------------------------------------------------------------
# bivariate (polar) representation
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BivariateCoeffs:
    """f'(y, z) = sum_{j,k} f'_{j,k} y^j z^k on the nonzero points, plus f(0)."""

    spec: FieldSpec
    grid: np.ndarray
    constant: int

    def __post_init__(self) -> None:
        shape = (self.spec.subfield_order, self.spec.u_order)
        if np.asarray(self.grid).shape != shape:
            raise InvalidArgumentError(f"bivariate grid must have shape {shape}")
        object.__setattr__(self, "grid", _frozen(self.grid, np.int64))

    @property
    def m(self) -> int:
        return self.spec.m

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BivariateCoeffs):
            return NotImplemented
        return (
            self.spec == other.spec
            and self.constant == other.constant
            and bool(np.array_equal(self.grid, other.grid))
        )

    def __hash__(self) -> int:
        return hash((self.spec, self.constant, self.grid.tobytes()))


def _pair_exponents(spec: FieldSpec) -> np.ndarray:
    ctx = WeightContext(spec.m)
    j = np.arange(spec.subfield_order, dtype=np.int64)[:, None]
    k = np.arange(spec.u_order, dtype=np.int64)[None, :]
    return (ctx.half * ((spec.u_order * j) + (spec.subfield_order * k))) % spec.order


def bivariate_of(uf: UnivariateForm) -> BivariateCoeffs:
    """grid[j, k] = f'_i with i = 2^(m-1)((2^m+1)j + (2^m-1)k) mod 2^n-1."""
    spec = uf.spec
    if spec.n % 2:
        raise InvalidArgumentError("the polar representation needs an even number of variables")
    order = spec.order
    primed = np.array(uf.coeffs[:order], dtype=np.int64)
    # f'_0 = f_0 + f_{2^n-1}
    primed[0] = uf.coeffs[0] ^ uf.coeffs[order]
    grid = primed[_pair_exponents(spec)]
    return BivariateCoeffs(spec=spec, grid=grid, constant=int(uf.coeffs[0]))


def univariate_of(bc: BivariateCoeffs) -> UnivariateForm:
    spec = bc.spec
    order = spec.order
    coeffs = np.zeros(spec.size, dtype=np.int64)
    coeffs[_pair_exponents(spec).ravel()] = bc.grid.ravel()
    coeffs[0] = bc.constant
    coeffs[order] = bc.constant ^ int(bc.grid[0, 0])
    return UnivariateForm(spec, coeffs)


def bivariate_coefficient(bc: BivariateCoeffs, i: int) -> FieldElement:
    j, k = exponent_to_pair(i, WeightContext(bc.m))
    return FieldElement(int(bc.grid[j, k]), bc.spec)


# ----------------------------------------------------------------------
# input transforms
# ----------------------------------------------------------------------


def frobenius_twist(tt: TruthTable, spec: FieldSpec, k: int) -> TruthTable:
    """Table whose support is {x^(2^k) : x in Supp(tt)}."""
    if tt.n != spec.n:
        raise FieldMismatchError(f"table has {tt.n} variables but the field is GF(2^{spec.n})")
    support = tt.support()
    nonzero = support[support != 0]
    shift = 1 << (k % spec.n)
    images = spec.exp_table[(spec.log_table[nonzero] * shift) % spec.order]
    indices = images.tolist() + ([0] if tt(0) else [])
    return TruthTable.from_indices(tt.n, indices)


def affine_transform(tt: TruthTable, matrix: np.ndarray, shift: int = 0) -> TruthTable:
    """g(v) = f(A v + b) with A an invertible n x n GF(2) matrix acting on index bits."""
    n = tt.n
    a = np.asarray(matrix, dtype=np.int64) & 1
    if a.shape != (n, n):
        raise InvalidArgumentError(f"matrix must be {n}x{n}")
    points = np.arange(1 << n, dtype=np.int64)
    bits = (points[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1
    image_bits = (bits @ a.T) & 1
    images = (image_bits << np.arange(n, dtype=np.int64)[None, :]).sum(axis=1) ^ shift
    return TruthTable(n, tt.bits[images])


def random_table(n: int, rng: Optional[np.random.Generator] = None) -> TruthTable:
    rng = rng or np.random.default_rng()
    return TruthTable(n, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


__all__ = [
    "AnfForm",
    "BivariateCoeffs",
    "TruthTable",
    "UnivariateForm",
    "affine_transform",
    "algebraic_degree",
    "anf_of",
    "bivariate_coefficient",
    "bivariate_of",
    "evaluate_univariate",
    "from_support",
    "frobenius_twist",
    "random_table",
    "truth_table_of",
    "tt_of",
    "univariate_degree",
    "univariate_interpolate",
    "univariate_of",
]
