"""Cryptographic metrics of Boolean functions and the character-sum checks behind them.

Annihilator and fast-algebraic-attack systems are assembled as bit-packed
GF(2) matrices and reduced with :mod:`tools.gf2`; monomials are ordered by
(degree, mask) so witnesses are deterministic.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.config import get_settings
from app.errors import DomainError, InvalidArgumentError, ResourceCapError
from app.state import CheckReport
from core.boolfun import (
    AnfForm,
    TruthTable,
    anf_of,
    frobenius_twist,
    univariate_degree,
    univariate_interpolate,
)
from core.constructions import (
    closed_form_coeffs,
    construction1,
    construction2,
    construction2_alt,
    construction2_general,
    sample_lambda_prime,
)
from core.field import FieldElement, FieldSpec, is_in_subfield, make_field
from tools.gf2 import EchelonForm, monomials_up_to, moebius, pack_rows, popcount, row_reduce, walsh_butterfly

logger = logging.getLogger(__name__)

LN2_OVER_PI = math.log(2) / math.pi
_COLUMN_CHUNK = 512


# ----------------------------------------------------------------------
# Walsh spectrum and nonlinearity
# ----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    n: int
    values: np.ndarray

    @property
    def max_abs(self) -> int:
        return int(np.abs(self.values).max())

    def parseval_holds(self) -> bool:
        return int(np.square(self.values.astype(np.int64)).sum()) == 1 << (2 * self.n)

    def __getitem__(self, point: int) -> int:
        return int(self.values[point])


def walsh_spectrum(tt: TruthTable) -> WalshSpectrum:
    signs = 1 - 2 * tt.bits.astype(np.int32)
    return WalshSpectrum(tt.n, walsh_butterfly(signs))


def _trace_dual_points(spec: FieldSpec) -> np.ndarray:
    """mu(lambda) with tr(lambda x) = mu(lambda) . x on coordinates."""
    lambdas = np.arange(spec.size, dtype=np.int64)
    mu = np.zeros(spec.size, dtype=np.int64)
    for i in range(spec.n):
        basis = np.full(spec.size, 1 << i, dtype=np.int64)
        mu |= spec.trace_vec(spec.mul_vec(lambdas, basis)).astype(np.int64) << i
    return mu


def walsh_spectrum_trace(tt: TruthTable, spec: FieldSpec) -> WalshSpectrum:
    """Spectrum under the trace form sum (-1)^(f(x) + tr(lambda x))."""
    if tt.n != spec.n:
        raise InvalidArgumentError(f"table has {tt.n} variables but the field is GF(2^{spec.n})")
    dot = walsh_spectrum(tt)
    return WalshSpectrum(tt.n, dot.values[_trace_dual_points(spec)])


def nonlinearity(tt: TruthTable) -> int:
    return (1 << (tt.n - 1)) - walsh_spectrum(tt).max_abs // 2


# ----------------------------------------------------------------------
# algebraic immunity
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class AiCertificate:
    ai: int
    side: str  # "f" or "f+1"
    witness: AnfForm

    def to_dict(self) -> Dict[str, object]:
        return {"ai": self.ai, "side": self.side, "witness_anf": self.witness.hex()}


def _evaluation_matrix(points: np.ndarray, monomials: np.ndarray) -> np.ndarray:
    """Packed matrix M[p, c] = [monomials[c] is contained in points[p]]."""
    words = max(1, -(-monomials.size // 64))
    packed = np.zeros((points.size, words), dtype=np.uint64)
    for start in range(0, monomials.size, _COLUMN_CHUNK):
        block = monomials[start:start + _COLUMN_CHUNK]
        dense = (points[:, None] & block[None, :]) == block[None, :]
        chunk = pack_rows(dense)
        first = start // 64
        packed[:, first:first + chunk.shape[1]] = chunk
    return packed


def _witness(n: int, monomials: np.ndarray, vector: np.ndarray) -> AnfForm:
    coeffs = np.zeros(1 << n, dtype=np.uint8)
    coeffs[monomials[np.flatnonzero(vector)]] = 1
    return AnfForm(n, coeffs)


def algebraic_immunity(tt: TruthTable, max_monomials: Optional[int] = None) -> AiCertificate:
    """Smallest d such that f or f+1 has a nonzero annihilator of degree d."""
    cap = max_monomials if max_monomials is not None else get_settings().caps.max_monomials
    n = tt.n
    sides = (("f", tt.support()), ("f+1", np.flatnonzero(tt.bits == 0)))
    for d in range(n + 1):
        monomials = monomials_up_to(n, d)
        if monomials.size > cap:
            raise ResourceCapError("ai", int(monomials.size), cap, unit="monomials")
        for side, points in sides:
            if points.size == 0:
                return AiCertificate(ai=0, side=side, witness=_witness(n, monomials[:1], np.ones(1, np.uint8)))
            echelon = row_reduce(_evaluation_matrix(points.astype(np.int64), monomials), monomials.size)
            if echelon.nullity:
                free = echelon.free_columns()[0]
                witness = _witness(n, monomials, echelon.kernel_vector(free))
                logger.debug("AI=%d reached on side %s (n=%d)", d, side, n)
                return AiCertificate(ai=d, side=side, witness=witness)
    raise AssertionError("the constant function 1 always annihilates f or f+1")


# ----------------------------------------------------------------------
# fast algebraic attacks
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class FaaRow:
    e: int
    d: int
    witness: AnfForm

    def to_dict(self) -> Dict[str, object]:
        return {"e": self.e, "d": self.d, "witness_anf": self.witness.hex()}


@dataclass
class FaaProfile:
    n: int
    rows: List[FaaRow] = field(default_factory=list)

    def to_list(self) -> List[Dict[str, object]]:
        return [row.to_dict() for row in self.rows]


class _FaaSystem:
    """ANF coefficients of f * m_w for every monomial m_w of degree <= e."""

    def __init__(self, tt: TruthTable, e: int) -> None:
        self.n = tt.n
        self.e = e
        self.monomials = monomials_up_to(tt.n, e)
        points = np.arange(1 << tt.n, dtype=np.int64)
        products = ((points[None, :] & self.monomials[:, None]) == self.monomials[:, None]) & tt.bits.astype(bool)[None, :]
        self.anf = moebius(products.astype(np.uint8))
        self._weights = popcount(points)

    def reduce(self, d: int) -> EchelonForm:
        high = np.flatnonzero(self._weights > d)
        constraints = self.anf[:, high].T
        if constraints.shape[0] == 0:
            return EchelonForm(rows=np.zeros((0, 1), dtype=np.uint64), cols=self.monomials.size, pivots=[])
        return row_reduce(pack_rows(constraints), self.monomials.size)

    def witness(self, echelon: EchelonForm) -> AnfForm:
        return _witness(self.n, self.monomials, echelon.kernel_vector(echelon.free_columns()[0]))


def _check_e(n: int, e: int) -> None:
    if e < 1 or 2 * e >= n:
        raise InvalidArgumentError(f"e must satisfy 1 <= e < n/2, got e={e} for n={n}")


def faa_min_degree(tt: TruthTable, e: int) -> Tuple[int, AnfForm]:
    """Minimal d in [e, n-1] admitting g != 0 with deg g <= e and deg(f g) <= d."""
    n = tt.n
    _check_e(n, e)
    system = _FaaSystem(tt, e)
    d = min(max(n - 1 - e, e), n - 1)
    echelon = system.reduce(d)
    if echelon.nullity:
        while d > e:
            lower = system.reduce(d - 1)
            if not lower.nullity:
                break
            d, echelon = d - 1, lower
    else:
        while not echelon.nullity:
            d += 1
            echelon = system.reduce(d)
    return d, system.witness(echelon)


def faa_profile(tt: TruthTable) -> FaaProfile:
    profile = FaaProfile(n=tt.n)
    for e in range(1, (tt.n + 1) // 2):
        d, witness = faa_min_degree(tt, e)
        profile.rows.append(FaaRow(e=e, d=d, witness=witness))
    return profile


def faa_frontier(tt: TruthTable, m: Optional[int] = None) -> CheckReport:
    """Every e < n/2: the d = n-2-e system has only the zero solution and the minimum d meets e + d >= n-1."""
    n = tt.n
    report = CheckReport(target="faa", m=m if m is not None else n // 2)
    rows = []
    for e in range(1, (n + 1) // 2):
        system = _FaaSystem(tt, e)
        below = system.reduce(n - 2 - e)
        d, _ = faa_min_degree(tt, e)
        rows.append({"e": e, "d": d, "kernel_below": below.nullity})
        if below.nullity or e + d < n - 1:
            report.record({"e": e, "d": d, "kernel_below": below.nullity})
    report.details["rows"] = rows
    return report


# ----------------------------------------------------------------------
# Kloosterman and related character sums over GF(2^m) inside GF(2^2m)
# ----------------------------------------------------------------------


def _field_for(m: int) -> FieldSpec:
    if m < 2:
        raise InvalidArgumentError(f"m must be at least 2, got {m}")
    return make_field(2 * m)


def _subfield_trace_table(spec: FieldSpec) -> np.ndarray:
    """tr_1^m(beta^t) for t in [0, 2^m-2]."""
    t = np.arange(spec.subfield_order, dtype=np.int64)
    logs = spec.u_order * t
    acc = np.zeros(t.size, dtype=np.int64)
    for i in range(spec.m):
        acc ^= spec.exp_table[(logs << i) % spec.order]
    if acc.max(initial=0) > 1:
        raise DomainError("subfield trace left GF(2); field tables are inconsistent")
    return acc


def kloosterman_spectrum(spec: FieldSpec) -> np.ndarray:
    """K(beta^s) for s in [0, 2^m-2]; the convention 1/0 = 0 gives the x = 0 term +1."""
    q = spec.subfield_order
    tr = _subfield_trace_table(spec)
    t = np.arange(q, dtype=np.int64)
    s = np.arange(q, dtype=np.int64)
    bits = tr[(-t) % q][None, :] ^ tr[(s[:, None] + t[None, :]) % q]
    return 1 + (1 - 2 * bits).sum(axis=1)


def kloosterman(a: FieldElement) -> int:
    spec = a.spec
    if not is_in_subfield(a):
        raise DomainError(f"{a!r} is not in the subfield GF(2^{spec.m})")
    if a.bits == 0:
        tr = _subfield_trace_table(spec)
        return int(1 + (1 - 2 * tr).sum())
    s = int(spec.log_table[a.bits]) // spec.u_order
    return int(kloosterman_spectrum(spec)[s])


def verify_weil_bound(m: int) -> CheckReport:
    """|K(a) - 1| <= 2^(m/2+1) for every nonzero a.

    The x = 0 term sits outside the Weil estimate; |K(a)| itself can exceed
    2^(m/2+1) (K = 12 at m = 5), so that reading is only reported.
    """
    spec = _field_for(m)
    report = CheckReport(target="weil", m=m)
    values = kloosterman_spectrum(spec)
    bound = 2 ** (m / 2 + 1)
    for s in np.flatnonzero(np.abs(values - 1) > bound).tolist():
        report.record({"s": s, "K": int(values[s])})
    peak = int(np.abs(values).max())
    report.details.update(max_abs=peak, bound=bound, holds_without_shift=peak <= bound)
    return report


def _u_character_sums(spec: FieldSpec) -> np.ndarray:
    """(-1)^tr(beta^s xi^k) as a (2^m-1, 2^m+1) array of +-1."""
    s = np.arange(spec.subfield_order, dtype=np.int64)
    k = np.arange(spec.u_order, dtype=np.int64)
    logs = (spec.u_order * s[:, None] + spec.subfield_order * k[None, :]) % spec.order
    return 1 - 2 * spec.trace_vec(spec.exp_table[logs]).astype(np.int64)


def verify_lemma2(m: int) -> CheckReport:
    """sum over z in U of (-1)^tr(a z) = 1 - K(a) for every nonzero a in GF(2^m)."""
    spec = _field_for(m)
    report = CheckReport(target="lemma2", m=m)
    lhs = _u_character_sums(spec).sum(axis=1)
    rhs = 1 - kloosterman_spectrum(spec)
    for s in np.flatnonzero(lhs != rhs).tolist():
        report.record({"s": s, "u_sum": int(lhs[s]), "one_minus_K": int(rhs[s])})
    return report


def delta_sums(spec: FieldSpec) -> np.ndarray:
    q = spec.subfield_order
    half = 1 << (spec.m - 1)
    shifted = kloosterman_spectrum(spec) - 1
    window = np.concatenate([shifted, shifted[:half]])
    cs = np.concatenate([[0], np.cumsum(window)])
    return cs[np.arange(q) + half] - cs[np.arange(q)]


def delta_sum(m: int, s: int) -> int:
    """Sum of K(gamma) - 1 over gamma in {beta^s, ..., beta^(s+2^(m-1)-1)}."""
    spec = _field_for(m)
    if not 0 <= s < spec.subfield_order:
        raise InvalidArgumentError(f"s must lie in [0, {spec.subfield_order - 1}], got {s}")
    return int(delta_sums(spec)[s])


def lemma3_bounds(m: int) -> Dict[str, float]:
    return {
        "printed": (LN2_OVER_PI + 0.42) * 2**m + 1,
        "with_m": (LN2_OVER_PI * m + 0.42) * 2**m + 1,
    }


def verify_lemma3(m: int) -> CheckReport:
    """Both readings of the window bound; the reading with the factor m is the asserted one."""
    spec = _field_for(m)
    report = CheckReport(target="lemma3", m=m)
    sums = np.abs(delta_sums(spec))
    bounds = lemma3_bounds(m)
    peak = int(sums.max())
    report.details.update(
        max_abs=peak,
        argmax_s=int(sums.argmax()),
        bound_printed=bounds["printed"],
        bound_with_m=bounds["with_m"],
        holds_printed=peak < bounds["printed"],
        holds_with_m=peak < bounds["with_m"],
    )
    for s in np.flatnonzero(sums >= bounds["with_m"]).tolist():
        report.record({"s": s, "abs_sum": int(sums[s])})
    return report


def _phi_table(spec: FieldSpec) -> np.ndarray:
    """phi[t, s] = window sum starting at xi^s for c = beta^t."""
    half = 1 << (spec.m - 1)
    signs = _u_character_sums(spec)
    window = np.concatenate([signs, signs[:, :half]], axis=1)
    cs = np.concatenate([np.zeros((signs.shape[0], 1), dtype=np.int64), np.cumsum(window, axis=1)], axis=1)
    starts = np.arange(spec.u_order)
    return cs[:, starts + half] - cs[:, starts]


def phi_sum(m: int, s: int, c: FieldElement) -> int:
    spec = c.spec
    if spec.n != 2 * m:
        raise InvalidArgumentError(f"c lies in GF(2^{spec.n}), expected GF(2^{2 * m})")
    if c.bits == 0:
        raise InvalidArgumentError("c must be nonzero")
    if not is_in_subfield(c):
        raise DomainError(f"{c!r} is not in the subfield GF(2^{m})")
    if not 0 <= s <= spec.u_order - 1:
        raise InvalidArgumentError(f"s must lie in [0, {spec.u_order - 1}], got {s}")
    half = 1 << (m - 1)
    c_log = int(spec.log_table[c.bits])
    ks = np.arange(s, s + half, dtype=np.int64)
    points = spec.exp_table[(c_log + spec.subfield_order * ks) % spec.order]
    return int((1 - 2 * spec.trace_vec(points).astype(np.int64)).sum())


def phi_conjecture_scan(m: int) -> CheckReport:
    spec = _field_for(m)
    report = CheckReport(target="phi", m=m, asserted=False)
    table = np.abs(_phi_table(spec))
    t, s = np.unravel_index(int(table.argmax()), table.shape)
    peak = int(table[t, s])
    report.details.update(
        max_abs=peak,
        max_ratio=peak / 2 ** (m / 2),
        argmax={"s": int(s), "c_log_beta": int(t)},
        trivial_bound=1 << (m - 1),
    )
    if peak > 1 << (m - 1):
        report.asserted = True
        report.record({"s": int(s), "c_log_beta": int(t), "abs_phi": peak})
    return report


# ----------------------------------------------------------------------
# nonlinearity bound and construction-level checks
# ----------------------------------------------------------------------


def nl_lower_bound(m: int) -> float:
    n = 2 * m
    return 2 ** (n - 1) - (LN2_OVER_PI * m + 0.92) * 2**m - 1


def verify_theorem4(m: int) -> CheckReport:
    spec = _field_for(m)
    report = CheckReport(target="thm4", m=m)
    nl = nonlinearity(construction2(spec))
    bound = nl_lower_bound(m)
    report.details.update(nonlinearity=nl, bound=bound)
    if not nl > bound:
        report.record({"nonlinearity": nl, "bound": bound})
    return report


def verify_oai(m: int, seed: Optional[int] = None) -> CheckReport:
    """AI = m for both constructions, the relocated variant and a sampled lambda' set."""
    spec = _field_for(m)
    report = CheckReport(target="oai", m=m)
    seed = get_settings().verification.lambda_seed if seed is None else seed
    tables = {
        "c1": construction1(spec),
        "c2": construction2(spec),
        "c2alt": construction2_alt(spec),
        "c2general": construction2_general(spec, sample_lambda_prime(spec, seed)),
    }
    observed = {}
    for name, table in tables.items():
        cert = algebraic_immunity(table)
        observed[name] = cert.ai
        if cert.ai != m:
            report.record({"family": name, "ai": cert.ai})
        if name != "c1" and not table.is_balanced():
            report.record({"family": name, "weight": table.weight})
    report.details["ai"] = observed
    return report


def verify_theorem3(m: int) -> CheckReport:
    spec = _field_for(m)
    report = CheckReport(target="thm3", m=m)
    table = construction2(spec)
    closed = closed_form_coeffs(spec)
    twisted = univariate_interpolate(frobenius_twist(table, spec, m - 1), spec)
    mismatched = np.flatnonzero(closed.coeffs != twisted.coeffs)
    for i in mismatched.tolist():
        report.record({"i": i, "closed": int(closed.coeffs[i]), "interpolated": int(twisted.coeffs[i])})
    literal = univariate_interpolate(table, spec)
    degrees = {
        "closed": univariate_degree(closed),
        "univariate": univariate_degree(literal),
        "anf": anf_of(table).degree,
    }
    for source, degree in degrees.items():
        if degree != spec.n - 1:
            report.record({"degree_source": source, "degree": degree})
    if literal.coeffs[0] or literal.coeffs[spec.order]:
        report.record({"F_0": int(literal.coeffs[0]), "F_last": int(literal.coeffs[spec.order])})
    report.details.update(degrees=degrees, indices_checked=int(spec.size))
    return report


__all__ = [
    "AiCertificate",
    "FaaProfile",
    "FaaRow",
    "LN2_OVER_PI",
    "WalshSpectrum",
    "algebraic_immunity",
    "delta_sum",
    "delta_sums",
    "faa_frontier",
    "faa_min_degree",
    "faa_profile",
    "kloosterman",
    "kloosterman_spectrum",
    "lemma3_bounds",
    "nl_lower_bound",
    "nonlinearity",
    "phi_conjecture_scan",
    "phi_sum",
    "verify_lemma2",
    "verify_lemma3",
    "verify_oai",
    "verify_theorem3",
    "verify_theorem4",
    "verify_weil_bound",
    "walsh_spectrum",
    "walsh_spectrum_trace",
]
