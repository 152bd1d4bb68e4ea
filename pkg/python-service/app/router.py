from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from app.config import get_settings
from app.errors import InvalidArgumentError
from app.state import CheckReport
from core import analysis
from core.constructions import construction2, verify_weights
from core.field import make_field
from core.spectra import WeightContext, verify_lemma1, verify_prop3, verify_sk_symmetry

ALL_METRICS: Tuple[str, ...] = ("weight", "balanced", "degree", "ai", "nonlinearity", "walsh_max", "faa")

_RANGE = re.compile(r"^\s*(\d+)\s*(?:\.\.|-)\s*(\d+)\s*$")


@dataclass(frozen=True)
class VerifyRoute:
    target: str
    runner: Callable[[int], CheckReport]
    cap: Optional[str] = None  # ResourceCaps field bounding n = 2m
    description: str = ""


def _faa(m: int) -> CheckReport:
    return analysis.faa_frontier(construction2(make_field(2 * m)), m)


def _weights(m: int) -> CheckReport:
    return verify_weights(make_field(2 * m), get_settings().verification.lambda_seed)


VERIFY_ROUTES: Dict[str, VerifyRoute] = {
    route.target: route
    for route in (
        VerifyRoute("lemma1", lambda m: verify_lemma1(WeightContext(m)), description="weight complement identity"),
        VerifyRoute("prop3", lambda m: verify_prop3(WeightContext(m)), description="|S_k| bound and equality cases"),
        VerifyRoute("sksym", lambda m: verify_sk_symmetry(WeightContext(m)), description="|S_k| = |T_k|"),
        VerifyRoute("lemma2", analysis.verify_lemma2, description="U character sum vs Kloosterman"),
        VerifyRoute("lemma3", analysis.verify_lemma3, description="Kloosterman window bound, both readings"),
        VerifyRoute("weil", analysis.verify_weil_bound, description="|K(a) - 1| <= 2^(m/2+1)"),
        VerifyRoute("phi", analysis.phi_conjecture_scan, description="half-window sums over U (report only)"),
        VerifyRoute("thm3", analysis.verify_theorem3, cap="ai_max_n", description="closed-form coefficients"),
        VerifyRoute("thm4", analysis.verify_theorem4, cap="nonlinearity_max_n", description="nonlinearity lower bound"),
        VerifyRoute("oai", analysis.verify_oai, cap="ai_max_n", description="optimal algebraic immunity"),
        VerifyRoute("weight", _weights, description="family weights and support algebra"),
        VerifyRoute("faa", _faa, cap="faa_max_n", description="fast algebraic attack frontier"),
    )
}


def parse_m_range(text: str) -> List[int]:
    """Accept ``"2..8"``, ``"2-8"``, ``"5"`` or ``"2,4,6"``."""
    raw = (text or "").strip()
    match = _RANGE.match(raw)
    try:
        if match:
            lo, hi = int(match.group(1)), int(match.group(2))
            if lo > hi:
                raise InvalidArgumentError(f"empty m-range '{text}'")
            values = list(range(lo, hi + 1))
        else:
            values = [int(part) for part in raw.split(",") if part.strip()]
    except ValueError as exc:
        raise InvalidArgumentError(f"malformed m-range '{text}'") from exc
    if not values:
        raise InvalidArgumentError("m-range is empty")
    if min(values) < 2 or max(values) > 10:
        raise InvalidArgumentError(f"m must lie in [2, 10], got '{text}'")
    return values


def parse_metrics(text: Optional[str]) -> List[str]:
    if not text or text.strip().lower() == "all":
        return list(ALL_METRICS)
    names = [part.strip().lower() for part in text.split(",") if part.strip()]
    unknown = [name for name in names if name not in ALL_METRICS]
    if unknown:
        raise InvalidArgumentError(f"unknown metric(s) {', '.join(unknown)}; expected {', '.join(ALL_METRICS)}")
    return names


def select_route(target: str) -> VerifyRoute:
    key = target.strip().lower()
    if key not in VERIFY_ROUTES:
        raise InvalidArgumentError(f"unknown verify target '{target}'; expected one of {', '.join(VERIFY_ROUTES)}")
    return VERIFY_ROUTES[key]


def metric_cap(metric: str) -> Optional[int]:
    caps = get_settings().caps
    return {
        "ai": caps.ai_max_n,
        "faa": caps.faa_max_n,
        "nonlinearity": caps.nonlinearity_max_n,
        "walsh_max": caps.nonlinearity_max_n,
    }.get(metric)


def route_cap(route: VerifyRoute) -> Optional[int]:
    if route.cap is None:
        return None
    return getattr(get_settings().caps, route.cap)


def targets() -> Sequence[str]:
    return tuple(VERIFY_ROUTES)


__all__ = [
    "ALL_METRICS",
    "VERIFY_ROUTES",
    "VerifyRoute",
    "metric_cap",
    "parse_m_range",
    "parse_metrics",
    "route_cap",
    "select_route",
    "targets",
]
