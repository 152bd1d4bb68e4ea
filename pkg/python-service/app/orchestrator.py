from __future__ import annotations

import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

from app.config import get_settings
from app.errors import InvalidArgumentError, ResourceCapError, VerificationFailure
from app.router import metric_cap, parse_m_range, parse_metrics, route_cap, select_route
from app.services.background import run_parallel
from app.state import AnalysisReport, CheckReport, MetricResult
from core import analysis
from core.boolfun import AnfForm, TruthTable, anf_of
from core.constructions import Family, FamilySpec, carlet_feng, construction2
from core.field import make_field
from storage.function_file import FunctionFile, read_function_file, write_function_file
from storage.report_store import emit, render_csv, render_json, rows_to_frame
from tools.table import (
    PROVENANCE,
    REFERENCE_NONLINEARITY,
    RELATIVE_TOLERANCE,
    TableRow,
    build_frame,
    mismatches,
    out_of_tolerance,
)

logger = logging.getLogger(__name__)

CAP_WARNING = "resource cap overridden for %s at n=%d; this may take hours"


@dataclass
class CommandResult:
    output: str = ""
    summary: List[str] = field(default_factory=list)


class _MetricCache:
    """Shares the ANF and Walsh spectrum between metrics of one table."""

    def __init__(self, table: TruthTable) -> None:
        self.table = table
        self._anf: Optional[AnfForm] = None
        self._walsh: Optional[analysis.WalshSpectrum] = None

    @property
    def anf(self) -> AnfForm:
        if self._anf is None:
            self._anf = anf_of(self.table)
        return self._anf

    @property
    def walsh(self) -> analysis.WalshSpectrum:
        if self._walsh is None:
            self._walsh = analysis.walsh_spectrum(self.table)
        return self._walsh


class PolarOrchestrator:
    def __init__(self) -> None:
        self.settings = get_settings()

    # ------------------------------------------------------------------
    # construct
    # ------------------------------------------------------------------

    def cmd_construct(
        self,
        family: str,
        m: int,
        *,
        shift: int = 0,
        lambda_seed: Optional[int] = None,
        lambda_k: Optional[str] = None,
        out: Optional[str] = None,
    ) -> CommandResult:
        chosen = Family.parse(family)
        spec = make_field(2 * m)
        if lambda_seed is not None and chosen is not Family.C2_GENERAL:
            raise InvalidArgumentError("--lambda-seed only applies to c2general")
        lambda_prime = None
        if lambda_k:
            if chosen is not Family.C2_GENERAL:
                raise InvalidArgumentError("--lambda-k only applies to c2general")
            try:
                ks = [int(part) for part in lambda_k.split(",") if part.strip()]
            except ValueError:
                raise InvalidArgumentError(f"malformed --lambda-k '{lambda_k}'") from None
            # xi^k for each listed k
            lambda_prime = tuple(spec.alpha_power(spec.subfield_order * k).bits for k in ks)
        elif chosen is Family.C2_GENERAL and lambda_seed is None:
            lambda_seed = self.settings.verification.lambda_seed
        family_spec = FamilySpec(
            family=chosen, m=m, shift=shift, lambda_prime=lambda_prime, lambda_seed=lambda_seed
        )
        table = family_spec.build(spec)
        ff = FunctionFile.from_table(table, spec, family_spec.describe())
        line = f"family={ff.family} n={table.n} weight={table.weight} support={table.support().size}"
        logger.info("Constructed %s", line)
        if out:
            write_function_file(ff, out)
            emit(line + "\n")
            return CommandResult(output=line + "\n", summary=[line])
        emit(ff.to_text())
        return CommandResult(output=ff.to_text(), summary=[line])

    # ------------------------------------------------------------------
    # analyze
    # ------------------------------------------------------------------

    def _metric(self, name: str, cache: _MetricCache) -> Any:
        table = cache.table
        if name == "weight":
            return table.weight
        if name == "balanced":
            return table.is_balanced()
        if name == "degree":
            return cache.anf.degree
        if name == "ai":
            return analysis.algebraic_immunity(table).to_dict()
        if name == "nonlinearity":
            return (1 << (table.n - 1)) - cache.walsh.max_abs // 2
        if name == "walsh_max":
            return cache.walsh.max_abs
        if name == "faa":
            return analysis.faa_profile(table).to_list()
        raise InvalidArgumentError(f"unknown metric '{name}'")

    def analyze_table(
        self,
        table: TruthTable,
        metrics: Sequence[str],
        identity: Dict[str, Any],
        *,
        cap_override: bool = False,
    ) -> AnalysisReport:
        report = AnalysisReport(identity=identity)
        cache = _MetricCache(table)
        for name in metrics:
            cap = metric_cap(name)
            if cap is not None and table.n > cap:
                if not cap_override:
                    report.add(MetricResult.skipped(name, str(ResourceCapError(name, table.n, cap))))
                    continue
                logger.warning(CAP_WARNING, name, table.n)
            started = time.perf_counter()
            try:
                value = self._metric(name, cache)
            except ResourceCapError as exc:
                report.add(MetricResult.skipped(name, str(exc)))
                continue
            elapsed = time.perf_counter() - started
            logger.info("metric %s on n=%d took %.3fs", name, table.n, elapsed)
            report.add(MetricResult(name=name, value=value, runtime_s=elapsed))
        return report

    def cmd_analyze(
        self,
        path: str,
        *,
        metrics: Optional[str] = None,
        fmt: str = "json",
        out: Optional[str] = None,
        cap_override: bool = False,
        with_timings: bool = False,
    ) -> CommandResult:
        if fmt not in ("json", "csv"):
            raise InvalidArgumentError(f"format must be json or csv, got '{fmt}'")
        names = parse_metrics(metrics)
        ff = read_function_file(path)
        identity = {"sha256": ff.digest(), **ff.header()}
        report = self.analyze_table(ff.table, names, identity, cap_override=cap_override)
        if fmt == "json":
            text = render_json(report.to_dict(with_timings=with_timings))
        else:
            rows = []
            for row in report.flat_rows():
                value = row["value"]
                if isinstance(value, (dict, list)):
                    row["value"] = json.dumps(value, sort_keys=True)
                if with_timings:
                    row["runtime_s"] = report.metrics[row["metric"]].runtime_s
                rows.append(row)
            text = render_csv(rows_to_frame(rows), comment=f"sha256={identity['sha256']}")
        emit(text, out)
        return CommandResult(output=text)

    # ------------------------------------------------------------------
    # reproduce-table
    # ------------------------------------------------------------------

    def _table_row(self, n: int, with_ai: bool) -> TableRow:
        spec = make_field(n)
        f = construction2(spec)
        row = TableRow(
            n=n,
            n_cf=analysis.nonlinearity(carlet_feng(spec)),
            n_f=analysis.nonlinearity(f),
            lower_bound=analysis.nl_lower_bound(n // 2),
        )
        if with_ai and n <= self.settings.caps.ai_max_n:
            row.ai_f = analysis.algebraic_immunity(f).ai
        return row

    def cmd_reproduce_table(
        self,
        n_max: int,
        *,
        out: Optional[str] = None,
        with_ai: bool = False,
        cap_override: bool = False,
    ) -> CommandResult:
        if n_max % 2:
            raise InvalidArgumentError(f"n-max must be even, got {n_max}")
        if n_max not in REFERENCE_NONLINEARITY:
            raise InvalidArgumentError(f"n-max must lie in [4, 20], got {n_max}")
        cap = self.settings.caps.nonlinearity_max_n
        if n_max > cap:
            if not cap_override:
                raise ResourceCapError("nonlinearity", n_max, cap)
            logger.warning(CAP_WARNING, "nonlinearity", n_max)
        sizes = list(range(4, n_max + 1, 2))
        rows = run_parallel(lambda n: self._table_row(n, with_ai), sizes)
        for row in mismatches(rows):
            ref_cf, _, ref_f = row.reference
            logger.warning(
                "n=%d differs from reference: N_CF=%d (ref %d) N_F=%d (ref %d)",
                row.n,
                row.n_cf,
                ref_cf,
                row.n_f,
                ref_f,
            )
        frame = build_frame(rows, with_ai=with_ai, precision=self.settings.verification.float_precision)
        text = render_csv(frame, comment=PROVENANCE)
        emit(text, out)
        failing = out_of_tolerance(rows)
        if failing:
            raise VerificationFailure(
                "N_F outside tolerance: "
                + ", ".join(
                    f"n={row.n} N_F={row.n_f} (ref {row.reference[2]}, {row.deviation:+.1%}, limit {RELATIVE_TOLERANCE:.0%})"
                    for row in failing
                )
            )
        summary = [f"n={row.n}: N_F={row.n_f} N_CF={row.n_cf} exact={row.exact}" for row in rows]
        return CommandResult(output=text, summary=summary)

    # ------------------------------------------------------------------
    # verify
    # ------------------------------------------------------------------

    def cmd_verify(
        self,
        target: str,
        m_range: str,
        *,
        fmt: str = "text",
        out: Optional[str] = None,
        cap_override: bool = False,
    ) -> CommandResult:
        route = select_route(target)
        ms = parse_m_range(m_range)
        cap = route_cap(route)
        if cap is not None:
            over = [m for m in ms if 2 * m > cap]
            if over:
                if not cap_override:
                    raise ResourceCapError(route.target, 2 * max(over), cap)
                logger.warning(CAP_WARNING, route.target, 2 * max(over))
        reports: List[CheckReport] = run_parallel(_timed(route.target, route.runner), ms)
        summary = [report.summary_line() for report in reports]
        document = render_json(
            {
                "target": route.target,
                "passed": all(r.passed for r in reports),
                "reports": [r.to_dict() for r in reports],
            }
        )
        if out:
            emit(document, out)
        stream = sys.stderr if fmt == "json" else sys.stdout
        for line in summary:
            print(line, file=stream)
        if fmt == "json" and not out:
            emit(document)
        failed = [r.m for r in reports if not r.passed]
        if failed:
            raise VerificationFailure(f"{route.target} failed for m=" + ",".join(map(str, failed)))
        return CommandResult(output=document, summary=summary)


def _timed(target: str, runner: Callable[[int], CheckReport]) -> Callable[[int], CheckReport]:
    def run(m: int) -> CheckReport:
        started = time.perf_counter()
        report = runner(m)
        logger.info("verify %s m=%d: %s (%.2fs)", target, m, "ok" if report.passed else "FAILED", time.perf_counter() - started)
        return report

    return run


__all__ = ["CommandResult", "PolarOrchestrator"]
