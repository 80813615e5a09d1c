"""
Report builders shared by the CLI and the HTTP routes
Centralized so both front ends return identical results
"""

import csv
import io
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO

import numpy as np

from becorder.bitstrings import BitString, display, dual_string, universe
from becorder.certify import ber_order, std_compare_with_certificate, reliability_nform
from becorder.closure import close, seed_rules
from becorder.config import settings
from becorder.errors import CapacityError
from becorder.models import (
    ClosureEdge,
    ClosureReport,
    CompareReport,
    InfluenceLevel,
    InfluenceReport,
    InfluenceRow,
    KendallEntry,
    KendallReport,
    MethodKind,
    MethodSpec,
    OrderOutcome,
    RankingResponse,
    RankingRow,
    TotalOutcome,
)
from becorder.orders import (
    at0_compare,
    at0_key,
    at1_compare,
    beta_exact,
    beta_value,
    fst_compare,
    hlf,
    hlf_compare_detailed,
    influence,
    rank_universe,
    ranking_pairs,
    total_compare,
)
from becorder.polynomials import average, reliability_poly

logger = logging.getLogger(__name__)

_SYMBOL = {TotalOutcome.GREATER: ">", TotalOutcome.LESS: "<", TotalOutcome.EQUIVALENT: "="}


def default_ranking_methods() -> List[str]:
    """The four total orders compared by crossing counts"""
    return [
        f"beta:2^(1/{settings.AWGN_SCALING_EXPONENT})",
        f"beta:2^(1/{settings.BEC_SCALING_EXPONENT})",
        "avg",
        "hlf",
    ]


class Reports:
    """Report builders"""

    @staticmethod
    def compare(
        alpha: BitString,
        gamma: BitString,
        method: MethodSpec,
        enable_rsd: bool = False,
        precision: Optional[int] = None,
    ) -> CompareReport:
        """Outcome plus evidence for one pair under one method"""
        evidence: Dict[str, Any] = {}
        flags: List[str] = []
        kind = method.kind

        if kind is MethodKind.STD:
            outcome, certificate = std_compare_with_certificate(alpha, gamma)
            summary = outcome.value
            if certificate is not None:
                evidence["certificate"] = certificate.to_json()
                summary += f" ({certificate.verdict.value} by {certificate.method})"
        elif kind is MethodKind.BER:
            result = ber_order(alpha, gamma, method.n)
            diff = [a - c for a, c in zip(reliability_nform(alpha, method.n), reliability_nform(gamma, method.n))]
            outcome = result
            evidence["positive"] = sum(1 for v in diff if v > 0)
            evidence["negative"] = sum(1 for v in diff if v < 0)
            evidence["zero"] = sum(1 for v in diff if v == 0)
            summary = result.value
        elif kind is MethodKind.FST:
            outcome = fst_compare(alpha, gamma)
            hlf_outcome, capped = hlf_compare_detailed(alpha, gamma)
            evidence = {
                "at0": at0_compare(alpha, gamma).value,
                "at1": at1_compare(alpha, gamma).value,
                "hlf": hlf_outcome.value,
            }
            if capped:
                flags.append("precision-cap")
            summary = outcome.value
        elif kind is MethodKind.RULES:
            outcome, steps = Reports._rules_outcome(alpha, gamma, method.rules, enable_rsd)
            if steps:
                evidence["provenance"] = [
                    {"lhs": display(lhs), "rhs": display(rhs), "tag": tag} for lhs, rhs, tag in steps
                ]
                path = [display(steps[0][0])] + [f"{display(rhs)} [{tag}]" for _, rhs, tag in steps]
                summary = f"{outcome.value} via {' >= '.join(path)}"
            else:
                summary = outcome.value
        else:
            outcome, capped = total_compare(alpha, gamma, method, start=precision)
            if capped:
                flags.append("precision-cap")
            left, right = Reports._values(alpha, gamma, method, precision)
            evidence["values"] = [left, right]
            if kind is MethodKind.HLF:
                # smaller halfway point wins
                symbol = _SYMBOL[outcome.reversed()]
            else:
                symbol = _SYMBOL[outcome]
            summary = f"{outcome.value} ({left} {symbol} {right})"

        return CompareReport(
            alpha=display(alpha),
            gamma=display(gamma),
            method=method.label,
            outcome=outcome.value,
            summary=summary,
            evidence=evidence,
            flags=flags,
        )

    @staticmethod
    def polynomials(alpha: BitString, gamma: BitString) -> Dict[str, Any]:
        """I_alpha, I_gamma and their difference as decimal coefficients, lowest power first"""
        p, q = reliability_poly(alpha), reliability_poly(gamma)
        return {
            "alpha": {"bitstring": display(alpha), "degree": p.degree, "poly": p.to_json()},
            "gamma": {"bitstring": display(gamma), "degree": q.degree, "poly": q.to_json()},
            "delta": (p - q).to_json(),
        }

    @staticmethod
    def _values(alpha: BitString, gamma: BitString, method: MethodSpec, precision: Optional[int]):
        if method.kind is MethodKind.AVG:
            return str(average(alpha)), str(average(gamma))
        if method.kind is MethodKind.HLF:
            return hlf(alpha, precision).to_decimal(), hlf(gamma, precision).to_decimal()
        if method.kind is MethodKind.BETA:
            if method.beta.literal is not None:
                value = Fraction(method.beta.literal)
                return str(beta_exact(alpha, value)), str(beta_exact(gamma, value))
            return beta_value(alpha, method.beta, precision).to_decimal(), beta_value(gamma, method.beta, precision).to_decimal()
        if method.kind is MethodKind.AT0:
            (ea, ma), (ec, mc) = at0_key(alpha), at0_key(gamma)
        else:
            (ea, ma), (ec, mc) = at0_key(dual_string(alpha)), at0_key(dual_string(gamma))
        return f"exp {ea} mant {ma}", f"exp {ec} mant {mc}"

    @staticmethod
    def _rules_outcome(alpha: BitString, gamma: BitString, rules: str, enable_rsd: bool):
        """Outcome under the closed rules and the chain of edges behind it"""
        if alpha == gamma:
            return OrderOutcome.EQUAL, []
        relation = close(seed_rules(rules, max(len(alpha), len(gamma), 1), enable_rsd))
        if relation.contains(alpha, gamma):
            return OrderOutcome.GREATER, relation.chain(alpha, gamma)
        if relation.contains(gamma, alpha):
            return OrderOutcome.LESS, relation.chain(gamma, alpha)
        return OrderOutcome.INCOMPARABLE, []

    @staticmethod
    def ranking(m: int, method: MethodSpec, precision: Optional[int] = None) -> RankingResponse:
        ranking = rank_universe(m, method, precision=precision)
        rows = [
            RankingRow(rank=rank, bitstring=display(alpha), label=label, value=value)
            for rank, alpha, label, value in ranking.rows()
        ]
        return RankingResponse(m=m, method=ranking.method, rows=rows, ties_at_cap=ranking.ties_at_cap)

    @staticmethod
    def kendall(m: int, methods: Optional[Sequence[str]] = None) -> KendallReport:
        methods = list(methods or default_ranking_methods())
        rankings = [rank_universe(m, method) for method in methods]
        labels = [r.method for r in rankings]
        distances = [
            KendallEntry(first=a, second=b, distance=d) for a, b, d in ranking_pairs(labels, rankings)
        ]
        return KendallReport(m=m, methods=labels, distances=distances)

    @staticmethod
    def influence(max_level: int, precision: Optional[int] = None, slope_from: int = 4) -> InfluenceReport:
        """Influence of the last bit for every |alpha| <= max_level, level means and fitted slope"""
        if max_level > settings.INFLUENCE_MAX_LEVEL:
            raise CapacityError(
                f"influence level {max_level} exceeds the cap {settings.INFLUENCE_MAX_LEVEL}",
                settings.INFLUENCE_MAX_LEVEL,
            )
        rows = []
        levels = []
        for level in range(max_level + 1):
            values = []
            for alpha in universe(level):
                interval = influence(alpha, precision)
                values.append(float(interval.midpoint))
                rows.append(InfluenceRow(level=level, bitstring=display(alpha), influence=interval.to_decimal()))
            mean = float(np.mean(values))
            levels.append(InfluenceLevel(level=level, count=len(values), mean=mean, log2_mean=float(np.log2(mean))))

        fitted = [lv for lv in levels if lv.level >= slope_from]
        slope = None
        if len(fitted) >= 2:
            slope = float(np.polyfit([lv.level for lv in fitted], [lv.log2_mean for lv in fitted], 1)[0])
        return InfluenceReport(max_level=max_level, rows=rows, levels=levels, slope=slope, slope_from=slope_from)

    @staticmethod
    def closure(rules: str, max_len: int, enable_rsd: bool = False, limit: int = 50) -> ClosureReport:
        relation = close(seed_rules(rules, max_len, enable_rsd))
        sample = []
        for lhs, rhs, tag in relation.edges():
            if len(sample) >= limit:
                break
            sample.append(ClosureEdge(lhs=display(lhs), rhs=display(rhs), provenance=tag))
        return ClosureReport(
            rules=relation.rules,
            max_len=max_len,
            enable_rsd=enable_rsd,
            nodes=relation.nodes,
            edges=relation.edge_count,
            provenance_counts=relation.provenance_counts(),
            sample=sample,
        )


def write_csv(target: Optional[TextIO], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Write rows to target (or return them as text when target is None)"""
    buffer = target if target is not None else io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue() if target is None else ""
