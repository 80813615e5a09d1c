"""
Fast preorders on synthetic channels
@0/@1, halfway point, fst, beta expansion and avg comparisons, influence of the
last bit, incomparability generators, rankings and Kendall tau distances.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key, lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from mpmath import mp
from mpmath.ctx_iv import MPIntervalContext
from mpmath.libmp import to_rational

from becorder.bitstrings import BitString, dual_string, hex_label, ones, universe, zeros
from becorder.certify import exp_mant_direct
from becorder.config import settings
from becorder.errors import CapacityError, DomainError, UniverseMismatchError
from becorder.models import BetaSpec, MethodKind, MethodSpec, OrderOutcome, TotalOutcome
from becorder.polynomials import Poly, average, reliability_poly

logger = logging.getLogger(__name__)

Comparison = Tuple[TotalOutcome, bool]


@dataclass(frozen=True)
class DyadicInterval:
    """[lower, upper] with dyadic endpoints enclosing an exact value"""
    lower: Fraction
    upper: Fraction

    @classmethod
    def from_iv(cls, value) -> "DyadicInterval":
        a, b = value._mpi_
        return cls(Fraction(*to_rational(a)), Fraction(*to_rational(b)))

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, value: Union[int, Fraction, float]) -> bool:
        return self.lower <= Fraction(value) <= self.upper

    def __sub__(self, other: "DyadicInterval") -> "DyadicInterval":
        return DyadicInterval(self.lower - other.upper, self.upper - other.lower)

    def to_decimal(self, digits: int = 20) -> str:
        return fraction_to_decimal(self.midpoint, digits)


def fraction_to_decimal(value: Fraction, digits: int = 20) -> str:
    with mp.workdps(digits + 10):
        return mp.nstr(mp.mpf(value.numerator) / value.denominator, digits)


@lru_cache(maxsize=None)
def interval_context(prec: int) -> MPIntervalContext:
    """Private outward-rounding context per working precision"""
    ctx = MPIntervalContext()
    ctx.prec = prec
    return ctx


def _resolve_precisions(start: Optional[int], cap: Optional[int]) -> Tuple[int, int]:
    start = settings.HLF_START_PRECISION if start is None else start
    cap = settings.HLF_MAX_PRECISION if cap is None else cap
    if start < 1 or cap < start:
        raise DomainError(f"bad precision range {start}..{cap}")
    return start, cap


def _escalate(
    enclose: Callable[[int], Tuple[DyadicInterval, DyadicInterval]],
    larger_is_better: bool,
    start: int,
    cap: int,
) -> Comparison:
    """Double the precision until the two enclosures separate; Equivalent at the cap"""
    prec = start
    while True:
        a, c = enclose(prec)
        if a.upper < c.lower:
            return (TotalOutcome.LESS if larger_is_better else TotalOutcome.GREATER), False
        if c.upper < a.lower:
            return (TotalOutcome.GREATER if larger_is_better else TotalOutcome.LESS), False
        if prec >= cap:
            return TotalOutcome.EQUIVALENT, True
        prec = min(prec * 2, cap)


# @0 and @1
def at0_key(alpha: BitString) -> Tuple[int, int]:
    em = exp_mant_direct(reliability_poly(alpha))
    return em.exponent, em.mantissa


def at0_compare(alpha: BitString, gamma: BitString) -> TotalOutcome:
    """Smaller exponent wins, then larger mantissa"""
    ea, ma = at0_key(alpha)
    ec, mc = at0_key(gamma)
    if (ea, -ma) < (ec, -mc):
        return TotalOutcome.GREATER
    if (ea, -ma) > (ec, -mc):
        return TotalOutcome.LESS
    return TotalOutcome.EQUIVALENT


def at0_geq_diff(alpha: BitString, gamma: BitString) -> bool:
    """I_alpha - I_gamma is zero or has a positive mantissa"""
    diff = reliability_poly(alpha) - reliability_poly(gamma)
    return diff.is_zero or exp_mant_direct(diff).mantissa > 0


def at1_compare(alpha: BitString, gamma: BitString) -> TotalOutcome:
    return at0_compare(dual_string(alpha), dual_string(gamma)).reversed()


def at1_geq_diff(alpha: BitString, gamma: BitString) -> bool:
    return at0_geq_diff(dual_string(gamma), dual_string(alpha))


# Halfway point
@lru_cache(maxsize=65536)
def hlf(alpha: BitString, precision: Optional[int] = None) -> DyadicInterval:
    """Enclosure of I_alpha^-1(1/2), width at most 2^-precision

    Chains I_0^-1(y) = sqrt(y) and I_1^-1(y) = 1 - sqrt(1 - y) from the last bit.
    """
    precision = settings.HLF_START_PRECISION if precision is None else precision
    if precision < 1:
        raise DomainError(f"precision must be positive, got {precision}")
    target = Fraction(1, 1 << precision)
    extra = 2 * len(alpha) + 16
    while True:
        ctx = interval_context(precision + extra)
        y = ctx.mpf(1) / 2
        for bit in reversed(alpha):
            if bit == "0":
                y = ctx.sqrt(y)
            else:
                y = 1 - ctx.sqrt(1 - y)
        result = DyadicInterval.from_iv(y)
        if result.width <= target:
            return result
        logger.debug("hlf(%s) too wide at %d bits, retrying", alpha, precision + extra)
        extra *= 2


def hlf_compare_detailed(
    alpha: BitString,
    gamma: BitString,
    start: Optional[int] = None,
    cap: Optional[int] = None,
) -> Comparison:
    """(outcome, capped); a smaller halfway point is better"""
    if alpha == gamma:
        return TotalOutcome.EQUIVALENT, False
    start, cap = _resolve_precisions(start, cap)
    outcome, capped = _escalate(lambda prec: (hlf(alpha, prec), hlf(gamma, prec)), False, start, cap)
    if capped:
        logger.warning("hlf tie at the %d-bit cap: %s vs %s", cap, alpha, gamma)
    return outcome, capped


def hlf_compare(alpha: BitString, gamma: BitString) -> TotalOutcome:
    return hlf_compare_detailed(alpha, gamma)[0]


def fst_compare(alpha: BitString, gamma: BitString) -> OrderOutcome:
    """All three of @0, @1 and hlf agree"""
    if alpha == gamma:
        return OrderOutcome.EQUAL
    votes = (at0_compare(alpha, gamma), at1_compare(alpha, gamma), hlf_compare(alpha, gamma))
    up = all(v is not TotalOutcome.LESS for v in votes)
    down = all(v is not TotalOutcome.GREATER for v in votes)
    if up and down:
        return OrderOutcome.EQUIVALENT
    if up:
        return OrderOutcome.GREATER
    if down:
        return OrderOutcome.LESS
    return OrderOutcome.INCOMPARABLE


# avg
def avg_compare(alpha: BitString, gamma: BitString) -> TotalOutcome:
    return _exact_compare(average(alpha), average(gamma))


def _exact_compare(a: Fraction, c: Fraction) -> TotalOutcome:
    if a > c:
        return TotalOutcome.GREATER
    if a < c:
        return TotalOutcome.LESS
    return TotalOutcome.EQUIVALENT


# Beta expansion
def beta_poly(alpha: BitString) -> Poly:
    """alpha_beta as a polynomial in beta: sum a_i beta^(l - i)"""
    return Poly(int(bit) for bit in reversed(alpha))


def beta_exact(alpha: BitString, beta: Fraction) -> Fraction:
    acc = Fraction(0)
    for bit in alpha:
        acc = acc * beta + int(bit)
    return acc


def _beta_interval(beta: BetaSpec, ctx: MPIntervalContext):
    if beta.literal is not None:
        return ctx.mpf(beta.literal)
    return ctx.exp(ctx.ln(2) / ctx.mpf(beta.root_q))


def beta_value(alpha: BitString, beta: BetaSpec, precision: Optional[int] = None) -> DyadicInterval:
    """Enclosure of alpha_beta, width at most 2^-precision"""
    precision = settings.HLF_START_PRECISION if precision is None else precision
    if precision < 1:
        raise DomainError(f"precision must be positive, got {precision}")
    target = Fraction(1, 1 << precision)
    extra = 2 * len(alpha) + 16
    while True:
        ctx = interval_context(precision + extra)
        b = _beta_interval(beta, ctx)
        acc = ctx.mpf(0)
        for bit in alpha:
            acc = acc * b + int(bit)
        result = DyadicInterval.from_iv(acc)
        if result.width <= target:
            return result
        extra *= 2


def beta_compare_detailed(
    alpha: BitString,
    gamma: BitString,
    beta: BetaSpec,
    start: Optional[int] = None,
    cap: Optional[int] = None,
) -> Comparison:
    """Larger alpha_beta is better; leading zeros never matter"""
    if alpha.lstrip("0") == gamma.lstrip("0"):
        return TotalOutcome.EQUIVALENT, False
    if beta.literal is not None:
        value = Fraction(beta.literal)
        return _exact_compare(beta_exact(alpha, value), beta_exact(gamma, value)), False
    start, cap = _resolve_precisions(start, cap)
    outcome, capped = _escalate(
        lambda prec: (beta_value(alpha, beta, prec), beta_value(gamma, beta, prec)), True, start, cap
    )
    if capped:
        logger.warning("beta tie at the %d-bit cap: %s vs %s (beta=%s)", cap, alpha, gamma, beta.label)
    return outcome, capped


def beta_compare(alpha: BitString, gamma: BitString, beta: BetaSpec) -> TotalOutcome:
    return beta_compare_detailed(alpha, gamma, beta)[0]


# Influence and incomparability generators
def influence(alpha: BitString, precision: Optional[int] = None, max_level: Optional[int] = None) -> DyadicInterval:
    """hlf(alpha 0) - hlf(alpha 1)"""
    limit = settings.INFLUENCE_MAX_LEVEL if max_level is None else max_level
    if len(alpha) > limit:
        raise CapacityError(f"influence level {len(alpha)} exceeds the cap {limit}", limit)
    return hlf(alpha + "0", precision) - hlf(alpha + "1", precision)


def more01_incomparable(alpha: BitString, gamma: BitString) -> bool:
    """One string has both more ones and more zeros than the other"""
    return (ones(alpha) > ones(gamma) and zeros(alpha) > zeros(gamma)) or (
        ones(gamma) > ones(alpha) and zeros(gamma) > zeros(alpha)
    )


def at_incomparable(alpha: BitString, gamma: BitString) -> bool:
    """@0 and @1 strictly disagree, which rules out comparability"""
    a0, a1 = at0_compare(alpha, gamma), at1_compare(alpha, gamma)
    return {a0, a1} == {TotalOutcome.GREATER, TotalOutcome.LESS}


def at_witness_family(kappa: BitString, lam: BitString) -> Tuple[BitString, BitString]:
    return kappa + "100001" + lam, kappa + "011000" + lam


# Dispatch for total preorders
def total_compare(
    alpha: BitString,
    gamma: BitString,
    method: MethodSpec,
    start: Optional[int] = None,
    cap: Optional[int] = None,
) -> Comparison:
    """(outcome, capped) for beta, avg, hlf, at0 and at1"""
    if method.kind is MethodKind.BETA:
        return beta_compare_detailed(alpha, gamma, method.beta, start, cap)
    if method.kind is MethodKind.HLF:
        return hlf_compare_detailed(alpha, gamma, start, cap)
    if method.kind is MethodKind.AVG:
        return avg_compare(alpha, gamma), False
    if method.kind is MethodKind.AT0:
        return at0_compare(alpha, gamma), False
    if method.kind is MethodKind.AT1:
        return at1_compare(alpha, gamma), False
    raise DomainError(f"{method.label} is not a total preorder")


# Rankings
@dataclass(frozen=True)
class Ranking:
    """A universe listed best first"""
    method: str
    order: Tuple[BitString, ...]
    values: Tuple[str, ...]
    ties_at_cap: int = 0

    def positions(self) -> Dict[BitString, int]:
        return {alpha: i for i, alpha in enumerate(self.order)}

    def rows(self) -> List[Tuple[int, BitString, str, str]]:
        """(rank, bitstring, label, value), rank starting at 1"""
        return [
            (i + 1, alpha, hex_label(alpha), value)
            for i, (alpha, value) in enumerate(zip(self.order, self.values))
        ]


def rank_universe(
    m: int,
    method: Union[str, MethodSpec],
    precision: Optional[int] = None,
    max_len: Optional[int] = None,
) -> Ranking:
    """Sort {0,1}^m best first; ties go to the lexicographically smaller string"""
    spec = MethodSpec.parse(method) if isinstance(method, str) else method
    limit = settings.RANK_MAX_LEN if max_len is None else max_len
    if m > limit:
        raise CapacityError(f"ranking length {m} exceeds the cap {limit}", limit)
    if not spec.is_total:
        raise DomainError(f"{spec.label} is not a total preorder and cannot rank")
    strings = universe(m)
    precision = settings.HLF_START_PRECISION if precision is None else precision

    if spec.kind is MethodKind.AVG:
        values = {alpha: average(alpha) for alpha in strings}
        order = sorted(strings, key=lambda a: (-values[a], a))
        return Ranking(spec.label, tuple(order), tuple(str(values[a]) for a in order))
    if spec.kind is MethodKind.AT0:
        keys = {alpha: at0_key(alpha) for alpha in strings}
        order = sorted(strings, key=lambda a: (keys[a][0], -keys[a][1], a))
        return Ranking(spec.label, tuple(order), tuple(f"{keys[a][0]}:{keys[a][1]}" for a in order))
    if spec.kind is MethodKind.AT1:
        keys = {alpha: at0_key(dual_string(alpha)) for alpha in strings}
        order = sorted(strings, key=lambda a: (-keys[a][0], keys[a][1], a))
        return Ranking(spec.label, tuple(order), tuple(f"{keys[a][0]}:{keys[a][1]}" for a in order))
    if spec.kind is MethodKind.BETA and spec.beta.literal is not None:
        value = Fraction(spec.beta.literal)
        exact = {alpha: beta_exact(alpha, value) for alpha in strings}
        order = sorted(strings, key=lambda a: (-exact[a], a))
        return Ranking(spec.label, tuple(order), tuple(str(exact[a]) for a in order))

    capped: Set[Tuple[BitString, BitString]] = set()

    def cmp(a: BitString, c: BitString) -> int:
        outcome, was_capped = total_compare(a, c, spec, start=precision)
        if outcome is TotalOutcome.GREATER:
            return -1
        if outcome is TotalOutcome.LESS:
            return 1
        if was_capped:
            capped.add((min(a, c), max(a, c)))
        return (a > c) - (a < c)

    order = sorted(strings, key=cmp_to_key(cmp))
    if spec.kind is MethodKind.HLF:
        values = tuple(hlf(a, precision).to_decimal() for a in order)
    else:
        values = tuple(beta_value(a, spec.beta, precision).to_decimal() for a in order)
    return Ranking(spec.label, tuple(order), values, ties_at_cap=len(capped))


def kendall_tau(r1: Ranking, r2: Ranking) -> int:
    """Number of pairs the two rankings order oppositely"""
    if len(r1.order) != len(r2.order) or set(r1.order) != set(r2.order):
        raise UniverseMismatchError(f"rankings {r1.method} and {r2.method} cover different universes")
    where = r2.positions()
    seq = np.array([where[alpha] for alpha in r1.order], dtype=np.int64)
    inversions = np.triu(seq[:, None] > seq[None, :], k=1)
    return int(inversions.sum())


# RS-D and beta expansion
@dataclass(frozen=True)
class RsdBetaRow:
    """Grid values of beta for which 0^k 1^(2^k) >=_beta 1^k 0^(2^k)"""
    k: int
    satisfied: int
    largest: Optional[Fraction]
    above_inverse_root: int
    above_root: int


@dataclass(frozen=True)
class RsdBetaReport:
    rows: Tuple[RsdBetaRow, ...]
    grid: Tuple[Fraction, ...]

    @property
    def inverse_root_bound_holds(self) -> bool:
        """beta <= 2^(-1/k) for every satisfying grid value"""
        return all(row.above_inverse_root == 0 for row in self.rows)

    @property
    def root_bound_holds(self) -> bool:
        """beta <= 2^(1/k) for every satisfying grid value"""
        return all(row.above_root == 0 for row in self.rows)


def rsd_beta_report(k_max: int = 6, denominator: int = 64, upper: int = 3) -> RsdBetaReport:
    """Check which bound on beta the RS-D pairs actually force, on an exact grid"""
    grid = tuple(Fraction(j, denominator) for j in range(1, upper * denominator + 1))
    rows = []
    for k in range(1, k_max + 1):
        better = "0" * k + "1" * (1 << k)
        worse = "1" * k + "0" * (1 << k)
        satisfied = [b for b in grid if beta_exact(better, b) >= beta_exact(worse, b)]
        rows.append(
            RsdBetaRow(
                k=k,
                satisfied=len(satisfied),
                largest=max(satisfied) if satisfied else None,
                above_inverse_root=sum(1 for b in satisfied if b ** k > Fraction(1, 2)),
                above_root=sum(1 for b in satisfied if b ** k > 2),
            )
        )
    return RsdBetaReport(rows=tuple(rows), grid=grid)


def ranking_pairs(methods: Sequence[str], rankings: Sequence[Ranking]) -> List[Tuple[str, str, int]]:
    """Kendall distances for every unordered pair of rankings"""
    out = []
    for i in range(len(rankings)):
        for j in range(i + 1, len(rankings)):
            out.append((methods[i], methods[j], kendall_tau(rankings[i], rankings[j])))
    return out
