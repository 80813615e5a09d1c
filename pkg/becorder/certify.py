"""
Bernstein expansions and the exact standard-order oracle
N-forms, degree elevation, exponent/mantissa extraction, subdivision-based
sign certification with an odd-part and Sturm fallback.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, lcm
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from becorder.bitstrings import BitString, display, universe_up_to
from becorder.config import settings
from becorder.errors import CapacityError, DegreeError, DomainError, InconsistencyError
from becorder.models import BerOutcome, OrderOutcome, Verdict
from becorder.polynomials import (
    Poly,
    binomial_row,
    convolve,
    reliability_poly,
    sign_at,
    square_free_odd_part,
    strip_endpoint_roots,
    sturm_root_count,
    sturm_sequence,
)

logger = logging.getLogger(__name__)

SignFn = Callable[[Fraction], int]


@dataclass(frozen=True)
class BernExpansion:
    """Degree-n Bernstein expansion; ``nform[i] = B_i * C(n, i)``"""
    n: int
    nform: Tuple[int, ...]

    @property
    def bcoeffs(self) -> List[Fraction]:
        return [Fraction(v, comb(self.n, i)) for i, v in enumerate(self.nform)]

    def reconstruct(self) -> Poly:
        """Sum of N_i x^i (1 - x)^(n - i) in the power basis"""
        coeffs = [0] * (self.n + 1)
        for i, v in enumerate(self.nform):
            if not v:
                continue
            # x^i (1 - x)^(n - i) = sum_k (-1)^k C(n - i, k) x^(i + k)
            for k in range(self.n - i + 1):
                term = comb(self.n - i, k) * v
                coeffs[i + k] += -term if k % 2 else term
        return Poly(coeffs)


def to_bernstein(p: Poly, n: int) -> BernExpansion:
    """N_i = sum_{j <= i} C(n - j, i - j) a_j"""
    if n < max(p.degree, 0):
        raise DegreeError(f"degree {n} basis cannot hold a polynomial of degree {p.degree}")
    nform = [0] * (n + 1)
    for j, a in enumerate(p.coeffs):
        if not a:
            continue
        width = n - j
        c = 1
        for k in range(width + 1):
            nform[j + k] += a * c
            c = c * (width - k) // (k + 1)
    return BernExpansion(n=n, nform=tuple(nform))


def elevate(expansion: BernExpansion, n: int) -> BernExpansion:
    """Raise the basis degree; one step is N'_i = N_i + N_(i-1)"""
    if n < expansion.n:
        raise DegreeError(f"cannot elevate degree {expansion.n} down to {n}")
    if n == expansion.n:
        return expansion
    return BernExpansion(n=n, nform=tuple(convolve(expansion.nform, binomial_row(n - expansion.n))))


def reliability_nform(alpha: BitString, n: int) -> Tuple[int, ...]:
    """N-form of I_alpha at degree n >= 2^len(alpha)"""
    native = 1 << len(alpha)
    if n < native:
        raise DegreeError(f"degree {n} basis cannot hold I_{display(alpha)} of degree {native}")
    if len(alpha) > settings.L_MAX:
        raise CapacityError(
            f"string of length {len(alpha)} exceeds the polynomial length cap L_max={settings.L_MAX}",
            settings.L_MAX,
        )
    if n == native:
        return _native_nform(alpha)
    return _elevated_nform(alpha, n)


@lru_cache(maxsize=4096)
def _elevated_nform(alpha: BitString, n: int) -> Tuple[int, ...]:
    return tuple(convolve(_native_nform(alpha), binomial_row(n - (1 << len(alpha)))))


@lru_cache(maxsize=8192)
def _native_nform(alpha: BitString) -> Tuple[int, ...]:
    """Products of N-forms convolve, so the recursion never leaves the Bernstein basis"""
    if not alpha:
        return (0, 1)
    inner = _native_nform(alpha[:-1])
    square = convolve(inner, inner)
    if alpha[-1] == "0":
        return tuple(square)
    doubled = convolve(inner, binomial_row(len(inner) - 1))
    return tuple(2 * d - s for d, s in zip(doubled, square))


def nform_sign_at(nform: Sequence[int], t: Fraction) -> int:
    """Sign of sum N_i t^i (1 - t)^(n - i) in integer arithmetic"""
    t = Fraction(t)
    a, d = t.numerator, t.denominator
    c = d - a
    acc = 0
    c_power = 1
    for v in reversed(nform):
        acc = acc * a + v * c_power
        c_power *= c
    return (acc > 0) - (acc < 0)


# Exponent and mantissa
@dataclass(frozen=True)
class ExpMant:
    """f(x) = mantissa * x^exponent + higher terms"""
    exponent: int
    mantissa: int


@dataclass(frozen=True)
class ExpMantFormula:
    """Closed-form prediction for I_alpha: exponent 2^z and log2 of the mantissa"""
    exponent: int
    log2_mantissa: int

    @property
    def mantissa(self) -> int:
        return 1 << self.log2_mantissa


@dataclass(frozen=True)
class ExpMantDiscrepancy:
    alpha: BitString
    direct: ExpMant
    formula: ExpMantFormula

    @property
    def exponent_agrees(self) -> bool:
        return self.direct.exponent == self.formula.exponent


def exp_mant_direct(p: Poly) -> ExpMant:
    if p.is_zero:
        raise DomainError("the zero polynomial has no exponent")
    exponent, mantissa = p.lowest_term()
    return ExpMant(exponent=exponent, mantissa=mantissa)


def exp_mant_formula(alpha: BitString) -> ExpMantFormula:
    """Exponent 2^z (z zeros); log2 mantissa sums 2^(zeros right of each 1)"""
    zeros_to_right = 0
    total = 0
    for bit in reversed(alpha):
        if bit == "0":
            zeros_to_right += 1
        else:
            total += 1 << zeros_to_right
    return ExpMantFormula(exponent=1 << alpha.count("0"), log2_mantissa=total)


def exp_mant_report(max_len: int) -> List[ExpMantDiscrepancy]:
    """Every nonempty string up to max_len whose formula and direct values differ"""
    rows = []
    for alpha in universe_up_to(max_len):
        if not alpha:
            continue
        direct = exp_mant_direct(reliability_poly(alpha))
        formula = exp_mant_formula(alpha)
        if direct.exponent != formula.exponent or direct.mantissa != formula.mantissa:
            rows.append(ExpMantDiscrepancy(alpha=alpha, direct=direct, formula=formula))
    logger.info("exponent/mantissa cross-check up to length %d: %d discrepancies", max_len, len(rows))
    return rows


# Certificates
@dataclass(frozen=True)
class Certificate:
    """Evidence for the sign behaviour of a polynomial on [0, 1]

    Nonnegative and nonpositive verdicts carry division points; on each piece the
    Bernstein coefficients of the certified factor share one sign. Sign changes
    carry an interior pair (a, b) with p(a) * p(b) < 0.
    """
    verdict: Verdict
    method: str
    division_points: Tuple[Fraction, ...] = ()
    witness: Optional[Tuple[Fraction, Fraction]] = None
    endpoint_orders: Tuple[int, int] = (0, 0)

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict.value,
            "method": self.method,
            "division_points": [str(d) for d in self.division_points],
            "witness": [str(w) for w in self.witness] if self.witness else None,
            "endpoint_orders": list(self.endpoint_orders),
        }


def _settled(sign: int) -> Verdict:
    return Verdict.NONNEGATIVE if sign > 0 else Verdict.NONPOSITIVE


def _reduce(values: List[int]) -> List[int]:
    g = gcd(*values)
    return [v // g for v in values] if g > 1 else values


def _scaled_bcoeffs(nform: Sequence[int]) -> List[int]:
    """Positive multiple of the Bernstein coefficients, all integers"""
    n = len(nform) - 1
    row = [comb(n, i) for i in range(n + 1)]
    common = lcm(*row)
    return _reduce([v * (common // c) for v, c in zip(nform, row)])


def _split(b: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Midpoint de Casteljau split, kept integral by scaling with 2^n"""
    n = len(b) - 1
    left = [0] * (n + 1)
    right = [0] * (n + 1)
    row = list(b)
    left[0] = row[0] << n
    right[n] = row[-1] << n
    for k in range(1, n + 1):
        row = [x + y for x, y in zip(row, row[1:])]
        left[k] = row[0] << (n - k)
        right[n - k] = row[-1] << (n - k)
    return _reduce(left), _reduce(right)


def _subdivide(
    b: List[int], sign: int, depth_cap: int
) -> Tuple[Optional[List[Fraction]], Optional[Fraction]]:
    """Depth-first midpoint subdivision of [0, 1], left to right

    Returns (division points, None) when every piece has coefficients of the
    given sign, (None, t) when some subdivision point t has the opposite sign,
    and (None, None) when the depth cap is hit.
    """
    points = [Fraction(0)]
    stack = [(Fraction(0), Fraction(1), 0, b)]
    while stack:
        lo, hi, depth, coeffs = stack.pop()
        if all(c * sign >= 0 for c in coeffs):
            points.append(hi)
            continue
        if coeffs[0] * sign < 0:
            return None, lo
        if coeffs[-1] * sign < 0:
            return None, hi
        if depth >= depth_cap:
            return None, None
        left, right = _split(coeffs)
        mid = (lo + hi) / 2
        stack.append((mid, hi, depth + 1, right))
        stack.append((lo, mid, depth + 1, left))
    return points, None


def _anchor(sign_of: SignFn, target: int, near_one: bool = False) -> Fraction:
    """Interior point 2^-k (or 1 - 2^-k) where p has the target sign"""
    k = 1
    while True:
        t = Fraction(1, 1 << k)
        if near_one:
            t = 1 - t
        if sign_of(t) == target:
            return t
        k += 1


def _nudge(sign_of: SignFn, t: Fraction, target: int) -> Fraction:
    """Move t off a zero of the square part, staying on the odd part's sign"""
    if sign_of(t) == target:
        return t
    k = 1
    while True:
        step = Fraction(1, 1 << k)
        for candidate in (t - step, t + step):
            if 0 < candidate < 1 and sign_of(candidate) == target:
                return candidate
        k += 1


def _witness(sign_of: SignFn, sign: int, t: Fraction) -> Tuple[Fraction, Fraction]:
    """Pair an interior point of sign -sign with an anchor of sign sign near 0"""
    t = _nudge(sign_of, t, -sign)
    a = _anchor(sign_of, sign)
    return (a, t) if a < t else (t, a)


def _endpoint_witness(sign_of: SignFn, sign: int) -> Tuple[Fraction, Fraction]:
    return _anchor(sign_of, sign), _anchor(sign_of, -sign, near_one=True)


def _certify_nform(
    nform: Sequence[int],
    poly: Callable[[], Poly],
    depth_cap: int,
    cross_check: bool,
) -> Certificate:
    """Decide the sign of p on [0, 1] from its N-form; poly() builds p on demand"""
    n = len(nform) - 1
    e = next((i for i, v in enumerate(nform) if v), None)
    if e is None:
        raise DomainError("cannot certify the zero polynomial")
    f = next(i for i, v in enumerate(reversed(nform)) if v)
    inner = list(nform[e:n + 1 - f])
    orders = (e, f)
    sign = 1 if inner[0] > 0 else -1

    def sign_of(t: Fraction) -> int:
        return nform_sign_at(nform, t)

    if all(v * sign >= 0 for v in inner):
        certificate = Certificate(
            verdict=_settled(sign), method="bernstein",
            division_points=(Fraction(0), Fraction(1)), endpoint_orders=orders,
        )
    elif inner[-1] * sign < 0:
        certificate = Certificate(
            verdict=Verdict.SIGN_CHANGE, method="endpoints",
            witness=_endpoint_witness(sign_of, sign), endpoint_orders=orders,
        )
    else:
        certificate = _certify_by_subdivision(inner, poly, sign, sign_of, depth_cap, orders)

    if cross_check:
        oracle = sturm_decide(poly())
        if oracle.verdict is not certificate.verdict:
            raise InconsistencyError(
                f"subdivision says {certificate.verdict.value}, Sturm says {oracle.verdict.value}"
            )
    return certificate


def _certify_by_subdivision(
    inner: List[int],
    poly: Callable[[], Poly],
    sign: int,
    sign_of: SignFn,
    depth_cap: int,
    orders: Tuple[int, int],
) -> Certificate:
    points, point = _subdivide(_scaled_bcoeffs(inner), sign, depth_cap)
    if points is not None:
        return Certificate(
            verdict=_settled(sign), method="bernstein",
            division_points=tuple(points), endpoint_orders=orders,
        )
    if point is not None:
        return Certificate(
            verdict=Verdict.SIGN_CHANGE, method="bernstein",
            witness=_witness(sign_of, sign, point), endpoint_orders=orders,
        )

    # tangential interior root: only odd-multiplicity factors can flip the sign
    logger.debug("subdivision hit depth %d; reducing to the square-free odd part", depth_cap)
    _, _, g = strip_endpoint_roots(poly())
    h = square_free_odd_part(g)
    odd_nform = to_bernstein(h, max(h.degree, 0)).nform
    points, point = _subdivide(_scaled_bcoeffs(odd_nform), sign, depth_cap)
    if points is not None:
        return Certificate(
            verdict=_settled(sign), method="odd-part",
            division_points=tuple(points), endpoint_orders=orders,
        )
    if point is not None:
        return Certificate(
            verdict=Verdict.SIGN_CHANGE, method="odd-part",
            witness=_witness(sign_of, sign, point), endpoint_orders=orders,
        )

    logger.debug("odd-part subdivision hit depth %d; falling back to Sturm", depth_cap)
    return sturm_decide(poly())


def certify_nonneg(
    p: Poly, depth_cap: Optional[int] = None, cross_check: Optional[bool] = None
) -> Certificate:
    """Certify p >= 0, p <= 0 or a sign change on [0, 1]"""
    if p.is_zero:
        raise DomainError("cannot certify the zero polynomial")
    depth_cap = settings.SUBDIVISION_DEPTH_CAP if depth_cap is None else depth_cap
    cross_check = settings.CROSS_CHECK_STURM if cross_check is None else cross_check
    nform = to_bernstein(p, max(p.degree, 0)).nform
    return _certify_nform(nform, lambda: p, depth_cap, cross_check)


def sturm_decide(p: Poly) -> Certificate:
    """Independent decision by Sturm counting on the square-free odd part"""
    if p.is_zero:
        raise DomainError("cannot decide the sign of the zero polynomial")
    e, f, g = strip_endpoint_roots(p)
    sign = sign_at(g, 0)

    def sign_of(t: Fraction) -> int:
        return sign_at(p, t)

    if sign_at(g, 1) != sign:
        return Certificate(
            verdict=Verdict.SIGN_CHANGE, method="sturm",
            witness=_endpoint_witness(sign_of, sign), endpoint_orders=(e, f),
        )
    h = square_free_odd_part(g)
    if h.degree < 1 or sturm_root_count(h, 0, 1) == 0:
        return Certificate(
            verdict=_settled(sign), method="sturm",
            division_points=(Fraction(0), Fraction(1)), endpoint_orders=(e, f),
        )
    point = _bisect_for_sign(h, -sign)
    return Certificate(
        verdict=Verdict.SIGN_CHANGE, method="sturm",
        witness=_witness(sign_of, sign, point), endpoint_orders=(e, f),
    )


def _bisect_for_sign(h: Poly, target: int) -> Fraction:
    """Point in (0, 1) where the square-free h has the target sign

    h is nonzero with the opposite sign at both ends and has roots inside, so
    bisection guided by Sturm counts isolates a sign change.
    """
    chain = sturm_sequence(h)

    def count(a: Fraction, b: Fraction) -> int:
        signs_a = [s for s in (sign_at(q, a) for q in chain) if s]
        signs_b = [s for s in (sign_at(q, b) for q in chain) if s]
        va = sum(1 for s, t in zip(signs_a, signs_a[1:]) if s != t)
        vb = sum(1 for s, t in zip(signs_b, signs_b[1:]) if s != t)
        return va - vb

    lo, hi = Fraction(0), Fraction(1)
    while True:
        mid = (lo + hi) / 2
        k = 2
        while sign_at(h, mid) == 0:
            mid = (lo + hi) / 2 + (hi - lo) / (1 << k)
            k += 1
        if sign_at(h, mid) == target:
            return mid
        if count(lo, mid) > 0:
            hi = mid
        else:
            lo = mid


# Orders built on the oracle
def ber_order(alpha: BitString, gamma: BitString, n: int) -> BerOutcome:
    """Sign pattern of the degree-n N-form of I_alpha - I_gamma"""
    need = max(1 << len(alpha), 1 << len(gamma))
    if n < need:
        raise DegreeError(f"ber({n}) needs n >= {need} for {display(alpha)} vs {display(gamma)}")
    diff = [a - c for a, c in zip(reliability_nform(alpha, n), reliability_nform(gamma, n))]
    return ber_outcome(diff)


def ber_outcome(diff: Sequence[int]) -> BerOutcome:
    nonneg = all(v >= 0 for v in diff)
    nonpos = all(v <= 0 for v in diff)
    if nonneg and nonpos:
        return BerOutcome.EQUAL
    if nonneg:
        return BerOutcome.HOLDS
    if nonpos:
        return BerOutcome.HOLDS_REVERSED
    return BerOutcome.NEITHER


_VERDICT_OUTCOME = {
    Verdict.NONNEGATIVE: OrderOutcome.GREATER,
    Verdict.NONPOSITIVE: OrderOutcome.LESS,
    Verdict.SIGN_CHANGE: OrderOutcome.INCOMPARABLE,
}


def std_compare_with_certificate(
    alpha: BitString,
    gamma: BitString,
    depth_cap: Optional[int] = None,
    cross_check: Optional[bool] = None,
) -> Tuple[OrderOutcome, Optional[Certificate]]:
    """std_compare plus the certificate for I_alpha - I_gamma"""
    if alpha == gamma:
        return OrderOutcome.EQUAL, None
    depth_cap = settings.SUBDIVISION_DEPTH_CAP if depth_cap is None else depth_cap
    cross_check = settings.CROSS_CHECK_STURM if cross_check is None else cross_check
    n = max(1 << len(alpha), 1 << len(gamma))
    diff = [a - c for a, c in zip(reliability_nform(alpha, n), reliability_nform(gamma, n))]
    certificate = _certify_nform(
        diff, lambda: reliability_poly(alpha) - reliability_poly(gamma), depth_cap, cross_check
    )
    return _VERDICT_OUTCOME[certificate.verdict], certificate


def std_compare(
    alpha: BitString,
    gamma: BitString,
    depth_cap: Optional[int] = None,
    cross_check: Optional[bool] = None,
) -> OrderOutcome:
    """alpha outperforms gamma iff I_alpha >= I_gamma on [0, 1]"""
    outcome, _ = std_compare_with_certificate(alpha, gamma, depth_cap, cross_check)
    return outcome
