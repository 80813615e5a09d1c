"""
Exact reliability polynomials
Power-basis polynomials over arbitrary-precision integers, the polar recursion,
duality, integration, square-free reduction and Sturm root counting.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from gmpy2 import divexact, mpz
from gmpy2 import gcd as mpz_gcd
from sympy import Poly as SymPoly
from sympy import symbols

from becorder.bitstrings import BitString
from becorder.config import settings
from becorder.errors import CapacityError, DomainError, EndpointRootError

logger = logging.getLogger(__name__)

Rational = Fraction
Number = Union[int, Fraction]

_X = symbols("x")


class Poly:
    """Immutable polynomial; ``coeffs[i]`` is the coefficient of x**i, no trailing zeros"""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        values = [int(c) for c in coeffs]
        while values and values[-1] == 0:
            values.pop()
        self._coeffs: Tuple[int, ...] = tuple(values)

    @property
    def coeffs(self) -> Tuple[int, ...]:
        return self._coeffs

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient; -1 for the zero polynomial"""
        return len(self._coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coeffs

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Poly([other])
        return isinstance(other, Poly) and self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    def __repr__(self) -> str:
        return f"Poly({list(self._coeffs)})"

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        terms = []
        for power in range(self.degree, -1, -1):
            c = self._coeffs[power]
            if not c:
                continue
            sign = "-" if c < 0 else "+"
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                head = "" if magnitude == 1 else str(magnitude)
                body = f"{head}x" if power == 1 else f"{head}x^{power}"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text

    def __add__(self, other: Union["Poly", int]) -> "Poly":
        other = _lift(other)
        a, b = self._coeffs, other._coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self._coeffs])

    def __sub__(self, other: Union["Poly", int]) -> "Poly":
        return self + (-_lift(other))

    def __rsub__(self, other: int) -> "Poly":
        return _lift(other) - self

    def __mul__(self, other: Union["Poly", int]) -> "Poly":
        if isinstance(other, int):
            return Poly([other * c for c in self._coeffs])
        return Poly(convolve(self._coeffs, other._coeffs))

    __rmul__ = __mul__

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x))"""
        result = ZERO
        for c in reversed(self._coeffs):
            result = result * inner + c
        return result

    def __call__(self, x: Number) -> Fraction:
        return poly_eval(self, x)

    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self._coeffs)][1:])

    def integral_01(self) -> Fraction:
        """Exact integral over [0, 1]"""
        return sum((Fraction(c, i + 1) for i, c in enumerate(self._coeffs)), Fraction(0))

    def lowest_term(self) -> Tuple[int, int]:
        """(power, coefficient) of the lowest nonzero term"""
        for power, c in enumerate(self._coeffs):
            if c:
                return power, c
        raise DomainError("the zero polynomial has no lowest term")

    def content(self) -> int:
        """Positive gcd of the coefficients (0 for the zero polynomial)"""
        return gcd(*self._coeffs) if self._coeffs else 0

    def primitive(self) -> "Poly":
        g = self.content()
        return Poly([c // g for c in self._coeffs]) if g > 1 else self

    def to_json(self) -> List[str]:
        """Decimal coefficient list, lowest power first"""
        return [str(c) for c in self._coeffs]


def _lift(value: Union[Poly, int]) -> Poly:
    return value if isinstance(value, Poly) else Poly([value])


def convolve(a: Sequence[int], b: Sequence[int]) -> List[int]:
    """Schoolbook product of two coefficient sequences"""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    width = len(b)
    for i, ai in enumerate(a):
        if ai:
            out[i:i + width] = [o + ai * bj for o, bj in zip(out[i:i + width], b)]
    return out


@lru_cache(maxsize=64)
def binomial_row(n: int) -> Tuple[int, ...]:
    """C(n, 0), ..., C(n, n)"""
    row = [1]
    for k in range(n):
        row.append(row[-1] * (n - k) // (k + 1))
    return tuple(row)


ZERO = Poly()
ONE = Poly([1])
X = Poly([0, 1])


def reliability_poly(alpha: BitString, l_max: Optional[int] = None) -> Poly:
    """I_alpha, composed so that the first bit is applied first

    I_eps(x) = x, I_0(x) = x^2, I_1(x) = 2x - x^2 and
    I_{a1 a2 ... al} = I_{a2 ... al} o I_{a1}.
    """
    limit = settings.L_MAX if l_max is None else l_max
    if len(alpha) > limit:
        raise CapacityError(
            f"string of length {len(alpha)} exceeds the polynomial length cap L_max={limit}", limit
        )
    return _reliability_poly(alpha)


@lru_cache(maxsize=8192)
def _reliability_poly(alpha: BitString) -> Poly:
    if not alpha:
        return X
    inner = _reliability_poly(alpha[:-1])
    square = inner * inner
    if alpha[-1] == "0":
        return square
    return inner * 2 - square


def poly_eval(p: Poly, x: Number) -> Fraction:
    """Exact Horner evaluation"""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def sign_at(p: Poly, x: Number) -> int:
    """Sign of p(x) using integer-only homogeneous evaluation"""
    x = Fraction(x)
    num, den = mpz(x.numerator), mpz(x.denominator)
    acc = mpz(0)
    den_power = mpz(1)
    for c in reversed(p.coeffs):
        acc = acc * num + c * den_power
        den_power *= den
    return (acc > 0) - (acc < 0)


def dual_poly(p: Poly) -> Poly:
    """q(x) = 1 - p(1 - x)"""
    return ONE - p.compose(ONE - X)


def average(alpha: BitString, l_max: Optional[int] = None) -> Fraction:
    """avg(alpha): the integral of I_alpha over [0, 1]"""
    return reliability_poly(alpha, l_max).integral_01()


def strip_endpoint_roots(p: Poly) -> Tuple[int, int, Poly]:
    """Write p = x^e (1 - x)^f g with g(0) != 0 and g(1) != 0"""
    if p.is_zero:
        raise DomainError("cannot strip roots of the zero polynomial")
    e, _ = p.lowest_term()
    coeffs = list(p.coeffs[e:])
    f = 0
    while len(coeffs) > 1 and sum(coeffs) == 0:
        coeffs = _divide_by_one_minus_x(coeffs)
        f += 1
    return e, f, Poly(coeffs)


def _divide_by_one_minus_x(coeffs: Sequence[int]) -> List[int]:
    """Exact quotient by (1 - x); caller guarantees the sum of coeffs is zero"""
    n = len(coeffs) - 1
    quotient = [0] * n
    acc = 0
    for k in range(n, 0, -1):
        acc += coeffs[k]
        quotient[k - 1] = -acc
    return quotient


def square_free_odd_part(p: Poly) -> Poly:
    """Product of the square-free factors of odd multiplicity, times the content

    p = odd_part * s with s a product of even powers, so p and its odd part have
    the same sign wherever s does not vanish.
    """
    if p.is_zero:
        raise DomainError("the zero polynomial has no square-free decomposition")
    if p.degree == 0:
        return p
    content, factors = SymPoly(list(reversed(p.coeffs)), _X, domain="ZZ").sqf_list()
    result = Poly([int(content)])
    for factor, multiplicity in factors:
        if multiplicity % 2:
            result = result * Poly(int(c) for c in reversed(factor.all_coeffs()))
    return result


def _content_free(r: List[mpz]) -> List[mpz]:
    """Divide out the positive gcd of the coefficients"""
    g = mpz(0)
    for c in r:
        g = mpz_gcd(g, c)
        if g == 1:
            return r
    return [divexact(c, g) for c in r] if g > 1 else r


def _signed_prem(a: Sequence[mpz], b: Sequence[mpz]) -> List[mpz]:
    """Remainder of a modulo b, multiplied by a positive constant"""
    r = list(a)
    db = len(b) - 1
    lead = b[-1]
    steps = 0
    while r and len(r) > db:
        top = r.pop()
        shift = len(r) - db
        r = [lead * c for c in r]
        for i, bc in enumerate(b[:-1]):
            r[shift + i] -= top * bc
        steps += 1
        while r and r[-1] == 0:
            r.pop()
    if lead < 0 and steps % 2:
        r = [-c for c in r]
    return r


def sturm_sequence(p: Poly) -> List[Poly]:
    """Sturm chain p, p', -rem, ... as a primitive remainder sequence

    Every member is a positive multiple of the classical one with its content
    divided out, so sign variations are unchanged. Arithmetic runs on GMP integers.
    """
    if p.is_zero:
        raise DomainError("the zero polynomial has no Sturm sequence")
    chain = [_content_free([mpz(c) for c in p.coeffs])]
    derivative = p.derivative()
    if derivative.is_zero:
        return [Poly(q) for q in chain]
    chain.append(_content_free([mpz(c) for c in derivative.coeffs]))
    while True:
        remainder = _signed_prem(chain[-2], chain[-1])
        if not remainder:
            break
        chain.append(_content_free([-c for c in remainder]))
    logger.debug(
        "sturm chain of degree %d: %d members, widest coefficient %d bits",
        p.degree, len(chain), max(c.bit_length() for q in chain for c in q),
    )
    return [Poly(q) for q in chain]


def _variations(chain: Sequence[Poly], x: Fraction) -> int:
    signs = [s for s in (sign_at(q, x) for q in chain) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def sturm_root_count(p: Poly, a: Number, b: Number) -> int:
    """Number of distinct real roots of p in (a, b)"""
    a, b = Fraction(a), Fraction(b)
    if p.is_zero:
        raise DomainError("cannot count roots of the zero polynomial")
    if not a < b:
        raise DomainError(f"empty interval ({a}, {b})")
    for end in (a, b):
        if sign_at(p, end) == 0:
            raise EndpointRootError(f"endpoint {end} is a root; perturb it before counting")
    chain = sturm_sequence(p)
    return _variations(chain, a) - _variations(chain, b)
