"""
Verification suites
Each suite machine-checks one family of identities or implications with the
exact oracle and returns a SuiteResult. Suites marked slow are the desk-scale
runs at m = 8 and are left out of ``all`` unless asked for.
"""

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

from becorder.bitstrings import BitString, display, dual_string, thue_morse_prefix, universe, universe_up_to
from becorder.certify import (
    ber_order,
    certify_nonneg,
    exp_mant_report,
    reliability_nform,
    std_compare,
    sturm_decide,
)
from becorder.closure import close, seed_rules
from becorder.config import settings
from becorder.errors import ParseError
from becorder.matrix import GREATER, INCOMPARABLE, LESS, relation_matrix
from becorder.models import BerOutcome, MethodSpec, OrderOutcome, SuiteResult, TotalOutcome, Verdict
from becorder.orders import (
    at0_compare,
    at0_geq_diff,
    at0_key,
    at1_geq_diff,
    avg_compare,
    beta_compare,
    beta_exact,
    beta_poly,
    fst_compare,
    hlf_compare,
    more01_incomparable,
    rsd_beta_report,
)
from becorder.polynomials import ONE, Poly, average, dual_poly, reliability_poly
from becorder.utils.reports import Reports

logger = logging.getLogger(__name__)

MAX_FAILURES = 20
COMPARABLE = (OrderOutcome.GREATER, OrderOutcome.EQUAL)

# Regression values at m = 8
PINNED_INCOMPARABLE = {"ber:256": 4314, "std": 4298}
PINNED_RULE_INCOMPARABLE = {"AB": 17172, "ABC": 14038, "ABCD": 10046, "ABCDF": 6972}
# awgn, bec, avg, hlf taken pairwise in ranking order
PINNED_KENDALL = [313, 492, 582, 195, 285, 110]


@dataclass
class VerifyOptions:
    """Per-run overrides; None means the suite's own default"""
    max_len: Optional[int] = None
    samples: Optional[int] = None
    seed: int = 0
    enable_rsd: bool = False
    workers: Optional[int] = None

    def length(self, default: int) -> int:
        return default if self.max_len is None else self.max_len

    def count(self, default: int) -> int:
        return default if self.samples is None else self.samples

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


class Tally:
    """Counts checks and keeps the first few failures"""

    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failed = 0
        self.failures: List[str] = []
        self.notes: List[str] = []

    def expect(self, condition: bool, message: str) -> bool:
        self.checked += 1
        if not condition:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(message)
        return condition

    def note(self, message: str) -> None:
        self.notes.append(message)

    def result(self) -> SuiteResult:
        if self.failed > len(self.failures):
            self.notes.append(f"{self.failed - len(self.failures)} further failures not listed")
        return SuiteResult(
            name=self.name,
            passed=self.failed == 0,
            checked=self.checked,
            failures=self.failures,
            notes=self.notes,
        )


SuiteFn = Callable[[VerifyOptions, Tally], None]


@dataclass(frozen=True)
class Suite:
    name: str
    run: SuiteFn
    slow: bool
    summary: str


SUITES: Dict[str, Suite] = {}


def suite(name: str, slow: bool = False):
    """Register a check under a CLI name"""
    def register(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = Suite(name=name, run=fn, slow=slow, summary=(fn.__doc__ or "").strip())
        return fn
    return register


def suite_names(include_slow: bool = False) -> List[str]:
    return [name for name, s in SUITES.items() if include_slow or not s.slow]


def run_suite(name: str, options: Optional[VerifyOptions] = None) -> SuiteResult:
    if name not in SUITES:
        raise ParseError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    options = options or VerifyOptions()
    tally = Tally(name)
    logger.info("suite %s started", name)
    SUITES[name].run(options, tally)
    result = tally.result()
    logger.info("suite %s %s (%d checks)", name, "passed" if result.passed else "FAILED", result.checked)
    return result


def run_suites(names: List[str], options: Optional[VerifyOptions] = None) -> List[SuiteResult]:
    """Run suites in order; 'all' expands to every fast suite"""
    expanded: List[str] = []
    for name in names:
        if name == "all":
            expanded.extend(suite_names(include_slow=False))
        elif name == "acceptance":
            expanded.extend(s.name for s in SUITES.values() if s.slow)
        else:
            expanded.append(name)
    for name in expanded:
        if name not in SUITES:
            raise ParseError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    return [run_suite(name, options) for name in expanded]


# Helpers
def _monomial(k: int) -> Poly:
    return Poly([0] * k + [1])


def _random_string(rng: np.random.Generator, length: int) -> BitString:
    return "".join("1" if b else "0" for b in rng.integers(0, 2, size=length))


def _same_length_pairs(max_len: int) -> Iterator[Tuple[BitString, BitString]]:
    """Unordered pairs of distinct strings sharing a length 1..max_len"""
    for length in range(1, max_len + 1):
        yield from combinations(universe(length), 2)


def _std_pairs(max_len: int) -> Iterator[Tuple[BitString, BitString, OrderOutcome]]:
    for alpha, gamma in _same_length_pairs(max_len):
        yield alpha, gamma, std_compare(alpha, gamma)


def _oriented(alpha: BitString, gamma: BitString, outcome: OrderOutcome) -> Optional[Tuple[BitString, BitString]]:
    """(better, worse) for a strictly comparable pair"""
    if outcome is OrderOutcome.GREATER:
        return alpha, gamma
    if outcome is OrderOutcome.LESS:
        return gamma, alpha
    return None


# Polynomial identities
@suite("rsF-identity")
def _rsf_identity(options: VerifyOptions, tally: Tally) -> None:
    """I_011 - I_10 = x^3 (x - 1)^2 (4 + x - 2x^2 - x^3) and is nonnegative"""
    diff = reliability_poly("011") - reliability_poly("10")
    expected = _monomial(3) * Poly([1, -2, 1]) * Poly([4, 1, -2, -1])
    tally.expect(diff == expected, f"I_011 - I_10 = {diff}, expected {expected}")
    certificate = certify_nonneg(diff)
    tally.expect(certificate.verdict is Verdict.NONNEGATIVE, f"certificate verdict {certificate.verdict.value}")


@suite("rsE-lemma")
def _rse_lemma(options: VerifyOptions, tally: Tally) -> None:
    """o < i, oi < io and oii < ioo for o = 0110, i = 1001"""
    o, i = "0110", "1001"
    for worse, better in ((o, i), (o + i, i + o), (o + i + i, i + o + o)):
        outcome = std_compare(worse, better)
        tally.expect(outcome is OrderOutcome.LESS, f"{worse} vs {better}: {outcome.value}")


@suite("martingale")
def _martingale(options: VerifyOptions, tally: Tally) -> None:
    """avg(alpha 0) + avg(alpha 1) = 2 avg(alpha)"""
    for alpha in universe_up_to(options.length(8) - 1):
        left = average(alpha + "0") + average(alpha + "1")
        tally.expect(left == 2 * average(alpha), f"{display(alpha)}: {left} != 2 * {average(alpha)}")


@suite("composition")
def _composition(options: VerifyOptions, tally: Tally) -> None:
    """I_(alpha kappa) = I_kappa o I_alpha"""
    for s in universe_up_to(options.length(8)):
        for cut in range(1, len(s)):
            alpha, kappa = s[:cut], s[cut:]
            composed = reliability_poly(kappa).compose(reliability_poly(alpha))
            tally.expect(reliability_poly(s) == composed, f"{alpha}|{kappa}")


@suite("duality")
def _duality(options: VerifyOptions, tally: Tally) -> None:
    """I of the complement is 1 - I(1 - x)"""
    for alpha in universe_up_to(options.length(8)):
        tally.expect(
            reliability_poly(dual_string(alpha)) == dual_poly(reliability_poly(alpha)), display(alpha)
        )


@suite("injectivity")
def _injectivity(options: VerifyOptions, tally: Tally) -> None:
    """Distinct strings give distinct polynomials"""
    seen: Dict[Poly, BitString] = {}
    for alpha in universe_up_to(options.length(6)):
        p = reliability_poly(alpha)
        tally.expect(p not in seen, f"{display(alpha)} and {display(seen.get(p, ''))} share I")
        seen.setdefault(p, alpha)


@suite("monotone")
def _monotone(options: VerifyOptions, tally: Tally) -> None:
    """I(0) = 0, I(1) = 1 and I' >= 0 on [0, 1]"""
    for alpha in universe_up_to(options.length(8)):
        p = reliability_poly(alpha)
        tally.expect(p(0) == 0 and p(1) == 1, f"{display(alpha)}: endpoint values {p(0)}, {p(1)}")
        verdict = sturm_decide(p.derivative()).verdict
        tally.expect(verdict is Verdict.NONNEGATIVE, f"{display(alpha)}: derivative {verdict.value}")


# Bernstein order
@suite("ber-soundness")
def _ber_soundness(options: VerifyOptions, tally: Tally) -> None:
    """Ber(n) order implies the standard order"""
    max_len = options.length(6)
    n = max(64, 1 << max_len)
    for alpha, gamma in _same_length_pairs(max_len):
        ber = ber_order(alpha, gamma, n)
        if ber is BerOutcome.HOLDS:
            outcome = std_compare(alpha, gamma)
            tally.expect(outcome in COMPARABLE, f"{alpha} >=Ber {gamma} but std says {outcome.value}")
        elif ber is BerOutcome.HOLDS_REVERSED:
            outcome = std_compare(gamma, alpha)
            tally.expect(outcome in COMPARABLE, f"{gamma} >=Ber {alpha} but std says {outcome.value}")


@suite("ber-elevation")
def _ber_elevation(options: VerifyOptions, tally: Tally) -> None:
    """Ber(n) order persists at n + 1"""
    max_len = options.length(4)
    for alpha, gamma in _same_length_pairs(max_len):
        start = 1 << len(alpha)
        held = False
        for n in range(start, start + 9):
            holds = ber_order(alpha, gamma, n) is BerOutcome.HOLDS
            tally.expect(holds or not held, f"{alpha} vs {gamma}: held below n={n} but not at {n}")
            held = held or holds


@suite("ber-dual")
def _ber_dual(options: VerifyOptions, tally: Tally) -> None:
    """alpha >=Ber gamma iff the complement of gamma >=Ber the complement of alpha"""
    for alpha, gamma in _same_length_pairs(options.length(6)):
        n = 1 << len(alpha)
        left = ber_order(alpha, gamma, n)
        right = ber_order(dual_string(gamma), dual_string(alpha), n)
        tally.expect(left is right, f"{alpha} vs {gamma}: {left.value} but duals give {right.value}")


@suite("bernstein-monotone")
def _bernstein_monotone(options: VerifyOptions, tally: Tally) -> None:
    """Bernstein coefficients of I_alpha are non-decreasing"""
    for alpha in universe_up_to(options.length(8)):
        n = 1 << len(alpha)
        nform = reliability_nform(alpha, n)
        row = [1]
        for k in range(n):
            row.append(row[-1] * (n - k) // (k + 1))
        ok = all(nform[i] * row[i + 1] <= nform[i + 1] * row[i] for i in range(n))
        tally.expect(ok, f"{display(alpha)}: Bernstein coefficients decrease somewhere")


@suite("exp-mant")
def _exp_mant(options: VerifyOptions, tally: Tally) -> None:
    """Closed-form exponent matches the lowest term; mantissa differences are listed"""
    max_len = options.length(10)
    rows = exp_mant_report(max_len)
    checked = sum(1 for alpha in universe_up_to(max_len) if alpha)
    for row in rows:
        tally.expect(
            row.exponent_agrees,
            f"{row.alpha}: exponent {row.direct.exponent} vs formula {row.formula.exponent}",
        )
        if row.exponent_agrees:
            tally.note(
                f"{row.alpha}: mantissa {row.direct.mantissa} vs formula 2^{row.formula.log2_mantissa}"
            )
    tally.checked = checked
    tally.note(f"{len(rows)} of {checked} strings differ from the closed form")


_STURM_OUTCOME = {
    Verdict.NONNEGATIVE: OrderOutcome.GREATER,
    Verdict.NONPOSITIVE: OrderOutcome.LESS,
    Verdict.SIGN_CHANGE: OrderOutcome.INCOMPARABLE,
}


def _cross_check_pair(pair: Tuple[BitString, BitString]) -> Tuple[bool, str]:
    alpha, gamma = pair
    outcome = std_compare(alpha, gamma)
    verdict = sturm_decide(reliability_poly(alpha) - reliability_poly(gamma)).verdict
    return outcome is _STURM_OUTCOME[verdict], f"{alpha} vs {gamma}: subdivision {outcome.value}, sturm {verdict.value}"


@suite("oracle-cross-check", slow=True)
def _oracle_cross_check(options: VerifyOptions, tally: Tally) -> None:
    """Subdivision and Sturm counting reach the same verdict"""
    rng = options.rng()
    length = options.length(8)
    pairs = []
    for _ in range(options.count(1000)):
        alpha, gamma = _random_string(rng, length), _random_string(rng, length)
        if alpha != gamma:
            pairs.append((alpha, gamma))
    workers = settings.WORKERS if options.workers is None else options.workers
    if workers > 1 and len(pairs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            checks = list(pool.map(_cross_check_pair, pairs, chunksize=8))
    else:
        checks = [_cross_check_pair(pair) for pair in pairs]
    for agreed, message in checks:
        tally.expect(agreed, message)


@suite("antisymmetry")
def _antisymmetry(options: VerifyOptions, tally: Tally) -> None:
    """Greater one way is Less the other way; comparable chains are transitive"""
    max_len = options.length(5)
    for alpha, gamma, outcome in _std_pairs(max_len):
        back = std_compare(gamma, alpha)
        tally.expect(back is outcome.reversed(), f"{alpha} vs {gamma}: {outcome.value} then {back.value}")

    rng = options.rng()
    strings = [s for s in universe_up_to(max_len) if s]
    for _ in range(options.count(2000)):
        a, b, c = (strings[int(i)] for i in rng.integers(0, len(strings), size=3))
        if std_compare(a, b) in COMPARABLE and std_compare(b, c) in COMPARABLE:
            tally.expect(std_compare(a, c) in COMPARABLE, f"{a} >= {b} >= {c} but not {a} >= {c}")


# Implications from the standard order
def _check_std_implies(tally: Tally, better: BitString, worse: BitString) -> None:
    tally.expect(at0_geq_diff(better, worse), f"{better} >= {worse} but not >=@0")
    tally.expect(at1_geq_diff(better, worse), f"{better} >= {worse} but not >=@1")
    tally.expect(avg_compare(better, worse).at_least, f"{better} >= {worse} but avg says Less")
    tally.expect(hlf_compare(better, worse).at_least, f"{better} >= {worse} but hlf says Less")
    fst = fst_compare(better, worse)
    tally.expect(
        fst in (OrderOutcome.GREATER, OrderOutcome.EQUIVALENT), f"{better} >= {worse} but fst says {fst.value}"
    )


@suite("std-implications")
def _std_implications(options: VerifyOptions, tally: Tally) -> None:
    """The standard order implies @0, @1, avg, hlf and fst"""
    max_len = options.length(6)
    for alpha, gamma, outcome in _std_pairs(max_len):
        pair = _oriented(alpha, gamma, outcome)
        if pair:
            _check_std_implies(tally, *pair)

    # intergenerational pairs
    rng = options.rng()
    for _ in range(options.count(10000)):
        la, lc = (int(v) for v in rng.integers(1, max_len + 1, size=2))
        if la == lc:
            continue
        alpha, gamma = _random_string(rng, la), _random_string(rng, lc)
        pair = _oriented(alpha, gamma, std_compare(alpha, gamma))
        if pair:
            _check_std_implies(tally, *pair)


@suite("more01")
def _more01(options: VerifyOptions, tally: Tally) -> None:
    """More ones and more zeros certifies incomparability"""
    strings = [s for s in universe_up_to(options.length(5)) if s]
    for alpha in strings:
        for gamma in strings:
            if more01_incomparable(alpha, gamma):
                outcome = std_compare(alpha, gamma)
                tally.expect(outcome is OrderOutcome.INCOMPARABLE, f"{alpha} vs {gamma}: {outcome.value}")


@suite("dual-props")
def _dual_props(options: VerifyOptions, tally: Tally) -> None:
    """avg, hlf, fst and same-length beta comparisons flip under complement"""
    betas = [MethodSpec.parse("beta:1.5").beta, MethodSpec.parse("beta:0.75").beta, MethodSpec.parse("beta:awgn").beta]
    for alpha, gamma in _same_length_pairs(options.length(6)):
        da, dc = dual_string(alpha), dual_string(gamma)
        for name, compare in (("avg", avg_compare), ("hlf", hlf_compare), ("fst", fst_compare)):
            left, right = compare(alpha, gamma), compare(da, dc)
            tally.expect(left is right.reversed(), f"{name}: {alpha} vs {gamma} {left.value}, duals {right.value}")
        for beta in betas:
            left, right = beta_compare(alpha, gamma, beta), beta_compare(da, dc, beta)
            tally.expect(
                left is right.reversed(), f"beta {beta.label}: {alpha} vs {gamma} {left.value}, duals {right.value}"
            )


@suite("at-con")
def _at_con(options: VerifyOptions, tally: Tally) -> None:
    """alpha >@0 gamma and kappa ~@0 lambda give alpha kappa >=@0 gamma lambda"""
    rng = options.rng()
    strings = [s for s in universe_up_to(options.length(4)) if s]
    classes: Dict[Tuple[int, int], List[BitString]] = defaultdict(list)
    for s in strings:
        classes[at0_key(s)].append(s)
    for _ in range(options.count(5000)):
        alpha, gamma, kappa = (strings[int(i)] for i in rng.integers(0, len(strings), size=3))
        peers = classes[at0_key(kappa)]
        lam = peers[int(rng.integers(0, len(peers)))]
        if at0_compare(alpha, gamma) is not TotalOutcome.GREATER:
            continue
        outcome = at0_compare(alpha + kappa, gamma + lam)
        tally.expect(outcome.at_least, f"{alpha}+{kappa} vs {gamma}+{lam}: {outcome.value}")


@suite("beta-concat")
def _beta_concat(options: VerifyOptions, tally: Tally) -> None:
    """alpha >=b gamma and kappa >=b lambda (equal lengths) give alpha kappa >=b gamma lambda"""
    rng = options.rng()
    max_len = options.length(6)
    for _ in range(options.count(5000)):
        beta = Fraction(int(rng.integers(1, 193)), 64)
        alpha = _random_string(rng, int(rng.integers(1, max_len + 1)))
        gamma = _random_string(rng, int(rng.integers(1, max_len + 1)))
        k = int(rng.integers(1, 5))
        kappa, lam = _random_string(rng, k), _random_string(rng, k)
        if beta_exact(alpha, beta) < beta_exact(gamma, beta) or beta_exact(kappa, beta) < beta_exact(lam, beta):
            continue
        tally.expect(
            beta_exact(alpha + kappa, beta) >= beta_exact(gamma + lam, beta),
            f"beta={beta}: {alpha}+{kappa} vs {gamma}+{lam}",
        )


@suite("rsC-beta")
def _rsc_beta(options: VerifyOptions, tally: Tally) -> None:
    """(10 0^k 01) - (01 0^k 10) = (b - 1)(b^(k+2) - 1) in b"""
    for k in range(0, options.length(8) + 1):
        diff = beta_poly("10" + "0" * k + "01") - beta_poly("01" + "0" * k + "10")
        expected = Poly([-1, 1]) * (_monomial(k + 2) - ONE)
        tally.expect(diff == expected, f"k={k}: {diff}")


@suite("rsE-beta")
def _rse_beta(options: VerifyOptions, tally: Tally) -> None:
    """complement(tau) - tau = prod (b^(2^j) - 1) for tau of length 2^k"""
    for k in range(1, options.length(6) + 1):
        tau = thue_morse_prefix(1 << k)
        diff = beta_poly(dual_string(tau)) - beta_poly(tau)
        expected = ONE
        for j in range(k):
            expected = expected * (_monomial(1 << j) - ONE)
        tally.expect(diff == expected, f"k={k}: {diff}")


@suite("rsd-beta")
def _rsd_beta(options: VerifyOptions, tally: Tally) -> None:
    """Which bound on beta the RS-D pairs force, on an exact grid"""
    report = rsd_beta_report(k_max=options.length(6))
    for row in report.rows:
        tally.checked += 1
        tally.note(
            f"k={row.k}: {row.satisfied} grid values satisfy, largest {row.largest}, "
            f"{row.above_inverse_root} above 2^(-1/k), {row.above_root} above 2^(1/k)"
        )
    tally.note(f"bound beta <= 2^(-1/k) {'holds' if report.inverse_root_bound_holds else 'fails'}")
    tally.note(f"bound beta <= 2^(1/k) {'holds' if report.root_bound_holds else 'fails'}")
    tally.expect(
        report.inverse_root_bound_holds or report.root_bound_holds, "neither reading of the bound survives"
    )


# Closure
@suite("closure-chain")
def _closure_chain(options: VerifyOptions, tally: Tally) -> None:
    """0011 >= 010 >= 1000 from rules A, B and F at L = 4"""
    relation = close(seed_rules("ABF", 4))
    for lhs, rhs in (("0011", "010"), ("010", "1000"), ("0011", "1000")):
        tally.expect(relation.contains(lhs, rhs), f"missing {lhs} >= {rhs}")


@suite("closure-soundness")
def _closure_soundness(options: VerifyOptions, tally: Tally) -> None:
    """Every closure edge is confirmed by the exact oracle"""
    rules = "ABCDEF" if options.enable_rsd else "ABCEF"
    relation = close(seed_rules(rules, options.length(5), options.enable_rsd))
    for lhs, rhs, tag in relation.edges():
        outcome = std_compare(lhs, rhs)
        tally.expect(outcome in COMPARABLE, f"{display(lhs)} >= {display(rhs)} ({tag}) but std says {outcome.value}")


@suite("closure-props")
def _closure_props(options: VerifyOptions, tally: Tally) -> None:
    """Closure is monotone in the rules, closed under duality and idempotent"""
    max_len = options.length(6)
    previous = None
    for rules in ("A", "AB", "ABC", "ABCE", "ABCEF"):
        relation = close(seed_rules(rules, max_len))
        edges = relation.edge_set()
        if previous is not None:
            tally.expect(previous <= edges, f"closure of {rules} misses edges of a smaller rule set")
        duals = {(dual_string(rhs), dual_string(lhs)) for lhs, rhs in edges}
        tally.expect(duals == edges, f"closure of {rules} is not closed under duality")
        again = close(relation).edge_set()
        tally.expect(again == edges, f"closing {rules} twice changes the edge set")
        previous = edges
    tally.expect(close(seed_rules("", max_len)).edge_count == 0, "empty seed grows edges")


# Desk-scale acceptance runs
@suite("sixteen-pixels", slow=True)
def _sixteen_pixels(options: VerifyOptions, tally: Tally) -> None:
    """Exactly 16 ordered pairs at m = 8 are Ber(256)-incomparable yet std-comparable"""
    m = options.length(8)
    ber = relation_matrix(m, "ber:256", workers=options.workers)
    std = relation_matrix(m, "std", workers=options.workers)
    hidden = int(np.count_nonzero((ber.codes == INCOMPARABLE) & (std.codes != INCOMPARABLE)))
    tally.note(f"{hidden} pairs")
    tally.expect(hidden == 16, f"expected 16 pairs, found {hidden}")
    if m == 8:
        for method, matrix in (("ber:256", ber), ("std", std)):
            found, pinned = matrix.count(INCOMPARABLE), PINNED_INCOMPARABLE[method]
            tally.expect(found == pinned, f"{method}: {found} incomparable pairs, pinned {pinned}")


@suite("kendall-outlier", slow=True)
def _kendall_outlier(options: VerifyOptions, tally: Tally) -> None:
    """beta = 2^(1/3.627) tracks hlf and avg more closely than 2^(1/4)"""
    report = Reports.kendall(options.length(8))
    distances = {(e.first, e.second): e.distance for e in report.distances}
    awgn, bec = report.methods[0], report.methods[1]
    for entry in report.distances:
        tally.note(f"{entry.first} vs {entry.second}: {entry.distance}")
    for other in ("avg", "hlf"):
        d_bec, d_awgn = distances[(bec, other)], distances[(awgn, other)]
        tally.expect(d_bec < d_awgn, f"d({bec}, {other}) = {d_bec} is not below d({awgn}, {other}) = {d_awgn}")
    if report.m == 8:
        found = [entry.distance for entry in report.distances]
        tally.expect(found == PINNED_KENDALL, f"distances {found}, pinned {PINNED_KENDALL}")


@suite("rule-monotone", slow=True)
def _rule_monotone(options: VerifyOptions, tally: Tally) -> None:
    """Incomparable counts shrink along AB, ABC, ABCD, ABCDF at m = 8"""
    m = options.length(8)
    counts = []
    for rules in ("AB", "ABC", "ABCD", "ABCDF"):
        matrix = relation_matrix(m, f"rules:{rules}", enable_rsd=True)
        counts.append(matrix.count(INCOMPARABLE))
        tally.note(f"rules {rules}: {counts[-1]} incomparable, {matrix.count(GREATER)} greater, {matrix.count(LESS)} less")
    for before, after in zip(counts, counts[1:]):
        tally.expect(after <= before, f"incomparable count grew from {before} to {after}")
    tally.expect(counts[-1] < counts[-2], "rule F does not reduce the incomparable count")
    if m == 8:
        pinned = list(PINNED_RULE_INCOMPARABLE.values())
        tally.expect(counts == pinned, f"incomparable counts {counts}, pinned {pinned}")


@suite("influence-slope", slow=True)
def _influence_slope(options: VerifyOptions, tally: Tally) -> None:
    """log2 of the mean influence falls with slope in (-0.40, -0.20)"""
    report = Reports.influence(options.length(settings.INFLUENCE_MAX_LEVEL), slope_from=4)
    for level in report.levels:
        tally.note(f"level {level.level}: mean {level.mean:.6g}")
    tally.note(f"slope {report.slope}")
    tally.expect(report.slope is not None and -0.40 < report.slope < -0.20, f"slope {report.slope}")
    nonneg = all(not row.influence.startswith("-") for row in report.rows)
    tally.expect(nonneg, "negative influence value")
