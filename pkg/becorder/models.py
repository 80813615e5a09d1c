"""
Pydantic models and enums shared by the library, the CLI and the HTTP layer
Outcome enums, method/beta specs and the report shapes
"""

from datetime import datetime
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from becorder.config import settings
from becorder.errors import ParseError


# Outcomes
class OrderOutcome(str, Enum):
    """Result of a partial-order comparison; Equivalent only for total preorders"""
    GREATER = "Greater"
    LESS = "Less"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"
    EQUIVALENT = "Equivalent"

    def reversed(self) -> "OrderOutcome":
        if self is OrderOutcome.GREATER:
            return OrderOutcome.LESS
        if self is OrderOutcome.LESS:
            return OrderOutcome.GREATER
        return self


class TotalOutcome(str, Enum):
    """Result of a total-preorder comparison"""
    GREATER = "Greater"
    EQUIVALENT = "Equivalent"
    LESS = "Less"

    def reversed(self) -> "TotalOutcome":
        if self is TotalOutcome.GREATER:
            return TotalOutcome.LESS
        if self is TotalOutcome.LESS:
            return TotalOutcome.GREATER
        return self

    @property
    def at_least(self) -> bool:
        """Greater or Equivalent"""
        return self is not TotalOutcome.LESS


class Verdict(str, Enum):
    """Sign behaviour of a polynomial on [0, 1]"""
    NONNEGATIVE = "NonnegativeOn01"
    NONPOSITIVE = "NonpositiveOn01"
    SIGN_CHANGE = "SignChange"


class BerOutcome(str, Enum):
    HOLDS = "Holds"
    HOLDS_REVERSED = "HoldsReversed"
    NEITHER = "Neither"
    EQUAL = "Equal"


# Method specs
class MethodKind(str, Enum):
    STD = "std"
    BER = "ber"
    FST = "fst"
    BETA = "beta"
    AVG = "avg"
    HLF = "hlf"
    AT0 = "at0"
    AT1 = "at1"
    RULES = "rules"


TOTAL_KINDS = {MethodKind.BETA, MethodKind.AVG, MethodKind.HLF, MethodKind.AT0, MethodKind.AT1}
RULE_LETTERS = "ABCDEF"


class BetaSpec(BaseModel):
    """β as a decimal literal or as 2^(1/q)"""
    literal: Optional[str] = Field(None, description="Decimal literal, e.g. 1.5")
    root_q: Optional[str] = Field(None, description="q in 2^(1/q), e.g. 3.627")

    model_config = {"frozen": True}

    @classmethod
    def parse(cls, text: str) -> "BetaSpec":
        """Accepts '1.5', '2^(1/4)', '2^1/4', '2**(1/4)', 'bec' and 'awgn'"""
        token = text.strip().lower().replace(" ", "")
        if token == "bec":
            token = f"2^(1/{settings.BEC_SCALING_EXPONENT})"
        elif token == "awgn":
            token = f"2^(1/{settings.AWGN_SCALING_EXPONENT})"

        for prefix in ("2^(1/", "2**(1/"):
            if token.startswith(prefix) and token.endswith(")"):
                return cls(root_q=_positive_decimal(token[len(prefix):-1], text))
        if token.startswith("2^1/"):
            return cls(root_q=_positive_decimal(token[len("2^1/"):], text))
        return cls(literal=_positive_decimal(token, text))

    @property
    def label(self) -> str:
        return self.literal if self.literal is not None else f"2^(1/{self.root_q})"


def _positive_decimal(token: str, original: str) -> str:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a beta value: {original!r}")
    if value <= 0:
        raise ParseError(f"beta parameters must be positive: {original!r}")
    return token


class MethodSpec(BaseModel):
    """A comparison method: std, ber:n, fst, beta:spec, avg, hlf, at0, at1, rules:SETS"""
    kind: MethodKind
    n: Optional[int] = None
    beta: Optional[BetaSpec] = None
    rules: Optional[str] = None

    model_config = {"frozen": True}

    @classmethod
    def parse(cls, text: str) -> "MethodSpec":
        head, _, arg = text.strip().partition(":")
        try:
            kind = MethodKind(head.lower())
        except ValueError:
            raise ParseError(f"unknown method {text!r}")

        if kind is MethodKind.BER:
            if not arg.isdigit() or int(arg) < 1:
                raise ParseError(f"ber needs a positive degree, e.g. ber:256 (got {text!r})")
            return cls(kind=kind, n=int(arg))
        if kind is MethodKind.BETA:
            if not arg:
                raise ParseError(f"beta needs a value, e.g. beta:1.5 or beta:2^(1/4) (got {text!r})")
            return cls(kind=kind, beta=BetaSpec.parse(arg))
        if kind is MethodKind.RULES:
            return cls(kind=kind, rules=parse_rule_letters(arg))
        if arg:
            raise ParseError(f"method {head!r} takes no argument (got {text!r})")
        return cls(kind=kind)

    @property
    def is_total(self) -> bool:
        return self.kind in TOTAL_KINDS

    @property
    def label(self) -> str:
        if self.kind is MethodKind.BER:
            return f"ber:{self.n}"
        if self.kind is MethodKind.BETA:
            return f"beta:{self.beta.label}"
        if self.kind is MethodKind.RULES:
            return f"rules:{self.rules}"
        return self.kind.value


def parse_rule_letters(text: str) -> str:
    """Normalise rule-set letters to a sorted, de-duplicated upper-case string"""
    letters = text.strip().upper().replace(",", "").replace("{", "").replace("}", "")
    unknown = set(letters) - set(RULE_LETTERS)
    if unknown:
        raise ParseError(f"unknown rule sets {''.join(sorted(unknown))!r}; choose from {RULE_LETTERS}")
    return "".join(sorted(set(letters)))


# Base response model
class BaseResponse(BaseModel):
    """Base response with common fields"""
    status: str = Field("success", description="Response status: success or error")
    timestamp: datetime = Field(default_factory=datetime.utcnow)
    message: Optional[str] = None


# Compare
class CompareReport(BaseResponse):
    """Outcome of comparing two strings under one method"""
    alpha: str
    gamma: str
    method: str
    outcome: str
    summary: str = Field(..., description="One-line human readable outcome")
    evidence: Dict[str, Any] = Field(default_factory=dict)
    flags: List[str] = Field(default_factory=list)


# Rankings
class RankingRow(BaseModel):
    """One line of a ranking"""
    rank: int
    bitstring: str
    label: str
    value: str


class RankingResponse(BaseResponse):
    """Universe {0,1}^m sorted best first"""
    m: int
    method: str
    rows: List[RankingRow]
    ties_at_cap: int = Field(0, description="Adjacent pairs left Equivalent at the precision cap")


class KendallEntry(BaseModel):
    first: str
    second: str
    distance: int


class KendallReport(BaseResponse):
    """Pairwise Kendall tau distances between rankings of one universe"""
    m: int
    methods: List[str]
    distances: List[KendallEntry]


# Influence
class InfluenceRow(BaseModel):
    level: int
    bitstring: str
    influence: str


class InfluenceLevel(BaseModel):
    level: int
    count: int
    mean: float
    log2_mean: float


class InfluenceReport(BaseResponse):
    """Influence of the last bit for every string up to a level"""
    max_level: int
    rows: List[InfluenceRow]
    levels: List[InfluenceLevel]
    slope: Optional[float] = Field(None, description="Least-squares slope of log2(mean) against level")
    slope_from: int = 4


# Matrices
class MatrixCensus(BaseModel):
    """Pair counts of a relation matrix"""
    m: int
    method: str
    greater: int
    less: int
    equal: int
    incomparable: int
    dim_against: Optional[str] = None
    non_dimmed: Optional[int] = None
    non_dimmed_incomparable: Optional[int] = None


# Closure
class ClosureEdge(BaseModel):
    lhs: str
    rhs: str
    provenance: str


class ClosureReport(BaseResponse):
    """Size and a sample of a closed relation set"""
    rules: str
    max_len: int
    enable_rsd: bool
    nodes: int
    edges: int
    provenance_counts: Dict[str, int]
    sample: List[ClosureEdge]


# Verification
class SuiteResult(BaseModel):
    """Outcome of one verification suite"""
    name: str
    passed: bool
    checked: int = 0
    failures: List[str] = Field(default_factory=list)
    notes: List[str] = Field(default_factory=list)


# Error model
class ErrorResponse(BaseModel):
    """Error response model"""
    error: str
    message: str
    timestamp: datetime = Field(default_factory=datetime.utcnow)
    details: Optional[Dict[str, Any]] = None
