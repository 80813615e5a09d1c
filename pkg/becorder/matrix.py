"""
Relation matrices over {0,1}^m
Every ordered pair of a fixed-length universe classified under one method,
optionally spread over worker processes.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from becorder.bitstrings import BitString, universe
from becorder.certify import ber_order, std_compare
from becorder.closure import RelationSet, close, seed_rules
from becorder.config import settings
from becorder.errors import CapacityError, DegreeError
from becorder.models import BerOutcome, MatrixCensus, MethodKind, MethodSpec, OrderOutcome, TotalOutcome
from becorder.orders import fst_compare, total_compare

logger = logging.getLogger(__name__)

EQUAL, GREATER, LESS, INCOMPARABLE = 0, 1, 2, 3
CODE_NAMES = {EQUAL: "Equal", GREATER: "Greater", LESS: "Less", INCOMPARABLE: "Incomparable"}

_ORDER_CODES = {
    OrderOutcome.EQUAL: EQUAL,
    OrderOutcome.EQUIVALENT: EQUAL,
    OrderOutcome.GREATER: GREATER,
    OrderOutcome.LESS: LESS,
    OrderOutcome.INCOMPARABLE: INCOMPARABLE,
}
_TOTAL_CODES = {TotalOutcome.GREATER: GREATER, TotalOutcome.LESS: LESS, TotalOutcome.EQUIVALENT: EQUAL}
_BER_CODES = {
    BerOutcome.HOLDS: GREATER,
    BerOutcome.HOLDS_REVERSED: LESS,
    BerOutcome.EQUAL: EQUAL,
    BerOutcome.NEITHER: INCOMPARABLE,
}
_TRANSPOSE = np.array([EQUAL, LESS, GREATER, INCOMPARABLE], dtype=np.int8)


@dataclass(frozen=True)
class RelationMatrix:
    """codes[i, j] classifies universe[i] against universe[j]"""
    m: int
    method: str
    codes: np.ndarray

    @property
    def universe(self) -> List[BitString]:
        return universe(self.m)

    def outcome(self, alpha: BitString, gamma: BitString) -> str:
        return CODE_NAMES[int(self.codes[int(alpha or "0", 2), int(gamma or "0", 2)])]

    def count(self, code: int) -> int:
        return int(np.count_nonzero(self.codes == code))

    def is_antisymmetric(self) -> bool:
        """Greater at (i, j) exactly when Less at (j, i); Equal diagonal"""
        return bool(
            np.array_equal(_TRANSPOSE[self.codes], self.codes.T)
            and np.all(np.diag(self.codes) == EQUAL)
        )


def census(matrix: RelationMatrix, reference: Optional[RelationMatrix] = None) -> MatrixCensus:
    """Pair counts; with a reference, also the pixels that disagree with it"""
    result = MatrixCensus(
        m=matrix.m,
        method=matrix.method,
        greater=matrix.count(GREATER),
        less=matrix.count(LESS),
        equal=matrix.count(EQUAL),
        incomparable=matrix.count(INCOMPARABLE),
    )
    if reference is not None:
        differs = matrix.codes != reference.codes
        result.dim_against = reference.method
        result.non_dimmed = int(np.count_nonzero(differs))
        result.non_dimmed_incomparable = int(np.count_nonzero(differs & (matrix.codes == INCOMPARABLE)))
    return result


def _classify_pair(alpha: BitString, gamma: BitString, spec: MethodSpec) -> int:
    if spec.kind is MethodKind.STD:
        return _ORDER_CODES[std_compare(alpha, gamma)]
    if spec.kind is MethodKind.BER:
        return _BER_CODES[ber_order(alpha, gamma, spec.n)]
    if spec.kind is MethodKind.FST:
        return _ORDER_CODES[fst_compare(alpha, gamma)]
    return _TOTAL_CODES[total_compare(alpha, gamma, spec)[0]]


def _classify_rows(m: int, method: str, rows: Sequence[int]) -> List[Tuple[int, List[int]]]:
    """Upper-triangle codes for the given rows; runs inside worker processes"""
    spec = MethodSpec.parse(method)
    strings = universe(m)
    out = []
    for i in rows:
        out.append((i, [_classify_pair(strings[i], strings[j], spec) for j in range(i + 1, len(strings))]))
    return out


def _rules_codes(m: int, relation: RelationSet) -> np.ndarray:
    strings = universe(m)
    size = len(strings)
    codes = np.full((size, size), INCOMPARABLE, dtype=np.int8)
    for i, alpha in enumerate(strings):
        codes[i, i] = EQUAL
        for j in range(i + 1, size):
            gamma = strings[j]
            if relation.contains(alpha, gamma):
                codes[i, j], codes[j, i] = GREATER, LESS
            elif relation.contains(gamma, alpha):
                codes[i, j], codes[j, i] = LESS, GREATER
    return codes


def relation_matrix(
    m: int,
    method: Union[str, MethodSpec],
    enable_rsd: bool = False,
    workers: Optional[int] = None,
    max_len: Optional[int] = None,
    relation: Optional[RelationSet] = None,
) -> RelationMatrix:
    """Classify every ordered pair of {0,1}^m, rows and columns in lexicographic order"""
    spec = MethodSpec.parse(method) if isinstance(method, str) else method
    limit = settings.MATRIX_MAX_LEN if max_len is None else max_len
    if m > limit:
        raise CapacityError(f"matrix length {m} exceeds the cap {limit}", limit)
    if spec.kind is MethodKind.BER and spec.n < (1 << m):
        raise DegreeError(f"ber:{spec.n} needs n >= {1 << m} at m={m}")
    workers = settings.WORKERS if workers is None else workers
    logger.info("matrix m=%d method=%s started (workers=%d)", m, spec.label, workers)

    if spec.kind is MethodKind.RULES:
        if relation is None:
            relation = close(seed_rules(spec.rules, m, enable_rsd))
        codes = _rules_codes(m, relation)
    else:
        size = 1 << m
        codes = np.zeros((size, size), dtype=np.int8)
        rows = list(range(size))
        if workers > 1 and size > 1:
            chunks = [rows[k::workers] for k in range(workers)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_classify_rows, [m] * workers, [spec.label] * workers, chunks))
            results = [item for part in parts for item in part]
        else:
            results = _classify_rows(m, spec.label, rows)
        for i, row in sorted(results):
            if row:
                upper = np.array(row, dtype=np.int8)
                codes[i, i + 1:] = upper
                codes[i + 1:, i] = _TRANSPOSE[upper]

    matrix = RelationMatrix(m=m, method=spec.label, codes=codes)
    logger.info(
        "matrix m=%d method=%s finished: greater=%d less=%d equal=%d incomparable=%d",
        m, spec.label, matrix.count(GREATER), matrix.count(LESS), matrix.count(EQUAL), matrix.count(INCOMPARABLE),
    )
    return matrix
