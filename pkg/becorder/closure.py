"""
Rule-set seeds and their closure
Relations live on every string of length 0..L; each node owns one Python int
whose bits mark the strings it outperforms. Concatenation is generated by
prepending and appending single bits, then duality and transitivity.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Set, Tuple

from becorder.bitstrings import BitString, dual_string, thue_morse_prefix
from becorder.config import settings
from becorder.errors import CapacityError, DomainError
from becorder.models import parse_rule_letters

logger = logging.getLogger(__name__)


def node_count(max_len: int) -> int:
    return (1 << (max_len + 1)) - 1


def node_index(alpha: BitString) -> int:
    """Shortest first, lexicographic within a length"""
    if not alpha:
        return 0
    return (1 << len(alpha)) - 1 + int(alpha, 2)


def node_string(index: int) -> BitString:
    length = (index + 1).bit_length() - 1
    if not length:
        return ""
    return format(index - ((1 << length) - 1), f"0{length}b")


def _bits(value: int) -> Iterator[int]:
    while value:
        low = value & -value
        yield low.bit_length() - 1
        value ^= low


def _spread(block: int) -> int:
    """Move bit k to bit 2k"""
    if not block:
        return 0
    return int("0".join(format(block, "b")), 2)


@dataclass
class RelationSet:
    """alpha >= gamma for strings of length <= max_len; reflexive pairs are implicit"""
    max_len: int
    rules: str = ""
    enable_rsd: bool = False
    rows: List[int] = field(default_factory=list)
    provenance: Dict[Tuple[int, int], str] = field(default_factory=dict)
    # middle node k of every edge granted by transitivity from (i, k) and (k, j)
    via: Dict[Tuple[int, int], int] = field(default_factory=dict)
    closed: bool = False

    def __post_init__(self):
        if not self.rows:
            self.rows = [0] * node_count(self.max_len)

    @property
    def nodes(self) -> int:
        return len(self.rows)

    def add(self, lhs: BitString, rhs: BitString, tag: str) -> bool:
        """Record lhs >= rhs; False when already present or reflexive"""
        i, j = node_index(lhs), node_index(rhs)
        if i == j or self.rows[i] >> j & 1:
            return False
        self.rows[i] |= 1 << j
        self.provenance[(i, j)] = tag
        return True

    def contains(self, lhs: BitString, rhs: BitString) -> bool:
        if lhs == rhs:
            return len(lhs) <= self.max_len
        if max(len(lhs), len(rhs)) > self.max_len:
            return False
        return bool(self.rows[node_index(lhs)] >> node_index(rhs) & 1)

    def __contains__(self, pair: Tuple[BitString, BitString]) -> bool:
        return self.contains(*pair)

    def tag(self, lhs: BitString, rhs: BitString) -> Optional[str]:
        if lhs == rhs:
            return "reflexive"
        return self.provenance.get((node_index(lhs), node_index(rhs)))

    def chain(self, lhs: BitString, rhs: BitString) -> List[Tuple[BitString, BitString, str]]:
        """Steps lhs >= ... >= rhs, transitive edges expanded down to seeds,
        prefixes, suffixes and duals"""
        if lhs == rhs:
            return []
        if not self.contains(lhs, rhs):
            raise DomainError(f"{lhs or 'ε'} >= {rhs or 'ε'} is not in the relation")
        steps = []
        stack = [(node_index(lhs), node_index(rhs))]
        while stack:
            i, j = stack.pop()
            k = self.via.get((i, j))
            if k is None:
                steps.append((node_string(i), node_string(j), self.provenance.get((i, j), "")))
            else:
                stack.append((k, j))
                stack.append((i, k))
        return steps

    @property
    def edge_count(self) -> int:
        """Non-reflexive edges"""
        return sum(bin(row).count("1") for row in self.rows)

    def edges(self) -> Iterator[Tuple[BitString, BitString, str]]:
        """(lhs, rhs, provenance), rows in node order"""
        for i, row in enumerate(self.rows):
            for j in _bits(row):
                yield node_string(i), node_string(j), self.provenance.get((i, j), "")

    def provenance_counts(self) -> Dict[str, int]:
        counts = Counter(tag.split("[")[0] for tag in self.provenance.values())
        return dict(sorted(counts.items()))

    def edge_set(self) -> Set[Tuple[BitString, BitString]]:
        return {(lhs, rhs) for lhs, rhs, _ in self.edges()}


def rule_instances(letters: str, max_len: int, enable_rsd: bool = False) -> Iterator[Tuple[BitString, BitString, str]]:
    """Every (better, worse, tag) seed of the chosen rule sets that fits in max_len"""
    if "A" in letters and max_len >= 1:
        yield "1", "0", "rsA"
    if "B" in letters and max_len >= 2:
        yield "10", "01", "rsB"
    if "C" in letters:
        k = 0
        while k + 4 <= max_len:
            yield "10" + "0" * k + "01", "01" + "0" * k + "10", f"rsC[k={k}]"
            k += 1
    if "D" in letters:
        if enable_rsd:
            k = 1
            while k + (1 << k) <= max_len:
                yield "0" * k + "1" * (1 << k), "1" * k + "0" * (1 << k), f"rsD[k={k}]"
                k += 1
        else:
            logger.info("RS-D requested but not enabled; skipping the conjectured rule")
    if "E" in letters:
        lengths = set()
        k = 1
        while (1 << k) <= max_len:
            lengths.add(1 << k)
            k += 1
        k = 1
        while 4 * k <= max_len:
            lengths.add(4 * k)
            k += 1
        for n in sorted(lengths):
            tau = thue_morse_prefix(n)
            yield dual_string(tau), tau, f"rsE[n={n}]"
    if "F" in letters and max_len >= 3:
        yield "011", "10", "rsF"


def seed_rules(sets: str, max_len: int, enable_rsd: bool = False) -> RelationSet:
    """Instantiate the chosen rule sets on strings of length <= max_len"""
    if max_len > settings.SEED_MAX_LEN:
        raise CapacityError(f"seed length {max_len} exceeds the cap {settings.SEED_MAX_LEN}", settings.SEED_MAX_LEN)
    letters = parse_rule_letters(sets)
    relation = RelationSet(max_len=max_len, rules=letters, enable_rsd=enable_rsd)
    for better, worse, tag in rule_instances(letters, max_len, enable_rsd):
        relation.add(better, worse, tag)
    return relation


def close(r: RelationSet) -> RelationSet:
    """Least fixpoint under concatenation, duality and transitivity"""
    L = r.max_len
    n = r.nodes
    if n > settings.CLOSURE_WARN_NODES:
        logger.warning("closing a relation on %d nodes; expect a long run", n)
    rows = list(r.rows)
    provenance = dict(r.provenance)
    via = dict(r.via)
    strings = [node_string(i) for i in range(n)]
    duals = [node_index(dual_string(s)) for s in strings]
    offsets = [(1 << length) - 1 for length in range(L + 1)]

    delta = list(rows)
    rounds = 0

    while any(delta):
        rounds += 1
        fresh = [0] * n

        def grant(i: int, bits: int, tag: str, through: Optional[int] = None):
            new = bits & ~rows[i] & ~(1 << i)
            if not new:
                return
            rows[i] |= new
            fresh[i] |= new
            for j in _bits(new):
                provenance[(i, j)] = tag
                if through is not None:
                    via[(i, j)] = through

        for i, d in enumerate(delta):
            if not d:
                continue
            alpha = strings[i]
            if len(alpha) < L:
                # split the new targets by length; targets of length L cannot grow
                blocks = []
                for length in range(L):
                    block = (d >> offsets[length]) & ((1 << (1 << length)) - 1)
                    if block:
                        blocks.append((length, block))
                for bit in (0, 1):
                    prepended = 0
                    appended = 0
                    for length, block in blocks:
                        base = offsets[length + 1]
                        prepended |= block << (base + (bit << length))
                        appended |= (_spread(block) << bit) << base
                    grant(node_index(str(bit) + alpha), prepended, "prefix")
                    grant(node_index(alpha + str(bit)), appended, "suffix")
            for j in _bits(d):
                grant(duals[j], 1 << duals[i], "dual")

        # transitivity over the whole relation
        for k in range(n):
            row_k = rows[k]
            if not row_k:
                continue
            mask = 1 << k
            for i in range(n):
                if rows[i] & mask:
                    grant(i, row_k, "trans", k)

        delta = fresh
        logger.debug("closure round %d: %d new edges", rounds, sum(bin(v).count("1") for v in fresh))

    closed = RelationSet(
        max_len=L, rules=r.rules, enable_rsd=r.enable_rsd, rows=rows, provenance=provenance, via=via, closed=True
    )
    logger.info("closure of rules %r at L=%d: %d edges after %d rounds", r.rules, L, closed.edge_count, rounds)
    return closed
