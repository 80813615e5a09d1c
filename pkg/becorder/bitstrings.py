"""
Bit strings indexing synthetic channels
A bit string is a plain ``str`` over {'0', '1'}; the empty string is the channel W itself.
"""

from itertools import product
from typing import Iterator, List

from becorder.errors import ParseError

BitString = str

EMPTY_TOKENS = {"", "-", "e", "eps", "ε"}
_FLIP = str.maketrans("01", "10")


def parse_bitstring(text: str) -> BitString:
    """Validate user input; '-', 'e', 'eps' and 'ε' denote the empty string"""
    token = text.strip()
    if token in EMPTY_TOKENS:
        return ""
    if token.strip("01"):
        raise ParseError(f"not a bit string: {text!r}")
    return token


def display(alpha: BitString) -> str:
    """Printable form, ε for the empty string"""
    return alpha if alpha else "ε"


def dual_string(alpha: BitString) -> BitString:
    """Bitwise complement"""
    return alpha.translate(_FLIP)


def ones(alpha: BitString) -> int:
    return alpha.count("1")


def zeros(alpha: BitString) -> int:
    return alpha.count("0")


def thue_morse_prefix(n: int) -> BitString:
    """tau_1 ... tau_n, where tau_k is the parity of ones in binary k - 1"""
    if n < 1:
        raise ParseError(f"Thue-Morse prefix length must be positive, got {n}")
    return "".join(str(bin(k).count("1") % 2) for k in range(n))


def universe(m: int) -> List[BitString]:
    """All strings of length m in lexicographic order"""
    return ["".join(bits) for bits in product("01", repeat=m)]


def universe_up_to(max_len: int) -> Iterator[BitString]:
    """All strings of length 0..max_len, shortest first, lexicographic within a length"""
    for length in range(max_len + 1):
        yield from universe(length)


def hex_label(alpha: BitString) -> str:
    """Shorthand used in ranking reports: 11110000 -> f0

    Lengths that are not a multiple of four keep their binary form.
    """
    if not alpha or len(alpha) % 4:
        return display(alpha)
    return format(int(alpha, 2), f"0{len(alpha) // 4}x")
