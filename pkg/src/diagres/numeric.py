"""Exact integer arithmetic helpers.

Generalized binomial coefficients, p-adic valuations, nearest-third
rounding, and the balanced base-p digit expansion whose digit set mixes
bounded even and odd digits.  Everything is arbitrary precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from sympy import isprime

from .errors import NonPrime, PrimeTooSmall

__all__ = [
    "Valuation",
    "DigitExpansion",
    "binom",
    "padic_val",
    "binom_valuation",
    "round_third",
    "digit_bounds",
    "digit_expand",
]

_INF = math.inf


@dataclass(frozen=True, eq=False)
class Valuation:
    """A p-adic valuation: a non-negative integer, or infinity for 0.

    Supports ordering and addition against other valuations and plain
    integers; infinity dominates, matching v(0) = oo.
    """

    value: int | float

    def __post_init__(self) -> None:
        if self.value != _INF and (not isinstance(self.value, int) or self.value < 0):
            raise ValueError(f"valuation must be a non-negative integer or infinity: {self.value!r}")

    @property
    def is_infinite(self) -> bool:
        return self.value == _INF

    @staticmethod
    def _raw(other: "Valuation | int | float") -> int | float:
        return other.value if isinstance(other, Valuation) else other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, (Valuation, int, float)):
            return NotImplemented
        return self.value == self._raw(other)

    def __hash__(self) -> int:
        return hash(self.value)

    def __lt__(self, other: "Valuation | int | float") -> bool:
        return self.value < self._raw(other)

    def __le__(self, other: "Valuation | int | float") -> bool:
        return self.value <= self._raw(other)

    def __gt__(self, other: "Valuation | int | float") -> bool:
        return self.value > self._raw(other)

    def __ge__(self, other: "Valuation | int | float") -> bool:
        return self.value >= self._raw(other)

    def __add__(self, other: "Valuation | int") -> "Valuation":
        raw = self.value + self._raw(other)
        return Valuation(raw if raw == _INF else int(raw))

    __radd__ = __add__

    def __repr__(self) -> str:
        return f"Valuation({'oo' if self.is_infinite else self.value})"


@dataclass(frozen=True)
class DigitExpansion:
    """Little-endian balanced base-p expansion, p >= 5.

    Digits are drawn from the union of the even integers in [-v, v] and
    the odd integers in [-u, u], where u is the largest odd integer
    below p/3 and v the largest even integer below 2p/3.  Zero is the
    empty expansion.
    """

    prime: int
    digits: list[int] = field(default_factory=list)

    def evaluate(self) -> int:
        total = 0
        for digit in reversed(self.digits):
            total = total * self.prime + digit
        return total

    def all_even(self) -> bool:
        return all(digit % 2 == 0 for digit in self.digits)


def binom(m: int, i: int) -> int:
    """Binomial coefficient extended to all integer pairs.

    Falling-product formula for i > 0 (so negative m is legal), 1 for
    i = 0, and 0 for i < 0.
    """
    if i < 0:
        return 0
    if i == 0:
        return 1
    if m >= 0:
        return math.comb(m, i) if i <= m else 0
    # m < 0: m(m-1)...(m-i+1)/i! = (-1)^i * C(i-m-1, i)
    return (-1) ** (i % 2) * math.comb(i - m - 1, i)


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise NonPrime(f"p = {p} is not prime")


def padic_val(M: int, p: int) -> Valuation:
    """Exponent of the highest power of p dividing M; infinity for M = 0."""
    _require_prime(p)
    if M == 0:
        return Valuation(_INF)
    M = abs(M)
    v = 0
    while M % p == 0:
        M //= p
        v += 1
    return Valuation(v)


def _digit_sum(m: int, p: int) -> int:
    total = 0
    while m:
        m, r = divmod(m, p)
        total += r
    return total


def binom_valuation(m: int, i: int, p: int) -> Valuation:
    """p-adic valuation of binom(m, i) without forming the big integer.

    For 0 <= i <= m the valuation equals the number of carries when
    adding i and m - i in base p, i.e. (s(i) + s(m-i) - s(m)) / (p-1)
    with s the base-p digit sum.  Out-of-range arguments fall back to
    the direct computation.  Cross-validated against
    padic_val(binom(m, i), p) in the test suite.
    """
    _require_prime(p)
    if 0 <= i <= m:
        return Valuation((_digit_sum(i, p) + _digit_sum(m - i, p) - _digit_sum(m, p)) // (p - 1))
    value = binom(m, i)
    if value == 0:
        return Valuation(_INF)
    return padic_val(value, p)


def round_third(b: int) -> int:
    """The integer closest to b/3 (never a tie since 3 is odd)."""
    r = b % 3
    if r == 0:
        return b // 3
    if r == 1:
        return (b - 1) // 3
    return (b + 1) // 3


def digit_bounds(p: int) -> tuple[int, int]:
    """(u, v): largest odd u < p/3 and largest even v < 2p/3, for prime p >= 5."""
    _require_prime(p)
    if p < 5:
        raise PrimeTooSmall(f"balanced digits need p >= 5, got {p}")
    u = (p - 1) // 3
    if u % 2 == 0:
        u -= 1
    v = (2 * p - 1) // 3
    if v % 2 == 1:
        v -= 1
    return u, v


def _digit_table(p: int) -> dict[int, int]:
    u, v = digit_bounds(p)
    table: dict[int, int] = {}
    for digit in range(-v, v + 1, 2):
        table[digit % p] = digit
    for digit in range(-u, u + 1, 2):
        residue = digit % p
        if residue in table:
            raise ValueError(f"digit system for p={p} is not uniquely decodable")
        table[residue] = digit
    if len(table) != p:
        raise ValueError(f"digit system for p={p} does not cover all residues")
    return table


def digit_expand(m: int, p: int) -> DigitExpansion:
    """Unique balanced base-p expansion of m; greedy residue selection."""
    table = _digit_table(p)
    digits: list[int] = []
    while m != 0:
        digit = table[m % p]
        digits.append(digit)
        m = (m - digit) // p
    return DigitExpansion(prime=p, digits=digits)
