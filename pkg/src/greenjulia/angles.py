"""Exact rational direction angles psi = p/q in (0, 1).

Angles are kept as reduced integer fractions so that doubling, bit
extraction and the eventually periodic binary expansion are all exact.
Dyadic angles (q a power of two) are flagged rather than expanded: their
binary expansion is not unique and the run-length machinery excludes
them.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import DomainError, DyadicAngleError


@dataclass(frozen=True)
class DirectionAngle:
    """psi = numerator/denominator, reduced, strictly inside (0, 1)."""

    numerator: int
    denominator: int

    def __post_init__(self):
        p, q = self.numerator, self.denominator
        if q <= 0:
            raise DomainError(f"denominator must be positive, got {q}")
        if not 0 < p < q:
            raise DomainError(f"angle {p}/{q} outside (0, 1)")
        g = gcd(p, q)
        object.__setattr__(self, "numerator", p // g)
        object.__setattr__(self, "denominator", q // g)

    @staticmethod
    def parse(text: str) -> "DirectionAngle":
        """Parse 'p/q' (or a bare numerator over an implicit /1 is rejected)."""
        try:
            p_str, q_str = text.split("/")
            return DirectionAngle(int(p_str), int(q_str))
        except ValueError as exc:
            raise DomainError(f"cannot parse angle {text!r}, expected p/q") from exc

    @property
    def value(self) -> float:
        return self.numerator / self.denominator

    @property
    def is_dyadic(self) -> bool:
        q = self.denominator
        return q & (q - 1) == 0

    @property
    def dyadic_level(self) -> int:
        """m for psi = k/2^m with k odd; only defined for dyadic angles."""
        if not self.is_dyadic:
            raise DyadicAngleError(f"{self} is not dyadic")
        return self.denominator.bit_length() - 1

    def bit(self, n: int) -> int:
        """n-th binary digit of psi, n >= 1 (exact: floor(2^n psi) mod 2)."""
        if n < 1:
            raise DomainError("bit index starts at 1")
        return ((self.numerator << n) // self.denominator) & 1

    def shift(self) -> "DirectionAngle":
        """Fractional part of 2 psi: the left shift of the bit expansion."""
        if self.is_dyadic:
            raise DyadicAngleError(f"shift undefined for dyadic angle {self}")
        return DirectionAngle((2 * self.numerator) % self.denominator, self.denominator)

    def shift_n(self, n: int) -> "DirectionAngle":
        if self.is_dyadic:
            raise DyadicAngleError(f"shift undefined for dyadic angle {self}")
        return DirectionAngle((self.numerator << n) % self.denominator, self.denominator)

    def complement(self) -> "DirectionAngle":
        """1 - psi: the bit-complement / mirror angle."""
        return DirectionAngle(self.denominator - self.numerator, self.denominator)

    def phase_fraction(self, n: int) -> tuple[int, int]:
        """(num, den) with 2^n psi mod 2 = num/den, reduced exactly."""
        den = self.denominator
        num = (self.numerator << n) % (2 * den)
        g = gcd(num, den) if num else 1
        return num // g, den // g

    def expansion(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """(prefix, period) of the binary expansion, by exact long division."""
        if self.is_dyadic:
            raise DyadicAngleError(f"expansion of dyadic angle {self} is not unique")
        p, q = self.numerator, self.denominator
        bits = []
        seen = {}
        r = p
        while r not in seen:
            seen[r] = len(bits)
            r2 = 2 * r
            bits.append(r2 // q)
            r = r2 % q
        start = seen[r]
        return tuple(bits[:start]), tuple(bits[start:])

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"
