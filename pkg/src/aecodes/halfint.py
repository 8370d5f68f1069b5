"""Exact half-integer quantum numbers stored as doubled integers."""
from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from numbers import Rational

from .errors import DomainError


@total_ordering
class HalfInt:
    __slots__ = ("twice",)

    def __init__(self, twice: int):
        if not isinstance(twice, int) or isinstance(twice, bool):
            raise TypeError(f"HalfInt needs an int doubled value, got {twice!r}")
        object.__setattr__(self, "twice", twice)

    def __setattr__(self, name, value):
        raise AttributeError("HalfInt is immutable")

    @classmethod
    def of(cls, value) -> HalfInt:
        """Coerce an int, Fraction, float, HalfInt or string ("9/2", "4.5", "-3")."""
        if isinstance(value, HalfInt):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a quantum number")
        if isinstance(value, int):
            return cls(2 * value)
        if isinstance(value, str):
            text = value.strip()
            if not text:
                raise DomainError("empty quantum number")
            try:
                value = Fraction(text)
            except (ValueError, ZeroDivisionError) as exc:
                raise DomainError(f"cannot parse quantum number {value!r}") from exc
        if isinstance(value, float):
            if value != value or value in (float("inf"), float("-inf")):
                raise DomainError(f"{value} is not a quantum number")
            value = Fraction(value)
        if isinstance(value, Rational):
            doubled = Fraction(value) * 2
            if doubled.denominator != 1:
                raise DomainError(f"{value} is not a multiple of 1/2")
            return cls(int(doubled))
        raise TypeError(f"cannot interpret {value!r} as a half-integer")

    def __reduce__(self):
        return (HalfInt, (self.twice,))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self):
        if self.twice % 2:
            raise DomainError(f"{self} is not an integer")
        return self.twice // 2

    def __index__(self):
        return int(self)

    def __float__(self):
        return self.twice / 2

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return HalfInt(other.twice - self.twice)

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return HalfInt(self.twice * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        if isinstance(other, (int, Fraction)):
            return self.fraction == other
        return NotImplemented

    def __lt__(self, other):
        if isinstance(other, HalfInt):
            return self.twice < other.twice
        if isinstance(other, (int, Fraction)):
            return self.fraction < other
        return NotImplemented

    def __hash__(self):
        # agrees with hash(int) / hash(Fraction) so mixed keys collide correctly
        return hash(self.fraction)

    def __repr__(self):
        return f"HalfInt({self})"

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


def _coerce(value):
    if isinstance(value, HalfInt):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return HalfInt(2 * value)
    if isinstance(value, Fraction) and (2 * value).denominator == 1:
        return HalfInt(int(2 * value))
    return NotImplemented


def half(value) -> HalfInt:
    return HalfInt.of(value)


def check_state(ell, m) -> None:
    """Raise DomainError unless |ell, m> is a valid angular-momentum ket."""
    ell, m = HalfInt.of(ell), HalfInt.of(m)
    if ell.twice < 0:
        raise DomainError(f"negative angular momentum {ell}")
    if abs(m.twice) > ell.twice:
        raise DomainError(f"|m| = {abs(m)} exceeds ell = {ell}")
    if (ell.twice - m.twice) % 2:
        raise DomainError(f"ell = {ell} and m = {m} differ by a non-integer")


def manifold(ell) -> list[HalfInt]:
    """All projections m = -ell, ..., ell in increasing order."""
    ell = HalfInt.of(ell)
    if ell.twice < 0:
        raise DomainError(f"negative angular momentum {ell}")
    return [HalfInt(t) for t in range(-ell.twice, ell.twice + 1, 2)]
