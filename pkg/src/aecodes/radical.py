"""Exact sums of rational multiples of square roots.

A :class:`Radical` is stored as ``{radicand: coefficient}`` with every radicand a
square-free positive integer and every coefficient a nonzero ``Fraction``.
Square roots of distinct square-free integers are linearly independent over
the rationals, so two Radicals are equal exactly when their maps are equal.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath

_TRIAL_LIMIT = 100_000


@lru_cache(maxsize=65536)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(s, f)`` with ``n == s*s*f`` and ``f`` square-free."""
    if n <= 0:
        raise ValueError(f"squarefree_split needs a positive integer, got {n}")
    outside, inside = 1, 1
    p = 2
    while p * p <= n and p <= _TRIAL_LIMIT:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            outside *= p ** (e // 2)
            if e % 2:
                inside *= p
        p += 1 if p == 2 else 2
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            outside *= r
        elif p * p <= n:
            # large cofactor with possible repeated prime factors
            from sympy import factorint

            for q, e in factorint(n).items():
                outside *= q ** (e // 2)
                if e % 2:
                    inside *= q
        else:
            inside *= n
    return outside, inside


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)) and not isinstance(value, bool):
        return Fraction(value)
    raise TypeError(f"expected a rational, got {value!r}")


class Radical:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        """Build from a ``{radicand: coefficient}`` map.

        Radicands need not be square-free here; they are normalized.
        """
        clean: dict[int, Fraction] = {}
        if terms:
            for radicand, coef in terms.items():
                coef = _as_fraction(coef)
                if coef == 0:
                    continue
                if not isinstance(radicand, int) or radicand <= 0:
                    raise ValueError(f"radicand must be a positive int, got {radicand!r}")
                s, f = squarefree_split(radicand)
                total = clean.get(f, 0) + coef * s
                if total:
                    clean[f] = total
                else:
                    clean.pop(f, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, clean: dict[int, Fraction]) -> Radical:
        obj = cls.__new__(cls)
        obj._terms = clean
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, value) -> Radical:
        value = _as_fraction(value)
        return cls._raw({1: value} if value else {})

    @classmethod
    def sqrt(cls, value) -> Radical:
        """Principal square root of a nonnegative rational."""
        value = _as_fraction(value)
        if value < 0:
            raise ValueError(f"square root of negative rational {value}")
        if value == 0:
            return ZERO
        num, den = value.numerator, value.denominator
        s, f = squarefree_split(num * den)
        return cls._raw({f: Fraction(s, den)})

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def is_zero(self) -> bool:
        return not self._terms

    def is_rational(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and 1 in self._terms)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self._terms.get(1, Fraction(0))

    def __bool__(self):
        return bool(self._terms)

    def __float__(self):
        return float(sum(float(c) * math.sqrt(r) for r, c in self._terms.items()))

    def to_mpf(self, dps: int = 50):
        with mpmath.workdps(dps):
            return mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.sqrt(r)
                               for r, c in self._terms.items())

    def sign(self) -> int:
        if not self._terms:
            return 0
        if len(self._terms) == 1:
            (c,) = self._terms.values()
            return 1 if c > 0 else -1
        # nonzero algebraic number: enough precision eventually separates it from 0
        dps = 30
        while True:
            with mpmath.workdps(dps):
                v = self.to_mpf(dps)
                if abs(v) > mpmath.mpf(10) ** (-(dps - 10)):
                    return 1 if v > 0 else -1
            dps *= 2
            if dps > 20000:
                raise ArithmeticError(f"could not determine the sign of {self}")

    def __neg__(self):
        return Radical._raw({r: -c for r, c in self._terms.items()})

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for r, c in other._terms.items():
            total = out.get(r, 0) + c
            if total:
                out[r] = total
            else:
                del out[r]
        return Radical._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Radical):
            out: dict[int, Fraction] = {}
            for r1, c1 in self._terms.items():
                for r2, c2 in other._terms.items():
                    g = math.gcd(r1, r2)
                    r = (r1 // g) * (r2 // g)
                    total = out.get(r, 0) + c1 * c2 * g
                    if total:
                        out[r] = total
                    else:
                        del out[r]
            return Radical._raw(out)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return ZERO
            return Radical._raw({r: c * other for r, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("Radical division by zero")
            return Radical._raw({r: c / other for r, c in self._terms.items()})
        if isinstance(other, Radical):
            if len(other._terms) != 1:
                raise ValueError("division only by single-term radicals")
            (r, c), = other._terms.items()
            # 1/(c*sqrt(r)) = sqrt(r)/(c*r)
            return self * Radical._raw({r: 1 / (c * r)})
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = ONE
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        other = _lift(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._terms.get(1, Fraction(0)))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self):
        return f"Radical({self})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for r, c in sorted(self._terms.items()):
            if r == 1:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"√{r}")
            elif c == -1:
                parts.append(f"-√{r}")
            else:
                parts.append(f"{c}·√{r}")
        return " + ".join(parts).replace("+ -", "- ")


def _lift(value):
    if isinstance(value, Radical):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Radical.rational(value)
    return NotImplemented


ZERO = Radical._raw({})
ONE = Radical._raw({1: Fraction(1)})
