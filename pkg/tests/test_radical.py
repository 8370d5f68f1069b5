from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from aecodes.radical import ONE, ZERO, Radical, squarefree_split


def to_sympy(r: Radical):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.sqrt(k) for k, c in r.items()),
               sympy.Integer(0))


@pytest.mark.parametrize("n, f, s", [(1, 1, 1), (12, 2, 3), (72, 6, 2), (49, 7, 1), (30, 1, 30),
                                     (2 ** 10 * 3 ** 3, 96, 3)])
def test_squarefree_split(n, f, s):
    # n = f^2 * s with s square-free
    assert squarefree_split(n) == (f, s)


def test_squarefree_split_large_prime_factor():
    p = 1_000_003
    assert squarefree_split(p * p * 5) == (p, 5)


def test_canonical_equality():
    assert Radical.sqrt(8) == Radical({2: 2})
    assert Radical.sqrt(Fraction(1, 2)) == Radical({2: Fraction(1, 2)})
    assert Radical.sqrt(4) == 2 and Radical.sqrt(9).is_rational()
    assert Radical.sqrt(2) + Radical.sqrt(8) == Radical.sqrt(18)
    assert (Radical.sqrt(2) - Radical.sqrt(2)).is_zero()
    assert Radical.sqrt(6) * Radical.sqrt(10) == Radical.sqrt(60) == 2 * Radical.sqrt(15)
    assert Radical.sqrt(3) ** 2 == 3
    assert (Radical.sqrt(3) / Radical.sqrt(12)) == Fraction(1, 2)
    assert hash(Radical.sqrt(8)) == hash(Radical({2: 2}))
    assert ZERO + ONE == 1


def test_sign_of_near_cancellation():
    # sqrt(2) + sqrt(3) vs sqrt(10): close but not equal
    a = Radical.sqrt(2) + Radical.sqrt(3) - Radical.sqrt(Fraction(98, 10))
    assert a.sign() == (1 if float(a) > 0 else -1)
    assert ZERO.sign() == 0
    big = Radical({2: Fraction(665857, 470832)}) - Radical.rational(2)
    assert big.sign() == 1
    assert (Radical.rational(2) - Radical({2: Fraction(665857, 470832)})).sign() == -1


def test_sqrt_rejects_negative():
    with pytest.raises(ValueError):
        Radical.sqrt(-1)


def test_str():
    assert str(Radical.sqrt(8)) == "2·√2"
    assert str(ZERO) == "0"


terms = st.dictionaries(st.integers(1, 60), st.fractions(max_denominator=20).filter(bool), max_size=4)


@settings(max_examples=120, deadline=None)
@given(terms, terms)
def test_ring_ops_match_sympy(a, b):
    x, y = Radical(a), Radical(b)
    assert sympy.expand(to_sympy(x + y) - (to_sympy(x) + to_sympy(y))) == 0
    assert sympy.expand(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0
    assert (x - y == ZERO) == (sympy.expand(to_sympy(x) - to_sympy(y)) == 0)
    s = (x - y).sign()
    assert s == sympy.sign(sympy.N(to_sympy(x) - to_sympy(y), 60))
