import itertools
from fractions import Fraction

import pytest
import sympy
from sympy.physics.quantum.cg import CG

from aecodes.angular import clebsch_gordan, evaluate_polynomial, fit_polynomial, y_matrix_element
from aecodes.errors import DomainError
from aecodes.halfint import HalfInt, manifold
from aecodes.radical import Radical

from test_radical import to_sympy


def _half(x):
    return sympy.Rational(HalfInt.of(x).twice, 2)


def _states(jmax_twice):
    for t1 in range(0, jmax_twice + 1):
        for t2 in range(0, min(t1, 4) + 1):
            yield HalfInt(t1), HalfInt(t2)


def test_against_sympy():
    count = 0
    for j1, j2 in _states(9):
        for J in [HalfInt(t) for t in range(abs(j1.twice - j2.twice), j1.twice + j2.twice + 1, 2)]:
            for m1 in manifold(j1):
                for m2 in manifold(j2):
                    M = m1 + m2
                    if abs(M) > J:
                        continue
                    ours = to_sympy(clebsch_gordan(j1, m1, j2, m2, J, M))
                    ref = CG(*(_half(x) for x in (j1, m1, j2, m2, J, M))).doit()
                    assert sympy.expand(ours - ref) == 0, (j1, m1, j2, m2, J, M)
                    count += 1
    assert count > 1500


@pytest.mark.parametrize("j1, j2", [(1, 1), (Fraction(3, 2), 1), (2, Fraction(1, 2)), (3, 2)])
def test_orthogonality(j1, j2):
    j1, j2 = HalfInt.of(j1), HalfInt.of(j2)
    Js = [HalfInt(t) for t in range(abs(j1.twice - j2.twice), j1.twice + j2.twice + 1, 2)]
    pairs = [(J, M) for J in Js for M in manifold(J)]
    for (J, M), (Jp, Mp) in itertools.product(pairs, repeat=2):
        if M != Mp:
            continue
        s = sum((clebsch_gordan(j1, m1, j2, M - m1, J, M) * clebsch_gordan(j1, m1, j2, M - m1, Jp, M)
                 for m1 in manifold(j1) if abs(M - m1) <= j2),
                Radical())
        assert s == (1 if J == Jp else 0)
    # completeness over the coupled basis
    for m1, m2, m1p in itertools.product(manifold(j1), manifold(j2), manifold(j1)):
        m2p = m1 + m2 - m1p
        if abs(m2p) > j2:
            continue
        s = sum((clebsch_gordan(j1, m1, j2, m2, J, m1 + m2) * clebsch_gordan(j1, m1p, j2, m2p, J, m1 + m2)
                 for J in Js if abs(m1 + m2) <= J), Radical())
        assert s == (1 if m1 == m1p else 0)


def test_selection_rules_give_zero():
    assert clebsch_gordan(1, 0, 1, 1, 2, 0).is_zero()          # m1 + m2 != M
    assert clebsch_gordan(1, 0, 1, 0, 3, 0).is_zero()          # triangle violated
    assert clebsch_gordan(1, 0, 1, 0, 1, 0).is_zero()          # parity zero
    with pytest.raises(DomainError):
        clebsch_gordan(1, 2, 1, 0, 2, 2)


def test_y_matrix_element_is_bare_coupling():
    v = y_matrix_element(7, 5, 2, -1, 6, 6)
    assert v == clebsch_gordan(6, 6, 2, -1, 7, 5)
    assert y_matrix_element(8, 3, 1, 0, 6, 3).is_zero()        # |dl| > r


def test_fit_polynomial_examples():
    pts = [(HalfInt(2 * m), Radical.rational(m * m - 2 * m + 3)) for m in range(-3, 4)]
    assert fit_polynomial(pts, 2) == [3, -2, 1]
    assert fit_polynomial(pts, 1) is None
    zero = [(HalfInt(2 * m), Radical()) for m in range(4)]
    assert fit_polynomial(zero, 2) == []
    rad = [(HalfInt(2 * m), Radical.sqrt(2) * m) for m in range(-2, 3)]
    coeffs = fit_polynomial(rad, 3)
    assert coeffs == [0, Radical.sqrt(2)]
    assert evaluate_polynomial(coeffs, HalfInt(10)) == Radical.sqrt(2) * 5
    with pytest.raises(DomainError):
        fit_polynomial([(HalfInt(0), Radical()), (HalfInt(0), Radical())], 0)
