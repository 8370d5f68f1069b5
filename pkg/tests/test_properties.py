import pytest

from aecodes.properties import interior_window, product_polynomial_fits, symmetry_relations
from aecodes.halfint import HalfInt


def test_products_fit_on_interior_ell0_8_n2():
    fits = product_polynomial_fits(8, 2, include_mismatched=True)
    real = [f for f in fits if not f.structural_zero]
    assert real and all(f.interior_fit for f in real)
    assert all(f.degree is None or f.degree <= f.degree_bound for f in real)
    assert any(f.structural_zero for f in fits)
    # edges included as well
    assert all(f.full_fit for f in real)


def test_float_engine_agrees():
    exact = product_polynomial_fits(6, 1)
    flt = product_polynomial_fits(6, 1, engine="float")
    assert [f.interior_fit for f in exact] == [f.interior_fit for f in flt]


def test_interior_window():
    w = interior_window(HalfInt(10), 2)
    assert w[0] == -3 and w[-1] == 3


def test_symmetry_relations_half_integer():
    checks = symmetry_relations([HalfInt(3), HalfInt(5)])
    assert len(checks) == 12 and all(c.passed for c in checks)
    assert all(c.passed for c in symmetry_relations([1, 2], engine="float"))
