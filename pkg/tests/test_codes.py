import re
from fractions import Fraction

import pytest

from aecodes.codes import (Code, Codeword, binomial_ae_code, binomial_support, counter_symmetric_code,
                           detection_code, symmetric_code, validate)
from aecodes.errors import DomainError, ParameterError
from aecodes.halfint import HalfInt
from aecodes.radical import Radical


def test_symmetric_code_amplitudes():
    code = symmetric_code(6, 3, 6)
    assert code.zero.probabilities() == {HalfInt(-6): Fraction(1, 2), HalfInt(6): Fraction(1, 2)}
    assert code.one.probabilities() == {HalfInt(-12): Fraction(1, 8), HalfInt(0): Fraction(3, 4),
                                        HalfInt(12): Fraction(1, 8)}
    assert code.one.amplitudes[HalfInt(0)] == Radical.sqrt(3) / 2
    assert validate(code) == []
    assert code.support_spacing() == 3


@pytest.mark.parametrize("args, needle", [
    ((5, 3, 5), "requires ℓ ≥ 6"),
    ((6, 2, 6), "m1 ≥ 3"),
    ((8, 3, 5), "m2 ≥ m1 + 3"),
    ((8, 3, 9), "m2 ≤ ℓ"),
    (("13/2", 3, 6), "must be an integer"),
])
def test_symmetric_code_constraints(args, needle):
    with pytest.raises(ParameterError, match=re.escape(needle)):
        symmetric_code(*args)


def test_counter_symmetric():
    code = counter_symmetric_code("9/2", "3/2", "9/2")
    assert code.zero.probabilities() == {HalfInt(-3): Fraction(3, 4), HalfInt(9): Fraction(1, 4)}
    assert code.one.probabilities() == {HalfInt(-9): Fraction(1, 4), HalfInt(3): Fraction(3, 4)}
    assert validate(code) == []
    with pytest.raises(ParameterError, match="ℓ ≥ 9/2"):
        counter_symmetric_code(4, 1, 4)
    det = counter_symmetric_code(3, 1, 3, detection=True)
    assert det.family == "counter_symmetric_detection"
    with pytest.raises(ParameterError, match="ℓ ≥ 3"):
        counter_symmetric_code("5/2", "1/2", "5/2", detection=True)
    with pytest.raises(ParameterError, match="differ from ell"):
        counter_symmetric_code(5, "3/2", 5)


def test_detection_code():
    code = detection_code(2, 2)
    assert code.support() == [HalfInt(-4), HalfInt(0), HalfInt(4)]
    with pytest.raises(ParameterError):
        detection_code(1, 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_binomial_code(n):
    N = 2 * n + 1
    ell0 = Fraction(N * N, 2)
    code = binomial_ae_code(n, ell0, ell0)
    assert validate(code, min_spacing=N) == []
    pts = binomial_support(n, ell0)
    assert len(pts) == N + 1 and pts[0] == -HalfInt.of(ell0)
    from math import comb
    for k, m in enumerate(pts):
        word = code.zero if k % 2 == 0 else code.one
        assert word.probabilities()[m] == Fraction(comb(N, k), 4 ** n)


def test_binomial_constraints():
    with pytest.raises(ParameterError, match="ℓ0 ≥ 9/2"):
        binomial_ae_code(1, 4, 4)
    with pytest.raises(ParameterError, match="integer n"):
        binomial_ae_code(0, 10, 10)
    with pytest.raises(ParameterError, match="outside"):
        binomial_ae_code(1, "9/2", "15/2")
    det = binomial_ae_code(1, 2, 2, detection=True)
    assert validate(det, min_spacing=2) == []


def test_validate_findings():
    zero = Codeword.from_probabilities(6, {0: Fraction(1, 2)})
    one = Codeword.from_probabilities(6, {0: Fraction(1, 2), 3: Fraction(1, 2)})
    findings = validate(Code(zero, one, "custom"), min_spacing=3)
    text = " ".join(findings)
    assert "normalization" in text and "non-orthogonal" in text
    with pytest.raises(DomainError):
        Codeword.from_probabilities(6, {7: 1})


def test_swapped():
    code = symmetric_code(7, 3, 7)
    assert code.swapped().zero.amplitudes == code.one.amplitudes
