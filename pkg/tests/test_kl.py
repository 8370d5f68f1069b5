import random
from fractions import Fraction

import pytest

from aecodes.channels import ErrorSet, first_order_channel, order_n_channel, resolved_transition
from aecodes.codes import (Code, Codeword, binomial_ae_code, counter_symmetric_code, detection_code,
                           symmetric_code)
from aecodes.errors import DomainError
from aecodes.fuzz import matched_code, perturbed_code, random_code
from aecodes.halfint import HalfInt
from aecodes.kl import (detection_check, equivalence_oracle, kl_check, kl_check_by_composition, moments,
                        reduction_check, resolve_engine, support_exclusion_check)

import kl_oracle


def spacing_two_code():
    r = Fraction(9, 25)
    zero = Codeword.from_probabilities(6, {-3: Fraction(1, 2), 3: Fraction(1, 2)})
    one = Codeword.from_probabilities(6, {-5: r / 2, 0: 1 - r, 5: r / 2})
    return Code(zero, one, "custom")


def test_symmetric_code_passes_every_route():
    code = symmetric_code(6, 3, 6)
    errors = first_order_channel(6)
    exact = kl_check(code, errors)
    assert exact.passed and len(exact.entries) == 100
    assert exact.structural_count() == 66
    assert kl_check(code, errors, engine="float").passed
    assert kl_check_by_composition(code, errors).passed
    assert kl_check(code, order_n_channel(6, 1)).passed


def test_spacing_two_has_exact_off_diagonal_violation():
    rep = kl_check(spacing_two_code(), first_order_channel(6))
    assert not rep.passed
    off = [v for v in rep.violations if v.condition.startswith("off-diagonal")]
    assert off and all(not v.residual.is_zero() for v in off)


def test_detection_code_detects_but_does_not_correct():
    code = detection_code(2, 2)
    errors = first_order_channel(2)
    assert detection_check(code, errors).passed
    assert not kl_check(code, errors).passed
    assert reduction_check(code, 1, detection=True).passed
    assert not reduction_check(code, 1).passed


@pytest.mark.parametrize("n", [1, 2])
def test_binomial_against_dense_oracle(n):
    N = 2 * n + 1
    code = binomial_ae_code(n, Fraction(N * N, 2), Fraction(N * N, 2))
    assert kl_check(code, order_n_channel(code.ell0, n)).passed
    assert kl_oracle.kl_passes(code, n)


def test_verdicts_match_dense_oracle_on_random_codes():
    rng = random.Random(7)
    seen = {True: 0, False: 0}
    for i in range(40):
        code = [random_code, matched_code, perturbed_code][i % 3](rng, 1)
        if code is None:
            continue
        ours = kl_check(code, order_n_channel(code.ell0, 1)).passed
        assert ours == kl_oracle.kl_passes(code, 1), code
        seen[ours] += 1
    assert seen[True] >= 5 and seen[False] >= 5


def test_rescaling_one_operator_keeps_verdict():
    from aecodes.radical import Radical

    for code in (symmetric_code(7, 3, 6), spacing_two_code()):
        errors = first_order_channel(code.ell0)
        base = kl_check(code, errors).passed
        ops = list(errors.operators)
        ops[4] = ops[4].scaled(Radical.sqrt(7) * -3)
        assert kl_check(code, ErrorSet(tuple(ops), 1, "rescaled")).passed == base


def test_swapping_codewords_keeps_verdict():
    for code in (counter_symmetric_code("11/2", "3/2", "11/2"), spacing_two_code()):
        errors = first_order_channel(code.ell0)
        assert kl_check(code, errors).passed == kl_check(code.swapped(), errors).passed


def test_moments_and_reduction_details():
    code = symmetric_code(6, 3, 6)
    mo = moments(code.one, 4)
    assert [mo[k] for k in range(5)] == [1, 0, 9, 0, 324]
    red = reduction_check(code, 1)
    assert red.passed and red.mismatched == [] and red.required_spacing == 3
    red = reduction_check(spacing_two_code(), 1)
    assert not red.passed and not red.spacing_ok
    fl = moments(code.one, 2, engine="float")
    assert fl[2] == pytest.approx(9.0)
    with pytest.raises(DomainError):
        reduction_check(code, 0)


def test_equivalence_oracle():
    res = equivalence_oracle(binomial_ae_code(1, "9/2", "9/2"), 1)
    assert res.agree and not res.defect and not res.converse_finding
    res = equivalence_oracle(spacing_two_code(), 1)
    assert res.agree and not res.kl_passed


def test_support_exclusion():
    code = symmetric_code(6, 3, 6)
    inside = resolved_transition(6, 3, 7, 4)
    outside = resolved_transition(6, 2, 5, 2)
    res = support_exclusion_check(code, [inside, outside])
    assert not res.passed and res.offending == [inside.label]
    assert support_exclusion_check(code, [outside]).passed
    assert not kl_check(code, ErrorSet((inside,), 1, "resolved")).passed


def test_manifold_mismatch_and_engine():
    with pytest.raises(DomainError):
        kl_check(symmetric_code(6, 3, 6), first_order_channel(7))
    assert resolve_engine("float") == "float"
    with pytest.raises(DomainError):
        resolve_engine("quad")


def test_env_engine(monkeypatch):
    monkeypatch.setenv("AE_ENGINE", "float")
    assert resolve_engine() == "float"
    assert kl_check(symmetric_code(6, 3, 6), first_order_channel(6)).engine == "float"
