from fractions import Fraction

import numpy as np
import pytest
from sympy.physics.quantum.cg import CG

from aecodes.channels import (OpKind, adjoint_compose, dephasing_set, first_order_channel, identity,
                              order_n_channel, resolved_transition)
from aecodes.errors import DomainError
from aecodes.halfint import HalfInt, manifold


def dense(op, ells):
    """Matrix of op on the direct sum of the listed manifolds."""
    index = {}
    for ell in ells:
        for m in manifold(ell):
            index[(ell.twice, m.twice)] = len(index)
    M = np.zeros((len(index), len(index)))
    for m, c in op.entries.items():
        M[index[(op.target_ell.twice, (m + op.delta_m).twice)], index[(op.source_ell.twice, m.twice)]] = float(c)
    return M, index


@pytest.mark.parametrize("n, count", [(1, 9), (2, 34), (3, 83)])
def test_order_n_operator_count(n, count):
    ops = order_n_channel(8, n)
    assert len(ops) == count
    assert len({op.label for op in ops}) == count


def test_order_n_entries_against_sympy():
    ell = HalfInt.of("7/2")
    for op in order_n_channel(ell, 2):
        tgt = op.target_ell
        for m in manifold(ell):
            mo = m + op.delta_m
            if abs(mo) > tgt:
                assert m not in op.entries
                continue
            ref = float(CG(ell.fraction, m.fraction, op.rank, op.delta_m, tgt.fraction, mo.fraction).doit())
            assert float(op.entry(m)) == pytest.approx(ref, abs=1e-14)


@pytest.mark.parametrize("ell0", [1, Fraction(3, 2), 4, Fraction(13, 2)])
def test_first_order_proportional_to_rank_one_transitions(ell0):
    first = first_order_channel(ell0).by_label()
    trans = {(op.delta_ell, op.delta_m): op for op in order_n_channel(ell0, 1)}
    names = {"E": -1, "G": 1, "L": 0}
    for label, op in first.items():
        t = trans[(names[label[0]], op.delta_m)]
        assert set(op.entries) == set(t.entries), label
        ratios = {op.entries[m] / t.entries[m] for m in op.entries}
        # one nonzero constant per operator; sign may be negative
        assert len(ratios) == 1 and not next(iter(ratios)).is_zero(), label


def test_first_order_explicit_values():
    ops = first_order_channel(6).by_label()
    assert ops["L0"].entry(3) == 3
    assert ops["L+1"].entry(5) ** 2 == (6 - 5) * (6 + 5 + 1)
    assert ops["E0"].entry(0) ** 2 == 36
    assert ops["G+1"].entry(6) ** 2 == 13 * 14
    assert ops["E-1"].entry(-6).is_zero() and HalfInt(-12) not in ops["E-1"].entries
    with pytest.raises(DomainError):
        first_order_channel(Fraction(1, 2))


def test_dephasing_and_identity():
    s = dephasing_set(3, 2)
    assert [op.label for op in s] == ["I", "m", "m^2"]
    assert s.operators[2].entry(-3) == 9 and s.operators[1].entry(0) == 0
    w = dephasing_set(6, 1, window=(-2, 2)).operators[0]
    assert sorted(m.twice for m in w.entries) == [-4, -2, 0, 2, 4]
    assert identity(2).entry(-2) == 1
    with pytest.raises(DomainError):
        dephasing_set(3, -1)


def test_resolved_transition():
    op = resolved_transition(6, 2, 7, 3)
    assert op.kind is OpKind.RANK_ONE and op.entries == {HalfInt(4): 1}
    assert op.apply({HalfInt(4): 5, HalfInt(0): 1}) == {HalfInt(6): 5}
    with pytest.raises(DomainError):
        resolved_transition(6, 2, 6, 2)
    with pytest.raises(DomainError):
        resolved_transition(6, 2, Fraction(13, 2), Fraction(5, 2))
    with pytest.raises(DomainError):
        resolved_transition(6, 7, 6, 2)


def test_adjoint_compose_matches_dense_product():
    ell = HalfInt(6)
    ells = [ell + d for d in (-2, -1, 0, 1, 2)]
    ops = order_n_channel(ell, 2).operators
    for a in ops[::5]:
        for b in ops[::3]:
            A, _ = dense(a, ells)
            B, index = dense(b, ells)
            C, _ = dense(adjoint_compose(a, b), ells)
            assert np.allclose(A.T @ B, C, atol=1e-13), (a.label, b.label)


def test_adjoint_is_transpose():
    op = order_n_channel(5, 2).operators[7]
    ells = [HalfInt(10 + 2 * d) for d in (-2, -1, 0, 1, 2)]
    assert np.allclose(dense(op, ells)[0].T, dense(op.adjoint(), ells)[0])


def test_bad_order():
    with pytest.raises(DomainError):
        order_n_channel(1, 2)
    with pytest.raises(DomainError):
        order_n_channel(6, 0)
