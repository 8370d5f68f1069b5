import itertools
from fractions import Fraction

import pytest
import sympy

from aecodes.errors import DomainError, InfeasibleError, SearchSpaceError
from aecodes.halfint import HalfInt
from aecodes.kl import kl_check
from aecodes.channels import order_n_channel
from aecodes.search import (SearchProblem, build_system, ell_grid, phase_one, scan, solution_to_code,
                            solve)


def brute_vertices(problem):
    """Basic feasible solutions by trying every column basis with sympy."""
    system = build_system(problem)
    A = sympy.Matrix(system.matrix)
    b = sympy.Matrix(system.rhs)
    rank = A.rank()
    out = set()
    for cols in itertools.combinations(range(A.cols), rank):
        sub = A[:, list(cols)]
        if sub.rank() < rank:
            continue
        sol, params = sub.gauss_jordan_solve(b)
        if params.shape[0]:
            continue
        x = [sympy.Integer(0)] * A.cols
        for c, v in zip(cols, sol):
            x[c] = v
        if all(v >= 0 for v in x) and A * sympy.Matrix(x) == b:
            out.add(tuple(Fraction(int(v.p), int(v.q)) for v in x))
    return out


def test_three_point_support_recovers_known_amplitudes():
    fam = solve(SearchProblem.create(6, [-3, 3], [-6, 0, 6], 1))
    assert fam.p == (Fraction(1, 2), Fraction(1, 2))
    assert fam.q == (Fraction(1, 8), Fraction(3, 4), Fraction(1, 8))
    assert fam.dimension == 1 and fam.vertex_count == 2


@pytest.mark.filterwarnings("ignore:support spacing")
@pytest.mark.parametrize("ell0, s0, s1, n", [
    (6, [-3, 3], [-6, 0, 6], 1),
    (8, [-7, 0, 7], [-4, 4], 1),
    ("9/2", ["-3/2", "9/2"], ["-9/2", "3/2"], 1),
    (12, [-12, -3, 6], [-9, 0, 9, 12], 1),
    (4, [-4, 2], [-2, 0, 4], 1),
    (8, [-8, -3, 2], [-5, 0, 5, 8], 1),
])
def test_vertices_match_brute_force(ell0, s0, s1, n):
    problem = SearchProblem.create(ell0, s0, s1, n)
    ref = brute_vertices(problem)
    try:
        fam = solve(problem)
    except InfeasibleError:
        assert not ref
        return
    assert set(fam.vertices) == ref
    k = len(ref)
    centroid = tuple(sum(v[j] for v in ref) / k for j in range(len(next(iter(ref)))))
    assert fam.particular == centroid


def check_certificate(problem, cert):
    system = build_system(problem, cert.moment_order)
    y = cert.combination
    assert len(y) == len(system.equations)
    cols = [sum(yi * row[j] for yi, row in zip(y, system.matrix)) for j in range(len(system.unknowns))]
    rhs = sum(yi * bi for yi, bi in zip(y, system.rhs))
    if cert.kind == "inconsistent":
        assert all(c == 0 for c in cols) and rhs != 0
    else:
        assert all(c <= 0 for c in cols) and rhs > 0


@pytest.mark.filterwarnings("ignore:support spacing")
@pytest.mark.parametrize("ell0, s0, s1", [(10, [-3, 5], [3]), (12, [-9, -3], [3, 9]),
                                          (12, [-12, 0], [3, 6, 9]), (6, [0], [-3, 3])])
def test_infeasible_certificates(ell0, s0, s1):
    problem = SearchProblem.create(ell0, s0, s1, 1)
    with pytest.raises(InfeasibleError) as info:
        solve(problem)
    cert = info.value.certificate
    check_certificate(problem, cert)
    assert f"k={cert.moment_order}" in str(info.value)
    with pytest.raises(InfeasibleError) as bare:
        solve(problem, certify=False)
    assert bare.value.certificate is None


def test_phase_one_small():
    x, y = phase_one([[1, 1]], [1])
    assert x is not None and sum(x) == 1
    x, y = phase_one([[1, 1], [1, -1]], [1, 3])
    assert x is None
    # Farkas: y^T A <= 0, y^T b > 0
    assert y[0] + y[1] <= 0 and y[0] - y[1] <= 0 and y[0] + 3 * y[1] > 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_uniform_spacing_gives_binomial_weights(n):
    from math import comb

    N = 2 * n + 1
    pts = [Fraction(-N * N, 2) + k * N for k in range(N + 1)]
    fam = solve(SearchProblem.create(Fraction(N * N, 2), pts[0::2], pts[1::2], n))
    assert fam.is_unique()
    weights = [None] * (N + 1)
    weights[0::2] = fam.p
    weights[1::2] = fam.q
    assert weights == [Fraction(comb(N, k), 4 ** n) for k in range(N + 1)]


def test_solution_to_code_passes_kl():
    problem = SearchProblem.create(8, [-7, 0, 7], [-4, 4], 1)
    code = solution_to_code(problem, solve(problem))
    assert kl_check(code, order_n_channel(8, 1)).passed


def test_problem_validation():
    with pytest.raises(DomainError):
        SearchProblem.create(6, [0, 3], [3], 1)
    with pytest.raises(DomainError):
        SearchProblem.create(6, ["1/2"], [3], 1)
    with pytest.raises(DomainError):
        SearchProblem.create(6, [], [3], 1)


def test_build_system_warns_on_tight_spacing():
    with pytest.warns(UserWarning):
        build_system(SearchProblem.create(6, [-3, 3], [-5, 0, 5], 1))


def test_scan_minima():
    assert scan(ell_grid(HalfInt(8)), 1, "counter_symmetric").rows == []
    res = scan(ell_grid(HalfInt(9)), 1, "counter_symmetric")
    assert res.min_ell0 == Fraction(9, 2) and all(r.kl_verified for r in res.rows)
    res = scan(ell_grid(HalfInt(12), half_integers=False), 1, "symmetric")
    assert res.min_ell0 == 6
    res = scan(ell_grid(HalfInt(6)), 1, "exhaustive_small", detection=True)
    assert res.min_ell0 == 2 and all(r.kl_verified for r in res.rows)


def test_scan_deterministic_across_jobs():
    grid = ell_grid(HalfInt(14), HalfInt(8))
    a = scan(grid, 1, "counter_symmetric", jobs=1)
    b = scan(grid, 1, "counter_symmetric", jobs=3)
    assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()


def test_scan_caps():
    with pytest.raises(SearchSpaceError):
        scan(ell_grid(HalfInt(80)), 1, "counter_symmetric")
    with pytest.raises(SearchSpaceError) as info:
        scan(ell_grid(HalfInt(60)), 1, "exhaustive_small")
    assert info.value.estimate > 200_000
    with pytest.raises(DomainError):
        scan([6], 1, "nonsense")


def test_scan_empty_range():
    res = scan(ell_grid(HalfInt(4)), 1, "counter_symmetric")
    assert res.rows == [] and res.min_ell0 is None
    assert res.to_csv().count("\n") == 1
