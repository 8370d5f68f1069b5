"""Codes from moment matching.

Unknowns are the squared amplitudes p (codeword 0) and q (codeword 1) on fixed
supports. The constraints are linear: both vectors sum to one and
Σ p_i m_i^k = Σ q_j m_j^k for 1 <= k <= K, with K = 2n for correction and K = n
for detection. Solutions are intersected with the nonnegative orthant and
enumerated exactly as basic feasible solutions.
"""
from __future__ import annotations

import csv
import io
import itertools
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .codes import Code, Codeword
from .errors import DomainError, InfeasibleError, SearchSpaceError
from .halfint import HalfInt

MAX_ELL0 = HalfInt(60)  # ℓ0 <= 30
MAX_POINTS = 6
MAX_CONFIGURATIONS = 200_000
VERTEX_DIMENSION_LIMIT = 4
ANSATZE = ("symmetric", "counter_symmetric", "uniform_spacing", "exhaustive_small")


@dataclass(frozen=True)
class SearchProblem:
    ell0: HalfInt
    support0: tuple
    support1: tuple
    order_n: int
    detection: bool = False

    @classmethod
    def create(cls, ell0, support0, support1, order_n: int, detection: bool = False) -> SearchProblem:
        ell0 = HalfInt.of(ell0)
        s0 = tuple(sorted(HalfInt.of(m) for m in support0))
        s1 = tuple(sorted(HalfInt.of(m) for m in support1))
        return cls(ell0, s0, s1, order_n, detection)

    def __post_init__(self):
        if not self.support0 or not self.support1:
            raise DomainError("both codeword supports must be nonempty")
        if self.order_n < 1:
            raise DomainError("order n must be >= 1")
        for s in (self.support0, self.support1):
            if len(set(s)) != len(s):
                raise DomainError(f"repeated support point in {[str(m) for m in s]}")
        if set(self.support0) & set(self.support1):
            raise DomainError("codeword supports must be disjoint")
        for m in self.support0 + self.support1:
            if abs(m) > self.ell0 or not (self.ell0 - m).is_integer():
                raise DomainError(f"support point m = {m} is not a state of ℓ0 = {self.ell0}")

    @property
    def moment_order(self) -> int:
        return self.order_n if self.detection else 2 * self.order_n

    @property
    def required_spacing(self) -> int:
        return self.order_n + 1 if self.detection else 2 * self.order_n + 1

    def spacing(self):
        pts = sorted(self.support0 + self.support1)
        return min(b - a for a, b in zip(pts, pts[1:]))

    def shifted_to(self, ell0) -> SearchProblem:
        return SearchProblem.create(ell0, self.support0, self.support1, self.order_n, self.detection)


@dataclass
class LinearSystem:
    matrix: list
    rhs: list
    unknowns: list
    equations: list
    warnings: list = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.matrix), len(self.unknowns)


def build_system(problem: SearchProblem, moment_order: int | None = None) -> LinearSystem:
    """Normalization rows then one row per moment k = 1..K (p-side minus q-side)."""
    K = problem.moment_order if moment_order is None else moment_order
    xs0 = [m.fraction for m in problem.support0]
    xs1 = [m.fraction for m in problem.support1]
    n0, n1 = len(xs0), len(xs1)
    rows = [[Fraction(1)] * n0 + [Fraction(0)] * n1,
            [Fraction(0)] * n0 + [Fraction(1)] * n1]
    rhs = [Fraction(1), Fraction(1)]
    labels = ["Σp = 1", "Σq = 1"]
    for k in range(1, K + 1):
        rows.append([x ** k for x in xs0] + [-(x ** k) for x in xs1])
        rhs.append(Fraction(0))
        labels.append(f"moment k={k}")
    unknowns = [("p", m) for m in problem.support0] + [("q", m) for m in problem.support1]
    system = LinearSystem(rows, rhs, unknowns, labels)
    if problem.spacing() < problem.required_spacing:
        msg = (f"support spacing {problem.spacing()} is below {problem.required_spacing}; "
               "matched moments alone do not protect the off-diagonal conditions")
        system.warnings.append(msg)
        warnings.warn(msg, stacklevel=2)
    return system


def rref(matrix, rhs, track: bool = True):
    """Reduced row echelon form of [A | b] over the rationals.

    Returns ``(rows, rhs, pivots, combos)`` where ``combos[i]`` expresses row i
    of the result as a combination of the original equations (empty rows when
    ``track`` is False).
    """
    A = [list(r) for r in matrix]
    b = list(rhs)
    nrow = len(A)
    ncol = len(A[0]) if A else 0
    combos = [[Fraction(int(i == j)) for j in range(nrow)] if track else [] for i in range(nrow)]
    pivots = []
    r = 0
    for c in range(ncol):
        piv = next((i for i in range(r, nrow) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        b[r], b[piv] = b[piv], b[r]
        combos[r], combos[piv] = combos[piv], combos[r]
        inv = 1 / A[r][c]
        A[r] = [v * inv for v in A[r]]
        b[r] *= inv
        combos[r] = [v * inv for v in combos[r]]
        for i in range(nrow):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
                b[i] -= f * b[r]
                combos[i] = [x - f * y for x, y in zip(combos[i], combos[r])]
        pivots.append(c)
        r += 1
        if r == nrow:
            break
    return A, b, pivots, combos


def _solve_square(A, b):
    """Unique solution of a square system, or None when singular."""
    R, rb, piv, _ = rref(A, b, track=False)
    if len(piv) < len(A[0]):
        return None
    return rb[: len(piv)]


@dataclass
class InfeasibilityCertificate:
    """Why a moment system has no nonnegative solution.

    ``combination`` holds one multiplier per equation of the system truncated
    at ``moment_order``. For ``inconsistent`` it combines the equations into
    0 = nonzero; for ``nonnegativity`` it is a Farkas vector y with
    y·A <= 0 columnwise and y·b > 0.
    """

    kind: str
    moment_order: int
    combination: list = field(default_factory=list)
    message: str = ""


def phase_one(A, b):
    """Exact phase-1 simplex with Bland's rule for {x >= 0 : A x = b}.

    Returns ``(x, None)`` with a feasible basic solution, or ``(None, y)`` with
    a Farkas vector y (A^T y <= 0, b^T y > 0).
    """
    m = len(A)
    ncol = len(A[0]) if A else 0
    flip = [1 if bi >= 0 else -1 for bi in b]
    T = [[Fraction(v) * f for v in row] + [Fraction(int(i == j)) for j in range(m)]
         for i, (row, f) in enumerate(zip(A, flip))]
    rhs = [Fraction(bi) * f for bi, f in zip(b, flip)]
    basis = [ncol + i for i in range(m)]
    width = ncol + m
    cost = [Fraction(0)] * ncol + [Fraction(1)] * m

    while True:
        # reduced costs c_j - c_B B^-1 A_j
        duals = [cost[basis[r]] for r in range(m)]
        entering = None
        for j in range(width):
            if j in basis:
                continue
            red = cost[j] - sum(duals[r] * T[r][j] for r in range(m))
            if red < 0:
                entering = j
                break
        if entering is None:
            break
        ratios = [(rhs[r] / T[r][entering], basis[r], r) for r in range(m) if T[r][entering] > 0]
        if not ratios:
            raise AssertionError("phase-one objective is bounded below; cannot be unbounded")
        _, _, leave = min(ratios)
        piv = T[leave][entering]
        T[leave] = [v / piv for v in T[leave]]
        rhs[leave] /= piv
        for r in range(m):
            if r != leave and T[r][entering]:
                f = T[r][entering]
                T[r] = [x - f * y for x, y in zip(T[r], T[leave])]
                rhs[r] -= f * rhs[leave]
        basis[leave] = entering

    objective = sum(rhs[r] for r in range(m) if basis[r] >= ncol)
    if objective == 0:
        x = [Fraction(0)] * ncol
        for r, j in enumerate(basis):
            if j < ncol:
                x[j] = rhs[r]
        return x, None
    # y = c_B^T B^-1, with B^-1 read off the artificial columns; undo row flips
    y = []
    for i in range(m):
        yi = sum(cost[basis[r]] * T[r][ncol + i] for r in range(m))
        y.append(yi * flip[i])
    return None, y


@dataclass
class SolutionFamily:
    problem: SearchProblem
    particular: tuple
    null_basis: list
    vertices: list
    dimension: int
    vertex_count: int

    @property
    def p(self) -> tuple:
        return self.particular[: len(self.problem.support0)]

    @property
    def q(self) -> tuple:
        return self.particular[len(self.problem.support0):]

    def split(self, x) -> tuple[tuple, tuple]:
        k = len(self.problem.support0)
        return tuple(x[:k]), tuple(x[k:])

    def is_unique(self) -> bool:
        return self.dimension == 0


def _check_solution(system: LinearSystem, x) -> bool:
    return all(sum(a * v for a, v in zip(row, x)) == r for row, r in zip(system.matrix, system.rhs))


def _vertices(R, rb, rank: int, ncols: int) -> list[tuple]:
    rows = R[:rank]
    rhs = rb[:rank]
    found = set()
    for basis in itertools.combinations(range(ncols), rank):
        sub = [[row[j] for j in basis] for row in rows]
        sol = _solve_square(sub, rhs)
        if sol is None or any(v < 0 for v in sol):
            continue
        x = [Fraction(0)] * ncols
        for j, v in zip(basis, sol):
            x[j] = v
        found.add(tuple(x))
    return sorted(found)


def _certificate(problem: SearchProblem) -> InfeasibilityCertificate:
    """Certificate for the smallest moment order at which matching fails."""
    for K in range(0, problem.moment_order + 1):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            system = build_system(problem, K)
        R, rb, piv, combos = rref(system.matrix, system.rhs)
        bad = next((i for i in range(len(piv), len(R)) if rb[i] != 0), None)
        if bad is not None:
            combo = combos[bad]
            terms = [f"({c})·[{lab}]" for c, lab in zip(combo, system.equations) if c]
            return InfeasibilityCertificate(
                "inconsistent", K, list(combo),
                f"moment k={K} cannot be matched: {' + '.join(terms)} reads 0 = {rb[bad]}")
        x, y = phase_one(system.matrix, system.rhs)
        if x is None:
            terms = [f"({c})·[{lab}]" for c, lab in zip(y, system.equations) if c]
            return InfeasibilityCertificate(
                "nonnegativity", K, list(y),
                f"moment k={K} cannot be matched with nonnegative weights; Farkas combination "
                f"{' + '.join(terms)} is <= 0 on every weight but positive on the right-hand side")
    raise AssertionError("certificate requested for a feasible problem")


def solve(problem: SearchProblem, certify: bool = True) -> SolutionFamily:
    """Exact solution set of the moment system intersected with the simplex.

    The particular solution is the centroid of the enumerated vertices; it is
    invariant under any symmetry of the supports (e.g. m -> -m) and keeps every
    point that some feasible solution uses. Vertices are listed when the
    solution set has at most four free dimensions. Raises ``InfeasibleError``
    with a certificate naming the first moment that cannot be matched
    (``certify=False`` skips building it).
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        system = build_system(problem)
    R, rb, piv, _ = rref(system.matrix, system.rhs, track=False)
    rank = len(piv)
    ncols = len(system.unknowns)
    consistent = all(rb[i] == 0 for i in range(rank, len(R)))
    if not consistent or phase_one(R[:rank], rb[:rank])[0] is None:
        if not certify:
            raise InfeasibleError("no nonnegative solution")
        cert = _certificate(problem)
        raise InfeasibleError(cert.message, cert)
    verts = _vertices(R, rb, rank, ncols)

    free = [j for j in range(ncols) if j not in piv]
    null_basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        null_basis.append(tuple(v))
    centroid = tuple(sum(col) / len(verts) for col in zip(*verts))
    assert _check_solution(system, centroid)
    dim = len(free)
    return SolutionFamily(problem, centroid, null_basis,
                          verts if dim <= VERTEX_DIMENSION_LIMIT else [],
                          dim, len(verts))


def solution_to_code(problem: SearchProblem, solution, family: str = "search") -> Code:
    """Codewords with amplitudes sqrt(p), sqrt(q); zero weights drop out of the support."""
    if isinstance(solution, SolutionFamily):
        x = solution.particular
    else:
        x = tuple(solution)
    k = len(problem.support0)
    p, q = x[:k], x[k:]
    if any(v < 0 for v in x):
        raise AssertionError(f"negative squared amplitude in {x}")
    zero = Codeword.from_probabilities(problem.ell0, dict(zip(problem.support0, p)))
    one = Codeword.from_probabilities(problem.ell0, dict(zip(problem.support1, q)))
    params = {"ell0": problem.ell0, "n": problem.order_n,
              "support0": list(problem.support0), "support1": list(problem.support1)}
    return Code(zero, one, family, params)


# ---------------------------------------------------------------- scanning


def _lattice(ell0: HalfInt) -> list[HalfInt]:
    return [HalfInt(t) for t in range(-ell0.twice, ell0.twice + 1, 2)]


def _spaced_subsets(points, size: int, gap: int):
    """Increasing subsets of ``points`` with consecutive differences >= gap."""
    def rec(start, chosen):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        for i in range(start, len(points)):
            if chosen and points[i] - chosen[-1] < gap:
                continue
            chosen.append(points[i])
            yield from rec(i + 1, chosen)
            chosen.pop()
    yield from rec(0, [])


def _well_spaced(points, gap: int) -> bool:
    pts = sorted(points)
    return all(b - a >= gap for a, b in zip(pts, pts[1:]))


def _configs_symmetric(ell0: HalfInt, gap: int, max_points: int):
    if not ell0.is_integer():
        return
    positives = [HalfInt(2 * k) for k in range(1, int(ell0) + 1)]
    # codeword 0: pairs ±a; codeword 1: 0 plus pairs ±b
    for na in range(1, max_points // 2 + 1):
        for nb in range(1, (max_points - 1) // 2 + 1):
            for a in itertools.combinations(positives, na):
                for b in itertools.combinations(positives, nb):
                    if set(a) & set(b):
                        continue
                    s0 = tuple(sorted([-x for x in a] + list(a)))
                    s1 = tuple(sorted([-x for x in b] + [HalfInt(0)] + list(b)))
                    if _well_spaced(s0 + s1, gap):
                        yield s0, s1


def _configs_counter(ell0: HalfInt, gap: int, max_points: int):
    pts = _lattice(ell0)
    for size in range(1, max_points + 1):
        for s in _spaced_subsets(pts, size, gap):
            mirror = tuple(sorted(-x for x in s))
            if set(s) & set(mirror):
                continue
            # count each unordered pair once: codeword 0 holds the lowest point
            if min(mirror) < min(s):
                continue
            if _well_spaced(s + mirror, gap):
                yield s, mirror


def _configs_uniform(ell0: HalfInt, gap: int, max_points: int, count: int):
    if count > 2 * max_points:
        return
    lo, hi = -ell0, ell0
    for d in range(gap, ell0.twice + 1):
        start = lo
        while start + d * (count - 1) <= hi:
            pts = [start + d * k for k in range(count)]
            yield tuple(pts[0::2]), tuple(pts[1::2])
            start = start + 1


def _configs_exhaustive(ell0: HalfInt, gap: int, max_points: int):
    pts = _lattice(ell0)
    for total in range(2, 2 * max_points + 1):
        for union in _spaced_subsets(pts, total, gap):
            rest = union[1:]
            # codeword 0 always holds the lowest point, so swapped duplicates never appear
            for k0 in range(0, min(max_points - 1, len(rest)) + 1):
                if total - 1 - k0 > max_points or total - 1 - k0 < 1:
                    continue
                for extra in itertools.combinations(rest, k0):
                    s0 = (union[0],) + extra
                    s1 = tuple(x for x in rest if x not in extra)
                    yield s0, s1


def configurations(ansatz: str, ell0, n: int, detection: bool = False, max_points: int | None = None):
    ell0 = HalfInt.of(ell0)
    gap = n + 1 if detection else 2 * n + 1
    if max_points is None:
        max_points = default_max_points(ansatz, n, detection)
    if ansatz == "symmetric":
        return _configs_symmetric(ell0, gap, max_points)
    if ansatz == "counter_symmetric":
        return _configs_counter(ell0, gap, max_points)
    if ansatz == "uniform_spacing":
        return _configs_uniform(ell0, gap, max_points, gap + 1)
    if ansatz == "exhaustive_small":
        return _configs_exhaustive(ell0, gap, max_points)
    raise DomainError(f"unknown ansatz {ansatz!r}; expected one of {ANSATZE}")


def default_max_points(ansatz: str, n: int, detection: bool = False) -> int:
    if ansatz == "exhaustive_small":
        return 3
    if ansatz == "uniform_spacing":
        return MAX_POINTS
    return min(MAX_POINTS, n + 2 if ansatz == "symmetric" else n + 1)


def estimate_configurations(ansatz: str, ell_values, n: int, detection: bool = False,
                            max_points: int | None = None) -> int:
    """Upper bound on the configurations a scan would examine."""
    gap = n + 1 if detection else 2 * n + 1
    if max_points is None:
        max_points = default_max_points(ansatz, n, detection)
    total = 0
    for ell0 in ell_values:
        L = HalfInt.of(ell0).twice + 1
        for k in range(1, 2 * max_points + 1):
            slots = L - (k - 1) * (gap - 1)
            if slots < k:
                break
            spaced = math.comb(slots, k)
            if ansatz == "exhaustive_small":
                total += spaced * (2 ** (k - 1))
            elif ansatz == "uniform_spacing":
                total += L * L
                break
            else:
                total += spaced
    return total


@dataclass
class ScanRow:
    ell0: HalfInt
    n: int
    ansatz: str
    support0: tuple
    support1: tuple
    probs0: tuple
    probs1: tuple
    kl_verified: bool

    def key(self):
        return (self.ell0.twice, tuple(m.twice for m in self.support0),
                tuple(m.twice for m in self.support1))


@dataclass
class ScanResult:
    rows: list
    n: int
    ansatz: str
    detection: bool
    examined: int

    @property
    def min_ell0(self):
        return min((r.ell0 for r in self.rows), default=None)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ell0_times_2", "n", "ansatz", "support0", "support1", "probs0", "probs1",
                    "kl_verified"])
        for r in self.rows:
            w.writerow([r.ell0.twice, r.n, r.ansatz,
                        ";".join(_q(m.fraction) for m in r.support0),
                        ";".join(_q(m.fraction) for m in r.support1),
                        ";".join(_q(p) for p in r.probs0),
                        ";".join(_q(p) for p in r.probs1),
                        "true" if r.kl_verified else "false"])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "ansatz": self.ansatz,
            "detection": self.detection,
            "configurations_examined": self.examined,
            "min_ell0_times_2": None if self.min_ell0 is None else self.min_ell0.twice,
            "rows": [{
                "ell0_times_2": r.ell0.twice,
                "n": r.n,
                "ansatz": r.ansatz,
                "support0_times_2": [m.twice for m in r.support0],
                "support1_times_2": [m.twice for m in r.support1],
                "probs0": [_q(p) for p in r.probs0],
                "probs1": [_q(p) for p in r.probs1],
                "kl_verified": r.kl_verified,
            } for r in self.rows],
        }


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _verify(code: Code, n: int, detection: bool) -> bool:
    from .channels import order_n_channel
    from .kl import detection_check, kl_check

    if code.ell0.twice < 2 * n:
        return False
    errors = order_n_channel(code.ell0, n)
    if detection:
        return detection_check(code, errors).passed
    return kl_check(code, errors).passed


def scan_one(ell0, n: int, ansatz: str, detection: bool = False, max_points: int | None = None,
             verify: bool = True) -> tuple[list, int]:
    """Feasible full-support codes for one manifold; returns (rows, configurations examined)."""
    ell0 = HalfInt.of(ell0)
    rows = []
    examined = 0
    for s0, s1 in configurations(ansatz, ell0, n, detection, max_points):
        examined += 1
        problem = SearchProblem.create(ell0, s0, s1, n, detection)
        try:
            fam = solve(problem)
        except InfeasibleError:
            continue
        if any(v == 0 for v in fam.particular):
            # some point is unused by every solution; the smaller support is listed on its own
            continue
        verified = _verify(solution_to_code(problem, fam), n, detection) if verify else False
        rows.append(ScanRow(ell0, n, ansatz, problem.support0, problem.support1,
                            fam.p, fam.q, verified))
    return rows, examined


def _scan_worker(args):
    return scan_one(*args)


def ell_grid(max_ell, min_ell=HalfInt(1), half_integers: bool = True) -> list[HalfInt]:
    lo, hi = HalfInt.of(min_ell), HalfInt.of(max_ell)
    if half_integers:
        return [HalfInt(t) for t in range(lo.twice, hi.twice + 1)]
    start = lo.twice + lo.twice % 2
    return [HalfInt(t) for t in range(start, hi.twice + 1, 2)]


def scan(ell_values, n: int, ansatz: str, *, detection: bool = False,
         max_points: int | None = None, jobs: int = 1, verify: bool = True,
         limit: int = MAX_CONFIGURATIONS) -> ScanResult:
    """Solve every configuration of ``ansatz`` on each manifold in ``ell_values``.

    Rows are merged in (ell0, support) order so the table does not depend on
    ``jobs``. Requests beyond the caps raise ``SearchSpaceError`` carrying an
    estimate of the configuration count.
    """
    if ansatz not in ANSATZE:
        raise DomainError(f"unknown ansatz {ansatz!r}; expected one of {ANSATZE}")
    ells = sorted({HalfInt.of(e) for e in ell_values})
    if not ells:
        return ScanResult([], n, ansatz, detection, 0)
    if max(ells) > MAX_ELL0:
        raise SearchSpaceError(f"scan caps ℓ0 at {MAX_ELL0}, asked for {max(ells)}")
    if max_points is not None and max_points > MAX_POINTS:
        raise SearchSpaceError(f"scan caps support size at {MAX_POINTS} points per codeword")
    est = estimate_configurations(ansatz, ells, n, detection, max_points)
    if est > limit:
        raise SearchSpaceError(
            f"scan would examine about {est} configurations (limit {limit})", estimate=est)
    tasks = [(e, n, ansatz, detection, max_points, verify) for e in ells]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_scan_worker, tasks))
    else:
        results = [scan_one(*t) for t in tasks]
    rows = [r for rs, _ in results for r in rs]
    rows.sort(key=ScanRow.key)
    return ScanResult(rows, n, ansatz, detection, sum(c for _, c in results))
