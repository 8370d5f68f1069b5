"""Clebsch-Gordan coefficients, spherical-tensor matrix elements, exact fits."""
from __future__ import annotations

from collections import Counter
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .errors import DomainError
from .halfint import HalfInt, check_state
from .radical import ZERO, Radical


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return tuple(i for i, flag in enumerate(sieve) if flag)


@lru_cache(maxsize=None)
def _factorial_exponents(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n! via Legendre's formula."""
    out = []
    for p in _primes_upto(n):
        e, q = 0, p
        while q <= n:
            e += n // q
            q *= p
        out.append((p, e))
    return tuple(out)


def _int_exponents(n: int) -> Counter:
    out: Counter = Counter()
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] += 1
            n //= p
        p += 1
    if n > 1:
        out[n] += 1
    return out


def _sqrt_factorial_ratio(numer: list[int], denom: list[int], extra: int = 1) -> Radical:
    """sqrt(extra * prod(numer!) / prod(denom!)) as a single-term Radical."""
    exps: Counter = _int_exponents(extra)
    for n in numer:
        for p, e in _factorial_exponents(n):
            exps[p] += e
    for n in denom:
        for p, e in _factorial_exponents(n):
            exps[p] -= e
    outside = Fraction(1)
    radicand = 1
    for p, e in exps.items():
        # floor division keeps the radicand exponent in {0, 1} for negative e too
        outside *= Fraction(p) ** (e // 2)
        if e % 2:
            radicand *= p
    return Radical._raw({radicand: outside})


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return factorial(n)


@lru_cache(maxsize=200_000)
def _cg_doubled(j1: int, m1: int, j2: int, m2: int, J: int, M: int) -> Radical:
    if M != m1 + m2:
        return ZERO
    if J < abs(j1 - j2) or J > j1 + j2 or (j1 + j2 + J) % 2:
        return ZERO
    # every argument below is an integer once halved
    a = (J + j1 - j2) // 2
    b = (J - j1 + j2) // 2
    c = (j1 + j2 - J) // 2
    d = (j1 + j2 + J) // 2 + 1
    jpm, jmm = (J + M) // 2, (J - M) // 2
    j1m, j1p = (j1 - m1) // 2, (j1 + m1) // 2
    j2m, j2p = (j2 - m2) // 2, (j2 + m2) // 2
    e1 = (J - j2 + m1) // 2
    e2 = (J - j1 - m2) // 2

    kmin = max(0, -e1, -e2)
    kmax = min(c, j1m, j2p)
    total = Fraction(0)
    for k in range(kmin, kmax + 1):
        den = _fact(k) * _fact(c - k) * _fact(j1m - k) * _fact(j2p - k) * _fact(e1 + k) * _fact(e2 + k)
        total += Fraction(-1 if k % 2 else 1, den)
    if total == 0:
        return ZERO
    root = _sqrt_factorial_ratio([a, b, c, jpm, jmm, j1m, j1p, j2m, j2p], [d], extra=J + 1)
    return root * total


def clebsch_gordan(j1, m1, j2, m2, J, M) -> Radical:
    """Exact <j1 m1; j2 m2 | J M> in the Condon-Shortley convention.

    Computed from Racah's single-sum formula. Zero when M != m1 + m2 or the
    triangle rule fails; the result is always a single signed square root.
    """
    j1, m1, j2, m2, J, M = (HalfInt.of(x) for x in (j1, m1, j2, m2, J, M))
    check_state(j1, m1)
    check_state(j2, m2)
    check_state(J, M)
    return _cg_doubled(j1.twice, m1.twice, j2.twice, m2.twice, J.twice, M.twice)


def y_matrix_element(ell_out, m_out, r: int, dm: int, ell_in, m_in) -> Radical:
    """<ell_out, m_out| Y^r_dm |ell_in, m_in> up to an m-independent scale.

    Only the m-dependent coupling factor C^{ell_out m_out}_{ell_in m_in; r dm}
    is kept. The reduced element C^{ell_out 0}_{ell_in 0; r 0} is a constant per
    (r, ell_in, ell_out) and is dropped: it is undefined for half-integer ell and
    vanishes for odd r at ell_out == ell_in, which would delete the operators
    that play the role of L at r = 1.
    """
    if not isinstance(r, int) or r < 1:
        raise DomainError(f"rank r must be a positive integer, got {r!r}")
    if not isinstance(dm, int) or abs(dm) > r:
        raise DomainError(f"|dm| = {dm} exceeds rank {r}")
    ell_out, m_out, ell_in, m_in = (HalfInt.of(x) for x in (ell_out, m_out, ell_in, m_in))
    check_state(ell_in, m_in)
    check_state(ell_out, m_out)
    if m_out != m_in + dm or abs(ell_out - ell_in) > r:
        return ZERO
    return _cg_doubled(ell_in.twice, m_in.twice, 2 * r, 2 * dm, ell_out.twice, m_out.twice)


def _lagrange_basis(xs: list[Fraction]) -> list[list[Fraction]]:
    """Monomial coefficients (ascending) of each Lagrange basis polynomial."""
    basis = []
    for i, xi in enumerate(xs):
        poly = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j == i:
                continue
            # multiply by (x - xj)
            nxt = [Fraction(0)] * (len(poly) + 1)
            for k, c in enumerate(poly):
                nxt[k] -= c * xj
                nxt[k + 1] += c
            poly = nxt
            denom *= xi - xj
        basis.append([c / denom for c in poly])
    return basis


def evaluate_polynomial(coeffs, x) -> Radical:
    x = Fraction(x.fraction if isinstance(x, HalfInt) else x)
    out = ZERO
    for c in reversed(coeffs):
        out = out * x + c
    return out


def fit_polynomial(points, max_degree: int):
    """Exact interpolating polynomial of degree <= max_degree, or None.

    ``points`` is a sequence of ``(m, value)`` with rational/half-integer m and
    Radical (or rational) values. The first ``max_degree + 1`` points fix the
    polynomial; every remaining point must lie on it exactly. Returns the
    ascending coefficient list with trailing zeros stripped (``[]`` for the
    zero polynomial).
    """
    pts = []
    for m, v in points:
        m = m.fraction if isinstance(m, HalfInt) else Fraction(m)
        pts.append((m, v if isinstance(v, Radical) else Radical.rational(v)))
    xs = [m for m, _ in pts]
    if len(set(xs)) != len(xs):
        raise DomainError("duplicate abscissae in polynomial fit")
    if max_degree < 0:
        raise DomainError("max_degree must be nonnegative")
    if len(pts) < max_degree + 2:
        raise DomainError(f"need at least {max_degree + 2} points to test degree <= {max_degree}")

    head = pts[: max_degree + 1]
    basis = _lagrange_basis([m for m, _ in head])
    coeffs = [ZERO] * (max_degree + 1)
    for (_, v), poly in zip(head, basis):
        if not v:
            continue
        for k, c in enumerate(poly):
            if c:
                coeffs[k] = coeffs[k] + v * c
    for m, v in pts[max_degree + 1 :]:
        if evaluate_polynomial(coeffs, m) != v:
            return None
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs
