"""Exact codeword pairs on a single ell0 manifold and the code-family constructors."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import ParameterError
from .halfint import HalfInt, check_state
from .radical import ZERO, Radical


@dataclass(frozen=True, eq=False)
class Codeword:
    ell0: HalfInt
    amplitudes: dict

    @classmethod
    def from_map(cls, ell0, amplitudes) -> Codeword:
        ell0 = HalfInt.of(ell0)
        amps = {}
        for m, a in amplitudes.items():
            m = HalfInt.of(m)
            check_state(ell0, m)
            a = a if isinstance(a, Radical) else Radical.rational(a)
            if a:
                amps[m] = a
        return cls(ell0, dict(sorted(amps.items())))

    @classmethod
    def from_probabilities(cls, ell0, probs) -> Codeword:
        """Nonnegative amplitudes sqrt(p) for a map {m: p}."""
        return cls.from_map(ell0, {m: Radical.sqrt(Fraction(p)) for m, p in probs.items()})

    @property
    def support(self) -> list[HalfInt]:
        return sorted(self.amplitudes)

    def norm_squared(self) -> Radical:
        out = ZERO
        for a in self.amplitudes.values():
            out = out + a * a
        return out

    def inner(self, other: Codeword) -> Radical:
        out = ZERO
        for m, a in self.amplitudes.items():
            b = other.amplitudes.get(m)
            if b is not None:
                out = out + a * b
        return out

    def probabilities(self) -> dict:
        return {m: (a * a) for m, a in self.amplitudes.items()}

    def __eq__(self, other):
        if not isinstance(other, Codeword):
            return NotImplemented
        return self.ell0 == other.ell0 and self.amplitudes == other.amplitudes

    __hash__ = None


@dataclass(frozen=True, eq=False)
class Code:
    zero: Codeword
    one: Codeword
    family: str = "custom"
    parameters: dict = field(default_factory=dict)

    @property
    def ell0(self) -> HalfInt:
        return self.zero.ell0

    @property
    def codewords(self) -> tuple[Codeword, Codeword]:
        return (self.zero, self.one)

    def support(self) -> list[HalfInt]:
        return sorted(set(self.zero.amplitudes) | set(self.one.amplitudes))

    def support_spacing(self):
        """Smallest gap between distinct supported m values (None if < 2 points)."""
        pts = self.support()
        if len(pts) < 2:
            return None
        return min(b - a for a, b in zip(pts, pts[1:]))

    def swapped(self) -> Code:
        return Code(self.one, self.zero, self.family, dict(self.parameters))

    def __eq__(self, other):
        if not isinstance(other, Code):
            return NotImplemented
        return self.zero == other.zero and self.one == other.one

    __hash__ = None


def _require(cond: bool, message: str):
    if not cond:
        raise ParameterError(message)


def _require_integer(**values):
    for name, v in values.items():
        _require(v.is_integer(), f"{name} = {v} must be an integer")


def _same_character(ell: HalfInt, **values):
    for name, v in values.items():
        _require((ell - v).is_integer(),
                 f"{name} = {v} must differ from ell = {ell} by an integer")


def symmetric_code(ell, m1, m2) -> Code:
    """Amplitudes mirror-symmetric about m = 0; corrects first-order noise.

    |0> = (|-m1> + |m1>)/sqrt(2),
    |1> = sqrt(1 - m1^2/m2^2)|0> + sqrt(m1^2/(2 m2^2))(|-m2> + |m2>).
    Requires integers ell >= 6, m1 >= 3, m1 + 3 <= m2 <= ell.
    """
    ell, m1, m2 = HalfInt.of(ell), HalfInt.of(m1), HalfInt.of(m2)
    _require_integer(ell=ell, m1=m1, m2=m2)
    _require(ell >= 6, f"symmetric code requires ℓ ≥ 6, got ℓ = {ell}")
    _require(m1 >= 3, f"symmetric code requires m1 ≥ 3, got m1 = {m1}")
    _require(m2 >= m1 + 3, f"symmetric code requires m2 ≥ m1 + 3, got m1 = {m1}, m2 = {m2}")
    _require(m2 <= ell, f"symmetric code requires m2 ≤ ℓ, got m2 = {m2}, ℓ = {ell}")
    r = (m1.fraction / m2.fraction) ** 2
    zero = Codeword.from_probabilities(ell, {-m1: Fraction(1, 2), m1: Fraction(1, 2)})
    one = Codeword.from_probabilities(ell, {-m2: r / 2, 0: 1 - r, m2: r / 2})
    return Code(zero, one, "symmetric", {"ell": ell, "m1": m1, "m2": m2})


def detection_code(ell, m) -> Code:
    """|0> = (|-m> + |m>)/sqrt(2), |1> = |0>; detects first-order noise for ell, m >= 2."""
    ell, m = HalfInt.of(ell), HalfInt.of(m)
    _require_integer(ell=ell, m=m)
    _require(ell >= 2, f"detection code requires ℓ ≥ 2, got ℓ = {ell}")
    _require(m >= 2, f"detection code requires m ≥ 2, got m = {m}")
    _require(m <= ell, f"detection code requires m ≤ ℓ, got m = {m}, ℓ = {ell}")
    zero = Codeword.from_probabilities(ell, {-m: Fraction(1, 2), m: Fraction(1, 2)})
    one = Codeword.from_probabilities(ell, {0: 1})
    return Code(zero, one, "detection", {"ell": ell, "m": m})


def counter_symmetric_code(ell, m1, m2, detection: bool = False) -> Code:
    """Codewords that mirror each other under m -> -m.

    |0> = sqrt(m2/(m1+m2))|-m1> + sqrt(m1/(m1+m2))|m2>, |1> its mirror image.
    Correction bounds: ell >= 9/2, m1 >= 3/2, m2 >= m1 + 3. With
    ``detection=True``: ell >= 3, m1 >= 1, m2 >= m1 + 2.
    """
    ell, m1, m2 = HalfInt.of(ell), HalfInt.of(m1), HalfInt.of(m2)
    if detection:
        min_ell, min_m1, gap = HalfInt(6), HalfInt(2), 2
    else:
        min_ell, min_m1, gap = HalfInt(9), HalfInt(3), 3
    _require(ell >= min_ell, f"counter-symmetric code requires ℓ ≥ {min_ell}, got ℓ = {ell}")
    _require(m1 >= min_m1, f"counter-symmetric code requires m1 ≥ {min_m1}, got m1 = {m1}")
    _require(m2 >= m1 + gap,
             f"counter-symmetric code requires m2 ≥ m1 + {gap}, got m1 = {m1}, m2 = {m2}")
    _require(m2 <= ell, f"counter-symmetric code requires m2 ≤ ℓ, got m2 = {m2}, ℓ = {ell}")
    _same_character(ell, m1=m1, m2=m2)
    a, b = m1.fraction, m2.fraction
    zero = Codeword.from_probabilities(ell, {-m1: b / (a + b), m2: a / (a + b)})
    one = Codeword.from_probabilities(ell, {-m2: a / (a + b), m1: b / (a + b)})
    family = "counter_symmetric_detection" if detection else "counter_symmetric"
    return Code(zero, one, family, {"ell": ell, "m1": m1, "m2": m2})


def binomial_support(n: int, m0, detection: bool = False) -> list[HalfInt]:
    span = n + 1 if detection else 2 * n + 1
    m0 = HalfInt.of(m0)
    return [-m0 + k * span for k in range(span + 1)]


def binomial_ae_code(n: int, ell0, m0, detection: bool = False) -> Code:
    """Binomial-like codes protecting against order-n transitions.

    With N = 2n+1 (N = n+1 when ``detection``), support points -m0 + kN for
    k = 0..N carry amplitude sqrt(C(N, k) / 2^(N-1)); even k form |0>, odd k |1>.
    Requires ell0, m0 >= N^2/2 and every support point inside the manifold.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParameterError(f"binomial code requires an integer n ≥ 1, got n = {n!r}")
    ell0, m0 = HalfInt.of(ell0), HalfInt.of(m0)
    span = n + 1 if detection else 2 * n + 1
    bound = HalfInt(span * span)
    _require(ell0 >= bound, f"binomial code requires ℓ0 ≥ {bound}, got ℓ0 = {ell0}")
    _require(m0 >= bound, f"binomial code requires m0 ≥ {bound}, got m0 = {m0}")
    _same_character(ell0, m0=m0)
    pts = binomial_support(n, m0, detection)
    for m in pts:
        _require(abs(m) <= ell0, f"binomial code support point m = {m} lies outside ℓ0 = {ell0}")
    scale = 2 ** (span - 1)
    probs = [{}, {}]
    for k, m in enumerate(pts):
        probs[k % 2][m] = Fraction(comb(span, k), scale)
    family = "binomial_detection" if detection else "binomial"
    return Code(Codeword.from_probabilities(ell0, probs[0]),
                Codeword.from_probabilities(ell0, probs[1]),
                family, {"n": n, "ell0": ell0, "m0": m0})


def validate(code: Code, min_spacing=None) -> list[str]:
    """Structural findings; an empty list means the code is well formed."""
    findings = []
    if code.zero.ell0 != code.one.ell0:
        findings.append(f"codewords live on different manifolds ({code.zero.ell0} vs {code.one.ell0})")
    for name, word in (("|0>", code.zero), ("|1>", code.one)):
        if not word.amplitudes:
            findings.append(f"{name} is empty")
            continue
        for m in word.amplitudes:
            if abs(m.twice) > word.ell0.twice:
                findings.append(f"{name}: m = {m} outside manifold ℓ = {word.ell0}")
            elif (word.ell0 - m).twice % 2:
                findings.append(f"{name}: m = {m} has the wrong integer character for ℓ = {word.ell0}")
        norm = word.norm_squared()
        if norm != 1:
            findings.append(f"{name}: normalization ≠ 1 (norm² = {norm})")
    overlap = code.zero.inner(code.one)
    if overlap:
        findings.append(f"non-orthogonal codewords (<0|1> = {overlap})")
    if min_spacing is not None:
        spacing = code.support_spacing()
        if spacing is not None and spacing < min_spacing:
            findings.append(f"support spacing {spacing} below required {min_spacing}")
    return findings
