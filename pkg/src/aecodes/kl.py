"""Knill-Laflamme verification, the moment reduction and the rank-one exclusion rule.

Two engines share one code path. ``exact`` works with Radicals and compares by
canonical form; ``float`` converts amplitudes to doubles once and compares with a
relative tolerance. Exact is the default and the source of truth.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

from .channels import ErrorSet, KrausOperator, identity
from .codes import Code, Codeword
from .errors import DomainError
from .radical import ZERO, Radical

DEFAULT_TOLERANCE = 1e-12
ENGINES = ("exact", "float")


def resolve_engine(engine=None) -> str:
    engine = engine or os.environ.get("AE_ENGINE") or "exact"
    if engine not in ENGINES:
        raise DomainError(f"unknown engine {engine!r}; expected one of {ENGINES}")
    return engine


@dataclass
class KLEntry:
    ops: tuple
    c00: object
    c11: object
    c01: object
    c10: object
    structural: bool = False


@dataclass
class Violation:
    ops: tuple
    condition: str
    residual: object

    def approx(self) -> float:
        return float(self.residual)


@dataclass
class KLReport:
    mode: str
    engine: str
    entries: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    tolerance: float | None = None

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def structural_count(self) -> int:
        return sum(e.structural for e in self.entries)


class _Exact:
    name = "exact"
    zero = ZERO

    def __init__(self, tol=None):
        self.tol = None

    @staticmethod
    def amps(word: Codeword) -> dict:
        return word.amplitudes

    @staticmethod
    def op(op: KrausOperator) -> dict:
        return op.entries

    def is_zero(self, value, scale) -> bool:
        return not value

    def equal(self, a, b, scale) -> bool:
        return a == b


class _Float:
    name = "float"
    zero = 0.0

    def __init__(self, tol=None):
        self.tol = DEFAULT_TOLERANCE if tol is None else tol
        if self.tol <= 0:
            raise DomainError("tolerance must be positive")
        self._cache = {}

    @staticmethod
    def amps(word: Codeword) -> dict:
        return {m: float(a) for m, a in word.amplitudes.items()}

    def op(self, op: KrausOperator) -> dict:
        got = self._cache.get(id(op))
        if got is None:
            got = (op, {m: float(c) for m, c in op.entries.items()})
            self._cache[id(op)] = got
        return got[1]

    def is_zero(self, value, scale) -> bool:
        return abs(value) <= self.tol * max(scale, 1.0)

    def equal(self, a, b, scale) -> bool:
        return abs(a - b) <= self.tol * max(scale, abs(a), abs(b), 1.0)


def _engine(engine, tol):
    return (_Float if resolve_engine(engine) == "float" else _Exact)(tol)


def _apply(entries: dict, dm: int, amps: dict) -> dict:
    out = {}
    for m, a in amps.items():
        c = entries.get(m)
        if c is not None:
            out[m + dm] = c * a
    return out


def _inner(u: dict, v: dict, zero):
    if len(u) > len(v):
        u, v = v, u
    out = zero
    for m, a in u.items():
        b = v.get(m)
        if b is not None:
            out = out + a * b
    return out


def _norm(v: dict) -> float:
    return math.sqrt(sum(float(a) ** 2 for a in v.values()))


def _check_manifold(code: Code, errors):
    ell = errors.source_ell if isinstance(errors, ErrorSet) else errors[0].source_ell
    if code.ell0 != ell:
        raise DomainError(f"code lives on ℓ0 = {code.ell0} but the error set acts on ℓ = {ell}")


def _operators(code: Code, errors, include_identity: bool) -> list:
    ops = list(errors)
    if include_identity and not any(op.label == "I" for op in ops):
        ops.insert(0, identity(code.ell0))
    return ops


def kl_check(code: Code, errors, *, include_identity: bool = True,
             engine=None, tol=None) -> KLReport:
    """Full correction conditions <i| a† b |j> = c_ab δ_ij over all ordered pairs.

    The no-error identity is added to the set unless ``include_identity`` is
    False. Pairs whose operators land in different manifolds are recorded as
    structurally satisfied without computation.
    """
    _check_manifold(code, errors)
    eng = _engine(engine, tol)
    ops = _operators(code, errors, include_identity)
    words = [eng.amps(code.zero), eng.amps(code.one)]
    images = []
    for op in ops:
        entries = eng.op(op)
        vecs = [_apply(entries, op.delta_m, w) for w in words]
        images.append((op, vecs, [_norm(v) for v in vecs]))

    report = KLReport("correct", eng.name, tolerance=eng.tol)
    z = eng.zero
    for a, va, na in images:
        for b, vb, nb in images:
            key = (a.label, b.label)
            if a.target_ell != b.target_ell:
                report.entries.append(KLEntry(key, z, z, z, z, structural=True))
                continue
            c00 = _inner(va[0], vb[0], z)
            c11 = _inner(va[1], vb[1], z)
            c01 = _inner(va[0], vb[1], z)
            c10 = _inner(va[1], vb[0], z)
            report.entries.append(KLEntry(key, c00, c11, c01, c10))
            scale = max(na[0] * nb[0], na[1] * nb[1], na[0] * nb[1], na[1] * nb[0])
            if not eng.is_zero(c01, scale):
                report.violations.append(Violation(key, "off-diagonal <0|a†b|1>", c01))
            if not eng.is_zero(c10, scale):
                report.violations.append(Violation(key, "off-diagonal <1|a†b|0>", c10))
            if not eng.equal(c00, c11, scale):
                report.violations.append(Violation(key, "diagonal <0|a†b|0> ≠ <1|a†b|1>", c00 - c11))
    return report


def kl_check_by_composition(code: Code, errors, include_identity: bool = True) -> KLReport:
    """Exact KL check that forms every a†b with ``adjoint_compose`` first.

    Slower than ``kl_check``; kept as an independent route for cross-checking.
    """
    from .channels import adjoint_compose

    _check_manifold(code, errors)
    ops = _operators(code, errors, include_identity)
    words = [code.zero.amplitudes, code.one.amplitudes]
    report = KLReport("correct", "exact")
    for a in ops:
        for b in ops:
            key = (a.label, b.label)
            prod = adjoint_compose(a, b)
            c = [[_inner(words[i], _apply(prod.entries, prod.delta_m, words[j]), ZERO)
                  for j in range(2)] for i in range(2)]
            report.entries.append(KLEntry(key, c[0][0], c[1][1], c[0][1], c[1][0],
                                          structural=a.delta_ell != b.delta_ell))
            if c[0][1]:
                report.violations.append(Violation(key, "off-diagonal <0|a†b|1>", c[0][1]))
            if c[1][0]:
                report.violations.append(Violation(key, "off-diagonal <1|a†b|0>", c[1][0]))
            if c[0][0] != c[1][1]:
                report.violations.append(Violation(key, "diagonal <0|a†b|0> ≠ <1|a†b|1>",
                                                   c[0][0] - c[1][1]))
    return report


def detection_check(code: Code, errors, *, engine=None, tol=None) -> KLReport:
    """Detection conditions <i| a |j> = c_a δ_ij for each single operator."""
    _check_manifold(code, errors)
    eng = _engine(engine, tol)
    words = [eng.amps(code.zero), eng.amps(code.one)]
    report = KLReport("detect", eng.name, tolerance=eng.tol)
    z = eng.zero
    for op in errors:
        key = (op.label,)
        if op.delta_ell != 0:
            report.entries.append(KLEntry(key, z, z, z, z, structural=True))
            continue
        entries = eng.op(op)
        img = [_apply(entries, op.delta_m, w) for w in words]
        c = [[_inner(words[i], img[j], z) for j in range(2)] for i in range(2)]
        report.entries.append(KLEntry(key, c[0][0], c[1][1], c[0][1], c[1][0]))
        scale = max(_norm(v) for v in img)
        if not eng.is_zero(c[0][1], scale):
            report.violations.append(Violation(key, "off-diagonal <0|a|1>", c[0][1]))
        if not eng.is_zero(c[1][0], scale):
            report.violations.append(Violation(key, "off-diagonal <1|a|0>", c[1][0]))
        if not eng.equal(c[0][0], c[1][1], scale):
            report.violations.append(Violation(key, "diagonal <0|a|0> ≠ <1|a|1>", c[0][0] - c[1][1]))
    return report


@dataclass(frozen=True)
class MomentTable:
    values: tuple

    def __getitem__(self, k):
        return self.values[k]

    def __len__(self):
        return len(self.values)


def moments(codeword: Codeword, k_max: int, engine=None) -> MomentTable:
    """<m^k> = Σ |amplitude(m)|² m^k for k = 0..k_max."""
    if k_max < 0:
        raise DomainError("k_max must be nonnegative")
    if resolve_engine(engine) == "float":
        probs = [(float(m), float(a) ** 2) for m, a in codeword.amplitudes.items()]
        return MomentTable(tuple(math.fsum(p * m ** k for m, p in probs) for k in range(k_max + 1)))
    probs = [(m.fraction, a * a) for m, a in codeword.amplitudes.items()]
    out = []
    for k in range(k_max + 1):
        total = ZERO
        for m, p in probs:
            total = total + p * (m ** k)
        out.append(total)
    return MomentTable(tuple(out))


@dataclass
class ReductionResult:
    passed: bool
    spacing: object
    required_spacing: int
    moments0: MomentTable
    moments1: MomentTable
    mismatched: list
    detection: bool = False

    @property
    def spacing_ok(self) -> bool:
        return self.spacing is None or self.spacing >= self.required_spacing


def reduction_check(code: Code, n: int, *, detection: bool = False,
                    engine=None, tol=None) -> ReductionResult:
    """Spacing plus matched dephasing moments.

    Correction: spacing >= 2n+1 and <0|m^k|0> = <1|m^k|1> for 1 <= k <= 2n.
    Detection: spacing >= n+1 and matching moments for 1 <= k <= n.
    """
    if n < 1:
        raise DomainError("reduction order n must be >= 1")
    eng = _engine(engine, tol)
    need = n + 1 if detection else 2 * n + 1
    k_max = n if detection else 2 * n
    mo0 = moments(code.zero, k_max, eng.name)
    mo1 = moments(code.one, k_max, eng.name)
    mismatched = []
    for k in range(1, k_max + 1):
        scale = float(max(abs(m) for m in code.support())) ** k if code.support() else 1.0
        if not eng.equal(mo0[k], mo1[k], scale):
            mismatched.append(k)
    spacing = code.support_spacing()
    spacing_ok = spacing is None or spacing >= need
    return ReductionResult(spacing_ok and not mismatched, spacing, need, mo0, mo1, mismatched, detection)


@dataclass
class OracleResult:
    kl_passed: bool
    reduction_passed: bool
    n: int

    @property
    def agree(self) -> bool:
        return self.kl_passed == self.reduction_passed

    @property
    def defect(self) -> bool:
        """Reduction passes but the full check fails; never expected."""
        return self.reduction_passed and not self.kl_passed

    @property
    def converse_finding(self) -> bool:
        """Full check passes without matched moments; reported, not an error."""
        return self.kl_passed and not self.reduction_passed


def equivalence_oracle(code: Code, n: int, *, engine=None, tol=None) -> OracleResult:
    from .channels import order_n_channel

    red = reduction_check(code, n, engine=engine, tol=tol)
    kl = kl_check(code, order_n_channel(code.ell0, n), engine=engine, tol=tol)
    return OracleResult(kl.passed, red.passed, n)


@dataclass
class ExclusionResult:
    passed: bool
    offending: list

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def support_exclusion_check(code: Code, resolved) -> ExclusionResult:
    """Fails iff some rank-one |phi><psi| has its source |psi> in the code support."""
    support = set(code.support())
    bad = []
    for op in resolved:
        if op.source_ell != code.ell0:
            continue
        if any(m in support for m in op.entries):
            bad.append(op.label)
    return ExclusionResult(not bad, bad)


def residual_text(value) -> str:
    if isinstance(value, Radical):
        return f"{value} ≈ {float(value):.6g}"
    return f"{value:.6g}"


__all__ = [
    "KLReport", "KLEntry", "Violation", "MomentTable", "ReductionResult", "OracleResult",
    "ExclusionResult", "kl_check", "kl_check_by_composition", "detection_check", "moments",
    "reduction_check", "equivalence_oracle", "support_exclusion_check", "resolve_engine",
]
