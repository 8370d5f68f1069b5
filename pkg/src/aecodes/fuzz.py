"""Random sparse codes for exercising the reduction against the full KL check."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .channels import order_n_channel
from .codes import Code, Codeword
from .errors import InfeasibleError
from .halfint import HalfInt
from .kl import kl_check, reduction_check
from .search import SearchProblem, solution_to_code, solve

DEFAULT_SEED = 20240
FLAVORS = ("random", "matched", "perturbed")


def _random_probs(rng: random.Random, k: int) -> list[Fraction]:
    w = [rng.randint(1, 12) for _ in range(k)]
    s = sum(w)
    return [Fraction(x, s) for x in w]


def random_ell0(rng: random.Random, n: int) -> HalfInt:
    hi = (2 * n + 1) ** 2 + 12
    return HalfInt(rng.randint(2 * n, hi))


def random_code(rng: random.Random, n: int) -> Code:
    """Arbitrary supports (1-3 points each) and random rational weights."""
    ell0 = random_ell0(rng, n)
    pts = [HalfInt(t) for t in range(-ell0.twice, ell0.twice + 1, 2)]
    k0, k1 = rng.randint(1, 3), rng.randint(1, 3)
    chosen = rng.sample(pts, min(len(pts), k0 + k1))
    s0, s1 = chosen[:k0], chosen[k0:] or [chosen[-1]]
    if set(s0) & set(s1):
        s1 = [m for m in s1 if m not in s0] or [pts[0] if pts[0] not in s0 else pts[-1]]
    zero = Codeword.from_probabilities(ell0, dict(zip(s0, _random_probs(rng, len(s0)))))
    one = Codeword.from_probabilities(ell0, dict(zip(s1, _random_probs(rng, len(s1)))))
    return Code(zero, one, "fuzz-random")


def _spaced_points(rng: random.Random, ell0: HalfInt, count: int, gap: int):
    slack = ell0.twice - gap * (count - 1)  # 2*ell0 minus the tightest span
    if slack < 0:
        return None
    # nondecreasing extra offsets keep every gap >= gap
    cuts = sorted(rng.randint(0, slack) for _ in range(count))
    return [-ell0 + gap * i + c for i, c in enumerate(cuts)]


def matched_code(rng: random.Random, n: int, attempts: int = 50):
    """A code whose moments match by construction: a random point of a feasible polytope."""
    gap = 2 * n + 1
    for _ in range(attempts):
        k0 = rng.randint(n + 1, n + 2)
        k1 = rng.randint(n + 1, n + 2)
        span = gap * (k0 + k1 - 1)
        ell0 = random_ell0(rng, n)
        if ell0.twice < span:
            ell0 = HalfInt(span + rng.randint(0, 6))
        pts = _spaced_points(rng, ell0, k0 + k1, gap)
        if pts is None:
            continue
        idx = set(rng.sample(range(k0 + k1), k0))
        s0 = [m for i, m in enumerate(pts) if i in idx]
        s1 = [m for i, m in enumerate(pts) if i not in idx]
        try:
            fam = solve(SearchProblem.create(ell0, s0, s1, n), certify=False)
        except InfeasibleError:
            continue
        verts = fam.vertices or [fam.particular]
        weights = _random_probs(rng, len(verts))
        x = tuple(sum(w * v[j] for w, v in zip(weights, verts)) for j in range(len(verts[0])))
        code = solution_to_code(fam.problem, x, family="fuzz-matched")
        if code.zero.amplitudes and code.one.amplitudes:
            return code
    return None


def perturbed_code(rng: random.Random, n: int):
    """A matched code with weight moved between two support points of one codeword."""
    base = matched_code(rng, n)
    if base is None:
        return None
    which = rng.randint(0, 1)
    word = base.codewords[which]
    probs = {m: (a * a).to_fraction() for m, a in word.amplitudes.items()}
    if len(probs) < 2:
        return None
    a, b = rng.sample(sorted(probs), 2)
    delta = min(probs[a], Fraction(1, 2)) * Fraction(rng.randint(1, 9), 10)
    probs[a] -= delta
    probs[b] += delta
    new = Codeword.from_probabilities(base.ell0, probs)
    words = [base.zero, base.one]
    words[which] = new
    return Code(words[0], words[1], "fuzz-perturbed")


@dataclass
class FuzzSummary:
    n: int
    count: int
    seed: int
    engine: str
    flavors: dict = field(default_factory=dict)
    reduction_passes: int = 0
    kl_checked: int = 0
    kl_passes: int = 0
    agreements: int = 0
    defects: list = field(default_factory=list)
    converse_findings: list = field(default_factory=list)
    # per code: (reduction verdict, KL verdict or None when not checked)
    trace: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return not self.defects

    def to_json(self) -> dict:
        from .serialize import code_to_json

        return {
            "n": self.n, "count": self.count, "seed": self.seed, "engine": self.engine,
            "flavors": self.flavors,
            "reduction_passes": self.reduction_passes,
            "kl_checked": self.kl_checked, "kl_passes": self.kl_passes,
            "agreements": self.agreements,
            "defects": [code_to_json(c) for c in self.defects],
            "converse_findings": len(self.converse_findings),
            "verdict": "pass" if self.passed else "fail",
        }


def fuzz_equivalence(n: int, count: int = 10_000, seed: int = DEFAULT_SEED, *,
                     mix=(0.8, 0.1, 0.1), kl_sample: int = 25, engine: str = "exact") -> FuzzSummary:
    """Draw ``count`` codes and compare reduction_check with kl_check.

    Every reduction pass is followed by a full KL check (the soundness
    direction). Every ``kl_sample``-th reduction failure is KL-checked as well
    so that agreement and converse findings are sampled.
    """
    rng = random.Random(seed)
    summary = FuzzSummary(n, 0, seed, engine, {f: 0 for f in FLAVORS})
    failures_seen = 0
    while summary.count < count:
        flavor = rng.choices(FLAVORS, weights=mix)[0]
        if flavor == "random":
            code = random_code(rng, n)
        elif flavor == "matched":
            code = matched_code(rng, n)
        else:
            code = perturbed_code(rng, n)
        if code is None or code.ell0.twice < 2 * n:
            continue
        summary.count += 1
        summary.flavors[flavor] += 1
        red = reduction_check(code, n, engine=engine)
        run_kl = red.passed
        if not red.passed:
            failures_seen += 1
            run_kl = kl_sample > 0 and failures_seen % kl_sample == 0
        if red.passed:
            summary.reduction_passes += 1
        if not run_kl:
            summary.trace.append((red.passed, None))
            continue
        kl = kl_check(code, order_n_channel(code.ell0, n), engine=engine)
        summary.trace.append((red.passed, kl.passed))
        summary.kl_checked += 1
        summary.kl_passes += kl.passed
        summary.agreements += kl.passed == red.passed
        if red.passed and not kl.passed:
            summary.defects.append(code)
        elif kl.passed and not red.passed:
            summary.converse_findings.append(code)
    return summary
