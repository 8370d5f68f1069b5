"""Noise operators on a single angular-momentum manifold.

Every operator maps |ell0, m> to |ell0 + delta_ell, m + delta_m> with an exact
amplitude. Overall proportionality constants are dropped throughout: KL
verdicts do not change when a single Kraus operator is rescaled.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache

from .angular import y_matrix_element
from .errors import DomainError
from .halfint import HalfInt, check_state, manifold
from .radical import ONE, ZERO, Radical


class OpKind(enum.Enum):
    E = "E"
    G = "G"
    L = "L"
    K_GENERAL = "K"
    M_POWER = "m^k"
    RANK_ONE = "rank1"


@dataclass(frozen=True, eq=False)
class KrausOperator:
    source_ell: HalfInt
    delta_ell: int
    delta_m: int
    rank: int
    entries: dict = field(repr=False)
    kind: OpKind
    label: str
    power: int = 0

    def __post_init__(self):
        tgt = self.target_ell
        if tgt.twice < 0:
            raise DomainError(f"{self.label}: target manifold ell = {tgt} is negative")
        for m in self.entries:
            check_state(self.source_ell, m)
            if abs((m + self.delta_m).twice) > tgt.twice:
                raise DomainError(f"{self.label}: target m = {m + self.delta_m} outside ell = {tgt}")

    @property
    def target_ell(self) -> HalfInt:
        return self.source_ell + self.delta_ell

    def entry(self, m) -> Radical:
        return self.entries.get(HalfInt.of(m), ZERO)

    def apply(self, amplitudes) -> dict:
        """Act on a sparse vector {m: amplitude} of the source manifold."""
        out = {}
        for m, a in amplitudes.items():
            c = self.entries.get(m)
            if c is not None and a:
                out[m + self.delta_m] = c * a
        return out

    def adjoint(self) -> KrausOperator:
        """The Hermitian adjoint, as an operator on the target manifold."""
        entries = {m + self.delta_m: c for m, c in self.entries.items()}
        return KrausOperator(self.target_ell, -self.delta_ell, -self.delta_m, self.rank,
                             entries, self.kind, f"{self.label}†", self.power)

    def scaled(self, factor) -> KrausOperator:
        return KrausOperator(self.source_ell, self.delta_ell, self.delta_m, self.rank,
                             {m: c * factor for m, c in self.entries.items()},
                             self.kind, self.label, self.power)

    def same_entries(self, other: KrausOperator) -> bool:
        return (self.source_ell == other.source_ell
                and self.delta_ell == other.delta_ell
                and self.delta_m == other.delta_m
                and self.entries == other.entries)


@dataclass(frozen=True)
class ErrorSet:
    operators: tuple
    order_n: int
    description: str

    def __post_init__(self):
        ells = {op.source_ell for op in self.operators}
        if len(ells) > 1:
            raise DomainError(f"error set mixes source manifolds {sorted(ells)}")

    @property
    def source_ell(self) -> HalfInt:
        return self.operators[0].source_ell

    def __len__(self):
        return len(self.operators)

    def __iter__(self):
        return iter(self.operators)

    def by_label(self) -> dict:
        return {op.label: op for op in self.operators}


def _signed(k: int) -> str:
    return f"{k:+d}" if k else "0"


def _sqrt_entries(ell: HalfInt, delta_ell: int, delta_m: int, radicand) -> dict:
    out = {}
    tgt = ell + delta_ell
    for m in manifold(ell):
        if abs((m + delta_m).twice) > tgt.twice:
            continue
        value = radicand(ell.fraction, m.fraction)
        if value < 0:
            raise AssertionError(f"negative radicand {value} at ell={ell}, m={m}")
        if value:
            out[m] = Radical.sqrt(value)
    return out


_FIRST_ORDER = {
    # (kind, delta_m): (delta_ell, coefficient under the square root)
    (OpKind.E, -1): (-1, lambda l, m: (l + m - 1) * (l + m)),
    (OpKind.E, 0): (-1, lambda l, m: l * l - m * m),
    (OpKind.E, 1): (-1, lambda l, m: (l - m - 1) * (l - m)),
    (OpKind.G, -1): (1, lambda l, m: (l - m + 1) * (l - m + 2)),
    (OpKind.G, 0): (1, lambda l, m: (l + 1) ** 2 - m * m),
    (OpKind.G, 1): (1, lambda l, m: (l + m + 1) * (l + m + 2)),
    (OpKind.L, -1): (0, lambda l, m: (l + m) * (l - m + 1)),
    (OpKind.L, 1): (0, lambda l, m: (l - m) * (l + m + 1)),
}


@lru_cache(maxsize=512)
def _first_order(ell: HalfInt) -> ErrorSet:
    ops = []
    for kind in (OpKind.E, OpKind.G, OpKind.L):
        for dm in (-1, 0, 1):
            label = f"{kind.value}{_signed(dm)}"
            if kind is OpKind.L and dm == 0:
                entries = {m: Radical.rational(m.fraction) for m in manifold(ell) if m.twice}
                ops.append(KrausOperator(ell, 0, 0, 1, entries, kind, label))
                continue
            dl, rad = _FIRST_ORDER[(kind, dm)]
            ops.append(KrausOperator(ell, dl, dm, 1, _sqrt_entries(ell, dl, dm, rad), kind, label))
    return ErrorSet(tuple(ops), 1, f"first-order absorption/emission/dephasing on ell={ell}")


def first_order_channel(ell0) -> ErrorSet:
    """The nine dipole operators E, G, L with delta_m in {-1, 0, +1}."""
    ell = HalfInt.of(ell0)
    if ell.twice < 2:
        raise DomainError(f"first-order channel needs ell0 >= 1, got {ell}")
    return _first_order(ell)


def order_n_label(r: int, dl: int, dm: int) -> str:
    return f"K{r}[dl={_signed(dl)},dm={_signed(dm)}]"


@lru_cache(maxsize=8192)
def _transition_operator(ell: HalfInt, r: int, dl: int, dm: int) -> KrausOperator:
    tgt = ell + dl
    entries = {}
    for m in manifold(ell):
        mo = m + dm
        if abs(mo.twice) > tgt.twice:
            continue
        v = y_matrix_element(tgt, mo, r, dm, ell, m)
        if v:
            entries[m] = v
    return KrausOperator(ell, dl, dm, r, entries, OpKind.K_GENERAL, order_n_label(r, dl, dm))


@lru_cache(maxsize=512)
def _order_n(ell: HalfInt, n: int) -> ErrorSet:
    ops = []
    for r in range(1, n + 1):
        for dl in range(-r, r + 1):
            for dm in range(-r, r + 1):
                ops.append(_transition_operator(ell, r, dl, dm))
    return ErrorSet(tuple(ops), n, f"order-{n} transitions on ell={ell}")


def order_n_channel(ell0, n: int) -> ErrorSet:
    """All K^{r(dl)}_{dm} with 1 <= r <= n and |dl|, |dm| <= r.

    Amplitudes are the bare coupling coefficients from ``y_matrix_element``;
    there are (2r+1)^2 operators for each r.
    """
    ell = HalfInt.of(ell0)
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"order n must be a positive integer, got {n!r}")
    if ell.twice < 2 * n:
        raise DomainError(f"order-{n} channel needs ell0 >= {n}, got {ell}")
    return _order_n(ell, n)


def dephasing_operator(ell0, k: int, window=None) -> KrausOperator:
    ell = HalfInt.of(ell0)
    ms = manifold(ell) if window is None else _window(ell, window)
    entries = {}
    for m in ms:
        v = m.fraction ** k
        if v:
            entries[m] = Radical.rational(v)
    label = "I" if k == 0 else ("m" if k == 1 else f"m^{k}")
    return KrausOperator(ell, 0, 0, 0, entries, OpKind.M_POWER, label, k)


def identity(ell0) -> KrausOperator:
    return dephasing_operator(ell0, 0)


def _window(ell: HalfInt, window) -> list[HalfInt]:
    if isinstance(window, tuple) and len(window) == 2:
        lo, hi = HalfInt.of(window[0]), HalfInt.of(window[1])
        return [m for m in manifold(ell) if lo <= m <= hi]
    ms = sorted({HalfInt.of(m) for m in window})
    for m in ms:
        check_state(ell, m)
    return ms


def dephasing_set(ell0, n: int, window=None) -> ErrorSet:
    """{m^k : 0 <= k <= n}, diagonal on ``window`` (default: the whole manifold).

    ``window`` may be a ``(lo, hi)`` tuple or an iterable of m values.
    """
    if n < 0:
        raise DomainError(f"dephasing order must be >= 0, got {n}")
    ops = tuple(dephasing_operator(ell0, k, window) for k in range(n + 1))
    return ErrorSet(ops, n, f"dephasing powers m^0..m^{n} on ell={HalfInt.of(ell0)}")


def resolved_transition(ell, m, ell_out, m_out) -> KrausOperator:
    """Rank-one |ell_out, m_out><ell, m| with unit amplitude."""
    ell, m, ell_out, m_out = (HalfInt.of(x) for x in (ell, m, ell_out, m_out))
    check_state(ell, m)
    check_state(ell_out, m_out)
    if ell == ell_out and m == m_out:
        raise DomainError("resolved transition needs distinct source and target states")
    dl, dm = ell_out - ell, m_out - m
    if not dl.is_integer():
        raise DomainError(f"ell changes by non-integer {dl}")
    dl, dm = int(dl), int(dm)
    label = f"P[({ell},{m})->({ell_out},{m_out})]"
    return KrausOperator(ell, dl, dm, max(abs(dl), abs(dm)), {m: ONE}, OpKind.RANK_ONE, label)


def adjoint_compose(a: KrausOperator, b: KrausOperator) -> KrausOperator:
    """a† b as an operator on the shared source manifold.

    Zero unless both land in the same target manifold; otherwise it shifts m by
    ``b.delta_m - a.delta_m``.
    """
    if a.source_ell != b.source_ell:
        raise DomainError(f"source manifolds differ: {a.source_ell} vs {b.source_ell}")
    shift = b.delta_m - a.delta_m
    entries = {}
    if a.delta_ell == b.delta_ell:
        for m, cb in b.entries.items():
            # b sends m to m + b.dm; a† sends it back to m + b.dm - a.dm
            back = m + shift
            ca = a.entries.get(back)
            if ca is not None:
                v = ca * cb
                if v:
                    entries[m] = v
    return KrausOperator(a.source_ell, 0, shift, a.rank + b.rank, entries,
                         OpKind.K_GENERAL, f"{a.label}†·{b.label}")



