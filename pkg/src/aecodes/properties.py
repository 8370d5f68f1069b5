"""Structural properties of the transition operators.

* products K^{r1†} K^{r2} with equal delta_ell and delta_m are diagonal, and their
  entries follow a polynomial in m of degree <= r1 + r2;
* E_dm(J+1)† = G_-dm(J) and L_dm† = L_-dm entrywise.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angular import fit_polynomial
from .channels import KrausOperator, adjoint_compose, first_order_channel, order_n_channel
from .halfint import HalfInt, manifold
from .radical import ZERO


@dataclass
class ProductFit:
    op_a: str
    op_b: str
    degree_bound: int
    structural_zero: bool = False
    interior_fit: bool | None = None
    full_fit: bool | None = None
    degree: int | None = None
    coefficients: list = field(default_factory=list)
    points: int = 0

    @property
    def passed(self) -> bool:
        return self.structural_zero or bool(self.interior_fit)


def interior_window(ell: HalfInt, margin: int) -> list[HalfInt]:
    return [HalfInt(t) for t in range(-ell.twice + 2 * margin, ell.twice - 2 * margin + 1, 2)]


def _diagonal_values(prod: KrausOperator, ms) -> list:
    return [(m, prod.entries.get(m, ZERO)) for m in ms]


def _float_fit(points, degree: int, tol: float) -> bool:
    xs = np.array([float(m) for m, _ in points])
    ys = np.array([float(v) for _, v in points])
    scale = max(1.0, float(np.max(np.abs(ys))))
    coef = np.polynomial.polynomial.polyfit(xs / max(1.0, np.max(np.abs(xs))), ys / scale, degree)
    resid = np.polynomial.polynomial.polyval(xs / max(1.0, np.max(np.abs(xs))), coef) - ys / scale
    return bool(np.max(np.abs(resid)) <= max(tol, 1e-9))


def product_polynomial_fits(ell0, n: int, *, margin: int | None = None,
                            include_mismatched: bool = False, engine: str = "exact",
                            tol: float = 1e-12) -> list[ProductFit]:
    """Fit every diagonal product K^{r1(dl)}_{dm}† K^{r2(dl)}_{dm} with r1, r2 <= n.

    The interior window drops ``margin`` points at each manifold edge (default
    2n). The full-manifold fit is reported alongside for the edge behaviour.
    With ``include_mismatched`` the delta_ell-mismatched pairs are listed as
    structural zeros.
    """
    ell = HalfInt.of(ell0)
    ops = order_n_channel(ell, n).operators
    margin = 2 * n if margin is None else margin
    inner = interior_window(ell, margin)
    full = manifold(ell)
    out = []
    for a in ops:
        for b in ops:
            if a.delta_ell != b.delta_ell:
                if include_mismatched and a.delta_m == b.delta_m:
                    out.append(ProductFit(a.label, b.label, a.rank + b.rank, structural_zero=True))
                continue
            if a.delta_m != b.delta_m:
                continue
            deg = a.rank + b.rank
            prod = adjoint_compose(a, b)
            fit = ProductFit(a.label, b.label, deg, points=len(inner))
            if engine == "float":
                fit.interior_fit = _float_fit(_diagonal_values(prod, inner), deg, tol)
                fit.full_fit = _float_fit(_diagonal_values(prod, full), deg, tol)
            else:
                coeffs = fit_polynomial(_diagonal_values(prod, inner), deg)
                fit.interior_fit = coeffs is not None
                if coeffs is not None:
                    fit.coefficients = coeffs
                    fit.degree = len(coeffs) - 1
                fit.full_fit = fit_polynomial(_diagonal_values(prod, full), deg) is not None
            out.append(fit)
    return out


@dataclass
class SymmetryCheck:
    relation: str
    J: HalfInt
    delta_m: int
    passed: bool


def symmetry_relations(j_values, engine: str = "exact", tol: float = 1e-12) -> list[SymmetryCheck]:
    """E_dm(J+1)† == G_-dm(J) and L_dm† == L_-dm entrywise for each J."""
    out = []
    for J in j_values:
        J = HalfInt.of(J)
        upper = first_order_channel(J + 1).by_label()
        here = first_order_channel(J).by_label()
        for dm in (-1, 0, 1):
            e_dag = upper[f"E{_s(dm)}"].adjoint()
            g = here[f"G{_s(-dm)}"]
            out.append(SymmetryCheck("E(J+1)† = G(J)", J, dm, _same(e_dag, g, engine, tol)))
            l_dag = here[f"L{_s(dm)}"].adjoint()
            out.append(SymmetryCheck("L† = L", J, dm, _same(l_dag, here[f"L{_s(-dm)}"], engine, tol)))
    return out


def _s(k: int) -> str:
    return f"{k:+d}" if k else "0"


def _same(a: KrausOperator, b: KrausOperator, engine: str, tol: float) -> bool:
    if engine != "float":
        return a.same_entries(b)
    if (a.source_ell, a.delta_ell, a.delta_m) != (b.source_ell, b.delta_ell, b.delta_m):
        return False
    keys = set(a.entries) | set(b.entries)
    for m in keys:
        x, y = float(a.entry(m)), float(b.entry(m))
        if abs(x - y) > tol * max(1.0, abs(x), abs(y)):
            return False
    return True
