"""JSON documents for radicals, operators, codes and reports.

Half-integers are written as doubled integers (``*_times_2`` keys); radicals as
lists of ``[radicand, numerator, denominator]`` triples in radicand order.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .channels import KrausOperator, OpKind
from .codes import Code, Codeword
from .errors import DomainError
from .halfint import HalfInt
from .radical import Radical


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def radical_to_json(value: Radical) -> list:
    return [[r, c.numerator, c.denominator] for r, c in value.items()]


def radical_from_json(terms) -> Radical:
    if not isinstance(terms, list):
        raise DomainError(f"radical must be a list of terms, got {terms!r}")
    out = {}
    for term in terms:
        if (not isinstance(term, list) or len(term) != 3
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in term)):
            raise DomainError(f"radical term must be [radicand, num, den] integers, got {term!r}")
        r, num, den = term
        if r <= 0 or den == 0:
            raise DomainError(f"bad radical term {term!r}")
        out[r] = out.get(r, 0) + Fraction(num, den)
    return Radical(out)


def value_to_json(value):
    if isinstance(value, Radical):
        return {"terms": radical_to_json(value), "approx": float(value)}
    return {"approx": float(value)}


def operator_to_json(op: KrausOperator) -> dict:
    return {
        "label": op.label,
        "kind": op.kind.value,
        "source_ell_times_2": op.source_ell.twice,
        "delta_ell": op.delta_ell,
        "delta_m": op.delta_m,
        "rank": op.rank,
        "power": op.power,
        "entries": [[m.twice, radical_to_json(c)] for m, c in sorted(op.entries.items())],
    }


def operator_from_json(doc) -> KrausOperator:
    try:
        entries = {HalfInt(int(m2)): radical_from_json(terms) for m2, terms in doc["entries"]}
        return KrausOperator(HalfInt(int(doc["source_ell_times_2"])), int(doc["delta_ell"]),
                             int(doc["delta_m"]), int(doc["rank"]), entries,
                             OpKind(doc.get("kind", "K")), doc.get("label", "K"),
                             int(doc.get("power", 0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed operator document: {exc}") from exc


def _param_to_json(params: dict) -> dict:
    out = {}
    for key, v in params.items():
        if isinstance(v, HalfInt):
            out[f"{key}_times_2"] = v.twice
        elif isinstance(v, (list, tuple)) and v and all(isinstance(x, HalfInt) for x in v):
            out[f"{key}_times_2"] = [x.twice for x in v]
        else:
            out[key] = v
    return out


def _param_from_json(doc: dict) -> dict:
    out = {}
    for key, v in doc.items():
        if key.endswith("_times_2"):
            name = key[: -len("_times_2")]
            out[name] = [HalfInt(int(x)) for x in v] if isinstance(v, list) else HalfInt(int(v))
        else:
            out[key] = v
    return out


def code_to_json(code: Code) -> dict:
    return {
        "ell0_times_2": code.ell0.twice,
        "family": code.family,
        "parameters": _param_to_json(code.parameters),
        "codewords": [
            [{"m_times_2": m.twice, "amplitude_terms": radical_to_json(a)}
             for m, a in sorted(word.amplitudes.items())]
            for word in code.codewords
        ],
    }


def code_from_json(doc) -> Code:
    if not isinstance(doc, dict):
        raise DomainError("code document must be a JSON object")
    try:
        ell0 = HalfInt(int(doc["ell0_times_2"]))
        words = doc["codewords"]
        if not isinstance(words, list) or len(words) != 2:
            raise DomainError("a code needs exactly two codewords")
        built = []
        for word in words:
            amps = {}
            for entry in word:
                m = HalfInt(int(entry["m_times_2"]))
                if m in amps:
                    raise DomainError(f"duplicate support point m = {m}")
                amps[m] = radical_from_json(entry["amplitude_terms"])
            built.append(Codeword.from_map(ell0, amps))
        params = _param_from_json(doc.get("parameters", {}))
        return Code(built[0], built[1], str(doc.get("family", "custom")), params)
    except (KeyError, TypeError) as exc:
        raise DomainError(f"malformed code document: missing or bad field {exc}") from exc


def load_code(text: str) -> Code:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"code file is not valid JSON: {exc}") from exc
    return code_from_json(doc)


def kl_report_to_json(report, include_pairs: bool = False) -> dict:
    doc = {
        "mode": report.mode,
        "engine": report.engine,
        "verdict": report.verdict,
        "tolerance": report.tolerance,
        "pairs_checked": len(report.entries),
        "structurally_satisfied": report.structural_count(),
        "violations": [{
            "ops": list(v.ops),
            "condition": v.condition,
            "residual": value_to_json(v.residual),
        } for v in report.violations],
        "normalization": "unit reduced matrix element: bare coupling coefficients, "
                         "m-independent prefactors dropped",
    }
    if include_pairs:
        doc["pairs"] = [{
            "ops": list(e.ops),
            "structural": e.structural,
            **({} if e.structural else {
                "c00": value_to_json(e.c00), "c11": value_to_json(e.c11),
                "c01": value_to_json(e.c01), "c10": value_to_json(e.c10)}),
        } for e in report.entries]
    return doc


def reduction_to_json(result) -> dict:
    return {
        "verdict": "pass" if result.passed else "fail",
        "detection": result.detection,
        "spacing": None if result.spacing is None else str(result.spacing),
        "required_spacing": result.required_spacing,
        "mismatched_moments": result.mismatched,
        "moments0": [value_to_json(v) for v in result.moments0.values],
        "moments1": [value_to_json(v) for v in result.moments1.values],
    }


def fraction_text(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"
