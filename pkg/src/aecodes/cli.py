"""Command-line front end: construct, verify, props, search, scan, fuzz.

Exit codes: 0 pass, 1 usage or input error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import codes as codes_mod
from .channels import first_order_channel, order_n_channel
from .errors import DomainError, InfeasibleError, ParameterError, SearchSpaceError
from .fuzz import DEFAULT_SEED, fuzz_equivalence
from .halfint import HalfInt
from .kl import (DEFAULT_TOLERANCE, ENGINES, detection_check, kl_check, reduction_check,
                 resolve_engine)
from .properties import product_polynomial_fits, symmetry_relations
from .search import ANSATZE, SearchProblem, ell_grid, scan, solve
from .serialize import code_to_json, dumps, fraction_text, kl_report_to_json, load_code, reduction_to_json

EXIT_PASS, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
FORMATS = ("json", "csv", "human")
FAMILIES = ("symmetric", "detection", "counter_symmetric", "counter_symmetric_detection",
            "binomial", "binomial_detection")
MODES = ("correct", "detect", "reduce", "all")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    output_format: str = "json"
    engine: str = "exact"
    tolerance: float = DEFAULT_TOLERANCE
    parallelism: int = 1
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if self.engine not in ENGINES:
            raise UsageError(f"unknown engine {self.engine!r}")
        if not self.tolerance > 0:
            raise UsageError(f"tolerance must be > 0, got {self.tolerance}")
        if self.parallelism < 1:
            raise UsageError(f"--jobs must be >= 1, got {self.parallelism}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def half_int(text: str) -> HalfInt:
    try:
        return HalfInt.of(text)
    except (DomainError, ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"not an integer or half-integer: {text!r}") from exc


def half_int_list(text: str) -> list:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise argparse.ArgumentTypeError("empty support list")
    return [half_int(p) for p in parts]


def _common(p):
    p.add_argument("--engine", choices=ENGINES, default=argparse.SUPPRESS,
                   help="arithmetic engine (default: $AE_ENGINE or exact)")
    p.add_argument("--tol", type=float, default=argparse.SUPPRESS,
                   help="float engine tolerance (default 1e-12)")
    p.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS, dest="output_format")
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for scans")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="fuzzing RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="aecodes", description="Exact checks for angular-momentum codes.")
    _common(parser)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="emit a code family member as JSON")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--ell", type=half_int)
    p.add_argument("--ell0", type=half_int)
    p.add_argument("--m", type=half_int)
    p.add_argument("--m0", type=half_int)
    p.add_argument("--m1", type=half_int)
    p.add_argument("--m2", type=half_int)
    p.add_argument("--n", type=int)
    _common(p)

    p = sub.add_parser("verify", help="check a code file")
    p.add_argument("code_file", help="code JSON file, or - for stdin")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--channel", choices=("transitions", "first-order"), default="transitions",
                   help="order-n transition operators, or the nine first-order operators (order 1)")
    p.add_argument("--pairs", action="store_true", help="list every checked pair in JSON output")
    _common(p)

    p = sub.add_parser("props", help="product-polynomial and symmetry checks")
    p.add_argument("--ell0", type=half_int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--margin", type=int, help="edge points dropped on each side (default 2n)")
    p.add_argument("--j-max", type=int, default=10, help="symmetry relations for 1 <= J <= j-max")
    _common(p)

    p = sub.add_parser("search", help="solve the moment system on fixed supports")
    p.add_argument("--ell0", type=half_int, required=True)
    p.add_argument("--support0", type=half_int_list, required=True, help="comma-separated m values")
    p.add_argument("--support1", type=half_int_list, required=True)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--detect", action="store_true")
    _common(p)

    p = sub.add_parser("scan", help="search an ansatz over a range of manifolds")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--ansatz", choices=ANSATZE, default=None,
                   help="default: exhaustive_small with --detect, counter_symmetric otherwise")
    p.add_argument("--max-ell", type=half_int, default=HalfInt(12))
    p.add_argument("--min-ell", type=half_int, default=HalfInt(2))
    p.add_argument("--integer-only", action="store_true")
    p.add_argument("--max-points", type=int)
    p.add_argument("--detect", action="store_true")
    p.add_argument("--no-verify", action="store_true", help="skip the full KL check of each row")
    _common(p)

    p = sub.add_parser("fuzz", help="compare the moment reduction with the full KL check")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--count", type=int, default=10_000)
    p.add_argument("--kl-sample", type=int, default=25,
                   help="KL-check every k-th reduction failure (0: never)")
    _common(p)
    return parser


def config_from_args(args) -> RunConfig:
    ns = vars(args)
    engine = ns.get("engine") or resolve_engine(None)
    global_keys = {"command", "engine", "tol", "output_format", "jobs", "seed"}
    return RunConfig(
        command=args.command,
        parameters={k: v for k, v in ns.items() if k not in global_keys},
        output_format=ns.get("output_format", "json"),
        engine=engine,
        tolerance=ns.get("tol", DEFAULT_TOLERANCE),
        parallelism=ns.get("jobs", 1),
        seed=ns.get("seed", DEFAULT_SEED),
    )


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------- commands


def _need(params, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if params.get(n) is None]
    if missing:
        raise UsageError(f"{params['family']} needs {', '.join(missing)}")
    return [params[n] for n in names]


def build_code(params):
    fam = params["family"]
    if fam == "symmetric":
        return codes_mod.symmetric_code(*_need(params, "ell", "m1", "m2"))
    if fam == "detection":
        return codes_mod.detection_code(*_need(params, "ell", "m"))
    if fam in ("counter_symmetric", "counter_symmetric_detection"):
        ell, m1, m2 = _need(params, "ell", "m1", "m2")
        return codes_mod.counter_symmetric_code(ell, m1, m2, detection=fam.endswith("detection"))
    n, ell0, m0 = _need(params, "n", "ell0", "m0")
    return codes_mod.binomial_ae_code(n, ell0, m0, detection=fam == "binomial_detection")


def cmd_construct(cfg: RunConfig):
    code = build_code(cfg.parameters)
    if cfg.output_format == "json":
        return dumps(code_to_json(code)), EXIT_PASS
    rows = [["codeword", "m", "probability"]]
    for i, word in enumerate(code.codewords):
        for m, p in sorted(word.probabilities().items()):
            rows.append([i, str(m), fraction_text(p)])
    if cfg.output_format == "csv":
        return _csv(rows), EXIT_PASS
    lines = [f"{code.family} code on ℓ0 = {code.ell0}"]
    for i, word in enumerate(code.codewords):
        terms = " + ".join(f"({a})|{m}>" for m, a in sorted(word.amplitudes.items()))
        lines.append(f"|{i}> = {terms}")
    return "\n".join(lines) + "\n", EXIT_PASS


def _read_code(path: str):
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return load_code(text)


def _channel(code, params):
    n = params["order"]
    if n < 1:
        raise UsageError("--order must be >= 1")
    if params["channel"] == "first-order":
        if n != 1:
            raise UsageError("--channel first-order only applies to --order 1")
        return first_order_channel(code.ell0)
    return order_n_channel(code.ell0, n)


def cmd_verify(cfg: RunConfig):
    params = cfg.parameters
    code = _read_code(params["code_file"])
    n, mode = params["order"], params["mode"]
    errors = _channel(code, params)
    findings = codes_mod.validate(code)
    checks = {}
    if mode in ("correct", "all"):
        checks["correct"] = kl_check(code, errors, engine=cfg.engine, tol=cfg.tolerance)
    if mode in ("detect", "all"):
        checks["detect"] = detection_check(code, errors, engine=cfg.engine, tol=cfg.tolerance)
    if mode in ("reduce", "all"):
        checks["reduce"] = reduction_check(code, n, engine=cfg.engine, tol=cfg.tolerance)
    passed = not findings and all(c.passed for c in checks.values())
    verdict = "pass" if passed else "fail"
    status = EXIT_PASS if passed else EXIT_FAIL

    if cfg.output_format == "json":
        doc = {"ell0_times_2": code.ell0.twice, "family": code.family, "order": n,
               "channel": errors.description, "findings": findings, "verdict": verdict, "checks": {}}
        for name, res in checks.items():
            doc["checks"][name] = (reduction_to_json(res) if name == "reduce"
                                   else kl_report_to_json(res, params.get("pairs", False)))
        return dumps(doc), status
    rows = [["check", "verdict", "pairs_checked", "violations"]]
    for name, res in checks.items():
        if name == "reduce":
            rows.append([name, "pass" if res.passed else "fail", "", len(res.mismatched)])
        else:
            rows.append([name, res.verdict, len(res.entries), len(res.violations)])
    if cfg.output_format == "csv":
        return _csv(rows), status
    lines = [f"{code.family} code on ℓ0 = {code.ell0}, order {n}: {verdict}"]
    lines += [f"finding: {f}" for f in findings]
    for name, res in checks.items():
        if name == "reduce":
            why = f"spacing {res.spacing} (need {res.required_spacing})"
            if res.mismatched:
                why += f", unmatched moments {res.mismatched}"
            lines.append(f"{name}: {'pass' if res.passed else 'fail'}; {why}")
        else:
            lines.append(f"{name}: {res.verdict}; {len(res.entries)} pairs, "
                         f"{len(res.violations)} violations")
            for v in res.violations[:10]:
                lines.append(f"  {v.condition} {' / '.join(v.ops)}: residual {v.residual}")
    return "\n".join(lines) + "\n", status


def cmd_props(cfg: RunConfig):
    params = cfg.parameters
    n = params["n"]
    if n < 1:
        raise UsageError("--n must be >= 1")
    fits = product_polynomial_fits(params["ell0"], n, margin=params.get("margin"),
                                   include_mismatched=True, engine=cfg.engine, tol=cfg.tolerance)
    sym = symmetry_relations(range(1, params["j_max"] + 1), engine=cfg.engine, tol=cfg.tolerance)
    passed = all(f.passed for f in fits) and all(s.passed for s in sym)
    status = EXIT_PASS if passed else EXIT_FAIL
    if cfg.output_format == "json":
        doc = {
            "ell0_times_2": HalfInt.of(params["ell0"]).twice, "n": n,
            "verdict": "pass" if passed else "fail",
            "products": [{
                "ops": [f.op_a, f.op_b], "degree_bound": f.degree_bound,
                **({"structurally_zero": True} if f.structural_zero else {
                    "interior_fit": f.interior_fit, "full_manifold_fit": f.full_fit,
                    "degree": f.degree,
                    "coefficients": [fraction_text(c) if isinstance(c, Fraction) else str(c)
                                     for c in f.coefficients]}),
            } for f in fits],
            "symmetry": [{"relation": s.relation, "J_times_2": s.J.twice, "delta_m": s.delta_m,
                          "passed": s.passed} for s in sym],
        }
        return dumps(doc), status
    rows = [["kind", "a", "b", "bound", "result"]]
    for f in fits:
        result = "structurally zero" if f.structural_zero else (
            f"degree {f.degree}" if f.interior_fit and f.degree is not None else
            ("fit" if f.interior_fit else "no fit"))
        rows.append(["product", f.op_a, f.op_b, f.degree_bound, result])
    for s in sym:
        rows.append(["symmetry", s.relation, f"J={s.J},dm={s.delta_m}", "", "pass" if s.passed else "fail"])
    if cfg.output_format == "csv":
        return _csv(rows), status
    zeros = sum(f.structural_zero for f in fits)
    good = sum(bool(f.interior_fit) for f in fits)
    lines = [f"products: {good} fit, {zeros} structurally zero, "
             f"{len(fits) - good - zeros} failing",
             f"symmetry: {sum(s.passed for s in sym)}/{len(sym)} relations hold",
             f"verdict: {'pass' if passed else 'fail'}"]
    return "\n".join(lines) + "\n", status


def cmd_search(cfg: RunConfig):
    params = cfg.parameters
    problem = SearchProblem.create(params["ell0"], params["support0"], params["support1"],
                                   params["n"], params["detect"])
    try:
        fam = solve(problem)
    except InfeasibleError as exc:
        cert = exc.certificate
        doc = {"feasible": False, "certificate": {
            "kind": cert.kind, "moment_order": cert.moment_order,
            "combination": [fraction_text(c) for c in cert.combination], "message": cert.message}}
        if cfg.output_format == "json":
            return dumps(doc), EXIT_PASS
        if cfg.output_format == "csv":
            return _csv([["feasible", "kind", "moment_order"], ["false", cert.kind, cert.moment_order]]), EXIT_PASS
        return f"infeasible: {cert.message}\n", EXIT_PASS
    if cfg.output_format == "json":
        doc = {
            "feasible": True,
            "ell0_times_2": problem.ell0.twice,
            "support0_times_2": [m.twice for m in problem.support0],
            "support1_times_2": [m.twice for m in problem.support1],
            "p": [fraction_text(x) for x in fam.p],
            "q": [fraction_text(x) for x in fam.q],
            "dimension": fam.dimension,
            "vertex_count": fam.vertex_count,
            "vertices": [[fraction_text(x) for x in v] for v in fam.vertices],
        }
        return dumps(doc), EXIT_PASS
    rows = [["codeword", "m", "probability"]]
    rows += [[0, str(m), fraction_text(x)] for m, x in zip(problem.support0, fam.p)]
    rows += [[1, str(m), fraction_text(x)] for m, x in zip(problem.support1, fam.q)]
    if cfg.output_format == "csv":
        return _csv(rows), EXIT_PASS
    lines = [f"solution set of dimension {fam.dimension} with {fam.vertex_count} vertices",
             "p = (" + ", ".join(fraction_text(x) for x in fam.p) + ")",
             "q = (" + ", ".join(fraction_text(x) for x in fam.q) + ")"]
    return "\n".join(lines) + "\n", EXIT_PASS


def cmd_scan(cfg: RunConfig):
    params = cfg.parameters
    ansatz = params["ansatz"] or ("exhaustive_small" if params["detect"] else "counter_symmetric")
    ells = ell_grid(params["max_ell"], params["min_ell"], not params["integer_only"])
    result = scan(ells, params["n"], ansatz, detection=params["detect"],
                  max_points=params["max_points"], jobs=cfg.parallelism,
                  verify=not params["no_verify"])
    if cfg.output_format == "json":
        return dumps(result.to_json()), EXIT_PASS
    if cfg.output_format == "csv":
        return result.to_csv(), EXIT_PASS
    lo = result.min_ell0
    lines = [f"{ansatz}, n = {params['n']}, {'detection' if params['detect'] else 'correction'}: "
             f"{len(result.rows)} feasible configurations out of {result.examined}",
             f"minimal ℓ0: {lo if lo is not None else 'none'}"]
    return "\n".join(lines) + "\n", EXIT_PASS


def cmd_fuzz(cfg: RunConfig):
    params = cfg.parameters
    if params["n"] < 1 or params["count"] < 1:
        raise UsageError("--n and --count must be >= 1")
    summary = fuzz_equivalence(params["n"], params["count"], cfg.seed,
                               kl_sample=params["kl_sample"], engine=cfg.engine)
    status = EXIT_PASS if summary.passed else EXIT_FAIL
    doc = summary.to_json()
    if cfg.output_format == "json":
        return dumps(doc), status
    doc["defects"] = len(doc["defects"])
    keys = ["n", "count", "seed", "engine", "reduction_passes", "kl_checked", "kl_passes",
            "agreements", "defects", "converse_findings", "verdict"]
    if cfg.output_format == "csv":
        return _csv([keys, [doc[k] for k in keys]]), status
    return "".join(f"{k}: {doc[k]}\n" for k in keys), status


COMMANDS = {"construct": cmd_construct, "verify": cmd_verify, "props": cmd_props,
            "search": cmd_search, "scan": cmd_scan, "fuzz": cmd_fuzz}


def run(cfg: RunConfig):
    """Execute a RunConfig; returns (output text, exit code)."""
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        text, status = run(cfg)
    except (UsageError, DomainError, ParameterError) as exc:
        print(f"aecodes {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchSpaceError as exc:
        est = f" (estimated {exc.estimate} configurations)" if exc.estimate is not None else ""
        print(f"aecodes {args.command}: error: {exc}{est}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
