"""Command-line frontend.

Every report is a JSON object (or the equivalent TSV) with a schema version,
the exact parameters used, a flat summary and an optional table.  Exit codes:
0 success, 1 a self-test failed, 2 bad input, 3 precision exhausted,
10 the representation was excluded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from .convergent import RepSpec, estimate_r0
from .freealg import AlgebraElement, AlgebraSignature, from_text
from .galois import (QuasiScalar, TorsorCocycle, canonical_path, eigenbasis,
                     verify_quasi_scalar)
from .gate import CyclotomicSpec, threshold, verdict
from .groupoid import verify_hopf_axioms
from .padic import INF, PrecisionError, brute_val_qpow, cbound, is_prime, val_qpow
from .periods import PeriodTriple, integral_period, section_for

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Invalid user input; the message names the offending field or line."""


def _plain(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if x == INF:
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return str(x)


def _report(command: str, parameters: dict, summary: dict,
            columns: Optional[List[str]] = None, rows: Optional[list] = None) -> dict:
    report = {"schema_version": SCHEMA_VERSION, "command": command,
              "parameters": _plain(parameters), "summary": _plain(summary)}
    if columns is not None:
        report["table"] = {"columns": columns, "rows": _plain(rows or [])}
    return report


def _tsv_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (dict, list)):
        return json.dumps(x, separators=(",", ":"))
    return "" if x is None else str(x)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
    lines = [f"#schema_version\t{report['schema_version']}", f"#command\t{report['command']}"]
    lines += [f"#parameter\t{k}\t{_tsv_cell(v)}" for k, v in report["parameters"].items()]
    lines += [f"#summary\t{k}\t{_tsv_cell(v)}" for k, v in report["summary"].items()]
    table = report.get("table")
    if table:
        lines.append("\t".join(table["columns"]))
        lines += ["\t".join(_tsv_cell(c) for c in row) for row in table["rows"]]
    return "\n".join(lines) + "\n"


# input helpers ----------------------------------------------------------------------


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: file not found")
    return p.read_text()


def _load_json(path: str) -> dict:
    text = _read(path)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: top level must be an object")
    return data


def _grades(text: str) -> List[int]:
    try:
        grades = [int(g) for g in text.split(",")]
    except ValueError:
        raise InputError(f"--grades: expected comma-separated integers, got {text!r}") from None
    if not grades or any(g not in (1, 2) for g in grades):
        raise InputError("--grades: each grade must be 1 or 2")
    return grades


def _check_common(args):
    if getattr(args, "ell", None) is not None and not is_prime(args.ell):
        raise InputError(f"--ell: {args.ell} is not prime")
    for name in ("precision", "k", "K", "S", "degree", "samples"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            raise InputError(f"--{name}: must be positive")


def _cyclotomic(args, ell: int, precision: Optional[int] = None) -> CyclotomicSpec:
    if args.q is None and not args.surjective:
        raise InputError("give --q or --surjective")
    try:
        return CyclotomicSpec(ell, args.q, args.surjective, precision or args.precision)
    except ValueError as exc:
        raise InputError(f"--q: {exc}") from None


def _rep(path: str) -> RepSpec:
    data = _load_json(path)
    try:
        return RepSpec.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise InputError(f"{path}: {exc}") from None


# subcommands -------------------------------------------------------------------------


def cmd_threshold(args):
    spec = _cyclotomic(args, args.ell)
    th = threshold(spec)
    params = {"ell": args.ell, "q": spec.q, "surjective": args.surjective,
              "precision": args.precision}
    summary = {"bound": th.bound, "N": th.N, "order_of_q": th.order,
               "valuation_q_power": th.valuation, "hypothesis": spec.hypothesis()}
    return _report("threshold", params, summary), 0


def cmd_vsum(args):
    if args.q % args.ell == 0:
        raise InputError(f"--q: must be prime to {args.ell}")
    rows = []
    total = 0
    for k in range(1, args.k + 1):
        v = val_qpow(args.q, k, args.ell, precision=args.precision)
        brute = brute_val_qpow(args.q, k, args.ell)
        total += v
        rows.append([k, v, brute, total, cbound(args.q, args.ell, k)])
    bound = cbound(args.q, args.ell, args.k)
    summary = {"sum": total, "cbound": bound, "within_bound": total <= bound,
               "formula_matches_brute": all(r[1] == r[2] for r in rows)}
    params = {"ell": args.ell, "q": args.q, "k": args.k, "precision": args.precision}
    return _report("vsum", params, summary,
                   ["k", "val_qpow", "brute", "running_sum", "cbound"], rows), 0


def cmd_period(args):
    data = _load_json(args.input)
    try:
        t = PeriodTriple.from_json(json.dumps(data))
    except (ValueError, TypeError) as exc:
        raise InputError(f"{args.input}: {exc}") from None
    e = integral_period(t)
    summary = {"period": e}
    if e != INF:
        summary["section"] = section_for(t, e)
    params = {"input": args.input, "ell": t.ell, "precision": t.precision, "w": t.w,
              "matrix": [list(r) for r in t.matrix]}
    return _report("period", params, summary), 0


def _sigma(args) -> QuasiScalar:
    if args.sigma:
        data = _load_json(args.sigma)
        try:
            sigma = QuasiScalar.from_dict(data, args.K)
        except (ValueError, TypeError) as exc:
            raise InputError(f"{args.sigma}: {exc}") from None
        sig = sigma.signature
        args.ell, args.q, args.precision = sig.ell, sigma.q, sig.precision
        args.grades = ",".join(str(g) for g in sig.grades)
        return sigma
    if args.ell is None or args.q is None:
        raise InputError("give --ell and --q, or --sigma")
    if not is_prime(args.ell):
        raise InputError(f"--ell: {args.ell} is not prime")
    if args.q % args.ell == 0:
        raise InputError(f"--q: must be prime to {args.ell}")
    sig = AlgebraSignature.simple(args.ell, args.precision, args.K, _grades(args.grades))
    try:
        return QuasiScalar(sig, args.q)
    except ValueError as exc:
        raise InputError(f"--q: {exc}") from None


def _sigma_parameters(args) -> dict:
    return {"ell": args.ell, "q": args.q, "K": args.K, "grades": args.grades,
            "precision": args.precision, "sigma": args.sigma}


def cmd_eigenlift(args):
    sigma = _sigma(args)
    ok, failing = verify_quasi_scalar(sigma)
    if not ok:
        raise InputError(f"--sigma: not quasi-scalar, leading terms fail at grade {failing}")
    eb = eigenbasis(sigma, args.K)
    rows = [[d.grade, d.count, d.worst_period, d.valuation_sum, d.cbound,
             "pass" if d.passed else "fail"] for d in eb.diagnostics]
    summary = {"vectors": len(eb.vectors), "triangular": eb.triangular, "passed": eb.passed}
    return _report("eigenlift", _sigma_parameters(args), summary,
                   ["grade", "count", "worst_period", "valuation_sum", "cbound", "status"],
                   rows), 0 if eb.passed else 1


def cmd_canonical_path(args):
    sigma = _sigma(args)
    ok, failing = verify_quasi_scalar(sigma)
    if not ok:
        raise InputError(f"--sigma: not quasi-scalar, leading terms fail at grade {failing}")
    sig = sigma.signature
    if args.cocycle:
        try:
            u = from_text(sig, _read(args.cocycle))
        except ValueError as exc:
            raise InputError(f"{args.cocycle}: {exc}") from None
    else:
        u = AlgebraElement.one(sig) + AlgebraElement.generator(sig, 0)
    try:
        cocycle = TorsorCocycle(sigma, u)
    except ValueError as exc:
        raise InputError(f"--cocycle: {exc}") from None
    cp = canonical_path(cocycle, args.K)
    rows = [[n, b, cbound(sigma.q, sig.ell, n - 1)] for n, b in sorted(cp.periods.items())]
    params = _sigma_parameters(args)
    params["cocycle"] = args.cocycle or f"1+{sig.names[0]}"
    summary = {"within_bound": all(r[1] <= r[2] for r in rows)}
    return _report("canonical-path", params, summary, ["n", "b0_n", "cbound"], rows), 0


def cmd_check_rep(args):
    rep = _rep(args.rep)
    spec = _cyclotomic(args, rep.ell, rep.precision)
    try:
        v = verdict(spec, rep, args.punctures)
    except ValueError as exc:
        raise InputError(f"{args.rep}: {exc}") from None
    params = {"rep": args.rep, "ell": rep.ell, "q": spec.q, "surjective": args.surjective,
              "precision": rep.precision, "dim": rep.dim, "punctures": args.punctures,
              "generators": rep.to_dict()["generators"]}
    return _report("check-rep", params, v.to_dict()), v.exit_code


def cmd_r0(args):
    rep = _rep(args.rep)
    est = estimate_r0(rep, args.S)
    rows = [[s, m] for s, m in enumerate(est.m_text(rep.precision), 1)]
    params = {"rep": args.rep, "ell": rep.ell, "precision": rep.precision, "dim": rep.dim,
              "S": args.S}
    summary = {"r0_lower": est.r0_lower, "unipotent_detected": est.unipotent_detected,
               "precision_capped": est.precision_capped}
    return _report("r0", params, summary, ["s", "m_s"], rows), 0


def cmd_hopf_selftest(args):
    report = verify_hopf_axioms(args.samples, args.degree, _grades(args.grades),
                                args.ell, args.precision, args.seed)
    rows = [[r.name, r.checked, "pass" if r.passed else "fail", r.witness]
            for r in report.results]
    params = {"ell": args.ell, "precision": args.precision, "degree": args.degree,
              "grades": args.grades, "samples": args.samples, "seed": args.seed}
    return (_report("hopf-selftest", params, {"all_passed": report.all_passed},
                    ["diagram", "checked", "status", "witness"], rows),
            0 if report.all_passed else 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ladic-monodromy",
                                     description="ℓ-adic period and unipotence computations")
    parser.add_argument("--format", choices=("json", "tsv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, ell=True, precision=20):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--format", choices=("json", "tsv"), default=argparse.SUPPRESS)
        if ell:
            p.add_argument("--ell", type=int, required=True)
        if precision is not None:
            p.add_argument("--precision", "-M", type=int, default=precision)
        p.set_defaults(func=func)
        return p

    p = add("threshold", cmd_threshold, "unipotence threshold N for a cyclotomic unit q")
    p.add_argument("--q", type=int)
    p.add_argument("--surjective", action="store_true")

    p = add("vsum", cmd_vsum, "table of v_ℓ(q^k - 1) against the closed-form bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add("period", cmd_period, "integral period of a filtered lattice", ell=False,
            precision=None)
    p.add_argument("--input", required=True, help="JSON with ell, precision, w, matrix")

    for name, func, help_text in (
            ("eigenlift", cmd_eigenlift, "eigenbasis lift diagnostics per grade"),
            ("canonical-path", cmd_canonical_path, "integral periods of the canonical path")):
        p = add(name, func, help_text, ell=False)
        p.add_argument("--ell", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--K", type=int, required=True, help="target grade")
        p.add_argument("--grades", default="1", help="generator grades, e.g. 1,1,2")
        p.add_argument("--sigma", help="quasi-scalar JSON (overrides --ell, --q, --grades)")
        if name == "canonical-path":
            p.add_argument("--cocycle", help="element file (word, valuation, unit per line)")

    p = add("check-rep", cmd_check_rep, "geometric-origin gate", ell=False)
    p.add_argument("--rep", required=True, help="JSON with ell, precision, dim, generators")
    p.add_argument("--q", type=int)
    p.add_argument("--surjective", action="store_true")
    p.add_argument("--punctures", type=int)

    p = add("r0", cmd_r0, "lower estimate of the convergence radius exponent", ell=False,
            precision=None)
    p.add_argument("--rep", required=True)
    p.add_argument("--S", type=int, default=8, help="depth")

    p = add("hopf-selftest", cmd_hopf_selftest, "randomized Hopf groupoid axiom check",
            ell=False)
    p.add_argument("--ell", type=int, default=3)
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--grades", default="1")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_common(args)
        report, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PrecisionError as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(report, args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
