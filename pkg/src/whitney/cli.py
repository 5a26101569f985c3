"""Command line front end: ``whitney immersion FILE`` and ``whitney degree FILE``."""
from __future__ import annotations

import argparse
import json
import logging
import sys

from whitney import budget
from whitney.degree import (
    AssumptionViolated,
    GenericityFailure,
    ImmersionProblem,
    InternalInconsistency,
    ProblemError,
    build_H,
    degree_report,
    intersection_number,
    problem_from_file,
)
from whitney.oracle import OracleConfig, numeric_degree_sum
from whitney.parser import ParseError, parse_polynomial, parse_problem
from whitney.polyring import MonomialOrder

log = logging.getLogger("whitney")

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_BUDGET = 1
EXIT_ASSUMPTION = 2
EXIT_GENERICITY = 3
EXIT_INPUT = 4
EXIT_INTERNAL = 5

_REQUIRED = ("schema_version", "kind", "dim_A", "signature_phi_T", "mod2", "assumption_checks")


def emit_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def parse_report(text: str) -> dict:
    """Inverse of :func:`emit_json`, with a schema check."""
    report = json.loads(text)
    missing = [k for k in _REQUIRED if k not in report]
    if missing:
        raise ValueError(f"report lacks {missing}")
    if report["schema_version"] != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {report['schema_version']}")
    return report


def _matrix(M):
    return [[str(x) for x in row] for row in M]


def build_report(kind, rep, args) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "dim_A": rep.dim_A,
        "signature_phi_T": rep.signature_phi_T,
        "mod2": bool(rep.mod2),
        "assumption_checks": {"finite_dim": True, "comaximal": True},
    }
    optional = {
        "signature_psi_T": rep.signature_psi_T,
        "det_sign_phi": rep.det_sign_phi,
        "det_sign_psi": rep.det_sign_psi,
        "u_used": rep.u_used,
        "phi_used": rep.phi_used,
    }
    out.update({k: v for k, v in optional.items() if v is not None})
    if kind == "immersion":
        out["m"] = rep.m
        out["intersection_number"] = rep.intersection_number
    else:
        out["degree_sum"] = rep.result
    if "halfspace_degree_sum" in rep.diagnostics:
        out["degree_sum_halfspace"] = rep.diagnostics["halfspace_degree_sum"]
    if "draws" in rep.diagnostics:
        out["draws"] = rep.diagnostics["draws"]
    A = rep.artifacts.get("A")
    if args.dump_algebra:
        out["algebra"] = A.dump() if A is not None else {"d": 0, "basis": [], "table": []}
    if args.dump_bezoutian and "T" in rep.artifacts:
        out["bezoutian"] = _matrix(rep.artifacts["T"].coords)
    if args.dump_forms:
        forms = {}
        for name in ("phi_T", "Psi_T", "Phi", "Psi"):
            F = rep.artifacts.get(name)
            if F is not None:
                forms[name] = {"matrix": _matrix(F.matrix), "signature": F.signature(), "det_sign": F.det_sign()}
        if "phi_T_weights" in rep.artifacts:
            forms["phi_T_weights"] = [str(w) for w in rep.artifacts["phi_T_weights"]]
        out["forms"] = forms
    return out


def failure_report(kind, exc) -> dict:
    checks = {"finite_dim": None, "comaximal": None}
    if isinstance(exc, AssumptionViolated):
        if exc.check == "finite_dim":
            checks["finite_dim"] = False
        else:
            checks.update(finite_dim=True, comaximal=False)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "dim_A": None,
        "signature_phi_T": None,
        "mod2": False,
        "assumption_checks": checks,
        "error": {"type": type(exc).__name__, "message": str(exc)},
    }


def render_human(report: dict) -> str:
    lines = [f"kind: {report['kind']}"]
    checks = report["assumption_checks"]
    lines.append(f"assumption checks: finite_dim={checks['finite_dim']} comaximal={checks['comaximal']}")
    if "error" in report:
        lines.append(f"error: {report['error']['type']}: {report['error']['message']}")
        return "\n".join(lines) + "\n"
    lines.append(f"dim A: {report['dim_A']}")
    labels = [
        ("signature_phi_T", "signature Phi_T"),
        ("signature_psi_T", "signature Psi_T"),
        ("det_sign_phi", "sgn det Phi"),
        ("det_sign_psi", "sgn det Psi"),
        ("u_used", "u"),
        ("degree_sum", "degree sum off V(I)"),
        ("degree_sum_halfspace", "degree sum over {u > 0}"),
    ]
    for key, label in labels:
        if report.get(key) is not None:
            lines.append(f"{label}: {report[key]}")
    if report["kind"] == "immersion":
        suffix = " (mod 2)" if report["mod2"] else ""
        lines.append(f"m: {report['m']}")
        lines.append(f"intersection number I(g): {report['intersection_number']}{suffix}")
    if "algebra" in report:
        alg = report["algebra"]
        lines.append(f"algebra: d = {alg['d']}")
        lines.append("  basis: " + ", ".join(alg["basis"]))
        for i, row in enumerate(alg["table"]):
            for j, v in enumerate(row):
                if j >= i:
                    lines.append(f"  e{i + 1}*e{j + 1} = [{', '.join(v)}]")
    if "bezoutian" in report:
        lines.append("bezoutian t:")
        lines.extend("  [" + ", ".join(r) + "]" for r in report["bezoutian"])
    if "forms" in report:
        for name, F in report["forms"].items():
            if name == "phi_T_weights":
                lines.append(f"phi_T weights: [{', '.join(F)}]")
                continue
            lines.append(f"{name}: signature {F['signature']}, sgn det {F['det_sign']}")
            lines.extend("  [" + ", ".join(r) + "]" for r in F["matrix"])
    if "oracle" in report:
        o = report["oracle"]
        lines.append(f"oracle: degree sum {o['sum']} from {len(o['zeros'])} zeros (regular={o['regular']})")
    return "\n".join(lines) + "\n"


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="whitney", description=__doc__)
    ap.add_argument("command", choices=["immersion", "degree"])
    ap.add_argument("file")
    ap.add_argument("--json", action="store_true", help="print one JSON object")
    ap.add_argument("--verify", action="store_true", help="attach a floating-point oracle report")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--u", dest="u", help="half-space polynomial u")
    ap.add_argument("--retries", type=int, default=64)
    ap.add_argument("--time-budget", type=float, default=None, metavar="SEC")
    ap.add_argument("--order", default="degrevlex", help="degrevlex or lex")
    ap.add_argument("--oracle-box", type=float, default=None)
    ap.add_argument("--oracle-starts", type=int, default=None)
    ap.add_argument("--dump-algebra", action="store_true")
    ap.add_argument("--dump-bezoutian", action="store_true")
    ap.add_argument("--dump-forms", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    kind = args.command

    def finish(report, code):
        stdout.write(emit_json(report) if args.json else render_human(report))
        return code

    try:
        with open(args.file, encoding="utf-8") as fh:
            pf = parse_problem(fh.read())
        if pf.kind != kind:
            raise ProblemError(f"{args.file} describes a {pf.kind} problem, not {kind}")
        problem = problem_from_file(pf)
        order = MonomialOrder.parse(args.order)
        if order.kind == "block":
            raise ProblemError("use degrevlex or lex")
    except (OSError, ParseError, ProblemError, ValueError) as exc:
        print(f"whitney: {exc}", file=stderr)
        return EXIT_INPUT

    try:
        with budget.time_budget(args.time_budget):
            if isinstance(problem, ImmersionProblem):
                dp = build_H(problem)
                u = parse_polynomial(args.u, dp.ring) if args.u else None
                rep = intersection_number(problem, seed=args.seed, retries=args.retries, u=u, order=order)
            else:
                dp = problem
                if args.u:
                    dp = problem.with_u(parse_polynomial(args.u, problem.ring))
                rep = degree_report(dp, order)
            report = build_report(kind, rep, args)
            if args.verify:
                cfg = OracleConfig()
                if args.oracle_box:
                    cfg.box = args.oracle_box
                if args.oracle_starts:
                    cfg.starts = args.oracle_starts
                report["oracle"] = numeric_degree_sum(dp, cfg, seed=args.seed).to_json()
    except ParseError as exc:
        print(f"whitney: --u: {exc}", file=stderr)
        return EXIT_INPUT
    except ProblemError as exc:
        print(f"whitney: {exc}", file=stderr)
        return EXIT_INPUT
    except AssumptionViolated as exc:
        print(f"whitney: assumption violated: {exc}", file=stderr)
        return finish(failure_report(kind, exc), EXIT_ASSUMPTION)
    except GenericityFailure as exc:
        print(f"whitney: genericity failure: {exc}", file=stderr)
        return finish(failure_report(kind, exc), EXIT_GENERICITY)
    except InternalInconsistency as exc:
        print(f"whitney: internal inconsistency: {exc}", file=stderr)
        return finish(failure_report(kind, exc), EXIT_INTERNAL)
    except budget.BudgetExceeded as exc:
        print(f"whitney: {exc}", file=stderr)
        return EXIT_BUDGET
    return finish(report, EXIT_OK)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
