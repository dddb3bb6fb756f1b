"""Command-line front end: ``aderdg {solve,converge,tables,list}``.

Numbers are written in the shortest decimal form that round-trips to the same
binary64 value (at most 17 significant digits), so repeated runs are
byte-identical.
"""
import argparse
import csv
import io
import json
import sys

import numpy as np

from .basis import build_tables, tables_as_dict
from .dae import DaeProblem, dae_integrate
from .errors import AderDGError, DegreeTooHighError, UnknownProblemError
from .local import cell_improved, cell_local, subnode_taus
from .nonlinear import METHODS, SolverConfig
from .ode import integrate
from .scalar import FLOAT64, MPField, to_float
from .testbed import (DEFAULT_SUBNODES, NORMS, STANDARD_GRIDS, PROBLEMS, builtin_problem,
                      convergence_study)

EXIT_OK, EXIT_NUMERIC, EXIT_USAGE = 0, 1, 2
ORDER_KEYS = ("n", "l", "imp")


class UsageError(Exception):
    pass


def fmt(x):
    """Shortest round-trip decimal of a binary64 value; '' for missing."""
    if x is None:
        return ""
    return repr(float(x))


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser():
    parser = argparse.ArgumentParser(prog="aderdg",
                                     description="ADER-DG one-step integrator for ODEs and index-1 DAEs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", "-o", default="-", help="output path, '-' for stdout")

    def solver(p):
        p.add_argument("--problem", required=True, help="built-in problem name (see 'list')")
        p.add_argument("--subnodes", type=int, default=DEFAULT_SUBNODES)
        p.add_argument("--method", choices=METHODS, default="newton")
        p.add_argument("--rtol", type=float, default=None)
        p.add_argument("--atol", type=float, default=None)
        p.add_argument("--max-iter", type=int, default=100)
        p.add_argument("--dps", type=int, default=None,
                       help="decimal digits of an extended-precision run (default: binary64)")

    p = sub.add_parser("solve", help="integrate one problem and tabulate u_L, u_IL and errors")
    solver(p)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    common(p)

    p = sub.add_parser("converge", help="convergence study with fitted orders")
    solver(p)
    p.add_argument("--degrees", type=_int_list, required=True)
    p.add_argument("--grids", type=_int_list, default=list(STANDARD_GRIDS))
    common(p)

    p = sub.add_parser("tables", help="dump the basis tables of one degree as JSON")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--output", "-o", default="-")

    p = sub.add_parser("list", help="list the built-in problems")
    common(p)
    return parser


def _validate(args):
    for name in ("degree",):
        if getattr(args, name, 0) is not None and getattr(args, name, 0) < 0:
            raise UsageError("degree must be >= 0")
    if any(d < 0 for d in getattr(args, "degrees", None) or ()):
        raise UsageError("degrees must be >= 0")
    if getattr(args, "steps", 1) < 1 or any(m < 1 for m in getattr(args, "grids", None) or ()):
        raise UsageError("steps must be >= 1")
    if getattr(args, "subnodes", 1) < 1:
        raise UsageError("subnodes must be >= 1")
    if getattr(args, "dps", None) is not None and args.dps < 16:
        raise UsageError("dps must be >= 16")


def _field(args):
    return FLOAT64 if args.dps is None else MPField(args.dps)


def _solver_config(args):
    try:
        return SolverConfig(method=args.method, rtol=args.rtol, atol=args.atol,
                            max_iter=args.max_iter)
    except ValueError as exc:
        raise UsageError(str(exc))


def _problem(args, field):
    try:
        return builtin_problem(args.problem, field)
    except UnknownProblemError as exc:
        raise UsageError(str(exc))


# -- solve --------------------------------------------------------------------

def solve_table(problem, degree, steps, subnodes=DEFAULT_SUBNODES, cfg=None, field=FLOAT64):
    """Header and rows of the solve table.

    One row at t0 followed by S rows per cell at tau = s/S, s = 1..S, so each
    node t_{n+1} appears as the last row of cell n.
    """
    is_dae = isinstance(problem, DaeProblem)
    cfg = cfg or SolverConfig(method="newton")
    if is_dae:
        traj = dae_integrate(problem, degree, steps, cfg, field)
        du, dv = problem.differential_dimension, problem.algebraic_dimension
    else:
        traj = integrate(problem, degree, steps, cfg, field)
        du, dv = problem.dimension, 0
    has_exact = problem.exact is not None
    header = (["t"] + [f"u_L_{i}" for i in range(du)] + [f"v_L_{j}" for j in range(dv)]
              + [f"u_IL_{i}" for i in range(du)])
    if has_exact:
        header += [f"exact_u_{i}" for i in range(du)] + [f"exact_v_{j}" for j in range(dv)]
        header += ["eps_L", "eps_IL"]

    taus = subnode_taus(subnodes, field)
    rows = []
    with field.context():
        nodes = traj.grid.nodes
        blocks = [(0, field.array([0]))] + [(n, taus) for n in range(traj.grid.steps)]
        for n, tt in blocks:
            t = nodes[n] + tt * (nodes[n + 1] - nodes[n])
            uL = cell_local(traj, n, tt)
            uIL = cell_improved(traj, n, tt)
            vL = traj.tables.basis_at(tt) @ traj.cells[n].r if is_dae else np.zeros((len(tt), 0))
            for s in range(len(tt)):
                row = [t[s]] + list(uL[s]) + list(vL[s]) + list(uIL[s])
                if has_exact:
                    ex = problem.exact(t[s])
                    eu, ev = ex if is_dae else (ex, [])
                    eu, ev = list(np.atleast_1d(eu)), list(np.atleast_1d(ev))
                    # eps_L covers every variable u_L carries, eps_IL the differential ones
                    eL = max(abs(a - b) for a, b in zip(list(uL[s]) + list(vL[s]), eu + ev))
                    eIL = max(abs(a - b) for a, b in zip(uIL[s], eu))
                    row += eu + ev + [eL, eIL]
                rows.append([float(to_float(x)) for x in row])
    return header, rows


def _cmd_solve(args, out):
    field = _field(args)
    problem = _problem(args, field)
    header, rows = solve_table(problem, args.degree, args.steps, args.subnodes,
                               _solver_config(args), field)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(x) for x in row])
    else:
        doc = {"problem": problem.name, "degree": args.degree, "steps": args.steps,
               "subnodes": args.subnodes, "columns": header, "rows": rows}
        out.write(json.dumps(doc) + "\n")


# -- converge -----------------------------------------------------------------

def converge_document(problem_name, reports, subnodes):
    return {"problem": problem_name, "subnodes": subnodes,
            "reports": [r.as_dict() for r in reports]}


def write_converge_csv(doc, out):
    """Row block (one line per degree and grid), a blank line, then the summary block."""
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["degree", "M"] + list(NORMS))
    for rep in doc["reports"]:
        for k, m in enumerate(rep["grids"]):
            w.writerow([rep["degree"], m] + [fmt(rep["errors"][nm][k]) for nm in NORMS])
    out.write("\n")
    w.writerow(["degree"] + [f"p_{nm[2:]}" for nm in NORMS] + [f"theory_{k}" for k in ORDER_KEYS])
    for rep in doc["reports"]:
        w.writerow([rep["degree"]] + [fmt(rep["orders"][nm]) for nm in NORMS]
                   + [rep["theory"][k] for k in ORDER_KEYS])


def read_converge_csv(text, problem_name=None, subnodes=DEFAULT_SUBNODES):
    """Inverse of ``write_converge_csv``: rebuild the JSON document."""
    rows_text, _, summary_text = text.partition("\n\n")
    rows = list(csv.DictReader(io.StringIO(rows_text)))
    summary = list(csv.DictReader(io.StringIO(summary_text)))
    reports = []
    for srow in summary:
        degree = int(srow["degree"])
        mine = [r for r in rows if int(r["degree"]) == degree]
        reports.append({
            "degree": degree,
            "grids": [int(r["M"]) for r in mine],
            "errors": {nm: [float(r[nm]) for r in mine] for nm in NORMS},
            "orders": {nm: (float(srow[f"p_{nm[2:]}"]) if srow[f"p_{nm[2:]}"] else None)
                       for nm in NORMS},
            "theory": {k: int(srow[f"theory_{k}"]) for k in ORDER_KEYS},
        })
    return {"problem": problem_name, "subnodes": subnodes, "reports": reports}


def _cmd_converge(args, out):
    field = _field(args)
    problem = _problem(args, field)
    if problem.exact is None:
        raise UsageError(f"problem {problem.name!r} has no exact solution")
    reports = convergence_study(problem, args.degrees, args.grids, _solver_config(args),
                                args.subnodes, field)
    doc = converge_document(problem.name, reports, args.subnodes)
    if args.format == "csv":
        write_converge_csv(doc, out)
    else:
        out.write(json.dumps(doc) + "\n")


# -- tables / list ------------------------------------------------------------

def _cmd_tables(args, out):
    out.write(json.dumps(tables_as_dict(build_tables(args.degree))) + "\n")


def problem_listing():
    out = []
    for name in PROBLEMS:
        p = builtin_problem(name)
        kind = "dae" if isinstance(p, DaeProblem) else "ode"
        out.append({"name": name, "kind": kind, "t0": float(p.t0), "tf": float(p.tf)})
    return out


def _cmd_list(args, out):
    items = problem_listing()
    if args.format == "json":
        out.write(json.dumps(items) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["name", "kind", "t0", "tf"])
    for it in items:
        w.writerow([it["name"], it["kind"], fmt(it["t0"]), fmt(it["tf"])])


COMMANDS = {"solve": _cmd_solve, "converge": _cmd_converge, "tables": _cmd_tables,
            "list": _cmd_list}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    buf = io.StringIO()
    try:
        _validate(args)
        COMMANDS[args.command](args, buf)
    except (UsageError, DegreeTooHighError) as exc:
        parser.print_usage(sys.stderr)
        print(f"aderdg {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AderDGError, ArithmeticError, ValueError) as exc:
        print(f"aderdg {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.output == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
