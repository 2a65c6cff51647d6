"""Command line for computing, rounding, verifying, and reproducing
certified lower bounds on the linear programming bound for sphere
packing via the finite program on Z_m^d.

Subcommands follow the pipeline stages: `reps` lists orbit
representatives, `solve` / `primal-solve` run the dual or primal finite
program, `round` turns a floating dual solution into an exact rational
certificate, `verify` checks a certificate in exact arithmetic,
`closed-form` emits the hand-derived certificates at m = 4, `compare`
places a bound against the recorded density tables, and `preset` runs a
named end-to-end reproduction and checks its expected verdict.

Exit codes: 0 when the requested check or reproduction succeeds, 1 when
a mathematically meaningful expectation fails (infeasible certificate,
solver breakdown, verdict mismatch), 2 for usage or parameter errors.

Environment: DLPBOUND_THREADS sets worker-process count for the float
transform and sign checks; DLPBOUND_MAX_BITS caps the precision ladder
of exact sign determination.
"""

from __future__ import annotations

import argparse
import csv
import sys
from fractions import Fraction

from .certify import (
    compare_known,
    rationalize,
    read_certificate,
    verify,
    write_certificate,
)
from .closedform import certificate_from_lambda, explicit_lambda, general_odd_lambda
from .exactnum import parse_bound_expr
from .lp import LPSolution, build_dual_lp, build_primal_lp, simplex_solve
from .orbits import Params, enumerate_reps
from .presets import MAX_ITERS_FACTOR, PRESETS, run_preset
from .symdft import SymDFTMatrix

__all__ = ["main", "write_solution", "read_solution"]


# -- solution files ---------------------------------------------------------


def write_solution(solution: LPSolution, path: str) -> None:
    """Line-oriented DLPSOL 1 file for a solved program; float values are
    written with repr so a later `round` sees exactly what the solver saw."""
    meta = solution.meta
    params = meta.get("params")
    if params is None or meta.get("kind") not in ("dual", "primal"):
        raise ValueError("solution carries no program metadata; cannot be written")
    lines = [
        "DLPSOL 1",
        f"kind {meta['kind']}",
        f"domain {solution.domain}",
        f"d {params.d}",
        f"m {params.m}",
        f"r2 {params.r2}",
        f"eps {meta.get('eps', 0)!r}",
        f"status {solution.status}",
        f"iterations {solution.iterations}",
        f"objective {_value_text(solution.objective)}",
    ]
    for rep in sorted(solution.values):
        coords = " ".join(str(c) for c in rep)
        lines.append(f"var {coords} {_value_text(solution.values[rep])}")
    lines.append("end")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def _value_text(v) -> str:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return repr(float(v))


def _value_parse(text: str):
    if "/" in text:
        return Fraction(text)
    return float(text)


def read_solution(path: str) -> LPSolution:
    """Parse a DLPSOL 1 file back into an LPSolution usable by `round`."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    if not lines or lines[0] != "DLPSOL 1":
        raise ValueError("not a DLPSOL 1 file")
    if "end" not in lines:
        raise ValueError("truncated solution file: missing end marker")
    head: dict[str, str] = {}
    values: dict[tuple[int, ...], object] = {}
    for ln in lines[1:]:
        if ln == "end":
            break
        key, _, rest = ln.partition(" ")
        if key == "var":
            parts = rest.split()
            rep = tuple(int(c) for c in parts[:-1])
            values[rep] = _value_parse(parts[-1])
        else:
            head[key] = rest
    for needed in ("kind", "domain", "d", "m", "r2", "status"):
        if needed not in head:
            raise ValueError(f"solution file is missing the {needed} field")
    params = Params(d=int(head["d"]), m=int(head["m"]), r2=int(head["r2"]))
    eps_text = head.get("eps", "0")
    eps = Fraction(eps_text) if "/" in eps_text else float(eps_text)
    objective = _value_parse(head["objective"]) if "objective" in head else None
    return LPSolution(
        status=head["status"],
        objective=objective,
        values=values,
        iterations=int(head.get("iterations", "0")),
        max_violation=None,
        domain=head["domain"],
        meta={"kind": head["kind"], "params": params, "eps": eps},
    )


# -- argument plumbing ------------------------------------------------------


def _int_r2(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"r2 must be an integer (got {text!r}); rescale so the squared "
            "radius is integral, the reduction assumes it") from None


def _params_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--d", type=int, required=True, help="dimension")
    sub.add_argument("--m", type=int, required=True, help="modulus")
    sub.add_argument("--r2", type=_int_r2, required=True,
                     help="squared packing radius (integer)")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dlpbound",
        description="certified dual lower bounds for the sphere-packing "
                    "linear program via the finite program on Z_m^d",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reps", help="list orbit representatives")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--out", default=None, help="write to file instead of stdout")

    p = sub.add_parser("solve", help="solve the dual program")
    _params_args(p)
    p.add_argument("--eps", type=float, default=1e-10,
                   help="buffer on the transform constraints (default 1e-10)")
    p.add_argument("--mode", choices=("float", "exact"), default="float")
    p.add_argument("--max-iters", type=int, default=0,
                   help=f"pivot cap; 0 means {MAX_ITERS_FACTOR}*(rows+cols)")
    p.add_argument("--out", default=None, help="write a DLPSOL solution file")

    p = sub.add_parser("primal-solve", help="solve the primal program")
    _params_args(p)
    p.add_argument("--mode", choices=("float", "exact"), default="float")
    p.add_argument("--max-iters", type=int, default=0,
                   help=f"pivot cap; 0 means {MAX_ITERS_FACTOR}*(rows+cols)")
    p.add_argument("--out", default=None, help="write a DLPSOL solution file")

    p = sub.add_parser("round", help="round a dual solution to a certificate")
    p.add_argument("--in", dest="infile", required=True, help="DLPSOL file")
    p.add_argument("--scheme", default=None,
                   help="lattice:q or denom:Q (default: auto-detect)")
    p.add_argument("--out", required=True, help="certificate file to write")

    p = sub.add_parser("verify", help="verify a certificate exactly")
    p.add_argument("--cert", required=True)
    p.add_argument("--digits", type=int, default=8)
    p.add_argument("--max-bits", type=int, default=None,
                   help="precision cap for sign determination")

    p = sub.add_parser("closed-form", help="emit a closed-form certificate (m=4)")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--table", choices=("auto", "general", "explicit"),
                   default="auto")
    p.add_argument("--out", default=None, help="certificate file to write")
    p.add_argument("--digits", type=int, default=8)

    p = sub.add_parser("compare", help="compare a bound against density tables")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--bound", required=True,
                   help="exact expression, e.g. '1/20' or '1/8*sqrt(2)'")

    p = sub.add_parser("preset", help="run a named reproduction")
    p.add_argument("name", nargs="?", default=None)
    p.add_argument("--list", action="store_true", help="list preset names")
    p.add_argument("--allow-long", action="store_true",
                   help="permit long-running presets")
    p.add_argument("--outdir", default="runs",
                   help="directory for certificate/report/csv/figure")
    p.add_argument("--digits", type=int, default=8)

    return parser


# -- subcommand bodies ------------------------------------------------------


def _cmd_reps(args) -> int:
    index = enumerate_reps(args.d, args.m)
    if args.format == "csv":
        import io

        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["rep", "norm_sq", "orbit_size"])
        for j, rep in enumerate(index.reps):
            writer.writerow([" ".join(str(v) for v in rep),
                             index.norm_sqs[j], index.orbit_sizes[j]])
        _emit(buf.getvalue(), args.out)
    else:
        lines = []
        for j, rep in enumerate(index.reps):
            coords = " ".join(str(v) for v in rep)
            lines.append(f"{coords}  normSq={index.norm_sqs[j]}  "
                         f"orbit={index.orbit_sizes[j]}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0


def _solve_common(args, builder, kind: str) -> int:
    params = Params(d=args.d, m=args.m, r2=args.r2)
    index = enumerate_reps(params.d, params.m)
    backend = "exact" if args.mode == "exact" else "float64"
    matrix = SymDFTMatrix(index, backend=backend)
    lp = builder(params, index, matrix)
    max_iters = args.max_iters or MAX_ITERS_FACTOR * (len(lp.constraints) + lp.n_vars)
    solution = simplex_solve(lp, max_iters=max_iters)
    print(f"{kind} program on {len(index)} representatives: {solution.status} "
          f"after {solution.iterations} iterations")
    if solution.status != "optimal":
        return 1
    obj = solution.objective
    obj_text = _value_text(obj)
    print(f"objective: {obj_text}"
          + (f" ~ {float(obj):.12f}" if isinstance(obj, Fraction) else ""))
    if solution.max_violation is not None:
        print(f"max residual: {float(solution.max_violation):.2e}")
    if args.out:
        write_solution(solution, args.out)
        print(f"solution written to {args.out}")
    return 0


def _cmd_solve(args) -> int:
    builder = lambda p, i, m: build_dual_lp(p, i, m, eps=args.eps)
    return _solve_common(args, builder, "dual")


def _cmd_primal_solve(args) -> int:
    return _solve_common(args, build_primal_lp, "primal")


def _cmd_round(args) -> int:
    solution = read_solution(args.infile)
    cert = rationalize(solution, scheme=args.scheme)
    write_certificate(cert, args.out)
    print(f"certificate with {len(cert.mu)} nonzero entries written to {args.out}")
    return 0


def _cmd_verify(args) -> int:
    cert = read_certificate(args.cert)
    report = verify(cert, digits=args.digits, max_bits=args.max_bits)
    print(report.render())
    return 0 if report.ok else 1


def _cmd_closed_form(args) -> int:
    table_kind = args.table
    if table_kind == "auto":
        table_kind = "explicit" if args.d in (9, 10, 11, 12) else "general"
    table = (explicit_lambda(args.d) if table_kind == "explicit"
             else general_odd_lambda(args.d))
    print(f"{table_kind} table for d={args.d}:")
    for pattern, value in sorted(table.entries.items()):
        a, b, c = pattern
        print(f"  lambda(0^{a},1^{b},2^{c}) = {value}")
    cert = certificate_from_lambda(table)
    report = verify(cert, digits=args.digits)
    print(report.render())
    if args.out:
        write_certificate(cert, args.out)
        print(f"certificate written to {args.out}")
    return 0 if report.ok else 1


def _cmd_compare(args) -> int:
    bound = parse_bound_expr(args.bound)
    print(compare_known(args.d, bound).render())
    return 0


def _cmd_preset(args) -> int:
    if args.list or args.name is None:
        for name, preset in sorted(PRESETS.items()):
            route = preset.kind + (f"/{preset.table}" if preset.table else "")
            tag = "  [long]" if preset.long else ""
            print(f"{name:14s} d={preset.d:2d} m={preset.m:2d} r2={preset.r2:3d} "
                  f"{route}{tag}")
        return 0
    from .report import render_text, write_outputs

    result = run_preset(args.name, allow_long=args.allow_long,
                        digits=args.digits,
                        log=lambda msg: print(msg, file=sys.stderr))
    paths = write_outputs(result, args.outdir)
    sys.stdout.write(render_text(result))
    print("artifacts:")
    for kind, path in paths.items():
        print(f"  {kind}: {path}")
    return 0 if result.ok else 1


_COMMANDS = {
    "reps": _cmd_reps,
    "solve": _cmd_solve,
    "primal-solve": _cmd_primal_solve,
    "round": _cmd_round,
    "verify": _cmd_verify,
    "closed-form": _cmd_closed_form,
    "compare": _cmd_compare,
    "preset": _cmd_preset,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, KeyError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
