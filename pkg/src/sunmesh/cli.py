"""Command-line front end.

One static entry point with subcommands that wrap the library modules:
``decompose``, ``reconstruct``, ``compare``, ``sample-haar``,
``validate-haar``, ``lift``, ``render``.  Matrix and plan documents use the
JSON interchange formats of :mod:`sunmesh.linalg` and :mod:`sunmesh.mesh`,
so command outputs feed directly into other commands.

Every JSON document carries a provenance header echoing the command name
and the numerical settings (tol, seed) that produced it.  Exit codes:

* 0 - success
* 1 - I/O or parse failure
* 2 - tolerance failure
* 3 - validation failure (includes a failed statistical validation)
* 4 - resource limit (dimension caps, permanent size, overflow)
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import decompose as _dec
from .errors import FormatError, ResourceError, ToleranceError, ValidationError
from .haar import HaarSpec, sample_coset, sample_haar, validate_haar
from .linalg import matrix_from_json, matrix_to_json
from .mesh import depth, parameter_count, plan_from_json, plan_to_json, reconstruct, render
from .symrep import FockBasis, basis_dimension, lift_plan, lift_via_permanents

_EXIT_OK = 0
_EXIT_FORMAT = 1
_EXIT_TOLERANCE = 2
_EXIT_VALIDATION = 3
_EXIT_RESOURCE = 4

_EPILOG = """\
exit codes:
  0  success
  1  I/O or parse failure
  2  tolerance failure
  3  validation failure
  4  resource limit exceeded

defaults: --tol 1e-10, --seed 0.  TRIMESH_DIM_CAP overrides the lifted
dimension cap (default 5000).
"""


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON: {exc}") from exc


def _write_text(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _emit_json(doc: dict, output: str | None) -> None:
    _write_text(json.dumps(doc, indent=2) + "\n", output)


def _provenance(args) -> dict:
    return {"command": args.command, "tol": args.tol, "seed": args.seed}


def _note(text: str) -> None:
    print(text, file=sys.stderr)


def _residual(plan, m) -> float:
    return float(np.linalg.norm(reconstruct(plan) - m))


def cmd_decompose(args) -> int:
    if args.canonical and args.scheme != "triangle":
        raise ValidationError("--canonical applies to the triangle scheme only")
    m = matrix_from_json(_read_json(args.input))
    if args.scheme == "triangle":
        plan = _dec.triangle_decompose(m, args.tol)
        if args.canonical:
            plan = _dec.canonicalize(plan, m, args.tol)
    elif args.scheme == "reck":
        plan = _dec.reck_decompose(m, args.tol)
    else:
        plan = _dec.clements_decompose(m, args.tol)
    residual = _residual(plan, m)
    doc = {"provenance": _provenance(args), **plan_to_json(plan)}
    _emit_json(doc, args.output)
    _note(
        f"scheme={args.scheme} boxes={len(plan.couplers)} depth={depth(plan)} "
        f"parameters={parameter_count(plan)} residual={residual:.3e}"
    )
    return _EXIT_OK if residual < args.tol else _EXIT_TOLERANCE


def cmd_reconstruct(args) -> int:
    plan = plan_from_json(_read_json(args.input))
    m = reconstruct(plan)
    doc = {"provenance": _provenance(args), **matrix_to_json(m)}
    _emit_json(doc, args.output)
    _note(f"n={plan.n} boxes={len(plan.couplers)} depth={depth(plan)}")
    return _EXIT_OK


def _compare_rows(m: np.ndarray, tol: float, loss_db: float) -> list[dict]:
    n = m.shape[0]
    plans = {
        "triangle": _dec.canonicalize(_dec.triangle_decompose(m, tol), m, tol),
        "reck": _dec.reck_decompose(m, tol),
        "clements": _dec.clements_decompose(m, tol),
    }
    rows = []
    for scheme, plan in plans.items():
        if scheme in ("triangle", "reck"):
            ledger = _dec.generator_ledger(scheme, n)
            offdiag = ledger["offdiag_pairs"]
            savings = ledger["savings_vs_reck"]
        else:
            offdiag = len({(c.i, c.j) for c in plan.couplers})
            savings = n * (n - 1) // 2 - offdiag
        report = _dec.loss_analysis(plan, loss_db)
        rows.append(
            {
                "scheme": scheme,
                "boxes": len(plan.couplers),
                "depth": depth(plan),
                "parameters": parameter_count(plan),
                "offdiag_generator_types": offdiag,
                "generator_savings": savings,
                "max_mode_couplers": max(r["worst_couplers"] for r in report),
                "worst_loss_db": max(r["worst_loss_db"] for r in report),
            }
        )
    return rows


def cmd_compare(args) -> int:
    if args.input is not None:
        m = matrix_from_json(_read_json(args.input))
    elif args.n is not None:
        m = np.eye(args.n, dtype=np.complex128)
    else:
        raise ValidationError("compare needs --n or an input matrix")
    rows = _compare_rows(m, args.tol, args.loss_db)
    if args.format == "csv":
        header = list(rows[0])
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_csv_cell(row[key]) for key in header))
        _write_text("\n".join(lines) + "\n", args.output)
    else:
        doc = {
            "provenance": _provenance(args),
            "n": m.shape[0],
            "loss_db": args.loss_db,
            "schemes": rows,
        }
        _emit_json(doc, args.output)
    return _EXIT_OK


def _csv_cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def cmd_sample_haar(args) -> int:
    if args.n is None:
        raise ValidationError("sample-haar needs --n")
    mode = "coset" if args.coset else "group"
    spec = HaarSpec(args.n, seed=args.seed, mode=mode)
    plan = sample_coset(spec) if args.coset else sample_haar(spec)
    if args.emit == "matrix":
        doc = {"provenance": _provenance(args), **matrix_to_json(reconstruct(plan))}
    else:
        doc = {"provenance": _provenance(args), **plan_to_json(plan)}
    _emit_json(doc, args.output)
    return _EXIT_OK


def cmd_validate_haar(args) -> int:
    if args.n is None:
        raise ValidationError("validate-haar needs --n")
    report = validate_haar(
        args.n,
        args.samples,
        seed=args.seed,
        source=args.source,
        beta_mode=args.beta_mode,
        workers=args.threads,
    )
    _emit_json({"provenance": _provenance(args), **report}, args.output)
    return _EXIT_OK if report["passed"] else _EXIT_VALIDATION


def cmd_lift(args) -> int:
    if args.input is None:
        if args.n is None:
            raise ValidationError("lift needs an input document or --n")
        print(basis_dimension(args.n, args.p))
        return _EXIT_OK
    obj = _read_json(args.input)
    if isinstance(obj, dict) and "couplers" in obj:
        plan = plan_from_json(obj)
        basis = FockBasis(plan.n, args.p)
        lifted = lift_plan(basis, plan)
        n, route = plan.n, "generators"
    else:
        m = matrix_from_json(obj)
        lifted = lift_via_permanents(m, args.p, tol=args.tol, workers=args.threads)
        n, route = m.shape[0], "permanents"
    provenance = {
        **_provenance(args),
        "n": n,
        "p": args.p,
        "dimension": lifted.shape[0],
        "route": route,
    }
    _emit_json({"provenance": provenance, **matrix_to_json(lifted)}, args.output)
    return _EXIT_OK


def cmd_render(args) -> int:
    plan = plan_from_json(_read_json(args.input))
    text = render(plan, format=args.format)
    if not text.endswith("\n"):
        text += "\n"
    _write_text(text, args.output)
    return _EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sunmesh",
        description="Triangular mesh factorizations of unitary matrices.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--output", help="output path (default stdout)")

    p = sub.add_parser("decompose", parents=[common], help="factor a unitary into a coupler plan")
    p.add_argument("input", help="matrix JSON path, or - for stdin")
    p.add_argument("--scheme", choices=("triangle", "reck", "clements"), default="triangle")
    p.add_argument("--canonical", action="store_true", help="canonicalize the triangle plan")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", parents=[common], help="multiply a plan back into a matrix")
    p.add_argument("input", help="plan JSON path, or - for stdin")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("compare", parents=[common], help="tabulate scheme metrics side by side")
    p.add_argument("input", nargs="?", help="matrix JSON path (optional)")
    p.add_argument("--n", type=int, help="mode count for an identity-input comparison")
    p.add_argument("--loss-db", type=float, default=0.0, help="per-coupler loss in dB")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sample-haar", parents=[common], help="draw one Haar-random mesh plan")
    p.add_argument("--n", type=int, help="mode count")
    p.add_argument("--coset", action="store_true", help="sample the first-column coset instead")
    p.add_argument("--emit", choices=("plan", "matrix"), default="plan")
    p.set_defaults(func=cmd_sample_haar)

    p = sub.add_parser("validate-haar", parents=[common], help="statistically test the sampler")
    p.add_argument("--n", type=int, help="mode count")
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--source", choices=("mesh", "qr"), default="mesh")
    p.add_argument("--beta-mode", choices=("recursive", "uniform"), default="recursive")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_validate_haar)

    p = sub.add_parser("lift", parents=[common], help="lift a plan or matrix to p photons")
    p.add_argument("input", nargs="?", help="plan or matrix JSON path; omit to print the dimension")
    p.add_argument("--n", type=int, help="mode count for the dimension-only form")
    p.add_argument("--p", type=int, default=1, help="photon number (default 1)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("render", parents=[common], help="draw a plan as ASCII or SVG")
    p.add_argument("input", help="plan JSON path, or - for stdin")
    p.add_argument("--format", choices=("ascii", "svg"), default="ascii")
    p.set_defaults(func=cmd_render)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        _note(f"error: {exc}")
        return _EXIT_FORMAT
    except ToleranceError as exc:
        _note(f"error: {exc}")
        return _EXIT_TOLERANCE
    except ValidationError as exc:
        _note(f"error: {exc}")
        return _EXIT_VALIDATION
    except (ResourceError, OverflowError, MemoryError) as exc:
        _note(f"error: {exc}")
        return _EXIT_RESOURCE
    except OSError as exc:
        _note(f"error: {exc}")
        return _EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main(argv=sys.argv[1:]))
