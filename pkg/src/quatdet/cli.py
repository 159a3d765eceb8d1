"""Command-line front end.

    quatdet <subcommand> [input.json] [--method M] [--tol T] [--format json|text] [--split k]

Exit codes: 0 success, 1 check failed (strategy spread, demo claim),
2 unreadable input, 3 shape or precondition error, 4 singular matrix where
an inverse was requested.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import blockinv, qdet, spectral
from .errors import (
    BadSplitIndex,
    DimensionMismatch,
    NoConvergence,
    NotHermitian,
    PairingFailure,
    SingularMatrix,
    ZeroEntry,
)
from .qmatrix import QMatrix, MatrixFormatError, is_unitary, load, to_json_obj
from .quaternion import Quaternion, format_quaternion, format_real, similar

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_SINGULAR = 4

SUBCOMMANDS = {
    "sdet": "Study determinant",
    "qdet": "q-determinant, sdet squared",
    "ddet": "Dieudonne determinant, square root of sdet",
    "hdet": "signed real determinant of a hermitian matrix",
    "report": "all five sdet strategies and their spread",
    "inv": "matrix inverse",
    "eig": "right eigenvalues (complex representatives)",
    "svd": "singular value decomposition",
    "schur": "unitary triangularization M = U^+ T U",
    "demo": "check the counterexamples on built-in matrices",
    "verify": "run 'report' on every *.json file in a directory",
}
INV_METHODS = ("schur", "gauss", "closed2x2")


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


# --- output -----------------------------------------------------------------

def _jsonable(value):
    if isinstance(value, QMatrix):
        return to_json_obj(value)
    if isinstance(value, Quaternion):
        return value.to_array().tolist()
    if isinstance(value, complex):
        return [value.real, value.imag]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    return value


def _format_complex(z: complex) -> str:
    im = format_real(z.imag)
    return f"{format_real(z.real)}{'' if im.startswith('-') else '+'}{im}i"


def _text(value, indent: str = "") -> list[str]:
    if isinstance(value, QMatrix):
        return [indent + "  ".join(format_quaternion(value[i, j]) for j in range(value.cols)) for i in range(value.rows)]
    if isinstance(value, dict):
        lines = []
        for key, v in value.items():
            if isinstance(v, (QMatrix, dict)):
                lines.append(f"{indent}{key}:")
                lines.extend(_text(v, indent + "  "))
            else:
                lines.append(f"{indent}{key}: {_text(v)[0]}")
        return lines
    if isinstance(value, (list, tuple)):
        return [" ".join(_text(v)[0] for v in value)]
    if isinstance(value, bool):
        return [indent + ("true" if value else "false")]
    if isinstance(value, complex):
        return [indent + _format_complex(value)]
    if isinstance(value, Quaternion):
        return [indent + format_quaternion(value)]
    if isinstance(value, (float, int, np.floating, np.integer)):
        return [indent + format_real(float(value))]
    return [indent + str(value)]


def emit(result, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(_jsonable(result), indent=2)
    return "\n".join(_text(result))


def parse_matrix(path) -> QMatrix:
    try:
        return load(path)
    except MatrixFormatError as exc:
        raise CliError(f"parse error: {path}:{exc}", EXIT_PARSE) from exc
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_PARSE) from exc


# --- subcommands ------------------------------------------------------------

def _strategy(args) -> str:
    method = args.method or "gauss"
    if method not in qdet.STRATEGIES:
        raise CliError(f"unknown sdet method {method!r}; choose from {', '.join(qdet.STRATEGIES)}", EXIT_PRECONDITION)
    return method


def _report_dict(rep: qdet.DetReport, tol: float) -> dict:
    out = {f"sdet_{name}": v for name, v in rep.values.items()}
    out["max_rel_spread"] = rep.max_rel_spread
    out["singular"] = rep.singular
    out["agree"] = rep.max_rel_spread <= tol
    return out


def cmd_sdet(args, m):
    return qdet.sdet(m, _strategy(args)), EXIT_OK


def cmd_qdet(args, m):
    return qdet.qdet(m, _strategy(args)), EXIT_OK


def cmd_ddet(args, m):
    return qdet.ddet(m, _strategy(args)), EXIT_OK


def cmd_hdet(args, m):
    return qdet.hermitian_det(m), EXIT_OK


def cmd_report(args, m):
    tol = qdet.AGREEMENT_TOL if args.tol is None else args.tol
    rep = qdet.det_report(m, tol=tol, check=False)
    return _report_dict(rep, tol), EXIT_OK if rep.max_rel_spread <= tol else EXIT_CHECK


def cmd_inv(args, m):
    method = args.method or "schur"
    if method not in INV_METHODS:
        raise CliError(f"unknown inverse method {method!r}; choose from {', '.join(INV_METHODS)}", EXIT_PRECONDITION)
    if method == "gauss":
        return blockinv.gauss_inverse(m), EXIT_OK
    if method == "closed2x2":
        return blockinv.inverse_2x2(m), EXIT_OK
    if args.split is not None:
        return blockinv.block_inverse(m, args.split), EXIT_OK
    return blockinv.invert(m), EXIT_OK


def cmd_eig(args, m):
    return {"eigenvalues": list(spectral.right_eigenvalues(m).values)}, EXIT_OK


def cmd_svd(args, m):
    form = spectral.svd(m)
    return {"sigma": list(form.sigma), "U": form.U, "V": form.V}, EXIT_OK


def cmd_schur(args, m):
    form = spectral.schur(m)
    return {"U": form.U, "T": form.T}, EXIT_OK


def _adjugate_form_unsolvable(m: QMatrix) -> bool:
    """Whether ``M^-1 = P Adj[M] Q`` has no diagonal solution P, Q.

    Eliminating P and Q leaves ``q1^-1 X q1 = Y`` with
    ``X = c^-1 a b^-1 d`` and ``Y = c~^-1 d~ b~^-1 a~``, solvable exactly
    when X and Y are similar.
    """
    a, b, c, d = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    inv = blockinv.inverse_2x2(m)
    at, bt, ct, dt = inv[0, 0], inv[0, 1], inv[1, 0], inv[1, 1]
    x = c.inverse() * a * b.inverse() * d
    y = ct.inverse() * dt * bt.inverse() * at
    return not similar(x, y, 1e-9)


def run_demo() -> tuple[dict, bool]:
    ce = qdet.extension_counterexample()
    a, b = qdet.naive_det_witnesses()
    exprs_a = qdet.wrong2_expressions(a)
    exprs_b = qdet.wrong2_expressions(b)
    vanish_a = sum(q.norm() <= 1e-12 for q in exprs_a)
    vanish_b = sum(q.norm() <= 1e-12 for q in exprs_b)
    reps = [qdet.det_report(w, check=False) for w in (a, b)]
    checks = {
        "SM = NS": ce.intertwined,
        "Re det M ≠ Re det N": ce.real_parts_differ,
        "A: exactly 2 of 4 expressions vanish": vanish_a == 2,
        "B: 4 of 4 vanish": vanish_b == 4,
        "A, B unitary": is_unitary(a) and is_unitary(b),
        "Sdet(A) = Sdet(B) = 1 by all five strategies": all(
            abs(v - 1.0) <= 1e-12 for r in reps for v in r.values.values()
        ),
        "A: M^-1 = P Adj[M] Q unsolvable": _adjugate_form_unsolvable(a),
    }
    names = ("ad-cb", "ad-bc", "da-cb", "da-bc")
    table = {
        "det M": ce.det_m,
        "det N": ce.det_n,
        "A expressions": {n: q for n, q in zip(names, exprs_a)},
        "B expressions": {n: q for n, q in zip(names, exprs_b)},
    }
    ok = all(checks.values())
    return {
        "summary": "; ".join(f"{k}: {'OK' if v else 'FAIL'}" for k, v in checks.items()),
        "details": table,
        "all_ok": ok,
    }, ok


def cmd_demo(args):
    result, ok = run_demo()
    return result, EXIT_OK if ok else EXIT_CHECK


def cmd_verify(args):
    root = Path(args.input)
    if not root.is_dir():
        raise CliError(f"{root} is not a directory", EXIT_PARSE)
    tol = qdet.AGREEMENT_TOL if args.tol is None else args.tol
    results = {}
    bad_input = failed = False
    for path in sorted(root.glob("*.json")):
        try:
            rep = qdet.det_report(load(path), tol=tol, check=False)
        except MatrixFormatError as exc:
            results[path.name] = {"error": f"parse error: {exc}"}
            bad_input = True
            continue
        except DimensionMismatch as exc:
            results[path.name] = {"error": str(exc)}
            failed = True
            continue
        results[path.name] = _report_dict(rep, tol)
        failed |= rep.max_rel_spread > tol
    code = EXIT_PARSE if bad_input else EXIT_CHECK if failed else EXIT_OK
    return {"files": results, "count": len(results)}, code


MATRIX_COMMANDS = {
    "sdet": cmd_sdet,
    "qdet": cmd_qdet,
    "ddet": cmd_ddet,
    "hdet": cmd_hdet,
    "report": cmd_report,
    "inv": cmd_inv,
    "eig": cmd_eig,
    "svd": cmd_svd,
    "schur": cmd_schur,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatdet", description="Quaternionic determinants and decompositions.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--method", help="sdet strategy (gauss, eigen, svd, complexify, schur) or inv method (schur, gauss, closed2x2)")
    common.add_argument("--tol", type=float, default=None, help="agreement threshold for report/verify (default 1e-6)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--split", type=int, default=None, help="block split index for 'inv --method schur'")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")
    for name, help_text in SUBCOMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "verify":
            p.add_argument("input", help="directory of matrix files")
        elif name != "demo":
            p.add_argument("input", help="matrix file (JSON)")
    return parser


def run(args) -> tuple[str, int]:
    """Execute parsed arguments; returns (output text, exit code)."""
    try:
        if args.command == "demo":
            result, code = cmd_demo(args)
        elif args.command == "verify":
            result, code = cmd_verify(args)
        else:
            m = parse_matrix(args.input)
            result, code = MATRIX_COMMANDS[args.command](args, m)
    except (DimensionMismatch, NotHermitian, BadSplitIndex, ZeroEntry) as exc:
        raise CliError(str(exc), EXIT_PRECONDITION) from exc
    except SingularMatrix as exc:
        raise CliError(f"singular matrix: {exc}", EXIT_SINGULAR) from exc
    except (NoConvergence, PairingFailure) as exc:
        raise CliError(f"numerical failure: {exc}", EXIT_CHECK) from exc
    return emit(result, args.format), code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out, code = run(args)
    except CliError as exc:
        print(f"quatdet: {exc}", file=sys.stderr)
        return exc.code
    print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
