"""Command-line front end.

Every subcommand writes ``key: value`` lines to standard output (or one JSON
object with ``--json``) and, with ``--pretty``, a readable table to standard
error.  Exit status is 0 on success, 1 when the input cannot be parsed or
fails validation, and 2 when a computed check fails.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from .cyclo import CycloElement
from .exactdet import FgSequence, NotExactError, check_det_tor
from .fielddata import DataError, data_dir, load_extension, regulator_of_field
from .groups import FgGroup, GroupMap, parse_group
from .smith import IntegerMatrix, smith_normal_form
from .tate import cyclic_module_from_presentation, herbrand_quotient, tate_h0, tate_h_minus1
from .torus import (TOLERANCE, TorusError, build_report, constant_sheaf_inputs,
                    euler_characteristic, multiplicativity_check, z_sheaf_inputs)

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2

EXAMPLE_EXTENSION = "qzeta12-over-qi.ext"
LOG_2_PLUS_SQRT3 = math.log(2 + math.sqrt(3))


class InputError(ValueError):
    """Malformed or inconsistent input file."""


@dataclass
class CommandResult:
    code: int = EXIT_OK
    payload: dict[str, Any] = field(default_factory=dict)
    table: list[tuple[str, str]] = field(default_factory=list)


# -- formatting ------------------------------------------------------------------

def format_value(v: Any) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return f"{v:.15g}"
    if isinstance(v, IntegerMatrix):
        return json.dumps(v.tolist())
    if isinstance(v, (list, tuple)):
        return json.dumps([_jsonable(x) for x in v])
    if v is None:
        return "none"
    return str(v)


def _jsonable(v: Any) -> Any:
    if isinstance(v, (bool, int)) or v is None:
        return v
    if isinstance(v, float):
        return float(f"{v:.15g}")
    if isinstance(v, IntegerMatrix):
        return v.tolist()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return format_value(v)


def render_text(payload: dict[str, Any]) -> str:
    return "".join(f"{k}: {format_value(v)}\n" for k, v in payload.items())


def render_json(payload: dict[str, Any]) -> str:
    return json.dumps({k: _jsonable(v) for k, v in payload.items()}, indent=2) + "\n"


def render_table(rows: Sequence[tuple[str, str]]) -> str:
    if not rows:
        return ""
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


# -- input parsing ---------------------------------------------------------------

def _read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_matrix(obj: Any, cols: int | None = None) -> IntegerMatrix:
    """``{"rows", "cols", "entries"}`` (row-major) or a list of rows."""
    try:
        if isinstance(obj, dict):
            r, c, entries = int(obj["rows"]), int(obj["cols"]), list(obj["entries"])
            if len(entries) != r * c:
                raise InputError(f"matrix has {len(entries)} entries, expected {r * c}")
            if any(not isinstance(x, int) or isinstance(x, bool) for x in entries):
                raise InputError("matrix entries must be integers")
            return IntegerMatrix(r, c, tuple(entries))
        if isinstance(obj, list):
            if any(not isinstance(row, list) for row in obj):
                raise InputError("matrix rows must be lists")
            if any(not isinstance(x, int) or isinstance(x, bool) for row in obj for x in row):
                raise InputError("matrix entries must be integers")
            return IntegerMatrix.from_rows(obj, cols)
    except KeyError as exc:
        raise InputError(f"matrix is missing key {exc}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad matrix: {exc}") from exc
    raise InputError("a matrix must be an object with rows/cols/entries or a list of rows")


def parse_sequence(obj: Any) -> FgSequence:
    if not isinstance(obj, dict) or "groups" not in obj or "maps" not in obj:
        raise InputError("a sequence file needs 'groups' and 'maps'")
    try:
        groups = [parse_group(g) for g in obj["groups"]]
        maps = [GroupMap(groups[i], groups[i + 1], parse_matrix(m, groups[i].ngens))
                for i, m in enumerate(obj["maps"])]
        return FgSequence(tuple(groups), tuple(maps))
    except (InputError, NotExactError):
        raise
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"bad sequence: {exc}") from exc


def parse_module(obj: Any):
    keys = ("generators", "relations", "sigma", "order")
    if not isinstance(obj, dict) or any(k not in obj for k in keys):
        raise InputError(f"a module file needs keys {', '.join(keys)}")
    try:
        n = int(obj["generators"])
        rels = parse_matrix(obj["relations"], n) if obj["relations"] else IntegerMatrix.zero(0, n)
        sigma = parse_matrix(obj["sigma"], n)
        return cyclic_module_from_presentation(n, rels, sigma.tolist(), int(obj["order"]))
    except InputError:
        raise
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad module: {exc}") from exc


# -- subcommands -----------------------------------------------------------------

def cmd_snf(path: str) -> CommandResult:
    a = parse_matrix(_read_json(path))
    d = smith_normal_form(a)
    payload = {"rows": a.rows, "cols": a.cols, "U": d.u, "S": d.s, "V": d.v,
               "invariant_factors": d.invariant_factors, "rank": d.rank}
    table = [("shape", f"{a.rows}x{a.cols}"), ("invariant factors", str(d.invariant_factors)),
             ("rank", str(d.rank)), ("U", str(d.u.tolist())), ("S", str(d.s.tolist())),
             ("V", str(d.v.tolist()))]
    return CommandResult(EXIT_OK, payload, table)


def cmd_nu(path: str) -> CommandResult:
    e = parse_sequence(_read_json(path))
    r = check_det_tor(e)
    payload = {"groups": [str(g) for g in e.groups], "nu_geometric": r.nu_geometric,
               "nu_torsion": r.nu_torsion, "equal": r.equal}
    table = [("sequence", " -> ".join(["0", *map(str, e.groups), "0"])),
             ("nu (geometric)", format_value(r.nu_geometric)),
             ("nu (torsion)", format_value(r.nu_torsion)),
             ("equal", format_value(r.equal))]
    return CommandResult(EXIT_OK if r.equal else EXIT_FAILED, payload, table)


def cmd_tate(path: str) -> CommandResult:
    cm = parse_module(_read_json(path))
    h0, h1 = tate_h0(cm), tate_h_minus1(cm)
    payload = {"module": str(cm.module), "order": cm.order, "h0": str(h0), "h_minus1": str(h1),
               "h0_order": h0.torsion_order, "h_minus1_order": h1.torsion_order}
    if cm.module.is_finite:
        payload["herbrand_quotient"] = herbrand_quotient(cm)
    table = [("module", str(cm.module)), ("group order", str(cm.order)),
             ("H^0", str(h0)), ("H^-1", str(h1))]
    return CommandResult(EXIT_OK, payload, table)


def _report_payload(report) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in report.__dict__.items():
        out[k] = str(v) if isinstance(v, (FgGroup, CycloElement)) else v
    out["consistent"] = report.consistent
    return out


def cmd_torus(path: str) -> CommandResult:
    ext = load_extension(path)
    try:
        report = build_report(ext)
    except TorusError as exc:
        return CommandResult(EXIT_FAILED, {"extension": ext.label, "error": str(exc)},
                             [("error", str(exc))])
    payload = {"extension": ext.label, **_report_payload(report)}
    table = [(k, format_value(v)) for k, v in payload.items()]
    return CommandResult(EXIT_OK if report.consistent else EXIT_FAILED, payload, table)


@dataclass(frozen=True)
class Check:
    name: str
    expected: Any
    actual: Any
    passed: bool


def _close(a: float, b: float, tol: float = TOLERANCE) -> bool:
    return abs(a - b) <= tol


def golden_checks(directory: str | Path | None = None) -> list[Check]:
    """Every check of the worked example ``Q(zeta12)/Q(i)``."""
    d = Path(directory) if directory is not None else data_dir()
    ext = load_extension(d / EXAMPLE_EXTENSION)
    k_, l_ = ext.base, ext.top
    r = build_report(ext)
    m = l_.conductor
    checks: list[Check] = []

    def add(name: str, expected: Any, actual: Any, ok: bool | None = None) -> None:
        checks.append(Check(name, expected, actual, expected == actual if ok is None else ok))

    log_ = LOG_2_PLUS_SQRT3
    add("regulator_K", 1.0, regulator_of_field(k_), _close(regulator_of_field(k_), 1.0))
    add("regulator_L", log_, regulator_of_field(l_), _close(regulator_of_field(l_), log_))
    add("lstar_analytic", log_ / 3, r.lstar_analytic, _close(r.lstar_analytic, log_ / 3))
    add("lstar_galois", log_ / 3, r.lstar_galois, _close(r.lstar_galois, log_ / 3))
    add("lstar_discrepancy", 0.0, r.discrepancy, r.discrepancy <= TOLERANCE)
    add("R_T", 2 * log_, r.R_T, _close(r.R_T, 2 * log_))
    add("kernel_structure", "Z/6 + Z", str(r.kernel_structure))
    add("w_T", 6, r.w_T)
    add("kernel_torsion_generator", str(CycloElement.zeta(m, 2)), str(r.kernel_torsion_generator))
    two_plus_sqrt3 = CycloElement.from_powers(m, {0: 2, 1: 1, 11: 1})
    add("kernel_free_generator", str(two_plus_sqrt3), str(r.kernel_free_generator))
    add("tate_h0_units_order", 1, r.tate_h0_units)
    add("tate_h_minus1_units_order", 2, r.tate_h1_units)
    add("tate_h0_mu_order", 2, r.tate_h0_mu)
    add("tate_h_minus1_mu_order", 2, r.tate_h1_mu)
    add("h_T_ono", 1, r.h_T_ono)
    add("h_T_katayama_dual", 1, r.h_T_katayama_dual)
    add("ramification_product", 2, r.ramification_product)
    add("sha1_order", 1, r.sha1_order)
    add("h1_char_order", 2, r.h1_char_order)
    for f in (k_, l_):
        chi = euler_characteristic(z_sheaf_inputs(f))
        want = f.class_number * regulator_of_field(f) / f.torsion_order
        add(f"chi_Z[{f.label}]", want, chi, abs(float(chi) - want) <= 1e-12)
        bad = [n for n in range(2, 13) if euler_characteristic(constant_sheaf_inputs(f, n)) != 1]
        add(f"chi_Z/n[{f.label}]", "1 for n=2..12", "1 for n=2..12" if not bad else f"fails at {bad}")
    chi1 = float(euler_characteristic(z_sheaf_inputs(k_)))
    chi2 = float(euler_characteristic(z_sheaf_inputs(l_)))
    add("multiplicativity", True, multiplicativity_check(chi1, chi2, r.lstar_galois))
    return checks


def cmd_verify_example(directory: str | None = None) -> CommandResult:
    try:
        checks = golden_checks(directory)
    except (DataError, TorusError, ValueError, OSError, ArithmeticError) as exc:
        return CommandResult(EXIT_FAILED, {"status": "error", "error": str(exc)},
                             [("error", str(exc))])
    payload: dict[str, Any] = {}
    table = []
    for c in checks:
        payload[c.name] = c.actual
        payload[f"{c.name}.pass"] = c.passed
        table.append((c.name, f"{'PASS' if c.passed else 'FAIL'}  {format_value(c.actual)}"))
    failed = sum(not c.passed for c in checks)
    payload["checks"] = len(checks)
    payload["failed"] = failed
    payload["status"] = "ok" if not failed else "failed"
    table.append(("summary", f"{len(checks) - failed}/{len(checks)} checks passed"))
    return CommandResult(EXIT_FAILED if failed else EXIT_OK, payload, table)


# -- entry point -----------------------------------------------------------------

def _common_flags(p: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    p.add_argument("--pretty", action="store_true", default=default if suppress else False,
                   help="also print a human-readable table to standard error")
    p.add_argument("--json", action="store_true", default=default if suppress else False,
                   help="emit a JSON object instead of key: value lines")
    p.add_argument("--data", metavar="PATH", default=default,
                   help="input file (or data directory for verify-example)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normtori", description=__doc__.splitlines()[0])
    _common_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "snf": "Smith normal form of an integer matrix file",
        "nu": "determinant of an exact sequence of f.g. abelian groups, two ways",
        "tate": "Tate cohomology of a cyclic module file",
        "torus": "full norm-torus report for an extension file",
        "verify-example": "check the shipped worked example",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        _common_flags(p, suppress=True)
        if name != "verify-example":
            p.add_argument("file", nargs="?", help="input file (same as --data)")
    return parser


COMMANDS: dict[str, Callable[[str], CommandResult]] = {
    "snf": cmd_snf, "nu": cmd_nu, "tate": cmd_tate, "torus": cmd_torus,
}


def run(argv: Sequence[str] | None = None) -> tuple[CommandResult, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    if args.command == "verify-example":
        return cmd_verify_example(args.data), args
    path = getattr(args, "file", None) or args.data
    if path is None:
        return CommandResult(EXIT_INVALID, {"error": "no input file given"}), args
    try:
        return COMMANDS[args.command](path), args
    except (InputError, DataError, NotExactError, ValueError) as exc:
        return CommandResult(EXIT_INVALID, {"error": str(exc)}, [("error", str(exc))]), args
    except (TorusError, ArithmeticError) as exc:
        return CommandResult(EXIT_FAILED, {"error": str(exc)}, [("error", str(exc))]), args


def main(argv: Sequence[str] | None = None) -> int:
    result, args = run(argv)
    out = render_json(result.payload) if args.json else render_text(result.payload)
    sys.stdout.write(out)
    if args.pretty or (args.command == "verify-example" and not args.json):
        sys.stderr.write(render_table(result.table))
    return result.code


if __name__ == "__main__":
    sys.exit(main())
