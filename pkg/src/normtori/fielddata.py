"""Number-field and extension records modeled inside one cyclotomic field.

A field ``F`` is a subfield of ``Q(zeta_m)``; it is determined by the
subgroup ``H`` of ``(Z/m)^*`` fixing it, which by default is read off from
its declared unit generators.  Complex places of ``F`` correspond to cosets
of ``<H, -1>`` and are represented by their smallest element ``k``.

Files are JSON.  Exact quantities are integers or ``"p/q"`` strings; the
regulator is informational and is always recomputed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from .cyclo import (CycloElement, euler_phi, format_coefficients, galois_apply, is_unit,
                    log_abs_at_place, multiplicative_order, parse_coefficients, power,
                    product, units_mod)
from .groups import FgGroup
from .smith import IntegerMatrix

REGULATOR_TOLERANCE = 1e-9

FIELD_KEYS = ("label", "conductor", "r2", "class_number", "torsion_order",
              "torsion_generator", "fundamental_units", "regulator")
EXTENSION_KEYS = ("base", "top", "galois_order", "sigma", "unit_action", "ramified", "l0_index")


class DataError(Exception):
    code = "data"


class DataParseError(DataError):
    code = "parse"


class DataValidationError(DataError):
    code = "validation"

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class FieldData:
    label: str
    conductor: int
    r2: int
    class_number: int
    torsion_order: int
    torsion_generator: CycloElement
    fundamental_units: tuple[CycloElement, ...]
    regulator: float
    class_group: tuple[int, ...] | None = None
    fixer: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if not self.fixer:
            object.__setattr__(self, "fixer", _fixing_subgroup(self.generators, self.conductor))

    @property
    def generators(self) -> list[CycloElement]:
        return [self.torsion_generator, *self.fundamental_units]

    @property
    def degree(self) -> int:
        return euler_phi(self.conductor) // len(self.fixer)

    @property
    def unit_group(self) -> FgGroup:
        return FgGroup((self.torsion_order,) if self.torsion_order > 1 else (),
                       len(self.fundamental_units))

    @property
    def places(self) -> list[int]:
        """One embedding index per complex place, sorted."""
        m = self.conductor
        big = {(h * s) % m for h in self.fixer for s in (1, m - 1)}
        seen, reps = set(), []
        for k in units_mod(m):
            if k % m in seen:
                continue
            reps.append(k)
            seen |= {(k * g) % m for g in big}
        return reps

    def element(self, exponents: Sequence[int]) -> CycloElement:
        """The unit ``g^a * prod eps_j^b_j`` for exponents ``(a, b_1, ...)``."""
        return product(self.generators, exponents, self.conductor)

    def unit_coordinates(self, x: CycloElement) -> list[int]:
        """Exponents of ``x`` on the declared generators (torsion exponent reduced)."""
        r = len(self.fundamental_units)
        b = [0] * r
        if r:
            places = self.places[:r]
            mat = [[log_abs_at_place(u, k) for u in self.fundamental_units] for k in places]
            rhs = [log_abs_at_place(x, k) for k in places]
            b = [round(v) for v in _float_solve(mat, rhs)]
        rest = x * product(self.fundamental_units, [-e for e in b], self.conductor)
        g = self.torsion_generator
        y = CycloElement.from_int(self.conductor, 1)
        for a in range(self.torsion_order):
            if y == rest:
                return [a, *b]
            y = y * g
        raise ValueError(f"{x} is not in the unit group of {self.label}")


def _fixing_subgroup(gens: Sequence[CycloElement], m: int) -> tuple[int, ...]:
    return tuple(k for k in units_mod(m) if all(galois_apply(x, k) == x for x in gens))


def _float_det(a: Sequence[Sequence[float]]) -> float:
    m = [list(map(float, r)) for r in a]
    n = len(m)
    det = 1.0
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(m[i][c]))
        if m[p][c] == 0.0:
            return 0.0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def _float_solve(a: Sequence[Sequence[float]], b: Sequence[float]) -> list[float]:
    n = len(a)
    m = [list(map(float, r)) + [float(v)] for r, v in zip(a, b)]
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(m[i][c]))
        if m[p][c] == 0.0:
            raise ValueError("singular log-embedding matrix")
        m[c], m[p] = m[p], m[c]
        for i in range(n):
            if i != c:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def log_matrix(units: Sequence[CycloElement], places: Sequence[int]) -> list[list[float]]:
    """Rows are places, columns are units."""
    return [[log_abs_at_place(u, k) for u in units] for k in places]


def regulator_of_field(f: FieldData) -> float:
    """``|det(log |u_j|_{v_i})|`` over the first ``r2 - 1`` places; 1 if there are no units."""
    r = f.r2 - 1
    if r <= 0:
        return 1.0
    det = _float_det(log_matrix(f.fundamental_units, f.places[:r]))
    if abs(det) < 1e-12:
        raise ValueError(f"fundamental units of {f.label} are multiplicatively dependent")
    return abs(det)


def _roots_of_unity_count(f: FieldData) -> int:
    m = f.conductor
    z = CycloElement.zeta(m)
    found = set()
    for j in range(m):
        for s in (1, -1):
            x = power(z, j) * s
            if all(galois_apply(x, k) == x for k in f.fixer):
                found.add(x.coefficients)
    return len(found)


def validate_field(f: FieldData) -> list[str]:
    problems = []
    m = f.conductor
    if f.class_number < 1:
        problems.append("class_number must be >= 1")
    if f.class_group is not None and math.prod(f.class_group) != f.class_number:
        problems.append("class_group orders do not multiply to class_number")
    if f.r2 < 1:
        problems.append("field must be totally imaginary (r2 >= 1)")
    if f.degree != 2 * f.r2:
        problems.append(f"degree {f.degree} of the fixed field is not 2*r2 = {2 * f.r2}")
    if len(f.fundamental_units) != f.r2 - 1:
        problems.append(f"expected {f.r2 - 1} fundamental units, got {len(f.fundamental_units)}")
    order = multiplicative_order(f.torsion_generator, bound=2 * m)
    if order != f.torsion_order:
        problems.append(f"torsion generator has order {order}, declared torsion_order {f.torsion_order}")
    elif _roots_of_unity_count(f) != f.torsion_order:
        problems.append(f"field contains {_roots_of_unity_count(f)} roots of unity, "
                        f"declared torsion_order {f.torsion_order}")
    for u in f.fundamental_units:
        if not is_unit(u):
            problems.append(f"{u} is not a unit")
    for k in f.fixer:
        if any(galois_apply(x, k) != x for x in f.generators):
            problems.append(f"embedding {k} in the fixer moves a generator")
    if not problems:
        try:
            reg = regulator_of_field(f)
        except ValueError as exc:
            problems.append(str(exc))
        else:
            if abs(reg - f.regulator) > REGULATOR_TOLERANCE:
                problems.append(f"declared regulator {f.regulator!r} differs from recomputed {reg!r}")
    return problems


@dataclass(frozen=True)
class ExtensionData:
    label: str
    base: FieldData
    top: FieldData
    galois_order: int
    sigma: int
    unit_action: IntegerMatrix
    ramified: tuple[tuple[str, int], ...]
    l0_index: int

    @property
    def ramification_product(self) -> int:
        return math.prod(e for _, e in self.ramified)


def validate_extension(x: ExtensionData) -> list[str]:
    problems = []
    k_, l_ = x.base, x.top
    m = l_.conductor
    n = x.galois_order
    if k_.conductor != m:
        problems.append("base and top use different cyclotomic models")
        return problems
    if math.gcd(x.sigma, m) != 1:
        problems.append(f"sigma = {x.sigma} is not a unit modulo {m}")
        return problems
    if not set(l_.fixer) <= set(k_.fixer):
        problems.append(f"{k_.label} is not a subfield of {l_.label}")
    if n < 1 or l_.degree != n * k_.degree:
        problems.append(f"[L:K] = {l_.degree}/{k_.degree} does not match galois_order {n}")
    if any(galois_apply(g, x.sigma) != g for g in k_.generators):
        problems.append("sigma does not fix the base field")
    orders = [pow(x.sigma, j, m) for j in range(1, n + 1)]
    if orders[-1] not in l_.fixer or any(s in l_.fixer for s in orders[:-1]):
        problems.append(f"sigma does not have order {n} on {l_.label}")
    gens = l_.generators
    if (x.unit_action.rows, x.unit_action.cols) != (len(gens), len(gens)):
        problems.append(f"unit_action must be {len(gens)}x{len(gens)}")
    else:
        for j, g in enumerate(gens):
            if galois_apply(g, x.sigma) != l_.element(x.unit_action.column(j)):
                problems.append(f"unit_action column {j} disagrees with sigma on generator {j}")
    labels = [p for p, _ in x.ramified]
    if len(set(labels)) != len(labels):
        problems.append("ramified places are listed twice")
    for p, e in x.ramified:
        if e < 2 or n % e:
            problems.append(f"ramification index {e} at {p} must be >= 2 and divide {n}")
    if x.l0_index != n:
        problems.append(f"l0_index {x.l0_index} must equal [L:K] = {n} for a cyclic extension")
    return problems


# -- file I/O -----------------------------------------------------------------

def _require(d: dict, keys: Sequence[str], what: str) -> None:
    if not isinstance(d, dict):
        raise DataParseError(f"{what} file must hold a JSON object")
    missing = [k for k in keys if k not in d]
    if missing:
        raise DataParseError(f"{what} file is missing keys: {', '.join(missing)}")


def _read_json(path: str | Path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise DataParseError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise DataParseError(f"{path}: {exc}") from exc


def field_from_dict(d: dict) -> FieldData:
    _require(d, FIELD_KEYS, "field")
    try:
        m = int(d["conductor"])
        f = FieldData(
            label=str(d["label"]),
            conductor=m,
            r2=int(d["r2"]),
            class_number=int(d["class_number"]),
            torsion_order=int(d["torsion_order"]),
            torsion_generator=parse_coefficients(d["torsion_generator"], m),
            fundamental_units=tuple(parse_coefficients(u, m) for u in d["fundamental_units"]),
            regulator=float(d["regulator"]),
            class_group=tuple(int(c) for c in d["class_group"]) if "class_group" in d else None,
            fixer=tuple(int(k) for k in d.get("fixer", ())),
        )
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DataParseError(f"bad field value: {exc}") from exc
    problems = validate_field(f)
    if problems:
        raise DataValidationError(problems)
    return f


def field_to_dict(f: FieldData) -> dict:
    d = {
        "label": f.label,
        "conductor": f.conductor,
        "r2": f.r2,
        "class_number": f.class_number,
        "torsion_order": f.torsion_order,
        "torsion_generator": format_coefficients(f.torsion_generator),
        "fundamental_units": [format_coefficients(u) for u in f.fundamental_units],
        "regulator": repr(f.regulator),
    }
    if f.class_group is not None:
        d["class_group"] = list(f.class_group)
    return d


def dump_field(f: FieldData) -> str:
    return json.dumps(field_to_dict(f), indent=2) + "\n"


def load_field(path: str | Path) -> FieldData:
    return field_from_dict(_read_json(path))


def extension_from_dict(d: dict, base: FieldData, top: FieldData) -> ExtensionData:
    _require(d, EXTENSION_KEYS, "extension")
    try:
        ram = d["ramified"]
        if not isinstance(ram, list):
            raise ValueError("ramified must be a list of [place, e] pairs")
        ext = ExtensionData(
            label=str(d.get("label", f"{top.label}/{base.label}")),
            base=base,
            top=top,
            galois_order=int(d["galois_order"]),
            sigma=int(d["sigma"]),
            unit_action=IntegerMatrix.from_rows([[int(v) for v in r] for r in d["unit_action"]],
                                                len(top.generators)),
            ramified=tuple((str(p), int(e)) for p, e in ram),
            l0_index=int(d["l0_index"]),
        )
    except (TypeError, ValueError) as exc:
        raise DataParseError(f"bad extension value: {exc}") from exc
    problems = validate_extension(ext)
    if problems:
        raise DataValidationError(problems)
    return ext


def load_extension(path: str | Path) -> ExtensionData:
    """Load an extension; ``base`` and ``top`` are paths relative to the file."""
    path = Path(path)
    d = _read_json(path)
    _require(d, EXTENSION_KEYS, "extension")
    base = load_field(path.parent / d["base"])
    top = load_field(path.parent / d["top"])
    return extension_from_dict(d, base, top)


def extension_to_dict(x: ExtensionData, base_path: str, top_path: str) -> dict:
    return {
        "label": x.label,
        "base": base_path,
        "top": top_path,
        "galois_order": x.galois_order,
        "sigma": x.sigma,
        "unit_action": x.unit_action.tolist(),
        "ramified": [[p, e] for p, e in x.ramified],
        "l0_index": x.l0_index,
    }


def data_dir() -> Path:
    return Path(__file__).parent / "data"
