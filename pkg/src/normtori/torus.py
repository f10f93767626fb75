"""Norm tori of cyclic extensions: unit kernels, regulators, class numbers and L*-values.

All quantities are magnitudes; signs are dropped throughout.  The two
routes to ``L*(T^, 0)`` are independent: the analytic one only uses the
invariants of ``K`` and ``L``, the Galois one goes through the torus
class number, regulator and Tate cohomology of the unit module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cyclo import CycloElement, log_abs_at_place
from .fielddata import ExtensionData, FieldData, _float_det, regulator_of_field
from .groups import FgGroup, GroupMap, kernel
from .tate import (CyclicModule, cyclic_module_from_presentation, norm_endomorphism,
                   tate_h0, tate_h_minus1)

TOLERANCE = 1e-9


class TorusError(ArithmeticError):
    """Inconsistent data detected while evaluating a formula."""


# -- Galois modules ------------------------------------------------------------

def unit_module(ext: ExtensionData) -> CyclicModule:
    """``O_L^*`` on the exponent lattice ``Z/w_L + Z^r`` with the action of sigma."""
    top = ext.top
    n = len(top.generators)
    rels = [[top.torsion_order] + [0] * (n - 1)]
    return cyclic_module_from_presentation(n, rels, ext.unit_action.tolist(), ext.galois_order)


def roots_of_unity_module(ext: ExtensionData) -> CyclicModule:
    """``mu_L`` as a cyclic module; sigma acts through the torsion column of the unit action."""
    a = ext.unit_action
    if any(a[i, 0] for i in range(1, a.rows)):
        raise TorusError("unit action sends a root of unity outside the torsion subgroup")
    w = ext.top.torsion_order
    return cyclic_module_from_presentation(1, [[w]], [[a[0, 0]]], ext.galois_order)


@dataclass(frozen=True)
class NormKernel:
    group: FgGroup
    inclusion: GroupMap
    torsion_generators: tuple[CycloElement, ...]
    free_generators: tuple[CycloElement, ...]
    w_t: int


def _require_quadratic(ext: ExtensionData) -> None:
    if ext.galois_order != 2:
        raise ValueError(f"norm-torus computations need [L:K] = 2, got {ext.galois_order}")


def _normalize_free(top: FieldData, vec: list[int], torsion_vecs: list[list[int]],
                    place: int) -> list[int]:
    """Canonical representative of ``vec`` modulo kernel torsion and inversion.

    The sign makes ``log |u|_v`` positive at ``place``; then the root-of-unity
    exponent is made as small as possible.
    """
    if log_abs_at_place(top.element(vec), place) < 0:
        vec = [-x for x in vec]
    w = top.torsion_order
    step = math.gcd(w, *[t[0] for t in torsion_vecs]) if torsion_vecs else w
    return [vec[0] % step] + list(vec[1:])


def unit_norm_kernel(ext: ExtensionData) -> NormKernel:
    """Kernel of ``N_{L/K}`` on ``O_L^*``, computed on the exponent lattice."""
    _require_quadratic(ext)
    top = ext.top
    group, inc = kernel(norm_endomorphism(unit_module(ext)))
    cols = inc.columns()
    tors = [cols[i] for i in range(group.ntors)]
    free = [cols[i] for i in range(group.ntors, group.ngens)]
    place = ext.base.places[0]
    free = [_normalize_free(top, v, tors, place) for v in free]
    tors = [[v[0] % top.torsion_order] + list(v[1:]) for v in tors]
    return NormKernel(group, inc,
                      tuple(top.element(v) for v in tors),
                      tuple(top.element(v) for v in free),
                      group.torsion_order)


def torus_regulator(ext: ExtensionData, generators: tuple[CycloElement, ...] | None = None) -> float:
    """``|det(log |u_j|_v)|`` for the free kernel generators at the places of ``K``."""
    gens = unit_norm_kernel(ext).free_generators if generators is None else generators
    r = len(gens)
    if r == 0:
        return 1.0
    places = ext.base.places
    if len(places) < r:
        places = ext.top.places
    det = _float_det([[log_abs_at_place(u, k) for u in gens] for k in places[:r]])
    if abs(det) < 1e-12:
        raise TorusError("kernel generators have a singular regulator matrix")
    return abs(det)


# -- Euler characteristics -------------------------------------------------------

@dataclass(frozen=True)
class EulerInputs:
    h0_tor: int
    h1: int
    h2: int
    hom_tor: int
    h0_B_tor: int
    cok_delta_tor: int
    regulator: float

    def __post_init__(self):
        orders = (self.h0_tor, self.h1, self.h2, self.hom_tor, self.h0_B_tor, self.cok_delta_tor)
        if any(not isinstance(o, int) or o < 1 for o in orders):
            raise ValueError("all orders must be positive integers")
        if not self.regulator > 0:
            raise ValueError("regulator must be positive")


def euler_characteristic(inp: EulerInputs) -> float | Fraction:
    """Exact when the regulator is 1, otherwise a float."""
    ratio = Fraction(inp.h0_tor * inp.h2, inp.h1 * inp.hom_tor * inp.h0_B_tor * inp.cok_delta_tor)
    if inp.regulator == 1:
        return ratio
    return float(ratio) * inp.regulator


def z_sheaf_inputs(f: FieldData, regulator: float | None = None) -> EulerInputs:
    reg = regulator_of_field(f) if regulator is None else regulator
    return EulerInputs(1, 1, f.class_number, f.torsion_order, 1, 1, reg)


def constant_sheaf_inputs(f: FieldData, n: int) -> EulerInputs:
    """Orders for the constant sheaf ``Z/n`` on a totally imaginary field."""
    if n < 1:
        raise ValueError("n must be positive")
    if f.class_number == 1:
        pic_n = pic_mod_n = 1
    elif f.class_group is not None:
        pic_n = math.prod(math.gcd(d, n) for d in f.class_group)
        pic_mod_n = pic_n
    else:
        raise ValueError(f"{f.label} has h > 1 but no class_group structure")
    g = math.gcd(n, f.torsion_order)
    return EulerInputs(
        h0_tor=n,
        h1=pic_mod_n,
        h2=pic_n * g * n ** (f.r2 - 1),
        hom_tor=g,
        h0_B_tor=n ** f.r2,
        cok_delta_tor=1,
        regulator=1,
    )


def multiplicativity_check(chi1: float, chi2: float, chi3: float) -> bool:
    """``chi2 = chi1 * chi3`` up to a relative ``1e-9``."""
    return abs(chi2 - chi1 * chi3) <= TOLERANCE * abs(chi2)


# -- class numbers and L*-values ---------------------------------------------------

def _field_chi(f: FieldData) -> float:
    return f.class_number * regulator_of_field(f) / f.torsion_order


def lstar_analytic(ext: ExtensionData) -> float:
    """``|zeta_L^*(0) / zeta_K^*(0)|`` from the class number formula."""
    return _field_chi(ext.top) / _field_chi(ext.base)


def sha1_order(ext: ExtensionData) -> int:
    """Trivial for cyclic extensions (Hasse norm theorem)."""
    if ext.l0_index != ext.galois_order:
        raise ValueError("Sha^1 is only computed for cyclic extensions")
    return 1


def h1_char_order(ext: ExtensionData) -> int:
    """``[H^1(K, T^)] = [L_0 : K]``."""
    return ext.l0_index


def ramification_product(ext: ExtensionData) -> int:
    return ext.ramification_product


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise TorusError(f"{what} = {value} is not an integer; extension data are inconsistent")
    return value.numerator


def ono_class_number_cyclic(ext: ExtensionData) -> int:
    h0 = tate_h0(unit_module(ext)).torsion_order
    value = Fraction(ext.top.class_number * ext.galois_order * h0,
                     ext.base.class_number * ext.ramification_product)
    return _integral(value, "h_T")


def katayama_class_number(ext: ExtensionData) -> int:
    h1 = tate_h_minus1(unit_module(ext)).torsion_order
    value = Fraction(ext.top.class_number * h1,
                     ext.base.class_number * ext.ramification_product)
    return _integral(value, "h_T'")


def lstar_galois(ext: ExtensionData) -> float:
    """``h_T R_T / w_T * [Sha^1] / [H^1(K, T^)] * prod e_p``."""
    k = unit_norm_kernel(ext)
    h_t = ono_class_number_cyclic(ext)
    r_t = torus_regulator(ext, k.free_generators)
    return (h_t * r_t / k.w_t) * sha1_order(ext) / h1_char_order(ext) * ext.ramification_product


@dataclass(frozen=True)
class TorusReport:
    kernel_structure: FgGroup
    kernel_torsion_generator: CycloElement | None
    kernel_free_generator: CycloElement | None
    w_T: int
    R_T: float
    tate_h0_units: int
    tate_h1_units: int
    tate_h0_mu: int
    tate_h1_mu: int
    h_T_ono: int
    h_T_katayama_dual: int
    sha1_order: int
    h1_char_order: int
    ramification_product: int
    lstar_galois: float
    lstar_analytic: float
    discrepancy: float
    multiplicativity: bool

    @property
    def consistent(self) -> bool:
        return self.discrepancy <= TOLERANCE and self.multiplicativity


def build_report(ext: ExtensionData) -> TorusReport:
    k = unit_norm_kernel(ext)
    units, mu = unit_module(ext), roots_of_unity_module(ext)
    r_t = torus_regulator(ext, k.free_generators)
    galois = lstar_galois(ext)
    analytic = lstar_analytic(ext)
    ok = multiplicativity_check(_field_chi(ext.base), _field_chi(ext.top), galois)
    return TorusReport(
        kernel_structure=k.group,
        kernel_torsion_generator=k.torsion_generators[0] if k.torsion_generators else None,
        kernel_free_generator=k.free_generators[0] if k.free_generators else None,
        w_T=k.w_t,
        R_T=r_t,
        tate_h0_units=tate_h0(units).torsion_order,
        tate_h1_units=tate_h_minus1(units).torsion_order,
        tate_h0_mu=tate_h0(mu).torsion_order,
        tate_h1_mu=tate_h_minus1(mu).torsion_order,
        h_T_ono=ono_class_number_cyclic(ext),
        h_T_katayama_dual=katayama_class_number(ext),
        sha1_order=sha1_order(ext),
        h1_char_order=h1_char_order(ext),
        ramification_product=ext.ramification_product,
        lstar_galois=galois,
        lstar_analytic=analytic,
        discrepancy=abs(galois - analytic),
        multiplicativity=ok,
    )
