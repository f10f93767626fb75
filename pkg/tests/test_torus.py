import dataclasses
import math
from fractions import Fraction

import pytest

from normtori.cyclo import CycloElement, galois_apply, power
from normtori.fielddata import ExtensionData, data_dir, load_extension, load_field
from normtori.smith import IntegerMatrix
from normtori.torus import (EulerInputs, TorusError, build_report, constant_sheaf_inputs,
                            euler_characteristic, h1_char_order, katayama_class_number,
                            lstar_analytic, lstar_galois, multiplicativity_check,
                            ono_class_number_cyclic, ramification_product, sha1_order,
                            torus_regulator, unit_norm_kernel, z_sheaf_inputs)

LOG = math.log(2 + math.sqrt(3))
M = 12


@pytest.fixture(scope="module")
def ext():
    return load_extension(data_dir() / "qzeta12-over-qi.ext")


@pytest.fixture(scope="module")
def degenerate():
    k = load_field(data_dir() / "qi.field")
    return ExtensionData("Q(i)/Q(i)", k, k, 1, 1, IntegerMatrix.identity(1), (), 1)


def test_unit_norm_kernel(ext):
    k = unit_norm_kernel(ext)
    assert str(k.group) == "Z/6 + Z" and k.w_t == 6
    assert k.torsion_generators == (CycloElement.zeta(M, 2),)
    two_plus_sqrt3 = CycloElement.from_powers(M, {0: 2, 1: 1, 11: 1})
    assert k.free_generators == (two_plus_sqrt3,)
    u = ext.top.fundamental_units[0]
    assert k.free_generators[0] == CycloElement.zeta(M) * u ** 2
    for x in k.torsion_generators + k.free_generators:
        assert x * galois_apply(x, ext.sigma) == CycloElement.from_int(M, 1)


def test_degenerate_extension_rejected(degenerate):
    with pytest.raises(ValueError):
        unit_norm_kernel(degenerate)


def test_torus_regulator(ext):
    assert abs(torus_regulator(ext) - 2 * LOG) < 1e-12
    g = unit_norm_kernel(ext).free_generators[0]
    z2 = CycloElement.zeta(M, 2)
    assert abs(torus_regulator(ext, (power(g, -1),)) - 2 * LOG) < 1e-12
    assert abs(torus_regulator(ext, (g * z2 ** 4,)) - 2 * LOG) < 1e-12


def test_euler_characteristic_examples(ext):
    k, l = ext.base, ext.top
    assert euler_characteristic(z_sheaf_inputs(k)) == Fraction(1, 4)
    assert abs(euler_characteristic(z_sheaf_inputs(l)) - LOG / 12) < 1e-15
    qi4 = EulerInputs(h0_tor=4, h1=1, h2=4, hom_tor=4, h0_B_tor=4, cok_delta_tor=1, regulator=1)
    assert constant_sheaf_inputs(k, 4) == qi4
    assert euler_characteristic(qi4) == 1
    assert euler_characteristic(EulerInputs(1, 1, 1, 1, 1, 1, 1)) == 1


def test_euler_inputs_validated():
    with pytest.raises(ValueError):
        EulerInputs(0, 1, 1, 1, 1, 1, 1.0)
    with pytest.raises(ValueError):
        EulerInputs(1, 1, 1, 1, 1, 1, 0.0)


def test_constant_sheaf_needs_class_group_when_h_above_one(ext):
    k = dataclasses.replace(ext.base, class_number=3)
    with pytest.raises(ValueError):
        constant_sheaf_inputs(k, 3)
    k = dataclasses.replace(k, class_group=(3,))
    for n in range(2, 13):
        assert euler_characteristic(constant_sheaf_inputs(k, n)) == 1


def test_lstar_routes(ext, degenerate):
    assert abs(lstar_analytic(ext) - LOG / 3) < 1e-12
    assert abs(lstar_galois(ext) - LOG / 3) < 1e-12
    assert lstar_analytic(degenerate) == 1


def test_lstar_analytic_scaling(ext):
    k = dataclasses.replace(ext.base, class_number=5)
    l = dataclasses.replace(ext.top, class_number=5)
    assert abs(lstar_analytic(dataclasses.replace(ext, base=k, top=l)) - lstar_analytic(ext)) < 1e-15


def test_class_numbers(ext, degenerate):
    assert ono_class_number_cyclic(ext) == 1
    assert katayama_class_number(ext) == 1
    assert ono_class_number_cyclic(degenerate) == 1
    # unramified with trivial Tate group: the formula reduces to h_L / h_K
    l = dataclasses.replace(degenerate.top, class_number=6)
    k = dataclasses.replace(degenerate.base, class_number=2)
    assert katayama_class_number(dataclasses.replace(degenerate, base=k, top=l)) == 3


def test_non_integral_class_number_detected(ext):
    bad = dataclasses.replace(ext, ramified=(("3", 2), ("5", 2)))
    with pytest.raises(TorusError):
        ono_class_number_cyclic(bad)
    with pytest.raises(TorusError):
        katayama_class_number(bad)


def test_small_orders(ext):
    assert ramification_product(ext) == 2
    assert h1_char_order(ext) == 2
    assert sha1_order(ext) == 1
    with pytest.raises(ValueError):
        sha1_order(dataclasses.replace(ext, l0_index=1))


def test_multiplicativity_check():
    assert multiplicativity_check(1.0, 1.0, 1.0)
    assert multiplicativity_check(0.25, LOG / 12, LOG / 3)
    assert not multiplicativity_check(0.25, LOG / 12, LOG / 3 * (1 + 1e-6))


def test_report(ext):
    r = build_report(ext)
    assert r.discrepancy <= 1e-9 and r.consistent
    assert str(r.kernel_structure) == "Z/6 + Z"
    assert abs(r.R_T - 2.633915793849634) < 1e-9
    assert (r.h_T_ono, r.h_T_katayama_dual, r.w_T) == (1, 1, 6)


def test_class_number_of_top_scales_both_routes(ext):
    """Changing h_L alone moves both routes together, so it cannot open a gap."""
    l = dataclasses.replace(ext.top, class_number=3)
    r = build_report(dataclasses.replace(ext, top=l))
    assert r.h_T_ono == 3
    assert abs(r.lstar_galois - 3 * LOG / 3) < 1e-12
    assert r.discrepancy <= 1e-9
