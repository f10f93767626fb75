import itertools
import random
from math import gcd

import pytest

from normtori.exactdet import FgSequence, NotExactError
from normtori.generators import random_fg_group, random_fg_sequence
from normtori.groups import (FgGroup, GroupMap, cokernel, compose, group_from_presentation,
                             identity_map, image, is_exact_at, kernel, parse_group, rank,
                             torsion_order, torsion_restriction_cokernel_order, zero_map)
from normtori.smith import IntegerMatrix, minors_gcd_factors

Z = FgGroup((), 1)


def gmap(a, b, rows):
    return GroupMap(a, b, IntegerMatrix.from_rows(rows, a.ngens))


def elements(g: FgGroup):
    assert g.is_finite
    return itertools.product(*[range(d) for d in g.invariant_factors])


def test_presentation_examples():
    assert group_from_presentation(2, [[2, 0], [0, 4]]) == FgGroup((2, 4))
    assert group_from_presentation(1, []) == Z
    assert group_from_presentation(2, [[12, 0]]) == FgGroup((12,), 1)
    assert group_from_presentation(3, [[1, 0, 0], [0, 6, 0]]) == FgGroup((6,), 1)


def test_orders_and_ranks():
    assert torsion_order(FgGroup((2, 4))) == 8
    assert sum(1 for _ in elements(FgGroup((2, 4)))) == 8
    assert torsion_order(FgGroup((), 3)) == 1
    assert torsion_order(FgGroup((12,), 1)) == 12
    assert rank(FgGroup((6,), 1)) == 1 and rank(FgGroup((2, 4))) == 0 and rank(FgGroup((), 3)) == 3


def test_invariant_factor_validation():
    with pytest.raises(ValueError):
        FgGroup((2, 3))
    with pytest.raises(ValueError):
        FgGroup((1,))


def test_map_well_definedness_checked():
    with pytest.raises(ValueError):
        gmap(FgGroup((2,)), FgGroup((4,)), [[1]])
    gmap(FgGroup((2,)), FgGroup((4,)), [[2]])


def test_norm_kernel_example():
    a = FgGroup((12,), 1)
    n = gmap(a, FgGroup((4,)), [[2, 1]])
    k, inc = kernel(n)
    assert k == FgGroup((6,), 1)
    for col in inc.columns():
        assert n(col) == [0]


def test_kernel_examples():
    assert kernel(identity_map(FgGroup((2,), 2)))[0].is_trivial
    assert kernel(zero_map(Z, Z))[0] == Z


def test_cokernel_examples():
    assert cokernel(gmap(Z, Z, [[2]])) == FgGroup((2,))
    assert cokernel(gmap(FgGroup((), 2), Z, [[2, 3]])).is_trivial
    z2 = FgGroup((), 2)
    assert cokernel(gmap(z2, z2, [[2, 0], [0, 4]])) == FgGroup((2, 4))


def test_image_and_exactness():
    assert image(gmap(FgGroup((), 2), Z, [[2, 1]])) == Z
    double = gmap(Z, Z, [[2]])
    assert is_exact_at(double, gmap(Z, FgGroup((2,)), [[1]]))
    assert not is_exact_at(double, gmap(Z, FgGroup((4,)), [[1]]))


def test_torsion_restriction_cokernel_examples():
    z2, z4 = FgGroup((2,)), FgGroup((4,))
    assert torsion_restriction_cokernel_order(zero_map(z2, z2)) == 2
    assert torsion_restriction_cokernel_order(identity_map(FgGroup((6,), 1))) == 1
    assert torsion_restriction_cokernel_order(gmap(z4, z4, [[2]])) == 2
    # enumeration: |cok| = |B_tor| / |image of A_tor|
    f = gmap(z4, z4, [[2]])
    imgs = {tuple(f([x])) for (x,) in elements(z4)}
    assert torsion_restriction_cokernel_order(f) == 4 // len(imgs)


def test_parse_group_round_trip():
    for g in [FgGroup(), FgGroup((2, 4), 1), FgGroup((), 3), FgGroup((6,))]:
        assert parse_group(str(g)) == g


def _random_map(rng, a, b):
    rows = [[rng.randint(-5, 5) for _ in range(a.ngens)] for _ in range(b.ngens)]
    for j, d in enumerate(a.invariant_factors):
        # a generator of order d must land in the d-torsion of b
        for i in range(b.ngens):
            if i >= b.ntors:
                rows[i][j] = 0
            else:
                e = b.invariant_factors[i]
                rows[i][j] = rows[i][j] * (e // gcd(e, d)) % e
    return gmap(a, b, rows)


def test_finite_kernel_image_orders_by_enumeration():
    rng = random.Random(11)
    checked = 0
    while checked < 150:
        a = random_fg_group(rng, 0, 200)
        b = random_fg_group(rng, 0, 60)
        f = _random_map(rng, a, b)
        images = {tuple(f(list(x))) for x in elements(a)}
        kernel_size = sum(1 for x in elements(a) if b.is_zero(f(list(x))))
        assert image(f).torsion_order == len(images)
        assert kernel(f)[0].torsion_order == kernel_size
        assert a.torsion_order == kernel_size * len(images)
        checked += 1


def test_cokernel_order_matches_minors():
    rng = random.Random(12)
    for _ in range(200):
        n, m = rng.randint(1, 4), rng.randint(1, 4)
        rows = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        f = gmap(FgGroup((), n), FgGroup((), m), rows)
        factors = minors_gcd_factors(rows)
        c = cokernel(f)
        assert c.free_rank == m - len(factors)
        prod = 1
        for d in factors:
            prod *= d
        assert c.torsion_order == prod


def test_torsion_identity_on_five_term_sequences():
    """[A][C_tor]/([B_tor][D_tor]) = 1/[cok psi_tor] for 0->A->B->C->D->E->0, A finite."""
    rng = random.Random(13)
    seen = 0
    while seen < 100:
        e = random_fg_sequence(rng, 5, max_rank=3)
        a, b, c, d, _ = e.groups
        if not a.is_finite:
            continue
        psi = e.maps[2]
        lhs = (a.torsion_order * c.torsion_order, b.torsion_order * d.torsion_order)
        assert lhs[0] * torsion_restriction_cokernel_order(psi) == lhs[1]
        seen += 1


def test_compose_mismatch_rejected():
    with pytest.raises(ValueError):
        compose(identity_map(Z), identity_map(FgGroup((2,))))


def test_sequence_exactness_enforced():
    with pytest.raises(NotExactError):
        FgSequence((Z, Z, FgGroup((4,))), (gmap(Z, Z, [[2]]), gmap(Z, FgGroup((4,)), [[1]])))
