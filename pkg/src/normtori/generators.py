"""Random instances for property tests: exact sequences, grids and cyclic modules.

Every generator takes a ``random.Random`` so runs are reproducible from a seed.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from . import rational
from .cyclo import cyclotomic_polynomial
from .exactdet import BasedGrid, BasedSequence, BasedSpace, FgSequence
from .groups import FgGroup, GroupMap, compose, identity_map, kernel, presentation
from .smith import IntegerMatrix
from .tate import CyclicModule, cyclic_module_from_presentation


class Rejected(Exception):
    """A draw fell outside the requested bounds; the caller should retry."""


# -- integer helpers -----------------------------------------------------------

def _int_matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> list[list[int]]:
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def random_unimodular(rng: random.Random, n: int, steps: int = 6) -> tuple[list[list[int]], list[list[int]]]:
    """A random ``U`` in ``GL_n(Z)`` together with its inverse."""
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    u_inv = [row[:] for row in u]
    if n < 2:
        if n == 1 and rng.random() < 0.5:
            return [[-1]], [[-1]]
        return u, u_inv
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # row_i += c row_j on U; column_j -= c column_i on U^-1
        u[i] = [x + c * y for x, y in zip(u[i], u[j])]
        for row in u_inv:
            row[j] -= c * row[i]
    return u, u_inv


def random_invertible_rational(rng: random.Random, n: int, bound: int = 3) -> rational.Matrix:
    """A random invertible matrix with small integer entries, sometimes halved."""
    while True:
        m = [[Fraction(rng.randint(-bound, bound), rng.choice((1, 1, 2))) for _ in range(n)]
             for _ in range(n)]
        if n == 0 or rational.det(m) != 0:
            return m


def random_basis(rng: random.Random, n: int) -> BasedSpace:
    return BasedSpace(tuple(tuple(r) for r in random_invertible_rational(rng, n)))


# -- finitely generated groups -----------------------------------------------------

def random_fg_group(rng: random.Random, max_rank: int = 4, max_torsion: int = 60) -> FgGroup:
    factors: list[int] = []
    total = 1
    for _ in range(rng.randint(0, 2)):
        step = rng.randint(2, 6)
        d = (factors[-1] if factors else 1) * step
        if total * d > max_torsion:
            break
        factors.append(d)
        total *= d
    return FgGroup(tuple(factors), rng.randint(0, max_rank))


def random_surjection(rng: random.Random, target: FgGroup, extra: int | None = None) -> GroupMap:
    """A random surjection onto ``target`` from a group built around its kernel.

    The domain is ``Z^(g+e) / R'`` where ``R'`` is a random sublattice of the
    kernel of ``[I | M]: Z^(g+e) -> target``.
    """
    g = target.ngens
    e = rng.randint(0, 2) if extra is None else extra
    m = [[rng.randint(-2, 2) for _ in range(e)] for _ in range(g)]
    kernel_gens = [c + [0] * e for c in target.relation_columns()]
    for t in range(e):
        kernel_gens.append([-m[i][t] for i in range(g)] + [int(s == t) for s in range(e)])
    k = len(kernel_gens)
    rels = []
    for _ in range(rng.randint(0, k)):
        coeffs = [rng.randint(-2, 2) for _ in range(k)]
        rels.append([sum(c * v[i] for c, v in zip(coeffs, kernel_gens)) for i in range(g + e)])
    if rng.random() < 0.6:
        rels.extend(kernel_gens[: rng.randint(0, k)])
    group, _, lift = presentation(g + e, rels or [[0] * (g + e)])
    p = [[int(i == j) for j in range(g)] + m[i] for i in range(g)]
    mat = _int_matmul(p, lift.tolist()) if group.ngens else [[] for _ in range(g)]
    return GroupMap(group, target, IntegerMatrix.from_rows(mat, group.ngens))


def _in_bounds(g: FgGroup, max_rank: int, max_torsion: int) -> bool:
    return g.free_rank <= max_rank and g.torsion_order <= max_torsion


def random_fg_sequence(rng: random.Random, length: int | None = None, max_rank: int = 4,
                       max_torsion: int = 60, attempts: int = 200) -> FgSequence:
    """A random exact ``0 -> A_0 -> ... -> A_n -> 0`` with ``n + 1 = length`` in 2..6."""
    n_groups = rng.randint(2, 6) if length is None else length
    for _ in range(attempts):
        try:
            return _draw_fg_sequence(rng, n_groups, max_rank, max_torsion)
        except Rejected:
            continue
    raise RuntimeError("could not draw an exact sequence within bounds")


def _draw_fg_sequence(rng: random.Random, n_groups: int, max_rank: int, max_torsion: int) -> FgSequence:
    last = random_fg_group(rng, max_rank, max_torsion)
    if n_groups == 2:
        return FgSequence((last, last), (identity_map(last),))
    maps: list[GroupMap] = []
    target, into = last, identity_map(last)
    for _ in range(n_groups - 2):
        f = random_surjection(rng, target)
        if not _in_bounds(f.domain, max_rank, max_torsion):
            raise Rejected
        maps.insert(0, compose(f, into))
        k, inc = kernel(f)
        if not _in_bounds(k, max_rank, max_torsion):
            raise Rejected
        target, into = k, inc
    maps.insert(0, into)
    groups = tuple([m.domain for m in maps] + [last])
    return FgSequence(groups, tuple(maps))


# -- based rational sequences ----------------------------------------------------

def random_based_sequence(rng: random.Random, length: int | None = None, max_dim: int = 4,
                          standard_bases: bool = False) -> BasedSequence:
    """A random exact sequence of based Q-spaces with ``length + 1`` terms.

    Ranks ``r_i`` of the maps are drawn first, so ``dim V_i = r_(i-1) + r_i``;
    the split maps are then conjugated by random invertible matrices.
    """
    n = rng.randint(1, 5) if length is None else length
    while True:
        ranks = [rng.randint(0, max_dim) for _ in range(n)]
        dims = [(ranks[i - 1] if i > 0 else 0) + (ranks[i] if i < n else 0) for i in range(n + 1)]
        if max(dims) <= max_dim:
            break
    gs = [random_invertible_rational(rng, d, 2) for d in dims]
    g_inv = [rational.inverse(g) if g else [] for g in gs]
    maps = []
    for i in range(n):
        r_in = ranks[i - 1] if i > 0 else 0
        t = rational.zeros(dims[i + 1], dims[i])
        for k in range(ranks[i]):
            t[k][r_in + k] = Fraction(1)
        maps.append(rational.matmul(rational.matmul(gs[i + 1], t, cols=dims[i]), g_inv[i], cols=dims[i]))
    bases = [BasedSpace.standard(d) if standard_bases else random_basis(rng, d) for d in dims]
    return BasedSequence(tuple(bases), tuple(maps))


def random_preimages(rng: random.Random, e: BasedSequence) -> list[list[Fraction]]:
    """Random lifts under the last map of a short exact sequence of the basis of ``V_2``."""
    if e.length != 2:
        raise ValueError("expected a short exact sequence")
    d0, d1, _ = e.dims
    t0, t1 = e.maps
    lifts = []
    for b in e.spaces[2].basis:
        x = rational.solve(t1, b, d1)
        if x is None:
            raise ValueError("last map is not surjective")
        shift = [Fraction(rng.randint(-3, 3), rng.choice((1, 2, 3))) for _ in range(d0)]
        lifts.append([a + c for a, c in zip(x, rational.matvec(t0, shift))] if d0 else x)
    return lifts


def random_grid(rng: random.Random, max_dim: int = 3) -> BasedGrid:
    """``V[i][j] = B_i (x) A_j`` from two random sequences, with random bases."""
    cols_seq = random_based_sequence(rng, rng.randint(1, 3), max_dim, standard_bases=True)
    rows_seq = random_based_sequence(rng, rng.randint(1, 3), max_dim, standard_bases=True)
    b, a = cols_seq.dims, rows_seq.dims
    eye = rational.identity
    spaces = tuple(tuple(random_basis(rng, bi * aj) for aj in a) for bi in b)
    horizontal = tuple(
        tuple(rational.kron(eye(bi), t, bi, a[j]) for j, t in enumerate(rows_seq.maps)) for bi in b)
    vertical = tuple(
        tuple(rational.kron(s, eye(aj), b[i], aj) for aj in a) for i, s in enumerate(cols_seq.maps))
    return BasedGrid(spaces, horizontal, vertical)


def random_isomorphism_grid(rng: random.Random, max_dim: int = 4
                            ) -> tuple[BasedSequence, BasedSequence, list[rational.Matrix]]:
    """Two short exact sequences joined by random vertical isomorphisms."""
    top = random_based_sequence(rng, 2, max_dim)
    thetas = [random_invertible_rational(rng, d, 2) for d in top.dims]
    maps = [rational.matmul(rational.matmul(thetas[j + 1], t, cols=top.dims[j]),
                            rational.inverse(thetas[j]) if top.dims[j] else [], cols=top.dims[j])
            for j, t in enumerate(top.maps)]
    bottom = BasedSequence(tuple(random_basis(rng, d) for d in top.dims), tuple(maps))
    return top, bottom, thetas


# -- cyclic modules ---------------------------------------------------------------

def _companion(poly: Sequence[int]) -> list[list[int]]:
    """Companion matrix of a monic integer polynomial (lowest degree first)."""
    d = len(poly) - 1
    c = [[0] * d for _ in range(d)]
    for i in range(1, d):
        c[i][i - 1] = 1
    for i in range(d):
        c[i][d - 1] = -poly[i]
    return c


def _shift(d: int) -> list[list[int]]:
    return [[int(i == (j + 1) % d) for j in range(d)] for i in range(d)]


def _block_diag(blocks: Sequence[Sequence[Sequence[int]]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            out[k + i][k:k + len(b)] = list(row)
        k += len(b)
    return out


def random_action_matrix(rng: random.Random, order: int, max_size: int = 4) -> list[list[int]]:
    """A random integer matrix ``S`` with ``S^order = I``."""
    divisors = [d for d in range(1, order + 1) if order % d == 0]
    blocks: list[list[list[int]]] = []
    size = 0
    for _ in range(rng.randint(1, 3)):
        d = rng.choice(divisors)
        block = _shift(d) if rng.random() < 0.4 else _companion(cyclotomic_polynomial(d))
        if size + len(block) > max_size:
            break
        blocks.append(block)
        size += len(block)
    if not blocks:
        blocks = [[[1]]]
    s = _block_diag(blocks)
    u, u_inv = random_unimodular(rng, len(s), steps=3)
    return _int_matmul(_int_matmul(u, s), u_inv)


def random_finite_cyclic_module(rng: random.Random, max_group_order: int = 6,
                                max_module_order: int = 500, attempts: int = 200) -> CyclicModule:
    """A random finite module over ``Z/m``, ``m <= max_group_order``.

    The module is ``Z^k / L`` where ``L = c Z^k + span(sigma-orbit of v)``.
    """
    for _ in range(attempts):
        m = rng.randint(1, max_group_order)
        s = random_action_matrix(rng, m)
        k = len(s)
        c = rng.randint(1, 6)
        rels = [[c * int(i == j) for j in range(k)] for i in range(k)]
        v = [rng.randint(-3, 3) for _ in range(k)]
        for _ in range(m):
            rels.append(v)
            v = [sum(s[i][j] * v[j] for j in range(k)) for i in range(k)]
        grp, _, _ = presentation(k, rels)
        if not grp.is_finite or grp.torsion_order > max_module_order:
            continue
        return cyclic_module_from_presentation(k, rels, s, m)
    raise RuntimeError("could not draw a cyclic module within bounds")
