"""Determinants of exact sequences of based rational vector spaces.

For an exact sequence ``0 -> V_0 -> V_1 -> ... -> V_n -> 0`` with an ordered
basis on every space, :func:`nu` returns its positive determinant as an exact
``Fraction``.  Two independent routes are provided:

* :func:`nu` splits the sequence into short exact pieces
  ``0 -> K_i -> V_i -> K_{i+1} -> 0`` (with ``K_i`` the image of the
  incoming map) and multiplies their wedge ratios with alternating exponents;
* :func:`nu_inductive` follows the inductive definition literally, peeling
  off the last three terms until the sequence has length one or two.

Finitely generated abelian groups enter through :class:`FgSequence` and
:func:`realify`, which tensors with Q using the integral bases of the free
quotients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from . import rational
from .groups import (FgGroup, GroupMap, cokernel, free_quotient_matrix, is_exact_at,
                     is_injective, is_surjective, torsion_restriction_cokernel_order)

Rows = tuple[tuple[Fraction, ...], ...]


class NotExactError(ValueError):
    pass


class NotCommutativeError(ValueError):
    pass


def _freeze(a: Sequence[Sequence]) -> Rows:
    return tuple(tuple(Fraction(x) for x in row) for row in a)


@dataclass(frozen=True)
class BasedSpace:
    """``Q^d`` with an ordered basis; ``basis[k]`` is the k-th basis vector."""

    basis: Rows

    def __post_init__(self):
        b = _freeze(self.basis)
        object.__setattr__(self, "basis", b)
        d = len(b)
        if any(len(v) != d for v in b):
            raise ValueError("basis vectors must have length equal to the dimension")
        if rational.det(self.matrix()) == 0:
            raise ValueError("basis vectors are linearly dependent")

    @classmethod
    def standard(cls, dim: int) -> BasedSpace:
        return cls(_freeze(rational.identity(dim)))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def matrix(self) -> rational.Matrix:
        """Basis vectors as columns."""
        return rational.from_columns(self.basis, len(self.basis))

    def volume(self) -> Fraction:
        return abs(rational.det(self.matrix()))

    def dual(self) -> BasedSpace:
        inv_t = rational.transpose(rational.inverse(self.matrix()))
        return BasedSpace(_freeze(rational.columns(inv_t, self.dimension)))


def _shape_ok(t: Rows, rows: int, cols: int) -> bool:
    return len(t) == rows and all(len(r) == cols for r in t)


@dataclass(frozen=True)
class BasedSequence:
    """``0 -> V_0 -T_0-> V_1 -> ... -T_{n-1}-> V_n -> 0``.

    ``maps[i]`` is the ``dim V_{i+1} x dim V_i`` matrix of ``T_i`` in ambient
    coordinates.  Exactness is checked at construction.
    """

    spaces: tuple[BasedSpace, ...]
    maps: tuple[Rows, ...]

    def __post_init__(self):
        spaces = tuple(self.spaces)
        maps = tuple(_freeze(t) for t in self.maps)
        object.__setattr__(self, "spaces", spaces)
        object.__setattr__(self, "maps", maps)
        if not spaces:
            raise ValueError("a sequence needs at least one space")
        if len(maps) != len(spaces) - 1:
            raise ValueError("need exactly one map between consecutive spaces")
        dims = [v.dimension for v in spaces]
        for i, t in enumerate(maps):
            if not _shape_ok(t, dims[i + 1], dims[i]):
                raise ValueError(f"map {i} must be {dims[i + 1]}x{dims[i]}")
        ranks = [rational.rank(t, dims[i]) for i, t in enumerate(maps)]
        for i in range(len(spaces)):
            r_in = ranks[i - 1] if i > 0 else 0
            r_out = ranks[i] if i < len(maps) else 0
            if r_in + r_out != dims[i]:
                raise NotExactError(f"sequence is not exact at position {i}")
        for i in range(len(maps) - 1):
            comp = rational.matmul(maps[i + 1], maps[i], cols=dims[i])
            if not rational.is_zero(comp):
                raise NotExactError(f"maps {i} and {i + 1} do not compose to zero")

    @classmethod
    def standard(cls, maps: Sequence[Sequence[Sequence]], dims: Sequence[int]) -> BasedSequence:
        return cls(tuple(BasedSpace.standard(d) for d in dims), tuple(_freeze(t) for t in maps))

    @property
    def length(self) -> int:
        """The ``n`` in ``V_0 ... V_n``."""
        return len(self.spaces) - 1

    @property
    def dims(self) -> list[int]:
        return [v.dimension for v in self.spaces]

    def with_bases(self, bases: Sequence[BasedSpace]) -> BasedSequence:
        return BasedSequence(tuple(bases), self.maps)


def _abs_det_in_basis(vectors: Sequence[Sequence], space: BasedSpace) -> Fraction:
    """``|det|`` of ``vectors`` (as columns) measured against ``space``'s basis."""
    d = space.dimension
    return abs(rational.det(rational.from_columns(vectors, d))) / space.volume()


def _e(j: int, n: int) -> list[Fraction]:
    v = [Fraction(0)] * n
    v[j] = Fraction(1)
    return v


def nu(e: BasedSequence) -> Fraction:
    dims = e.dims
    pivots = [rational.pivot_columns(t, dims[i]) for i, t in enumerate(e.maps)]
    result = Fraction(1)
    for i, space in enumerate(e.spaces):
        incoming = [] if i == 0 else \
            [[row[j] for row in e.maps[i - 1]] for j in pivots[i - 1]]
        lifts = [] if i == e.length else [_e(j, dims[i]) for j in pivots[i]]
        delta = _abs_det_in_basis(incoming + lifts, space)
        result *= delta if i % 2 else 1 / delta
    return result


def nu_two_term(e: BasedSequence, preimages: Sequence[Sequence] | None = None) -> Fraction:
    """The ``n = 2`` wedge ratio, optionally with caller-chosen preimages.

    ``preimages[k]`` must satisfy ``T_1 x = w_k`` for the k-th basis vector
    ``w_k`` of ``V_2``; by default the first-pivot Gaussian solution is used.
    """
    if e.length != 2:
        raise ValueError("nu_two_term needs a sequence V_0 -> V_1 -> V_2")
    v0, v1, v2 = e.spaces
    t0, t1 = e.maps
    images = [rational.matvec(t0, u) for u in v0.basis]
    if preimages is None:
        preimages = []
        for w in v2.basis:
            x = rational.solve(t1, w, v1.dimension)
            if x is None:
                raise NotExactError("last map is not surjective")
            preimages.append(x)
    else:
        preimages = [list(map(Fraction, x)) for x in preimages]
        for x, w in zip(preimages, v2.basis):
            if rational.matvec(t1, x) != list(w):
                raise ValueError("supplied vector is not a preimage")
    return _abs_det_in_basis(images + preimages, v1)


def nu_inductive(e: BasedSequence) -> Fraction:
    """The determinant by the recursive definition (independent of :func:`nu`)."""
    n = e.length
    if n == 0:
        return Fraction(1)
    if n == 1:
        v0, v1 = e.spaces
        images = [rational.matvec(e.maps[0], u) for u in v0.basis]
        return _abs_det_in_basis(images, v1)
    if n == 2:
        return nu_two_term(e)
    big_n = n - 1
    e1, e2 = split(e, big_n - 1)
    return nu_inductive(e1) * nu_inductive(e2) ** ((-1) ** (big_n - 1))


def split(e: BasedSequence, i: int) -> tuple[BasedSequence, BasedSequence]:
    """Cut at ``J = im T_i``: ``V_0..V_i -> J`` and ``J -> V_{i+1}..V_n``.

    ``J`` gets the standard basis on the first-pivot columns of ``T_i``.
    """
    if not 0 <= i < e.length:
        raise ValueError(f"split position must be in [0, {e.length})")
    t = e.maps[i]
    dim_in, dim_out = e.dims[i], e.dims[i + 1]
    piv = rational.pivot_columns(t, dim_in)
    j_basis = [[row[c] for row in t] for c in piv]
    r = len(piv)
    incl = rational.from_columns(j_basis, dim_out)
    corestrict = []
    for c in range(dim_in):
        y = rational.solve(incl, [row[c] for row in t], r)
        corestrict.append(y)
    alpha = rational.from_columns(corestrict, r)
    j_space = BasedSpace.standard(r)
    e1 = BasedSequence(e.spaces[:i + 1] + (j_space,), e.maps[:i] + (_freeze(alpha),))
    e2 = BasedSequence((j_space,) + e.spaces[i + 1:], (_freeze(incl),) + e.maps[i + 1:])
    return e1, e2


def dual(e: BasedSequence) -> BasedSequence:
    """``0 -> V_n* -> ... -> V_0* -> 0`` with transposed maps and dual bases."""
    dims = e.dims
    maps = tuple(_freeze(rational.transpose(t, dims[i])) for i, t in enumerate(e.maps))
    return BasedSequence(tuple(v.dual() for v in reversed(e.spaces)), tuple(reversed(maps)))


# -- finitely generated abelian groups ---------------------------------------

@dataclass(frozen=True)
class FgSequence:
    """``0 -> A_0 -> A_1 -> ... -> A_n -> 0``; exactness is verified."""

    groups: tuple[FgGroup, ...]
    maps: tuple[GroupMap, ...]

    def __post_init__(self):
        groups, maps = tuple(self.groups), tuple(self.maps)
        object.__setattr__(self, "groups", groups)
        object.__setattr__(self, "maps", maps)
        if not groups or len(maps) != len(groups) - 1:
            raise ValueError("need n+1 groups and n maps")
        for i, f in enumerate(maps):
            if f.domain != groups[i] or f.codomain != groups[i + 1]:
                raise ValueError(f"map {i} does not go from group {i} to group {i + 1}")
        if not maps:
            if not groups[0].is_trivial:
                raise NotExactError("0 -> A -> 0 is exact only for A = 0")
            return
        if not is_injective(maps[0]):
            raise NotExactError("first map is not injective")
        if not is_surjective(maps[-1]):
            raise NotExactError("last map is not surjective")
        for i in range(len(maps) - 1):
            if not is_exact_at(maps[i], maps[i + 1]):
                raise NotExactError(f"sequence is not exact at position {i + 1}")

    @property
    def length(self) -> int:
        return len(self.groups) - 1


def realify(e: FgSequence) -> BasedSequence:
    dims = [g.free_rank for g in e.groups]
    return BasedSequence.standard([free_quotient_matrix(f) for f in e.maps], dims)


def nu_from_torsion(e: FgSequence) -> Fraction:
    """Alternating product of torsion orders, exponent ``(-1)^i`` from the left."""
    result = Fraction(1)
    for i, g in enumerate(e.groups):
        result *= Fraction(g.torsion_order) ** ((-1) ** i)
    return result


@dataclass(frozen=True)
class DetTorReport:
    nu_geometric: Fraction
    nu_torsion: Fraction

    @property
    def equal(self) -> bool:
        return self.nu_geometric == self.nu_torsion


def check_det_tor(e: FgSequence) -> DetTorReport:
    return DetTorReport(nu(realify(e)), nu_from_torsion(e))


def five_term_middle_nu(e: FgSequence) -> Fraction:
    """``nu`` of ``0 -> B_R -> C_R -> D_R -> 0`` for ``0 -> A -> B -> C -> D -> E -> 0``."""
    if e.length != 4:
        raise ValueError("expected five groups A, B, C, D, E")
    a, _, _, _, last = e.groups
    if not (a.is_finite and last.is_finite):
        raise ValueError("the outer groups A and E must be finite")
    dims = [g.free_rank for g in e.groups[1:4]]
    return nu(BasedSequence.standard([free_quotient_matrix(f) for f in e.maps[1:3]], dims))


def five_term_formulas(e: FgSequence) -> tuple[Fraction, Fraction]:
    """``[B_tor][D_tor]/([A][C_tor][E])`` and ``[cok psi_tor]/[cok psi]``."""
    a, b, c, d, last = e.groups
    psi = e.maps[2]
    by_orders = Fraction(b.torsion_order * d.torsion_order,
                         a.torsion_order * c.torsion_order * last.torsion_order)
    cok = cokernel(psi)
    by_cokernels = Fraction(torsion_restriction_cokernel_order(psi), cok.torsion_order)
    return by_orders, by_cokernels


# -- commutative grids --------------------------------------------------------

@dataclass(frozen=True)
class BasedGrid:
    """A commutative ``(m+1) x (n+1)`` diagram with exact rows and columns.

    ``horizontal[i][j]: V[i][j] -> V[i][j+1]`` and
    ``vertical[i][j]: V[i][j] -> V[i+1][j]``.
    """

    spaces: tuple[tuple[BasedSpace, ...], ...]
    horizontal: tuple[tuple[Rows, ...], ...]
    vertical: tuple[tuple[Rows, ...], ...]

    def __post_init__(self):
        sp = tuple(tuple(r) for r in self.spaces)
        hz = tuple(tuple(_freeze(t) for t in r) for r in self.horizontal)
        vt = tuple(tuple(_freeze(t) for t in r) for r in self.vertical)
        object.__setattr__(self, "spaces", sp)
        object.__setattr__(self, "horizontal", hz)
        object.__setattr__(self, "vertical", vt)
        m1, n1 = len(sp), len(sp[0])
        if any(len(r) != n1 for r in sp) or len(hz) != m1 or len(vt) != m1 - 1:
            raise ValueError("grid shape mismatch")
        if any(len(r) != n1 - 1 for r in hz) or any(len(r) != n1 for r in vt):
            raise ValueError("grid map count mismatch")
        for i in range(m1 - 1):
            for j in range(n1 - 1):
                d = sp[i][j].dimension
                down_right = rational.matmul(vt[i][j + 1], hz[i][j], cols=d)
                right_down = rational.matmul(hz[i + 1][j], vt[i][j], cols=d)
                if down_right != right_down:
                    raise NotCommutativeError(f"square at ({i}, {j}) does not commute")
        # exactness is checked by building every row and column
        self.rows()
        self.columns()

    def rows(self) -> list[BasedSequence]:
        return [BasedSequence(r, h) for r, h in zip(self.spaces, self.horizontal)]

    def columns(self) -> list[BasedSequence]:
        m1, n1 = len(self.spaces), len(self.spaces[0])
        return [BasedSequence(tuple(self.spaces[i][j] for i in range(m1)),
                              tuple(self.vertical[i][j] for i in range(m1 - 1)))
                for j in range(n1)]


@dataclass(frozen=True)
class GridReport:
    column_product: Fraction
    row_product: Fraction

    @property
    def equal(self) -> bool:
        return self.column_product == self.row_product


def _alternating(values: Sequence[Fraction]) -> Fraction:
    return prod((v ** ((-1) ** i) for i, v in enumerate(values)), start=Fraction(1))


def grid_check(grid: BasedGrid) -> GridReport:
    return GridReport(_alternating([nu(c) for c in grid.columns()]),
                      _alternating([nu(r) for r in grid.rows()]))


def map_abs_det(theta: Sequence[Sequence], source: BasedSpace, target: BasedSpace) -> Fraction:
    """``|det theta|`` with respect to the two bases."""
    if source.dimension != target.dimension:
        raise ValueError("an isomorphism needs equal dimensions")
    images = [rational.matvec(theta, u) for u in source.basis]
    return _abs_det_in_basis(images, target)


def isomorphism_ratio(top: BasedSequence, bottom: BasedSequence,
                      thetas: Sequence[Sequence[Sequence]]) -> tuple[Fraction, Fraction]:
    """Both sides of ``|det t1||det t3|/|det t2| = nu(top)/nu(bottom)``.

    ``top`` and ``bottom`` are short exact and ``thetas`` are vertical
    isomorphisms making the two squares commute.
    """
    if top.length != 2 or bottom.length != 2 or len(thetas) != 3:
        raise ValueError("need two short exact sequences and three vertical maps")
    for j in range(2):
        d = top.dims[j]
        if rational.matmul(thetas[j + 1], top.maps[j], cols=d) != \
                rational.matmul(bottom.maps[j], thetas[j], cols=d):
            raise NotCommutativeError(f"square {j} does not commute")
    dets = [map_abs_det(t, s, b) for t, s, b in zip(thetas, top.spaces, bottom.spaces)]
    if any(d == 0 for d in dets):
        raise ValueError("vertical maps must be isomorphisms")
    return dets[0] * dets[2] / dets[1], nu(top) / nu(bottom)
