"""Finitely generated abelian groups in canonical form and maps between them.

A group is ``Z/d_1 + ... + Z/d_k + Z^r`` with ``d_1 | d_2 | ... | d_k`` and
every ``d_i >= 2``.  Elements are integer vectors of length ``k + r``
(torsion coordinates first).  A :class:`GroupMap` is an integer matrix whose
``j``-th column is the image of the ``j``-th domain generator.

Subgroups and quotients are computed inside the ambient lattice ``Z^n`` that
covers a group, so every result comes back with explicit generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Sequence

from . import rational
from .smith import IntegerMatrix, divisibility_chain, smith_normal_form

Vector = list[int]


@dataclass(frozen=True)
class FgGroup:
    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0
    generator_labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        if any(d < 2 for d in self.invariant_factors):
            raise ValueError(f"invariant factors must be >= 2: {self.invariant_factors}")
        if not divisibility_chain(self.invariant_factors):
            raise ValueError(f"invariant factors {self.invariant_factors} are not a divisibility chain")
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if self.generator_labels is not None and len(self.generator_labels) != self.ngens:
            raise ValueError("one label per generator")

    @property
    def ngens(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def ntors(self) -> int:
        return len(self.invariant_factors)

    @property
    def torsion_order(self) -> int:
        return prod(self.invariant_factors)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    def relation_columns(self) -> list[Vector]:
        """Generators of the relation lattice inside ``Z^ngens``."""
        cols = []
        for i, d in enumerate(self.invariant_factors):
            v = [0] * self.ngens
            v[i] = d
            cols.append(v)
        return cols

    def reduce(self, v: Sequence[int]) -> Vector:
        out = [int(x) for x in v]
        if len(out) != self.ngens:
            raise ValueError(f"element of length {len(out)} in a group with {self.ngens} generators")
        for i, d in enumerate(self.invariant_factors):
            out[i] %= d
        return out

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariant_factors] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def parse_group(text: str) -> FgGroup:
    """Inverse of ``str(FgGroup)``, e.g. ``"Z/2 + Z/4 + Z"``."""
    text = text.strip()
    if text in ("0", ""):
        return FgGroup()
    factors, free = [], 0
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            free += 1
        elif part.startswith("Z/"):
            factors.append(int(part[2:]))
        else:
            raise ValueError(f"cannot parse group summand {part!r}")
    return FgGroup(tuple(sorted(factors)), free)


# -- lattice helpers --------------------------------------------------------

def _matrix_from_columns(cols: Sequence[Sequence[int]], n: int) -> IntegerMatrix:
    return IntegerMatrix.from_rows([[int(c[i]) for c in cols] for i in range(n)], len(cols))


def _lattice_basis(cols: Sequence[Sequence[int]], n: int) -> list[Vector]:
    """A Z-basis of the lattice spanned by ``cols`` in ``Z^n``."""
    if not cols:
        return []
    d = smith_normal_form(_matrix_from_columns(cols, n))
    return [[d.u[i, j] * d.s[j, j] for i in range(n)] for j in range(d.rank)]


def _integer_kernel(a: IntegerMatrix) -> list[Vector]:
    """A Z-basis of ``{x in Z^cols : a x = 0}``."""
    d = smith_normal_form(a)
    return [d.v_inv.column(j) for j in range(d.rank, a.cols)]


def _in_lattice(basis: Sequence[Sequence[int]], v: Sequence[int], n: int) -> bool:
    if not basis:
        return not any(v)
    x = rational.solve(rational.from_columns(basis, n), v, len(basis))
    return x is not None and all(c.denominator == 1 for c in x)


def _same_lattice(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], n: int) -> bool:
    ba, bb = _lattice_basis(a, n), _lattice_basis(b, n)
    return len(ba) == len(bb) and all(_in_lattice(bb, v, n) for v in ba) \
        and all(_in_lattice(ba, v, n) for v in bb)


class Subquotient:
    """The group ``span(gens) / span(rels)`` for lattices ``rels <= gens`` in ``Z^n``.

    ``generators`` holds the ambient vectors of the canonical generators and
    :meth:`coords` maps an ambient vector of ``span(gens)`` to canonical
    coordinates.
    """

    def __init__(self, n: int, gens: Sequence[Sequence[int]], rels: Sequence[Sequence[int]]):
        self.n = n
        basis = _lattice_basis(gens, n)
        self._basis = rational.from_columns(basis, n)
        t = len(basis)
        rel_coords = []
        for r in rels:
            c = self._solve(r)
            if c is None:
                raise ValueError("relation lattice is not contained in the generating lattice")
            rel_coords.append(c)
        d = smith_normal_form(_matrix_from_columns(rel_coords, t))
        diag = [d.s[j, j] if j < min(d.s.rows, d.s.cols) else 0 for j in range(t)]
        self._keep = [j for j in range(t) if diag[j] != 1]
        self._u_inv = d.u_inv
        factors = tuple(diag[j] for j in self._keep if diag[j] != 0)
        free = sum(1 for j in self._keep if diag[j] == 0)
        self.group = FgGroup(factors, free)
        self.generators = [
            [sum(basis[k][i] * d.u[k, j] for k in range(t)) for i in range(n)] for j in self._keep]

    def _solve(self, v: Sequence[int]) -> list[int] | None:
        t = len(self._basis[0]) if self._basis else 0
        if t == 0:
            return [] if not any(v) else None
        x = rational.solve(self._basis, v, t)
        if x is None or any(c.denominator != 1 for c in x):
            return None
        return [int(c) for c in x]

    def contains(self, v: Sequence[int]) -> bool:
        return self._solve(v) is not None

    def coords(self, v: Sequence[int]) -> Vector:
        c = self._solve(v)
        if c is None:
            raise ValueError(f"{list(v)} is not in the generating lattice")
        t = len(c)
        y = [sum(self._u_inv[j, k] * c[k] for k in range(t)) for j in range(t)]
        return self.group.reduce([y[j] for j in self._keep])


# -- maps --------------------------------------------------------------------

@dataclass(frozen=True)
class GroupMap:
    domain: FgGroup
    codomain: FgGroup
    matrix: IntegerMatrix

    def __post_init__(self):
        m = self.matrix
        if not isinstance(m, IntegerMatrix):
            m = IntegerMatrix.from_rows(m, self.domain.ngens)
        if (m.rows, m.cols) != (self.codomain.ngens, self.domain.ngens):
            raise ValueError(
                f"map matrix is {m.rows}x{m.cols}, expected "
                f"{self.codomain.ngens}x{self.domain.ngens}")
        cols = [self.codomain.reduce(m.column(j)) for j in range(m.cols)]
        for j, d in enumerate(self.domain.invariant_factors):
            if not self.codomain.is_zero([d * x for x in cols[j]]):
                raise ValueError(
                    f"map is not well defined: generator {j} has order {d} "
                    f"but its image {cols[j]} does not")
        object.__setattr__(self, "matrix", _matrix_from_columns(cols, m.rows))

    def __call__(self, v: Sequence[int]) -> Vector:
        m = self.matrix
        return self.codomain.reduce(
            [sum(m[i, j] * v[j] for j in range(m.cols)) for i in range(m.rows)])

    def columns(self) -> list[Vector]:
        return [self.matrix.column(j) for j in range(self.matrix.cols)]


def identity_map(g: FgGroup) -> GroupMap:
    return GroupMap(g, g, IntegerMatrix.identity(g.ngens))


def zero_map(a: FgGroup, b: FgGroup) -> GroupMap:
    return GroupMap(a, b, IntegerMatrix.zero(b.ngens, a.ngens))


def group_from_presentation(n_generators: int, relations: IntegerMatrix | Sequence[Sequence[int]]
                            ) -> FgGroup:
    """The cokernel of the relation rows, in canonical form."""
    return presentation(n_generators, relations)[0]


def presentation(n_generators: int, relations: IntegerMatrix | Sequence[Sequence[int]]
                 ) -> tuple[FgGroup, IntegerMatrix, IntegerMatrix]:
    """Canonicalize ``Z^n / <relation rows>``.

    Returns the group, the projection matrix (canonical coordinates of each
    presentation generator) and the lift matrix (presentation coordinates of
    each canonical generator).
    """
    if not isinstance(relations, IntegerMatrix):
        relations = IntegerMatrix.from_rows(relations, n_generators)
    if relations.cols != n_generators:
        raise ValueError(f"relations have {relations.cols} columns, expected {n_generators}")
    rels = [list(relations.tolist()[i]) for i in range(relations.rows)]
    eye = [[int(i == j) for i in range(n_generators)] for j in range(n_generators)]
    sq = Subquotient(n_generators, eye, rels)
    proj = _matrix_from_columns([sq.coords(e) for e in eye], sq.group.ngens)
    lift = _matrix_from_columns(sq.generators, n_generators)
    return sq.group, proj, lift


def torsion_order(g: FgGroup) -> int:
    return g.torsion_order


def rank(g: FgGroup) -> int:
    return g.free_rank


def _preimage_lattice(f: GroupMap) -> list[Vector]:
    """Generators of ``{x in Z^n_dom : f(x) = 0}``; contains the domain relations."""
    a, b = f.domain, f.codomain
    rel_b = b.relation_columns()
    stacked = IntegerMatrix.from_rows(
        [list(f.matrix.tolist()[i]) + [c[i] for c in rel_b] for i in range(b.ngens)],
        a.ngens + len(rel_b))
    return [v[:a.ngens] for v in _integer_kernel(stacked)]


def _kernel_sq(f: GroupMap) -> Subquotient:
    return Subquotient(f.domain.ngens, _preimage_lattice(f), f.domain.relation_columns())


def _image_sq(f: GroupMap) -> Subquotient:
    rel_b = f.codomain.relation_columns()
    return Subquotient(f.codomain.ngens, f.columns() + rel_b, rel_b)


def kernel(f: GroupMap) -> tuple[FgGroup, GroupMap]:
    """The kernel of ``f`` together with its inclusion into ``f.domain``."""
    sq = _kernel_sq(f)
    incl = GroupMap(sq.group, f.domain, _matrix_from_columns(sq.generators, f.domain.ngens))
    return sq.group, incl


def image(f: GroupMap) -> FgGroup:
    return _image_sq(f).group


def image_inclusion(f: GroupMap) -> GroupMap:
    sq = _image_sq(f)
    return GroupMap(sq.group, f.codomain, _matrix_from_columns(sq.generators, f.codomain.ngens))


def cokernel(f: GroupMap) -> FgGroup:
    return cokernel_projection(f).codomain


def cokernel_projection(f: GroupMap) -> GroupMap:
    b = f.codomain
    eye = [[int(i == j) for i in range(b.ngens)] for j in range(b.ngens)]
    sq = Subquotient(b.ngens, eye, f.columns() + b.relation_columns())
    return GroupMap(b, sq.group, _matrix_from_columns([sq.coords(e) for e in eye], sq.group.ngens))


def compose(f: GroupMap, g: GroupMap) -> GroupMap:
    """``g`` after ``f``."""
    if f.codomain != g.domain:
        raise ValueError(f"cannot compose: codomain {f.codomain} is not domain {g.domain}")
    return GroupMap(f.domain, g.codomain, g.matrix @ f.matrix)


def add_maps(f: GroupMap, g: GroupMap, scale: int = 1) -> GroupMap:
    """``f + scale * g``."""
    if (f.domain, f.codomain) != (g.domain, g.codomain):
        raise ValueError("maps have different domains or codomains")
    m = [[x + scale * y for x, y in zip(r1, r2)]
         for r1, r2 in zip(f.matrix.tolist(), g.matrix.tolist())]
    return GroupMap(f.domain, f.codomain, IntegerMatrix.from_rows(m, f.domain.ngens))


def is_zero_map(f: GroupMap) -> bool:
    return all(f.codomain.is_zero(c) for c in f.columns())


def is_injective(f: GroupMap) -> bool:
    return kernel(f)[0].is_trivial


def is_surjective(f: GroupMap) -> bool:
    return cokernel(f).is_trivial


def is_exact_at(f: GroupMap, g: GroupMap) -> bool:
    """Whether ``im f == ker g`` as subgroups of ``f.codomain``."""
    if f.codomain != g.domain:
        raise ValueError(f"cannot test exactness: {f.codomain} is not {g.domain}")
    if not is_zero_map(compose(f, g)):
        return False
    n = f.codomain.ngens
    return _same_lattice(f.columns() + f.codomain.relation_columns(), _preimage_lattice(g), n)


def torsion_subgroup(g: FgGroup) -> GroupMap:
    """Inclusion of the torsion subgroup."""
    t = FgGroup(g.invariant_factors)
    m = [[int(i == j) for j in range(t.ngens)] for i in range(g.ngens)]
    return GroupMap(t, g, IntegerMatrix.from_rows(m, t.ngens))


def free_quotient_matrix(f: GroupMap) -> list[list[int]]:
    """The map induced on ``A/A_tor -> B/B_tor`` in the standard integral bases."""
    a, b = f.domain, f.codomain
    return [[f.matrix[i, j] for j in range(a.ntors, a.ngens)] for i in range(b.ntors, b.ngens)]


def torsion_restriction_cokernel_order(f: GroupMap) -> int:
    """Order of the cokernel of ``f`` restricted to torsion subgroups."""
    a, b = f.domain, f.codomain
    rel_b = b.relation_columns()
    tors_images = f.columns()[:a.ntors]
    img = Subquotient(b.ngens, tors_images + rel_b, rel_b).group
    if not img.is_finite:
        raise AssertionError("image of a torsion subgroup must be finite")
    return b.torsion_order // img.torsion_order


def direct_sum(groups: Sequence[FgGroup]) -> tuple[FgGroup, list[GroupMap]]:
    """Canonical direct sum with the inclusion of each summand."""
    n = sum(g.ngens for g in groups)
    rels, offsets, off = [], [], 0
    for g in groups:
        offsets.append(off)
        for c in g.relation_columns():
            rels.append([0] * off + c + [0] * (n - off - g.ngens))
        off += g.ngens
    total, proj, _ = presentation(n, rels)
    incls = []
    for g, off in zip(groups, offsets):
        cols = [proj.column(off + j) for j in range(g.ngens)]
        incls.append(GroupMap(g, total, _matrix_from_columns(cols, total.ngens)))
    return total, incls
