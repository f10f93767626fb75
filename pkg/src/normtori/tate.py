"""Tate cohomology of a finite cyclic group acting on a f.g. abelian group."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groups import (FgGroup, GroupMap, Subquotient, _preimage_lattice, add_maps,
                     compose, identity_map, presentation)
from .smith import IntegerMatrix


@dataclass(frozen=True)
class CyclicModule:
    """``module`` with the action of a generator ``sigma`` of ``Z/order``."""

    module: FgGroup
    sigma: GroupMap
    order: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("group order must be positive")
        if self.sigma.domain != self.module or self.sigma.codomain != self.module:
            raise ValueError("sigma must be an endomorphism of the module")
        if sigma_power(self, self.order) != identity_map(self.module):
            raise ValueError(f"sigma^{self.order} is not the identity")


def sigma_power(cm: CyclicModule, k: int) -> GroupMap:
    out = identity_map(cm.module)
    for _ in range(k):
        out = compose(out, cm.sigma)
    return out


def cyclic_module_from_presentation(n_generators: int, relations: Sequence[Sequence[int]],
                                    sigma: Sequence[Sequence[int]], order: int) -> CyclicModule:
    """Build a module from ``Z^n / <relation rows>`` and an action matrix on ``Z^n``.

    ``sigma`` acts on column vectors; its ``j``-th column is the image of the
    ``j``-th presentation generator.  It must preserve the relation lattice.
    """
    group, proj, lift = presentation(n_generators, relations)
    s = IntegerMatrix.from_rows(sigma, n_generators)
    canon = proj @ s @ lift
    try:
        sig = GroupMap(group, group, canon)
    except ValueError as exc:
        raise ValueError("sigma does not preserve the relations") from exc
    # sigma must also be well defined on the presentation itself
    for r in (relations.tolist() if isinstance(relations, IntegerMatrix) else relations):
        img = [sum(s[i, j] * r[j] for j in range(n_generators)) for i in range(n_generators)]
        if not group.is_zero([sum(proj[a, b] * img[b] for b in range(n_generators))
                              for a in range(group.ngens)]):
            raise ValueError("sigma does not preserve the relations")
    return CyclicModule(group, sig, order)


def norm_endomorphism(cm: CyclicModule) -> GroupMap:
    """``1 + sigma + ... + sigma^(order-1)``."""
    total = sigma_power(cm, 0)
    power_ = identity_map(cm.module)
    for _ in range(1, cm.order):
        power_ = compose(power_, cm.sigma)
        total = add_maps(total, power_)
    return total


def augmentation_map(cm: CyclicModule) -> GroupMap:
    """``sigma - 1``."""
    return add_maps(cm.sigma, identity_map(cm.module), scale=-1)


def _kernel_mod_image(kernel_of: GroupMap, image_of: GroupMap) -> FgGroup:
    m = kernel_of.domain
    rels = image_of.columns() + m.relation_columns()
    return Subquotient(m.ngens, _preimage_lattice(kernel_of), rels).group


def tate_h0(cm: CyclicModule) -> FgGroup:
    """Fixed points modulo norms."""
    return _kernel_mod_image(augmentation_map(cm), norm_endomorphism(cm))


def tate_h_minus1(cm: CyclicModule) -> FgGroup:
    """Norm kernel modulo ``(sigma - 1) M``; equals H^1 by periodicity."""
    return _kernel_mod_image(norm_endomorphism(cm), augmentation_map(cm))


tate_h1 = tate_h_minus1


def herbrand_quotient(cm: CyclicModule) -> Fraction:
    h0, h1 = tate_h0(cm), tate_h_minus1(cm)
    if not (h0.is_finite and h1.is_finite):
        raise ValueError("Tate groups of a finite cyclic group are always finite; input is inconsistent")
    return Fraction(h0.torsion_order, h1.torsion_order)


def module_direct_sum(a: CyclicModule, b: CyclicModule) -> CyclicModule:
    if a.order != b.order:
        raise ValueError("modules are over different cyclic groups")
    na, nb = a.module.ngens, b.module.ngens
    rels = [c + [0] * nb for c in a.module.relation_columns()]
    rels += [[0] * na + c for c in b.module.relation_columns()]
    sa, sb = a.sigma.matrix.tolist(), b.sigma.matrix.tolist()
    sigma = [row + [0] * nb for row in sa] + [[0] * na + row for row in sb]
    return cyclic_module_from_presentation(na + nb, rels, sigma, a.order)
