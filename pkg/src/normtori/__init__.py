"""Exact tools for Euler characteristics and special values attached to norm tori.

Modules:

* ``groups`` and ``smith``: finitely generated abelian groups via Smith normal form.
* ``exactdet``: determinants of exact sequences of based rational spaces.
* ``tate``: Tate cohomology of cyclic groups acting on f.g. abelian groups.
* ``cyclo``: exact arithmetic in cyclotomic fields.
* ``fielddata``: validated number-field and extension records.
* ``torus``: unit kernels, regulators, class numbers and L*-values of norm tori.
"""

from .groups import FgGroup, GroupMap, cokernel, image, kernel
from .smith import IntegerMatrix, smith_normal_form

__version__ = "0.1.0"

__all__ = ["FgGroup", "GroupMap", "IntegerMatrix", "cokernel", "image", "kernel",
           "smith_normal_form", "__version__"]
