"""Exact arithmetic in the cyclotomic field Q(zeta_m).

Elements are coefficient vectors on the power basis ``1, zeta, ...,
zeta^(phi(m)-1)``, always reduced modulo the m-th cyclotomic polynomial.
The complex embedding indexed by ``k`` (``gcd(k, m) = 1``) sends ``zeta`` to
``exp(2 pi i k / m)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _exact_divide(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _exact_divide(num: list[int], den: list[int]) -> list[int]:
    num = num[:]
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("polynomial division is not exact")
    return q


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


def units_mod(m: int) -> list[int]:
    return [k for k in range(1, m + 1) if math.gcd(k, m) == 1] if m > 1 else [1]


def _reduce(coeffs: Sequence[Fraction], m: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(m)
    deg = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            for j in range(deg + 1):
                c[i - deg + j] -= lead * phi[j]
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(c)


@dataclass(frozen=True)
class CycloElement:
    conductor: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", _reduce(self.coefficients, self.conductor))

    # construction -------------------------------------------------------
    @classmethod
    def from_int(cls, m: int, value: int | Fraction) -> CycloElement:
        return cls(m, (Fraction(value),))

    @classmethod
    def zeta(cls, m: int, power: int = 1) -> CycloElement:
        c = [Fraction(0)] * (power % m) + [Fraction(1)]
        return cls(m, tuple(c))

    @classmethod
    def from_powers(cls, m: int, terms: dict[int, int | Fraction]) -> CycloElement:
        """Sum of ``c * zeta^k`` for ``k -> c`` in ``terms``."""
        c = [Fraction(0)] * m
        for k, v in terms.items():
            c[k % m] += Fraction(v)
        return cls(m, tuple(c))

    # arithmetic ---------------------------------------------------------
    def _check(self, other: CycloElement) -> None:
        if other.conductor != self.conductor:
            raise ValueError(f"conductor mismatch: {self.conductor} vs {other.conductor}")

    def _coerce(self, other) -> CycloElement:
        if isinstance(other, (int, Fraction)):
            return CycloElement.from_int(self.conductor, other)
        if isinstance(other, CycloElement):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloElement(self.conductor, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.conductor, tuple(-a for a in self.coefficients))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.coefficients, other.coefficients
        prod_ = [Fraction(0)] * max(len(a) + len(b) - 1, 0)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod_[i + j] += x * y
        return CycloElement(self.conductor, tuple(prod_))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return power(self, k)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def is_integral(self) -> bool:
        """Whether the element lies in Z[zeta], the ring of integers."""
        return all(c.denominator == 1 for c in self.coefficients)

    def is_rational(self) -> bool:
        return not any(self.coefficients[1:])

    def inverse(self) -> CycloElement:
        """Field inverse, via the product of the nontrivial conjugates."""
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        m = self.conductor
        others = CycloElement.from_int(m, 1)
        for k in units_mod(m):
            if k % m != 1 % m:
                others = others * galois_apply(self, k)
        n = (self * others).coefficients[0]
        return others * (1 / n)

    def embed(self, k: int = 1) -> complex:
        m = self.conductor
        z = cmath.exp(2j * math.pi * k / m)
        return sum((float(c) * z ** i for i, c in enumerate(self.coefficients)), 0j)

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coefficients):
            if c:
                mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
                coef = str(c) if (i == 0 or abs(c) != 1) else ("-" if c < 0 else "")
                terms.append(f"{coef}{'*' if mono and coef not in ('', '-') else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ") if terms else "0"


def multiply(a: CycloElement, b: CycloElement) -> CycloElement:
    return a * b


def norm_to_q(a: CycloElement) -> Fraction:
    """The absolute norm N_{Q(zeta_m)/Q}(a)."""
    m = a.conductor
    out = CycloElement.from_int(m, 1)
    for k in units_mod(m):
        out = out * galois_apply(a, k)
    if not out.is_rational():
        raise ArithmeticError("norm is not rational")
    return out.coefficients[0]


def is_unit(a: CycloElement) -> bool:
    return a.is_integral() and not a.is_zero() and abs(norm_to_q(a)) == 1


def power(a: CycloElement, k: int) -> CycloElement:
    """``a^k``; a negative exponent requires ``a`` to be a unit of Z[zeta]."""
    if k < 0:
        if not is_unit(a):
            raise ValueError(f"{a} is not a unit, cannot raise to {k}")
        return power(a.inverse(), -k)
    result = CycloElement.from_int(a.conductor, 1)
    base = a
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def product(elements: Iterable[CycloElement], exponents: Iterable[int], m: int) -> CycloElement:
    out = CycloElement.from_int(m, 1)
    for x, e in zip(elements, exponents):
        if e:
            out = out * power(x, e)
    return out


def galois_apply(a: CycloElement, k: int) -> CycloElement:
    """The automorphism ``zeta -> zeta^k``."""
    m = a.conductor
    if math.gcd(k, m) != 1:
        raise ValueError(f"{k} is not a unit modulo {m}")
    c = [Fraction(0)] * m
    for i, x in enumerate(a.coefficients):
        c[(i * k) % m] += x
    return CycloElement(m, tuple(c))


def log_abs_at_place(a: CycloElement, k: int = 1) -> float:
    """``log |a|_v`` at the complex place of embedding ``k``, i.e. ``log |a(k)|^2``."""
    if math.gcd(k, a.conductor) != 1:
        raise ValueError(f"{k} is not a unit modulo {a.conductor}")
    if a.is_zero():
        raise ValueError("log of zero")
    return 2.0 * math.log(abs(a.embed(k)))


def multiplicative_order(a: CycloElement, bound: int | None = None) -> int | None:
    """Smallest ``n >= 1`` with ``a^n = 1``, searched up to ``bound`` (default 2m)."""
    m = a.conductor
    one = CycloElement.from_int(m, 1)
    x = a
    for n in range(1, (bound or 2 * m) + 1):
        if x == one:
            return n
        x = x * a
    return None


def norm_to_quadratic_subfield(a: CycloElement, sigma: int) -> CycloElement:
    """``a * sigma(a)`` for an involution ``sigma``; the result must be sigma-fixed."""
    m = a.conductor
    if (sigma * sigma) % m != 1 % m or sigma % m == 1 % m:
        raise ValueError(f"{sigma} does not generate a subgroup of order 2 mod {m}")
    n = a * galois_apply(a, sigma)
    if galois_apply(n, sigma) != n:
        raise ArithmeticError("norm is not fixed by sigma")
    return n


def relative_norm(a: CycloElement, sigma: int, degree: int) -> CycloElement:
    """``prod_{i < degree} sigma^i(a)``."""
    out = CycloElement.from_int(a.conductor, 1)
    x = a
    for _ in range(degree):
        out = out * x
        x = galois_apply(x, sigma)
    return out


def parse_coefficients(values: Sequence[str | int], m: int) -> CycloElement:
    return CycloElement(m, tuple(Fraction(v) for v in values))


def format_coefficients(a: CycloElement) -> list[str]:
    return [str(c) for c in a.coefficients]
