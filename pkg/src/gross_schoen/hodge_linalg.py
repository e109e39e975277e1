"""Exact exterior algebra on a symplectic lattice H of rank 2g.

Basis index ``i < g`` is ``a_{i+1}``, index ``g + i`` is ``b_{i+1}``, with
``(a_i, b_j) = δ_ij = -(b_j, a_i)`` and all other pairings zero.

The quotient ``∧³H/H`` is modelled by ``ker(c) ⊗ Q``: ``p`` followed by the
splitting ``j`` sends ``u`` to ``u - ζ ∧ c(u)/(g-1)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping

from ._exact import frac, rank

__all__ = [
    "SymplecticLattice",
    "ExteriorElement",
    "QuotientElement",
    "zeta",
    "wedge",
    "wedge_zeta",
    "contraction_c",
    "q_h",
    "q_wedge3",
    "splitting_j",
    "projection_p",
    "q_quotient",
    "contraction_matrix",
    "kernel_dimension",
]


@dataclass(frozen=True)
class SymplecticLattice:
    genus: int

    def __post_init__(self):
        if self.genus < 1:
            raise ValueError("genus must be positive")

    @property
    def rank(self) -> int:
        return 2 * self.genus

    def a(self, i: int) -> ExteriorElement:
        """``a_i`` for ``1 <= i <= g``."""
        return ExteriorElement.basis(i - 1)

    def b(self, i: int) -> ExteriorElement:
        return ExteriorElement.basis(self.genus + i - 1)

    def pairing(self, i: int, j: int) -> int:
        g = self.genus
        if i < g and j == i + g:
            return 1
        if j < g and i == j + g:
            return -1
        return 0

    def gram(self) -> list[list[int]]:
        n = self.rank
        return [[self.pairing(i, j) for j in range(n)] for i in range(n)]

    def label(self, i: int) -> str:
        g = self.genus
        return f"a{i + 1}" if i < g else f"b{i - g + 1}"


def _sort_sign(idx: Iterable[int]) -> tuple[int, tuple[int, ...]]:
    """Sign of the sorting permutation, or 0 on a repeated index."""
    s = list(idx)
    sign = 1
    for i in range(1, len(s)):
        j = i
        while j > 0 and s[j - 1] > s[j]:
            s[j - 1], s[j] = s[j], s[j - 1]
            sign = -sign
            j -= 1
    if any(x == y for x, y in zip(s, s[1:])):
        return 0, ()
    return sign, tuple(s)


class ExteriorElement:
    """Homogeneous element of ∧^k H with exact rational coefficients."""

    __slots__ = ("degree", "_terms")

    def __init__(self, degree: int, terms: Mapping[tuple[int, ...], object] = ()):
        self.degree = degree
        clean: dict[tuple[int, ...], Fraction] = {}
        for key, c in dict(terms).items():
            if len(key) != degree:
                raise ValueError("term of the wrong degree")
            if any(x >= y for x, y in zip(key, key[1:])):
                raise ValueError("keys must be strictly increasing")
            c = frac(c)
            if c:
                clean[tuple(key)] = c
        self._terms = clean

    @classmethod
    def basis(cls, i: int) -> ExteriorElement:
        return cls(1, {(i,): 1})

    @classmethod
    def zero(cls, degree: int) -> ExteriorElement:
        return cls(degree)

    @classmethod
    def from_coefficients(cls, degree: int, coeffs: Mapping) -> ExteriorElement:
        """Like the constructor but accepts unsorted keys, applying the sort sign."""
        acc: dict[tuple[int, ...], Fraction] = {}
        for key, c in coeffs.items():
            sign, k = _sort_sign(key)
            if sign:
                acc[k] = acc.get(k, Fraction(0)) + sign * frac(c)
        return cls(degree, acc)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def _check(self, other: ExteriorElement) -> None:
        if self.degree != other.degree:
            raise ValueError("degree mismatch")

    def __add__(self, other: ExteriorElement) -> ExteriorElement:
        self._check(other)
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, Fraction(0)) + c
        return ExteriorElement(self.degree, t)

    def __neg__(self) -> ExteriorElement:
        return ExteriorElement(self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: ExteriorElement) -> ExteriorElement:
        return self + (-other)

    def __mul__(self, s) -> ExteriorElement:
        s = frac(s)
        return ExteriorElement(self.degree, {k: s * c for k, c in self._terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, s) -> ExteriorElement:
        return self * (1 / frac(s))

    def __xor__(self, other: ExteriorElement) -> ExteriorElement:
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.degree, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        if not self._terms:
            return f"ExteriorElement({self.degree}, 0)"
        return f"ExteriorElement({self.degree}, {dict(sorted(self._terms.items()))})"

    def format(self, L: SymplecticLattice) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, c in sorted(self._terms.items()):
            mono = "∧".join(L.label(i) for i in key)
            parts.append(f"{c}·{mono}" if c != 1 else mono)
        return " + ".join(parts)


def wedge(x: ExteriorElement, y: ExteriorElement) -> ExteriorElement:
    acc: dict[tuple[int, ...], Fraction] = {}
    for kx, cx in x.items():
        for ky, cy in y.items():
            sign, k = _sort_sign(kx + ky)
            if sign:
                acc[k] = acc.get(k, Fraction(0)) + sign * cx * cy
    return ExteriorElement(x.degree + y.degree, acc)


def zeta(L: SymplecticLattice) -> ExteriorElement:
    """``ζ = Σ a_i ∧ b_i``, the element of ∧²H dual to the intersection form."""
    g = L.genus
    return ExteriorElement(2, {(i, i + g): 1 for i in range(g)})


def wedge_zeta(L: SymplecticLattice, x: ExteriorElement) -> ExteriorElement:
    if x.degree != 1:
        raise ValueError("wedge_zeta expects an element of H")
    return wedge(zeta(L), x)


def contraction_c(L: SymplecticLattice, w: ExteriorElement) -> ExteriorElement:
    """``x∧y∧z -> (x,y) z + (y,z) x + (z,x) y``, extended linearly."""
    if w.degree != 3:
        raise ValueError("contraction expects a degree-3 element")
    acc: dict[tuple[int, ...], Fraction] = {}
    pr = L.pairing
    for (x, y, z), c in w.items():
        for (p, q), r in (((x, y), z), ((y, z), x), ((z, x), y)):
            s = pr(p, q)
            if s:
                acc[(r,)] = acc.get((r,), Fraction(0)) + s * c
    return ExteriorElement(1, acc)


def q_h(L: SymplecticLattice, x: ExteriorElement, y: ExteriorElement) -> Fraction:
    if x.degree != 1 or y.degree != 1:
        raise ValueError("Q_H pairs elements of H")
    return sum((cx * cy * L.pairing(i, j) for (i,), cx in x.items() for (j,), cy in y.items()), Fraction(0))


def _det3(m) -> int:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def q_wedge3(L: SymplecticLattice, u: ExteriorElement, v: ExteriorElement) -> Fraction:
    """Polarization on ∧³H: ``(x1∧x2∧x3, y1∧y2∧y3) -> det((x_i, y_j))``."""
    if u.degree != 3 or v.degree != 3:
        raise ValueError("q_wedge3 pairs degree-3 elements")
    pr = L.pairing
    total = Fraction(0)
    for ku, cu in u.items():
        for kv, cv in v.items():
            d = _det3([[pr(i, j) for j in kv] for i in ku])
            if d:
                total += cu * cv * d
    return total


@dataclass(frozen=True)
class QuotientElement:
    """Element of ∧³H/H, stored as its representative in ker(c)."""

    representative: ExteriorElement


def splitting_j(L: SymplecticLattice, u: ExteriorElement) -> QuotientElement:
    """``p(u) -> u - ζ ∧ c(u)/(g-1)``: the section of the projection onto ∧³H/H."""
    g = L.genus
    if g < 2:
        raise ValueError("the splitting needs g >= 2")
    rep = u - wedge_zeta(L, contraction_c(L, u)) / (g - 1)
    return QuotientElement(rep)


projection_p = splitting_j


def q_quotient(L: SymplecticLattice, u: QuotientElement, v: QuotientElement) -> Fraction:
    """``(u, v) -> (g-1) Q_{∧³H}(j(u), j(v))``."""
    return (L.genus - 1) * q_wedge3(L, u.representative, v.representative)


def basis3(L: SymplecticLattice) -> list[tuple[int, int, int]]:
    return list(itertools.combinations(range(L.rank), 3))


def contraction_matrix(L: SymplecticLattice) -> list[list[Fraction]]:
    """Matrix of c from the sorted ∧³ basis to H (rows indexed by H)."""
    cols = basis3(L)
    M = [[Fraction(0)] * len(cols) for _ in range(L.rank)]
    for j, key in enumerate(cols):
        for (i,), c in contraction_c(L, ExteriorElement(3, {key: 1})).items():
            M[i][j] = c
    return M


def kernel_dimension(L: SymplecticLattice) -> int:
    return comb(L.rank, 3) - rank(contraction_matrix(L))
