"""Rational cohomology of X^n for a genus-g curve X, and the Gross-Schoen class.

H*(X) has basis ``1`` (index 0), ``a_1..a_g`` (1..g), ``b_1..b_g`` (g+1..2g)
and ``pt`` (2g+1), with ``a_i b_i = pt = -b_i a_i``.  Classes on X^n are
sums of pure tensors; products carry the Koszul sign.

The diagonal is ``[Δ] = pt⊗1 + 1⊗pt - Σ a_i⊗b_i + Σ b_i⊗a_i``.  This sign
choice is the one making ``[Δ]·(α⊗1) = [Δ]·(1⊗α)``, and it gives
``[Δ]² = 2 - 2g``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ._exact import frac

__all__ = [
    "SurfaceRing",
    "CohomClass",
    "diagonal_class",
    "point_class",
    "pullback",
    "gross_schoen_class",
    "gross_schoen_terms",
    "intersection_degree",
]


@dataclass(frozen=True)
class SurfaceRing:
    genus: int

    @property
    def one(self) -> int:
        return 0

    @property
    def pt(self) -> int:
        return 2 * self.genus + 1

    def a(self, i: int) -> int:
        return i

    def b(self, i: int) -> int:
        return self.genus + i

    def deg(self, x: int) -> int:
        if x == 0:
            return 0
        return 2 if x == self.pt else 1

    def mul(self, x: int, y: int) -> tuple[int, int]:
        """Product of two basis elements as ``(sign, basis index)``; sign 0 for zero."""
        if x == 0:
            return 1, y
        if y == 0:
            return 1, x
        g = self.genus
        if self.deg(x) == 1 and self.deg(y) == 1:
            if x <= g and y == x + g:
                return 1, self.pt
            if y <= g and x == y + g:
                return -1, self.pt
        return 0, 0

    def label(self, x: int) -> str:
        g = self.genus
        if x == 0:
            return "1"
        if x == self.pt:
            return "pt"
        return f"a{x}" if x <= g else f"b{x - g}"


class CohomClass:
    """Element of H*(X^n; Q) as a sparse sum of pure tensors."""

    __slots__ = ("ring", "n", "_terms")

    def __init__(self, ring: SurfaceRing, n: int, terms: Mapping[tuple[int, ...], object] = ()):
        self.ring = ring
        self.n = n
        clean = {}
        for k, c in dict(terms).items():
            if len(k) != n:
                raise ValueError("tensor of the wrong length")
            c = frac(c)
            if c:
                clean[tuple(k)] = c
        self._terms = clean

    @classmethod
    def one(cls, ring: SurfaceRing, n: int) -> CohomClass:
        return cls(ring, n, {(0,) * n: 1})

    def items(self):
        return self._terms.items()

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def degree_of(self, key: tuple[int, ...]) -> int:
        return sum(self.ring.deg(x) for x in key)

    @property
    def degrees(self) -> set[int]:
        return {self.degree_of(k) for k in self._terms}

    def is_zero(self) -> bool:
        return not self._terms

    def _same(self, other: CohomClass) -> None:
        if self.n != other.n or self.ring != other.ring:
            raise ValueError("classes live on different spaces")

    def __add__(self, other: CohomClass) -> CohomClass:
        self._same(other)
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, Fraction(0)) + c
        return CohomClass(self.ring, self.n, t)

    def __neg__(self) -> CohomClass:
        return CohomClass(self.ring, self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: CohomClass) -> CohomClass:
        return self + (-other)

    def scale(self, s) -> CohomClass:
        s = frac(s)
        return CohomClass(self.ring, self.n, {k: s * c for k, c in self._terms.items()})

    def __rmul__(self, s) -> CohomClass:
        return self.scale(s)

    def __mul__(self, other) -> CohomClass:
        if not isinstance(other, CohomClass):
            return self.scale(other)
        self._same(other)
        R = self.ring
        acc: dict[tuple[int, ...], Fraction] = {}
        for kx, cx in self._terms.items():
            dx = [R.deg(x) for x in kx]
            for ky, cy in other._terms.items():
                # moving y_j left past x_i for i > j
                sign = 1
                parity = 0
                suffix = 0
                for i in range(self.n - 1, -1, -1):
                    if i + 1 < self.n:
                        suffix += dx[i + 1]
                    parity += suffix * R.deg(ky[i])
                if parity % 2:
                    sign = -1
                key = []
                for x, y in zip(kx, ky):
                    s, z = R.mul(x, y)
                    if not s:
                        break
                    sign *= s
                    key.append(z)
                else:
                    k = tuple(key)
                    acc[k] = acc.get(k, Fraction(0)) + sign * cx * cy
        return CohomClass(R, self.n, acc)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CohomClass):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n, self.ring, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"CohomClass(n={self.n}, {self.format()})"

    def format(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items()):
            t = "⊗".join(self.ring.label(x) for x in k)
            parts.append(t if c == 1 else f"{c}·{t}")
        return " + ".join(parts)


def pullback(c: CohomClass, n: int, factors: tuple[int, ...]) -> CohomClass:
    """Pull a class on X^m back to X^n along the projection onto ``factors`` (1-based)."""
    if len(factors) != c.n:
        raise ValueError("one target factor per source factor")
    if any(not 1 <= f <= n for f in factors) or len(set(factors)) != len(factors):
        raise ValueError("factor index out of range")
    out = {}
    for k, coef in c.items():
        key = [0] * n
        for f, x in zip(factors, k):
            key[f - 1] = x
        # reordering the odd factors costs a Koszul sign
        odd = [(f, x) for f, x in zip(factors, k) if c.ring.deg(x) % 2]
        inv = sum(1 for i in range(len(odd)) for j in range(i + 1, len(odd)) if odd[i][0] > odd[j][0])
        out[tuple(key)] = coef * (-1) ** inv
    return CohomClass(c.ring, n, out)


def diagonal_class(g: int, n: int = 2, i: int = 1, j: int = 2) -> CohomClass:
    """Künneth class of ``{x_i = x_j}`` in X^n."""
    if not (1 <= i < j <= n):
        raise ValueError("need 1 <= i < j <= n")
    R = SurfaceRing(g)
    terms: dict[tuple[int, int], int] = {(R.pt, 0): 1, (0, R.pt): 1}
    for k in range(1, g + 1):
        terms[(R.a(k), R.b(k))] = -1
        terms[(R.b(k), R.a(k))] = 1
    return pullback(CohomClass(R, 2, terms), n, (i, j))


def point_class(g: int, n: int, i: int, multiplicity=1) -> CohomClass:
    if not 1 <= i <= n:
        raise ValueError("factor index out of range")
    R = SurfaceRing(g)
    key = [0] * n
    key[i - 1] = R.pt
    return CohomClass(R, n, {tuple(key): multiplicity})


def gross_schoen_terms(g: int, e_degree=1) -> dict[str, CohomClass]:
    """Classes of the seven cycles entering ``Δ_e``, with ``[e] = deg(e)·pt``."""
    d12 = diagonal_class(g, 3, 1, 2)
    d13 = diagonal_class(g, 3, 1, 3)
    d23 = diagonal_class(g, 3, 2, 3)
    p = {i: point_class(g, 3, i, e_degree) for i in (1, 2, 3)}
    return {
        "123": d12 * d23,
        "12": d12 * p[3],
        "13": d13 * p[2],
        "23": d23 * p[1],
        "1": p[2] * p[3],
        "2": p[1] * p[3],
        "3": p[1] * p[2],
    }


def gross_schoen_class(g: int, e_degree=1) -> CohomClass:
    """``Δ_123 - Δ_12 - Δ_13 - Δ_23 + Δ_1 + Δ_2 + Δ_3`` in H⁴(X³)."""
    t = gross_schoen_terms(g, e_degree)
    return t["123"] - t["12"] - t["13"] - t["23"] + t["1"] + t["2"] + t["3"]


def intersection_degree(c: CohomClass) -> Fraction:
    """Coefficient of ``pt⊗…⊗pt`` for a top-degree class."""
    top = 2 * c.n
    if any(d != top for d in c.degrees):
        raise ValueError("class is not of top degree")
    return c.terms.get((c.ring.pt,) * c.n, Fraction(0))
