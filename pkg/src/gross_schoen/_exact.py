"""Exact rational helpers: univariate polynomials and Gauss-Jordan elimination."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Number = int | Fraction


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


class Poly:
    """Polynomial in one variable with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        c = [frac(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(c)

    @classmethod
    def const(cls, a: Number) -> Poly:
        return cls((a,))

    @classmethod
    def var(cls) -> Poly:
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def __call__(self, t: Number) -> Fraction:
        acc = Fraction(0)
        for a in reversed(self.coeffs):
            acc = acc * t + a
        return acc

    def _lift(self, other) -> Poly:
        return other if isinstance(other, Poly) else Poly.const(other)

    def __add__(self, other) -> Poly:
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self.coeff(k) + o.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly(-a for a in self.coeffs)

    def __sub__(self, other) -> Poly:
        return self + (-self._lift(other))

    def __rsub__(self, other) -> Poly:
        return self._lift(other) - self

    def __mul__(self, other) -> Poly:
        if not isinstance(other, Poly):
            s = frac(other)
            return Poly(a * s for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return self.coeffs == self._lift(other).coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def derivative(self) -> Poly:
        return Poly(k * a for k, a in enumerate(self.coeffs) if k)

    def antiderivative(self) -> Poly:
        return Poly([0] + [a / (k + 1) for k, a in enumerate(self.coeffs)])

    def integrate(self, a: Number, b: Number) -> Fraction:
        F = self.antiderivative()
        return F(b) - F(a)

    def shift(self, s: Number) -> Poly:
        """Return t -> self(t + s)."""
        acc = Poly()
        x = Poly((s, 1))
        for a in reversed(self.coeffs):
            acc = acc * x + a
        return acc

    def __repr__(self) -> str:
        return f"Poly({[str(a) for a in self.coeffs]})"


# --- linear algebra over Q -------------------------------------------------

Matrix = list[list[Fraction]]


def rref(A: Sequence[Sequence[Number]]) -> tuple[Matrix, list[int]]:
    M = [[frac(x) for x in row] for row in A]
    pivots: list[int] = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                Mi, Mr = M[i], M[r]
                M[i] = [a - f * b for a, b in zip(Mi, Mr)]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M, pivots


def rank(A: Sequence[Sequence[Number]]) -> int:
    if not A:
        return 0
    return len(rref(A)[1])


def inverse(A: Sequence[Sequence[Number]]) -> Matrix:
    n = len(A)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


class InconsistentSystem(ValueError):
    pass


def solve_least_norm(A: Sequence[Sequence[Number]], b: Sequence[Number]) -> list[Fraction]:
    """Minimum-norm exact solution of a consistent system A x = b."""
    ncols = len(A[0])
    R, piv = rref([list(row) + [b_i] for row, b_i in zip(A, b)])
    if ncols in piv:
        raise InconsistentSystem("system has no solution")
    rows = [row[:ncols] for row in R[: len(piv)]]
    rhs = [row[ncols] for row in R[: len(piv)]]
    if len(piv) == ncols:
        x = [Fraction(0)] * ncols
        for row, c, v in zip(rows, piv, rhs):
            x[c] = v
        return x
    # x = B^T (B B^T)^{-1} rhs with B the independent reduced rows
    gram = [[sum(p * q for p, q in zip(r1, r2)) for r2 in rows] for r1 in rows]
    gi = inverse(gram)
    y = [sum(gi[i][j] * rhs[j] for j in range(len(rhs))) for i in range(len(rhs))]
    return [sum(rows[i][k] * y[i] for i in range(len(rows))) for k in range(ncols)]
