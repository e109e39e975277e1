"""Zhang's height formula, local factors, and class identities on M_{g,1}^c.

Picard classes use the ordered basis ``(ψ, λ, δ_1, …, δ_{g-1})`` where δ_i is
the boundary class whose marked point sits on the genus-i component.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from ._exact import frac
from .metric_graph import lambda_graph

__all__ = [
    "PlaceKind",
    "PlaceData",
    "HeightInputs",
    "PicardClass",
    "zhang_height",
    "thmA_degree",
    "class_mu_pullback",
    "class_nu_pullback",
    "class_kappa_pullback",
    "verify_biextension_identity",
    "thmC_class",
    "degree_on_family",
    "lambda_from_phi_delta",
]


def _num(x):
    """Keep ints and Fractions exact, leave floats alone."""
    if isinstance(x, float):
        return x
    return frac(x)


def _require_genus(g: int) -> None:
    if g < 2:
        raise ValueError("genus must be at least 2")


class PlaceKind(str, Enum):
    REAL = "real"
    COMPLEX = "complex-pair"
    FINITE = "nonarch-finite"
    OTHER = "nonarch-other"


@dataclass(frozen=True)
class PlaceData:
    kind: PlaceKind
    phi: object
    q: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", PlaceKind(self.kind))
        object.__setattr__(self, "phi", _num(self.phi))
        if self.kind is PlaceKind.FINITE:
            if self.q is None or self.q < 2:
                raise ValueError("a finite place needs residue cardinality q >= 2")
        elif self.q is not None:
            raise ValueError("only finite places carry q")

    @property
    def log_nv(self):
        """``log Nv``: exact for real, complex and other places, float for finite ones."""
        if self.kind is PlaceKind.REAL or self.kind is PlaceKind.OTHER:
            return 1
        if self.kind is PlaceKind.COMPLEX:
            return 2
        return math.log(self.q)


@dataclass(frozen=True)
class HeightInputs:
    genus: int
    omega_sq: object
    height_xe: object
    places: tuple[PlaceData, ...] = ()

    def __post_init__(self):
        _require_genus(self.genus)
        object.__setattr__(self, "omega_sq", _num(self.omega_sq))
        object.__setattr__(self, "height_xe", _num(self.height_xe))
        object.__setattr__(self, "places", tuple(self.places))


def zhang_height(inp: HeightInputs):
    """``(2g+1)/(2g-2) (ω,ω)_a + 3/(2g-2) ĥ(x_e) - Σ_v φ(X_v) log Nv``.

    Returns a Fraction when every input is rational and no finite place occurs;
    otherwise a float, with the rational part summed exactly and combined last.
    """
    g = inp.genus
    exact = Fraction(2 * g + 1, 2 * g - 2) * inp.omega_sq + Fraction(3, 2 * g - 2) * inp.height_xe
    transcendental = 0.0
    for v in inp.places:
        if v.kind is PlaceKind.FINITE:
            transcendental += float(v.phi) * v.log_nv
        else:
            exact = exact - v.phi * v.log_nv
    if not inp.places or all(v.kind is not PlaceKind.FINITE for v in inp.places):
        return exact
    return float(exact) - transcendental


def thmA_degree(g: int, deg_omega_pair, deg_xe_pair) -> Fraction:
    """Degree of ⟨Δ_e,Δ_e⟩ over a projective base curve, from the isomorphism
    ``⟨Δ_e,Δ_e⟩^{2g-2} ≅ ⟨ω,ω⟩^{2g+1} ⊗ ⟨x_e,x_e⟩^{-3}``."""
    _require_genus(g)
    return ((2 * g + 1) * frac(deg_omega_pair) - 3 * frac(deg_xe_pair)) / (2 * g - 2)


@dataclass(frozen=True)
class PicardClass:
    genus: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        c = tuple(frac(x) for x in self.coefficients)
        if len(c) != self.genus + 1:
            raise ValueError(f"expected {self.genus + 1} coefficients")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def build(cls, g: int, psi=0, lam=0, delta: dict[int, object] | None = None) -> PicardClass:
        d = [Fraction(0)] * (g - 1)
        for i, c in (delta or {}).items():
            if not 1 <= i <= g - 1:
                raise ValueError(f"δ_{i} is not a boundary class for genus {g}")
            d[i - 1] += frac(c)
        return cls(g, (frac(psi), frac(lam), *d))

    @property
    def psi(self) -> Fraction:
        return self.coefficients[0]

    @property
    def lam(self) -> Fraction:
        return self.coefficients[1]

    def delta(self, i: int) -> Fraction:
        return self.coefficients[1 + i]

    def _same(self, other: PicardClass) -> None:
        if self.genus != other.genus:
            raise ValueError("genus mismatch")

    def __add__(self, other: PicardClass) -> PicardClass:
        self._same(other)
        return PicardClass(self.genus, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: PicardClass) -> PicardClass:
        return self + (-1) * other

    def __rmul__(self, s) -> PicardClass:
        s = frac(s)
        return PicardClass(self.genus, tuple(s * a for a in self.coefficients))

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def __str__(self) -> str:
        g = self.genus
        terms = [(self.psi, "ψ"), (self.lam, "λ")]
        terms += [(self.delta(i), f"δ_{i}") for i in range(g - 1, 0, -1)]
        out = ""
        for c, name in terms:
            if not c:
                continue
            mag = abs(c)
            body = name if mag == 1 else f"{mag}{name}"
            if not out:
                out = ("−" if c < 0 else "") + body
            else:
                out += (" − " if c < 0 else " + ") + body
        return out or "0"

    def to_json(self) -> dict:
        return {
            "genus": self.genus,
            "psi": str(self.psi),
            "lambda": str(self.lam),
            "delta": {str(i): str(self.delta(i)) for i in range(1, self.genus)},
            "text": str(self),
        }


def class_mu_pullback(g: int) -> PicardClass:
    """``μ*B̂_{∧³H} = 4g ψ + 8 λ - Σ_{i=1}^{g-1} 4i δ_{g-i}``."""
    _require_genus(g)
    return PicardClass.build(g, 4 * g, 8, {g - i: -4 * i for i in range(1, g)})


def class_nu_pullback(g: int) -> PicardClass:
    """``ν*B̂_{∧³H/H} = (8g+4) λ - Σ 4i(g-i) δ_i``."""
    _require_genus(g)
    return PicardClass.build(g, 0, 8 * g + 4, {i: -4 * i * (g - i) for i in range(1, g)})


def class_kappa_pullback(g: int) -> PicardClass:
    """``κ*B̂_H = 4g(g-1) ψ - 12 λ - Σ 4i(i-1) δ_{g-i}``."""
    _require_genus(g)
    return PicardClass.build(g, 4 * g * (g - 1), -12, {g - i: -4 * i * (i - 1) for i in range(1, g)})


def verify_biextension_identity(g: int, mu: PicardClass | None = None) -> bool:
    """Check ``(g-1) μ* = ν* + κ*`` exactly (optionally for a supplied μ* class)."""
    mu = class_mu_pullback(g) if mu is None else mu
    return (g - 1) * mu == class_nu_pullback(g) + class_kappa_pullback(g)


def thmC_class(g: int) -> PicardClass:
    """Class of the Bloch line bundle: ``(3/2) μ*B̂_{∧³H} = 6g ψ + 12 λ - Σ 6i δ_{g-i}``."""
    return Fraction(3, 2) * class_mu_pullback(g)


def degree_on_family(c: PicardClass, degrees: Sequence) -> Fraction:
    if len(degrees) != len(c.coefficients):
        raise ValueError(f"expected {len(c.coefficients)} degrees")
    return sum((a * frac(d) for a, d in zip(c.coefficients, degrees)), Fraction(0))


def lambda_from_phi_delta(g: int, phi, delta) -> Fraction:
    return lambda_graph(g, phi, delta)
