"""Archimedean φ-invariant from spectral data.

Each mode supplies a positive Laplace eigenvalue and the g×g matrix of
pairings ``∫ φ_ℓ ω_m ∧ conj(ω_n)`` against an orthonormal basis of
holomorphic differentials.  Computing those from a Riemann surface is not
attempted here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SpectralError", "SpectralDatum", "SpectralDataset", "phi_spectral", "conjugate_basis"]


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralDatum:
    eigenvalue: float
    pairing: np.ndarray

    def __post_init__(self):
        M = np.asarray(self.pairing, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise SpectralError("pairing matrix must be square")
        M.setflags(write=False)
        object.__setattr__(self, "pairing", M)
        object.__setattr__(self, "eigenvalue", float(self.eigenvalue))


@dataclass(frozen=True)
class SpectralDataset:
    genus: int
    modes: tuple[SpectralDatum, ...]
    tail_bound: float = 0.0

    def __post_init__(self):
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        if self.genus < 2:
            raise SpectralError("genus must be at least 2")
        if not modes:
            raise SpectralError("no spectral modes given")
        for d in modes:
            if d.pairing.shape != (self.genus, self.genus):
                raise SpectralError(f"pairing matrix must be {self.genus}x{self.genus}")
        lams = [d.eigenvalue for d in modes]
        if any(b < a for a, b in zip(lams, lams[1:])):
            raise SpectralError("eigenvalues must be non-decreasing")
        if self.tail_bound < 0:
            raise SpectralError("tail bound must be non-negative")

    def with_mode(self, d: SpectralDatum) -> SpectralDataset:
        return SpectralDataset(self.genus, self.modes + (d,), self.tail_bound)


def phi_spectral(data: SpectralDataset) -> tuple[float, float]:
    """Return ``(value, tail_bound)``.

    ``value = Σ_ℓ (2/λ_ℓ) Σ_{m,n} |M_ℓ[m,n]|²`` over the supplied modes; the true
    invariant lies in ``[value, value + tail_bound]``.
    """
    total = 0.0
    for d in data.modes:
        if d.eigenvalue <= 0:
            raise SpectralError("zero mode included")
        total += 2.0 / d.eigenvalue * float(np.sum(np.abs(d.pairing) ** 2))
    return total, float(data.tail_bound)


def conjugate_basis(data: SpectralDataset, U, tol: float = 1e-12) -> SpectralDataset:
    """Change the orthonormal basis of differentials: ``M -> U M U*``."""
    U = np.asarray(U, dtype=complex)
    g = data.genus
    if U.shape != (g, g):
        raise SpectralError("U has the wrong shape")
    if not np.allclose(U @ U.conj().T, np.eye(g), rtol=0, atol=tol):
        raise SpectralError("U is not unitary")
    Uh = U.conj().T
    return SpectralDataset(
        g,
        tuple(SpectralDatum(d.eigenvalue, U @ d.pairing @ Uh) for d in data.modes),
        data.tail_bound,
    )
