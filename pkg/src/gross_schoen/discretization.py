"""Floating-point discretization oracle for the metrized-graph invariants.

Every edge is cut into ``N`` equal segments and the resulting weighted graph is
handled with sparse numerical linear algebra.  Measures are lumped onto the
nodes with trapezoid weights, so the quadrature error is ``O(1/N^2)``
(first order is the documented floor).  Nothing here uses the exact
polynomial kernel of :mod:`gross_schoen.metric_graph`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .metric_graph import GraphError, MetrizedGraph

__all__ = ["OracleResult", "discretization_oracle"]


@dataclass
class OracleResult:
    atoms: dict[str, float]
    densities: dict[int, float]
    green_diagonal: dict[int, np.ndarray]  # values at the N+1 nodes of each edge, from u to v
    phi: float
    segments: int


def _tridiag_inverse_diagonal(d: np.ndarray, off: np.ndarray) -> np.ndarray:
    """Diagonal of the inverse of a symmetric positive-definite tridiagonal matrix."""
    n = len(d)
    fwd = np.empty(n)
    bwd = np.empty(n)
    fwd[0] = d[0]
    for i in range(1, n):
        fwd[i] = d[i] - off[i - 1] ** 2 / fwd[i - 1]
    bwd[-1] = d[-1]
    for i in range(n - 2, -1, -1):
        bwd[i] = d[i] - off[i] ** 2 / bwd[i + 1]
    return 1.0 / (fwd + bwd - d)


class _Discretized:
    def __init__(self, G: MetrizedGraph, N: int):
        self.G = G
        self.N = N
        V = len(G.vertices)
        self.vindex = {vid: i for i, vid in enumerate(G.vertex_ids)}
        # node lists per edge, endpoints included
        self.edge_nodes: list[np.ndarray] = []
        nxt = V
        rows, cols, vals = [], [], []
        for e in G.edges:
            interior = np.arange(nxt, nxt + N - 1)
            nxt += N - 1
            nodes = np.concatenate(([self.vindex[e.u]], interior, [self.vindex[e.v]]))
            self.edge_nodes.append(nodes)
            c = N / float(e.length)
            a, b = nodes[:-1], nodes[1:]
            rows += [a, b, a, b]
            cols += [a, b, b, a]
            vals += [np.full(N, c), np.full(N, c), np.full(N, -c), np.full(N, -c)]
        self.n = nxt
        if rows:
            lap = sp.coo_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(nxt, nxt)
            ).tocsc()
        else:
            lap = sp.csc_matrix((nxt, nxt))
        self.V = V
        # ground vertex 0
        keep = np.arange(1, nxt)
        self.L0 = lap[keep][:, keep].tocsc()
        self._lu = splu(self.L0) if nxt > 1 else None
        self.diag = self._grounded_inverse_diagonal()

    def _grounded_inverse_diagonal(self) -> np.ndarray:
        out = np.zeros(self.n)
        if self.n == 1:
            return out
        V, N = self.V, self.N
        # grounded ordering: vertices 1..V-1 then interior nodes
        nC = V - 1
        A = self.L0[nC:, nC:].tocsc()
        B = self.L0[nC:, :nC].toarray()
        C = self.L0[:nC, :nC].toarray()
        dA = np.empty(A.shape[0])
        Ad = A.diagonal()
        off = A.diagonal(1)
        for k in range(len(self.G.edges)):
            s = slice(k * (N - 1), (k + 1) * (N - 1))
            o = off[s.start : s.stop - 1]
            dA[s] = _tridiag_inverse_diagonal(Ad[s], o)
        if nC:
            Z = splu(A).solve(B)
            S = C - B.T @ Z
            Sinv = np.linalg.inv(S)
            out[V:] = dA + np.einsum("ij,jk,ik->i", Z, Sinv, Z)
            out[1:V] = np.diag(Sinv)
        else:
            out[V:] = dA
        return out

    def apply_inverse(self, b: np.ndarray) -> np.ndarray:
        out = np.zeros(self.n)
        if self._lu is not None:
            out[1:] = self._lu.solve(b[1:])
        return out

    def potential(self, b: np.ndarray) -> np.ndarray:
        """R_b(x) = Σ_ζ b_ζ r(x, ζ) at every node."""
        return b.sum() * self.diag + self.diag @ b - 2 * self.apply_inverse(b)

    def vertex_atom(self, vid: str) -> np.ndarray:
        b = np.zeros(self.n)
        b[self.vindex[vid]] = 1.0
        return b

    def edge_density(self, k: int) -> np.ndarray:
        b = np.zeros(self.n)
        h = float(self.G.edges[k].length) / self.N
        nodes = self.edge_nodes[k]
        np.add.at(b, nodes[1:-1], h)
        np.add.at(b, nodes[[0, -1]], h / 2)
        return b


def discretization_oracle(G: MetrizedGraph, segments_per_edge: int) -> OracleResult:
    """Approximate admissible measure, ``g_μ(x,x)`` and ``φ`` on an ``N``-fold subdivision."""
    if segments_per_edge < 2:
        raise ValueError("segments_per_edge must be at least 2")
    G.require_connected()
    gbar = G.total_genus
    if gbar < 1:
        raise GraphError("no admissible measure in genus 0")
    D = _Discretized(G, segments_per_edge)
    vids = G.vertex_ids
    E = len(G.edges)
    basis = [D.vertex_atom(v) for v in vids] + [D.edge_density(k) for k in range(E)]
    masses = np.array([1.0] * len(vids) + [float(e.length) for e in G.edges])
    K = np.zeros(D.n)
    for v in vids:
        K[D.vindex[v]] = 2 * G.genus_of(v) - 2 + G.valence(v)
    pots = np.column_stack([D.potential(b) for b in basis])
    rhs = 0.5 * D.potential(K)
    # unknowns: basis coefficients, then the constant; equality-constrained least squares
    A = np.hstack([gbar * pots, -np.ones((D.n, 1))])
    m = np.append(masses, 0.0)
    kkt = np.block([[A.T @ A, m[:, None]], [m[None, :], np.zeros((1, 1))]])
    sol = np.linalg.lstsq(kkt, np.append(A.T @ rhs, 1.0), rcond=None)[0]
    coef = sol[: len(basis)]

    mu = sum(c * b for c, b in zip(coef, basis))
    R = D.potential(mu)
    const = 0.5 * mu @ R
    gdiag = R - const
    delta = float(G.total_length)
    phi = -delta / 4 + 0.25 * gdiag @ ((10 * gbar + 2) * mu - K)
    return OracleResult(
        atoms={v: float(c) for v, c in zip(vids, coef[: len(vids)])},
        densities={k: float(c) for k, c in enumerate(coef[len(vids) :])},
        green_diagonal={k: gdiag[nodes] for k, nodes in enumerate(D.edge_nodes)},
        phi=float(phi),
        segments=segments_per_edge,
    )
