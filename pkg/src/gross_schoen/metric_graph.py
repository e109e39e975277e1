"""Exact potential theory on polarized metrized graphs.

A graph carries vertex genus marks and positive rational edge lengths.  Points
are either vertex ids (``str``) or :class:`EdgePoint` instances.  Edge ``k`` is
parametrized by arclength ``t`` in ``[0, length]`` from ``u`` to ``v``.

Everything here is exact over :class:`fractions.Fraction`.  Conventions:

* ``Δf = -f'' dx - Σ_p (sum of outgoing slopes of f at p) δ_p``;
* ``g_μ(x, ·)`` solves ``Δ g_μ(x, ·) = δ_x - μ`` with ``∫ g_μ(x, y) dμ(y) = 0``;
* ``δ(Γ)`` is the total edge length.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from ._exact import InconsistentSystem, Poly, frac, inverse, solve_least_norm

__all__ = [
    "GraphError",
    "AnsatzInsufficient",
    "GenusOneWarning",
    "Vertex",
    "Edge",
    "EdgePoint",
    "MetrizedGraph",
    "GraphDivisor",
    "GraphMeasure",
    "EdgePolynomial",
    "PiecewiseFunction",
    "circle",
    "theta",
    "dumbbell",
    "point_graph",
    "subdivide",
    "effective_resistance",
    "canonical_divisor",
    "admissible_measure",
    "green_function",
    "green_slice",
    "green_diagonal",
    "green_diagonal_function",
    "admissibility_residual",
    "integrate_against",
    "phi_graph",
    "lambda_graph",
]


class GraphError(ValueError):
    pass


class AnsatzInsufficient(GraphError):
    pass


class GenusOneWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    genus: int = 0


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    length: Fraction

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class EdgePoint:
    edge: int
    offset: Fraction


Point = Union[str, EdgePoint]


@dataclass(frozen=True)
class MetrizedGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        vs = tuple(v if isinstance(v, Vertex) else Vertex(*v) for v in self.vertices)
        es = tuple(
            Edge(e.u, e.v, frac(e.length)) if isinstance(e, Edge) else Edge(e[0], e[1], frac(e[2]))
            for e in self.edges
        )
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        if not vs:
            raise GraphError("graph has no vertices")
        ids = [v.id for v in vs]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate vertex id")
        for v in vs:
            if v.genus < 0:
                raise GraphError(f"negative genus at vertex {v.id!r}")
        known = set(ids)
        for k, e in enumerate(es):
            if e.u not in known or e.v not in known:
                raise GraphError(f"edge {k} has an unknown endpoint")
            if e.length <= 0:
                raise GraphError(f"edge {k} has non-positive length")

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable = ()) -> MetrizedGraph:
        """Build from ``(id, genus)`` pairs (or bare ids) and ``(u, v, length)`` triples."""
        vs = [Vertex(v) if isinstance(v, str) else Vertex(*v) for v in vertices]
        return cls(tuple(vs), tuple(Edge(u, v, frac(l)) for u, v, l in edges))

    @property
    def vertex_ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def genus_of(self, vid: str) -> int:
        for v in self.vertices:
            if v.id == vid:
                return v.genus
        raise KeyError(vid)

    def valence(self, vid: str) -> int:
        return sum((e.u == vid) + (e.v == vid) for e in self.edges)

    @property
    def betti(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def total_genus(self) -> int:
        return self.betti + sum(v.genus for v in self.vertices)

    @property
    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def is_connected(self) -> bool:
        adj = defaultdict(set)
        for e in self.edges:
            adj[e.u].add(e.v)
            adj[e.v].add(e.u)
        start = self.vertices[0].id
        seen, stack = {start}, [start]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.vertices)

    def require_connected(self) -> None:
        if not self.is_connected():
            raise GraphError("not connected")

    def scaled(self, t) -> MetrizedGraph:
        t = frac(t)
        return MetrizedGraph(self.vertices, tuple(Edge(e.u, e.v, e.length * t) for e in self.edges))

    def without_edge(self, k: int) -> MetrizedGraph:
        return MetrizedGraph(self.vertices, self.edges[:k] + self.edges[k + 1 :])

    def normalize(self, x: Point) -> Point:
        """Validate ``x`` and map edge endpoints to vertex ids."""
        if isinstance(x, str):
            if x not in self.vertex_ids:
                raise GraphError(f"unknown vertex {x!r}")
            return x
        if not 0 <= x.edge < len(self.edges):
            raise GraphError(f"unknown edge {x.edge}")
        e = self.edges[x.edge]
        off = frac(x.offset)
        if off < 0 or off > e.length:
            raise GraphError(f"offset {off} outside edge {x.edge}")
        if off == 0:
            return e.u
        if off == e.length:
            return e.v
        return EdgePoint(x.edge, off)


def circle(length=1, genus: int = 0) -> MetrizedGraph:
    return MetrizedGraph.build([("o", genus)], [("o", "o", length)])


def theta(a=1, b=1, c=1) -> MetrizedGraph:
    return MetrizedGraph.build(["p", "q"], [("p", "q", a), ("p", "q", b), ("p", "q", c)])


def dumbbell(loop1=1, bridge=1, loop2=1) -> MetrizedGraph:
    return MetrizedGraph.build(
        ["p", "q"], [("p", "p", loop1), ("p", "q", bridge), ("q", "q", loop2)]
    )


def point_graph(genus: int) -> MetrizedGraph:
    return MetrizedGraph.build([("o", genus)])


@dataclass
class GraphDivisor:
    coefficients: dict = field(default_factory=dict)

    @property
    def degree(self) -> Fraction:
        return sum(self.coefficients.values(), Fraction(0))


@dataclass
class GraphMeasure:
    """Signed measure: point atoms plus a uniform density on each edge."""

    atoms: dict = field(default_factory=dict)
    densities: dict = field(default_factory=dict)

    def total_mass(self, G: MetrizedGraph) -> Fraction:
        return sum(self.atoms.values(), Fraction(0)) + sum(
            (rho * G.edges[k].length for k, rho in self.densities.items()), Fraction(0)
        )

    def density(self, k: int) -> Fraction:
        return self.densities.get(k, Fraction(0))

    def __add__(self, other: GraphMeasure) -> GraphMeasure:
        atoms = dict(self.atoms)
        for p, m in other.atoms.items():
            atoms[p] = atoms.get(p, Fraction(0)) + m
        dens = dict(self.densities)
        for k, r in other.densities.items():
            dens[k] = dens.get(k, Fraction(0)) + r
        return GraphMeasure(atoms, dens)

    def __rmul__(self, s) -> GraphMeasure:
        s = frac(s)
        return GraphMeasure(
            {p: s * m for p, m in self.atoms.items()},
            {k: s * r for k, r in self.densities.items()},
        )

    def __neg__(self) -> GraphMeasure:
        return -1 * self

    def __sub__(self, other: GraphMeasure) -> GraphMeasure:
        return self + (-other)

    @classmethod
    def from_divisor(cls, D: GraphDivisor) -> GraphMeasure:
        return cls({p: frac(c) for p, c in D.coefficients.items()}, {})


@dataclass(frozen=True)
class EdgePolynomial:
    """Piecewise polynomial on one edge, in the arclength parameter from ``u``.

    ``breakpoints`` runs from 0 to the edge length; piece ``i`` lives on
    ``[breakpoints[i], breakpoints[i+1]]``.
    """

    edge: int
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.breakpoints) != len(self.pieces) + 1:
            raise ValueError("breakpoints/pieces mismatch")
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must increase")

    @property
    def length(self) -> Fraction:
        return self.breakpoints[-1]

    def _piece_index(self, t: Fraction) -> int:
        for i in range(len(self.pieces)):
            if t <= self.breakpoints[i + 1]:
                return i
        raise ValueError(f"parameter {t} outside edge")

    def __call__(self, t) -> Fraction:
        t = frac(t)
        if t < 0 or t > self.length:
            raise ValueError(f"parameter {t} outside edge")
        i = self._piece_index(t)
        val = self.pieces[i](t)
        if t == self.breakpoints[i + 1] and i + 1 < len(self.pieces):
            if self.pieces[i + 1](t) != val:
                raise GraphError(f"jump at t={t} on edge {self.edge}")
        return val

    def integral(self) -> Fraction:
        return sum(
            (p.integrate(a, b) for p, a, b in zip(self.pieces, self.breakpoints, self.breakpoints[1:])),
            Fraction(0),
        )

    def is_continuous(self) -> bool:
        return all(
            self.pieces[i](self.breakpoints[i + 1]) == self.pieces[i + 1](self.breakpoints[i + 1])
            for i in range(len(self.pieces) - 1)
        )


@dataclass(frozen=True)
class PiecewiseFunction:
    """A function on the whole graph: edge polynomials plus values at vertices."""

    edges: tuple[EdgePolynomial, ...]
    vertex_values: Mapping[str, Fraction]

    def value(self, G: MetrizedGraph, x: Point) -> Fraction:
        x = G.normalize(x)
        if isinstance(x, str):
            return self.vertex_values[x]
        return self._edge(x.edge)(x.offset)

    def _edge(self, k: int) -> EdgePolynomial:
        for f in self.edges:
            if f.edge == k:
                return f
        raise GraphError(f"function undefined on edge {k}")


# --- subdivision ------------------------------------------------------------


@dataclass(frozen=True)
class _Subdivision:
    graph: MetrizedGraph
    point_ids: dict  # original point -> vertex id in refined graph
    pieces: dict  # original edge -> list of (refined edge, start offset)


def subdivide(G: MetrizedGraph, points: Iterable[Point]) -> _Subdivision:
    """Insert a genus-0 vertex at every interior point in ``points``."""
    cuts: dict[int, set[Fraction]] = defaultdict(set)
    point_ids: dict = {}
    for x in points:
        x = G.normalize(x)
        if isinstance(x, str):
            point_ids[x] = x
        else:
            cuts[x.edge].add(x.offset)
    taken = set(G.vertex_ids)
    vertices = list(G.vertices)
    edges: list[Edge] = []
    pieces: dict[int, list[tuple[int, Fraction]]] = {}
    for k, e in enumerate(G.edges):
        offs = sorted(cuts.get(k, ()))
        chain = [e.u]
        for off in offs:
            vid = f"{k}@{off}"
            while vid in taken:
                vid = "_" + vid
            taken.add(vid)
            vertices.append(Vertex(vid, 0))
            chain.append(vid)
            point_ids[EdgePoint(k, off)] = vid
        chain.append(e.v)
        stops = [Fraction(0)] + offs + [e.length]
        pieces[k] = []
        for a, b, s, t in zip(chain, chain[1:], stops, stops[1:]):
            pieces[k].append((len(edges), s))
            edges.append(Edge(a, b, t - s))
    return _Subdivision(MetrizedGraph(tuple(vertices), tuple(edges)), point_ids, pieces)


def _refine_measure(G: MetrizedGraph, sub: _Subdivision, mu: GraphMeasure) -> GraphMeasure:
    atoms: dict[str, Fraction] = defaultdict(Fraction)
    for p, m in mu.atoms.items():
        q = G.normalize(p)
        atoms[q if isinstance(q, str) else sub.point_ids[q]] += frac(m)
    dens = {}
    for k, rho in mu.densities.items():
        for j, _ in sub.pieces[k]:
            dens[j] = frac(rho)
    return GraphMeasure(dict(atoms), dens)


# --- resistance kernel -------------------------------------------------------


class _Kernel:
    """Pseudo-inverse of the vertex Laplacian plus per-edge Dirichlet terms.

    For a point at offset t on edge (u, v) of length L, the weight vector is
    ((L-t)/L) e_u + (t/L) e_v and the local term is t(L-t)/L.  Then
    r(x, y) = (w_x - w_y)^T P (w_x - w_y) + s_x + s_y, less 2 min(t,t')(L-max)/L
    when both points lie on the same edge.
    """

    def __init__(self, G: MetrizedGraph):
        G.require_connected()
        self.G = G
        self.index = {vid: i for i, vid in enumerate(G.vertex_ids)}
        n = len(G.vertices)
        lap = [[Fraction(0)] * n for _ in range(n)]
        for e in G.edges:
            if e.is_loop:
                continue
            i, j = self.index[e.u], self.index[e.v]
            c = 1 / e.length
            lap[i][i] += c
            lap[j][j] += c
            lap[i][j] -= c
            lap[j][i] -= c
        J = Fraction(1, n)
        inv = inverse([[a + J for a in row] for row in lap])
        self.P = [[a - J for a in row] for row in inv]

    def quad(self, w1: Mapping[int, object], w2: Mapping[int, object]):
        acc = 0
        for i, a in w1.items():
            row = self.P[i]
            for j, b in w2.items():
                if row[j]:
                    acc = acc + a * b * row[j]
        return acc

    def vertex_resistance(self, p: str, q: str) -> Fraction:
        i, j = self.index[p], self.index[q]
        P = self.P
        return P[i][i] + P[j][j] - 2 * P[i][j]

    def edge_weights(self, k: int) -> tuple[dict[int, Poly], Poly]:
        e = self.G.edges[k]
        L = e.length
        t = Poly.var()
        w: dict[int, Poly] = defaultdict(Poly)
        w[self.index[e.u]] += (L - t) * (1 / L)
        w[self.index[e.v]] += t * (1 / L)
        return dict(w), t * (L - t) * (1 / L)

    def r_vertex_edge(self, p: str, k: int) -> Poly:
        """t -> r(p, x_k(t))."""
        w, s = self.edge_weights(k)
        d = dict(w)
        ip = self.index[p]
        d[ip] = d.get(ip, Poly()) - 1
        return self.quad(d, d) + s

    def edge_moments(self, f: int) -> tuple[dict[int, Fraction], dict[tuple[int, int], Fraction]]:
        e = self.G.edges[f]
        L = e.length
        a, b = self.index[e.u], self.index[e.v]
        m1: dict[int, Fraction] = defaultdict(Fraction)
        m1[a] += L / 2
        m1[b] += L / 2
        m2: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
        m2[a, a] += L / 3
        m2[b, b] += L / 3
        m2[a, b] += L / 6
        m2[b, a] += L / 6
        return dict(m1), dict(m2)

    def edge_potential_at(self, f: int, w: Mapping[int, object], s, same_edge_t=None):
        """∫_f r(ζ, x) dζ for x with weights ``w`` and local term ``s``."""
        L = self.G.edges[f].length
        m1, m2 = self.edge_moments(f)
        trace = sum((self.P[j][i] * c for (i, j), c in m2.items()), Fraction(0))
        out = self.quad(w, w) * L - 2 * self.quad(w, m1) + trace + s * L + L * L / 6
        if same_edge_t is not None:
            t = same_edge_t
            out = out - t * (L - t)
        return out


class _Potential:
    """R(x) = ∫ r(x, ζ) dμ(ζ) for a measure with vertex atoms and edge densities."""

    def __init__(self, ker: _Kernel, mu: GraphMeasure):
        self.ker = ker
        G = ker.G
        for p in mu.atoms:
            if not isinstance(p, str):
                raise GraphError("measure must be refined to vertex atoms")
        self.mu = mu
        self.edge_polys: dict[int, Poly] = {}
        for k in range(len(G.edges)):
            self.edge_polys[k] = self._on_edge(k)
        self.vertex_values = {vid: self._at_vertex(vid) for vid in G.vertex_ids}

    def _on_edge(self, k: int) -> Poly:
        ker, mu = self.ker, self.mu
        out = Poly()
        for p, m in mu.atoms.items():
            if m:
                out = out + ker.r_vertex_edge(p, k) * m
        w, s = ker.edge_weights(k)
        for f, rho in mu.densities.items():
            if rho:
                same = Poly.var() if f == k else None
                out = out + ker.edge_potential_at(f, w, s, same) * rho
        return out

    def _at_vertex(self, vid: str) -> Fraction:
        ker, mu = self.ker, self.mu
        out = Fraction(0)
        for p, m in mu.atoms.items():
            if m:
                out += m * ker.vertex_resistance(p, vid)
        w = {ker.index[vid]: Fraction(1)}
        for f, rho in mu.densities.items():
            if rho:
                out += rho * ker.edge_potential_at(f, w, Fraction(0))
        return out

    def integral(self, nu: GraphMeasure) -> Fraction:
        out = Fraction(0)
        for p, m in nu.atoms.items():
            out += m * self.vertex_values[p]
        for k, rho in nu.densities.items():
            if rho:
                out += rho * self.edge_polys[k].integrate(0, self.ker.G.edges[k].length)
        return out


# --- public operations -------------------------------------------------------


def effective_resistance(G: MetrizedGraph, x: Point, y: Point) -> Fraction:
    """Effective resistance between two points, by exact subdivision."""
    G.require_connected()
    sub = subdivide(G, [x, y])
    ker = _Kernel(sub.graph)
    return ker.vertex_resistance(sub.point_ids[G.normalize(x)], sub.point_ids[G.normalize(y)])


def canonical_divisor(G: MetrizedGraph) -> GraphDivisor:
    return GraphDivisor({v.id: Fraction(2 * v.genus - 2 + G.valence(v.id)) for v in G.vertices})


def _canonical_measure(G: MetrizedGraph) -> GraphMeasure:
    return GraphMeasure.from_divisor(canonical_divisor(G))


def _admissibility_polys(ker: _Kernel, mu: GraphMeasure, K: GraphMeasure, gbar: int) -> dict[int, Poly]:
    pot_mu = _Potential(ker, mu)
    pot_K = _Potential(ker, K)
    return {k: pot_mu.edge_polys[k] * gbar - pot_K.edge_polys[k] * Fraction(1, 2) for k in pot_mu.edge_polys}


def admissible_measure(G: MetrizedGraph) -> GraphMeasure:
    """Zhang's admissible measure with respect to the canonical divisor.

    Solved in the space of vertex atoms plus uniform edge densities: total mass
    one and ``g_μ(x,x) + g_μ(K,x)`` constant, which after expanding the Green's
    function reads ``ḡ R_μ(x) - ½ Σ_p K_p r(p, x) = const``.
    """
    G.require_connected()
    gbar = G.total_genus
    if gbar < 1:
        raise GraphError("no admissible measure in genus 0")
    ker = _Kernel(G)
    V, E = G.vertex_ids, len(G.edges)
    basis = [GraphMeasure({vid: Fraction(1)}, {}) for vid in V] + [
        GraphMeasure({}, {k: Fraction(1)}) for k in range(E)
    ]
    basis_polys = [_Potential(ker, b).edge_polys for b in basis]
    K_polys = _Potential(ker, _canonical_measure(G)).edge_polys

    rows, rhs = [], []
    rows.append([b.total_mass(G) for b in basis])
    rhs.append(Fraction(1))
    for k in range(E):
        for deg in (1, 2, 3):
            rows.append([bp[k].coeff(deg) * gbar for bp in basis_polys])
            rhs.append(K_polys[k].coeff(deg) / 2)
    try:
        sol = solve_least_norm(rows, rhs)
    except InconsistentSystem as exc:
        raise AnsatzInsufficient("ansatz insufficient") from exc
    mu = GraphMeasure(
        {vid: c for vid, c in zip(V, sol[: len(V)]) if c},
        {k: c for k, c in enumerate(sol[len(V) :]) if c},
    )
    residual = _admissibility_polys(ker, mu, _canonical_measure(G), gbar)
    consts = {p.coeff(0) for p in residual.values()}
    if any(p.degree > 0 for p in residual.values()) or len(consts) > 1:
        raise AnsatzInsufficient("ansatz insufficient: admissibility check failed")
    return mu


def admissibility_residual(G: MetrizedGraph, mu: GraphMeasure) -> list[EdgePolynomial]:
    """Per-edge polynomials of ``h(x) = g_μ(x,x) + g_μ(K,x)``.

    For the admissible measure each is the same constant.
    """
    _check_probability(G, mu)
    K = _canonical_measure(G)
    sub = subdivide(G, [p for p in mu.atoms if not isinstance(p, str)])
    ker = _Kernel(sub.graph)
    rmu = _refine_measure(G, sub, mu)
    pot = _Potential(ker, rmu)
    potK = _Potential(ker, _refine_measure(G, sub, K))
    c = pot.integral(rmu) / 2
    degK = K.total_mass(G)
    # g(x,x) = R(x) - c ;  g(K,x) = ½ Σ K_p (R(p) + R(x) - r(p,x)) - degK c
    const = pot.integral(_refine_measure(G, sub, K)) / 2
    polys = {
        j: pot.edge_polys[j] * (1 + degK / 2) - potK.edge_polys[j] * Fraction(1, 2) + const - c * (1 + degK)
        for j in pot.edge_polys
    }
    return _assemble(G, sub, polys)


def _check_probability(G: MetrizedGraph, mu: GraphMeasure) -> None:
    if mu.total_mass(G) != 1:
        raise GraphError("measure is not a probability measure")


def _assemble(G: MetrizedGraph, sub: _Subdivision, polys: Mapping[int, Poly]) -> list[EdgePolynomial]:
    out = []
    for k, e in enumerate(G.edges):
        brk, pcs = [], []
        for j, start in sub.pieces[k]:
            brk.append(start)
            pcs.append(polys[j].shift(-start))
        brk.append(e.length)
        out.append(EdgePolynomial(k, tuple(brk), tuple(pcs)))
    return out


class _Green:
    """g_μ(x, y) = ½(R(x) + R(y) - r(x, y)) - ½ ∫ R dμ on a refined graph."""

    def __init__(self, G: MetrizedGraph, mu: GraphMeasure, extra: Iterable[Point] = ()):
        _check_probability(G, mu)
        G.require_connected()
        self.G = G
        pts = [p for p in mu.atoms if not isinstance(p, str)] + list(extra)
        self.sub = subdivide(G, pts)
        self.ker = _Kernel(self.sub.graph)
        self.mu = _refine_measure(G, self.sub, mu)
        self.pot = _Potential(self.ker, self.mu)
        self.c = self.pot.integral(self.mu) / 2

    def vid(self, x: Point) -> str:
        return self.sub.point_ids[self.G.normalize(x)]

    def value(self, x: Point, y: Point) -> Fraction:
        a, b = self.vid(x), self.vid(y)
        R = self.pot.vertex_values
        return (R[a] + R[b] - self.ker.vertex_resistance(a, b)) / 2 - self.c


def green_function(G: MetrizedGraph, mu: GraphMeasure, x: Point, y: Point) -> Fraction:
    return _Green(G, mu, [x, y]).value(x, y)


def green_slice(G: MetrizedGraph, mu: GraphMeasure, x: Point) -> list[EdgePolynomial]:
    """``y -> g_μ(x, y)`` on every edge, as exact piecewise quadratics."""
    gr = _Green(G, mu, [x])
    a = gr.vid(x)
    Ra = gr.pot.vertex_values[a]
    polys = {
        j: (gr.pot.edge_polys[j] - gr.ker.r_vertex_edge(a, j) + Ra) * Fraction(1, 2) - gr.c
        for j in gr.pot.edge_polys
    }
    return _assemble(G, gr.sub, polys)


def green_diagonal_function(G: MetrizedGraph, mu: GraphMeasure) -> PiecewiseFunction:
    gr = _Green(G, mu)
    polys = {j: p - gr.c for j, p in gr.pot.edge_polys.items()}
    vertex_values = {vid: gr.pot.vertex_values[vid] - gr.c for vid in G.vertex_ids}
    return PiecewiseFunction(tuple(_assemble(G, gr.sub, polys)), vertex_values)


def green_diagonal(G: MetrizedGraph, mu: GraphMeasure) -> list[EdgePolynomial]:
    """``x -> g_μ(x, x)`` on each edge; empty for a graph without edges."""
    return list(green_diagonal_function(G, mu).edges)


def integrate_against(f: PiecewiseFunction, m: GraphMeasure) -> Fraction:
    """Exact ``∫ f dm`` for a signed measure ``m``."""
    out = Fraction(0)
    for p, mass in m.atoms.items():
        if isinstance(p, str):
            out += frac(mass) * f.vertex_values[p]
        else:
            out += frac(mass) * f._edge(p.edge)(p.offset)
    for k, rho in m.densities.items():
        if rho:
            out += frac(rho) * f._edge(k).integral()
    return out


def phi_graph(G: MetrizedGraph) -> Fraction:
    """Zhang's φ-invariant of a polarized metrized graph.

    ``φ = -δ/4 + ¼ ∫ g_μ(x,x) ((10ḡ+2) μ - δ_K)`` with δ the total length.
    """
    G.require_connected()
    gbar = G.total_genus
    if gbar < 1:
        raise GraphError("φ undefined in genus 0")
    if gbar == 1:
        warnings.warn("total genus 1 lies outside the g >= 2 regime", GenusOneWarning, stacklevel=2)
    mu = admissible_measure(G)
    diag = green_diagonal_function(G, mu)
    weight = (10 * gbar + 2) * mu - _canonical_measure(G)
    return -G.total_length / 4 + integrate_against(diag, weight) / 4


def lambda_graph(g: int, phi, delta) -> Fraction:
    """``λ = (g-1)/(6(2g+1)) φ + δ/12``."""
    if g < 2:
        raise ValueError("lambda invariant needs g >= 2")
    return Fraction(g - 1, 6 * (2 * g + 1)) * frac(phi) + frac(delta) / 12
