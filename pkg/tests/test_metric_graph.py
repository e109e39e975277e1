import random
import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings

from gross_schoen._exact import Poly
from gross_schoen.metric_graph import (
    AnsatzInsufficient,
    EdgePoint,
    EdgePolynomial,
    GenusOneWarning,
    GraphError,
    GraphMeasure,
    MetrizedGraph,
    PiecewiseFunction,
    _Kernel,
    admissibility_residual,
    admissible_measure,
    canonical_divisor,
    circle,
    dumbbell,
    effective_resistance,
    green_diagonal,
    green_diagonal_function,
    green_function,
    green_slice,
    integrate_against,
    lambda_graph,
    phi_graph,
    point_graph,
    subdivide,
    theta,
)

from conftest import graphs, random_graph

F = Fraction

pytestmark = pytest.mark.filterwarnings("ignore::gross_schoen.metric_graph.GenusOneWarning")


def single_edge(length):
    return MetrizedGraph.build(["a", "b"], [("a", "b", length)])


# --- effective resistance -------------------------------------------------------


def test_resistance_series_and_parallel():
    assert effective_resistance(single_edge(3), "a", "b") == 3
    two = MetrizedGraph.build(["a", "b"], [("a", "b", 1), ("a", "b", 1)])
    assert effective_resistance(two, "a", "b") == F(1, 2)
    assert effective_resistance(theta(), "p", "q") == F(1, 3)


def test_resistance_interior_points():
    G = single_edge(3)
    assert effective_resistance(G, EdgePoint(0, F(1)), EdgePoint(0, F(5, 2))) == F(3, 2)
    # circle of length 1: t(1-t)
    C = circle(1)
    assert effective_resistance(C, "o", EdgePoint(0, F(1, 4))) == F(3, 16)
    assert effective_resistance(C, EdgePoint(0, F(1, 8)), EdgePoint(0, F(5, 8))) == F(1, 4)


def test_resistance_disconnected():
    G = MetrizedGraph.build(["a", "b", "c"], [("a", "b", 1)])
    with pytest.raises(GraphError, match="not connected"):
        effective_resistance(G, "a", "c")


@given(graphs(min_genus=0))
@settings(max_examples=40, deadline=None)
def test_resistance_is_a_metric_kernel(G):
    rng = random.Random(len(G.edges))
    pts = [rng.choice(G.vertex_ids) for _ in range(2)]
    if G.edges:
        k = rng.randrange(len(G.edges))
        pts.append(EdgePoint(k, G.edges[k].length * F(rng.randint(1, 9), 10)))
    for x in pts:
        assert effective_resistance(G, x, x) == 0
        for y in pts:
            r = effective_resistance(G, x, y)
            assert r >= 0
            assert r == effective_resistance(G, y, x)


@given(graphs(min_genus=0))
@settings(max_examples=40, deadline=None)
def test_foster_identity(G):
    total = sum(
        (effective_resistance(G, e.u, e.v) / e.length for e in G.edges if not e.is_loop), Fraction(0)
    )
    assert total == len(G.vertices) - 1


@given(graphs(min_genus=0))
@settings(max_examples=30, deadline=None)
def test_kernel_polynomial_matches_subdivision(G):
    """r(p, x(t)) from the edge polynomial equals the subdivided-graph resistance."""
    ker = _Kernel(G)
    for k, e in enumerate(G.edges):
        for p in G.vertex_ids[:2]:
            poly = ker.r_vertex_edge(p, k)
            assert poly.degree <= 2
            for frac_t in (F(1, 3), F(1, 2), F(5, 7)):
                t = e.length * frac_t
                assert poly(t) == effective_resistance(G, p, EdgePoint(k, t))


# --- canonical divisor ----------------------------------------------------------


def test_canonical_divisor_examples():
    K = canonical_divisor(circle(1))
    assert K.coefficients == {"o": 0} and K.degree == 0
    assert canonical_divisor(point_graph(2)).coefficients == {"o": 2}
    assert canonical_divisor(dumbbell()).coefficients == {"p": 1, "q": 1}


@given(graphs(min_genus=0))
@settings(max_examples=40, deadline=None)
def test_canonical_divisor_degree(G):
    assert canonical_divisor(G).degree == 2 * G.total_genus - 2


# --- admissible measure ---------------------------------------------------------


def closed_form_measure(G: MetrizedGraph) -> GraphMeasure:
    """(1/ḡ)(Σ q(p) δ_p + Σ_e dx/(L_e + R_e)), R_e the resistance of G minus e."""
    gbar = G.total_genus
    atoms = {v.id: F(v.genus, gbar) for v in G.vertices if v.genus}
    dens = {}
    for k, e in enumerate(G.edges):
        if e.is_loop:
            R = F(0)
        else:
            H = G.without_edge(k)
            if not H.is_connected():
                continue  # bridge
            R = effective_resistance(H, e.u, e.v)
        dens[k] = 1 / (gbar * (e.length + R))
    return GraphMeasure(atoms, dens)


def same_measure(G, m1, m2):
    keys = set(m1.atoms) | set(m2.atoms)
    if any(m1.atoms.get(p, 0) != m2.atoms.get(p, 0) for p in keys):
        return False
    return all(m1.density(k) == m2.density(k) for k in range(len(G.edges)))


@pytest.mark.parametrize("length", [1, 2, F(7, 3)])
def test_circle_measure_uniform(length):
    mu = admissible_measure(circle(length))
    assert mu.atoms == {}
    assert mu.densities == {0: 1 / F(length)}


def test_point_graph_measure():
    mu = admissible_measure(point_graph(3))
    assert mu.atoms == {"o": 1} and mu.densities == {}


def test_genus_zero_rejected():
    tree = single_edge(1)
    with pytest.raises(GraphError, match="genus 0"):
        admissible_measure(tree)
    with pytest.raises(GraphError):
        phi_graph(tree)


def test_bridge_density_vanishes():
    mu = admissible_measure(dumbbell(1, 5, 2))
    assert mu.density(1) == 0
    assert mu.total_mass(dumbbell(1, 5, 2)) == 1


@given(graphs())
@settings(max_examples=40, deadline=None)
def test_admissible_measure_matches_closed_form(G):
    mu = admissible_measure(G)
    assert mu.total_mass(G) == 1
    assert same_measure(G, mu, closed_form_measure(G))


@pytest.mark.parametrize("G", [circle(1), theta(), dumbbell(), theta(1, 2, 3), dumbbell(F(1, 2), 3, 2)])
def test_admissibility_residual_is_constant(G):
    res = admissibility_residual(G, admissible_measure(G))
    assert all(q.degree <= 0 for p in res for q in p.pieces)
    assert len({p.pieces[0].coeff(0) for p in res}) == 1


def test_residual_detects_non_admissible_measure():
    G = theta(1, 2, 3)
    uniform = GraphMeasure({}, {k: F(1, 6) for k in range(3)})
    res = admissibility_residual(G, uniform)
    assert any(q.degree > 0 for p in res for q in p.pieces)


# --- Green's function -----------------------------------------------------------


def test_circle_green_values():
    C = circle(1)
    mu = admissible_measure(C)
    assert green_function(C, mu, "o", EdgePoint(0, F(1, 2))) == F(-1, 24)
    assert green_function(C, mu, "o", "o") == F(1, 12)
    # g(d) = d²/2 - d/2 + 1/12 for interior pairs too
    d = F(3, 10)
    assert green_function(C, mu, EdgePoint(0, F(1, 10)), EdgePoint(0, F(4, 10))) == d * d / 2 - d / 2 + F(1, 12)


def test_green_requires_probability_measure():
    C = circle(1)
    with pytest.raises(GraphError):
        green_function(C, GraphMeasure({}, {0: F(2)}), "o", "o")


def test_green_diagonal_examples():
    for length in (1, 3, F(5, 2)):
        C = circle(length)
        diag = green_diagonal(C, admissible_measure(C))
        assert len(diag) == 1 and diag[0].pieces == (Poly.const(F(length) / 12),)
    assert green_diagonal(point_graph(2), admissible_measure(point_graph(2))) == []


def test_green_diagonal_vertex_values_agree():
    for G in (theta(1, 2, 3), dumbbell(1, 2, 3)):
        mu = admissible_measure(G)
        f = green_diagonal_function(G, mu)
        for v in G.vertex_ids:
            assert f.vertex_values[v] == green_function(G, mu, v, v)
        for k, e in enumerate(G.edges):
            poly = f.edges[k]
            assert poly.pieces[0].degree <= 3
            assert poly(0) == f.vertex_values[e.u] and poly(e.length) == f.vertex_values[e.v]
            t = e.length / 3
            assert poly(t) == green_function(G, mu, EdgePoint(k, t), EdgePoint(k, t))


def slope_sum(G, slices, vid):
    """Sum of outgoing slopes at vertex ``vid`` of a function given by edge polynomials."""
    s = Fraction(0)
    for k, e in enumerate(G.edges):
        p = slices[k]
        if e.u == vid:
            s += p.pieces[0].derivative()(0)
        if e.v == vid:
            s -= p.pieces[-1].derivative()(e.length)
    return s


def sample_points(G, rng):
    pts = list(G.vertex_ids)
    for k, e in enumerate(G.edges):
        pts.append(EdgePoint(k, e.length * F(rng.randint(1, 6), 7)))
    return pts


@given(graphs())
@settings(max_examples=25, deadline=None)
def test_green_symmetry_normalization_laplacian(G):
    rng = random.Random(len(G.edges) * 31 + len(G.vertices))
    mu = admissible_measure(G)
    pts = sample_points(G, rng)[:5]
    slices = {x: green_slice(G, mu, x) for x in pts}
    for x in pts:
        sl = slices[x]
        # symmetry through independently computed slices
        for y in pts:
            gxy = green_function(G, mu, x, y)
            assert gxy == green_function(G, mu, y, x)
            if isinstance(y, EdgePoint):
                assert sl[y.edge](y.offset) == gxy
        if not G.edges:
            continue
        f = PiecewiseFunction(tuple(sl), {v: green_function(G, mu, x, v) for v in G.vertex_ids})
        assert integrate_against(f, mu) == 0
        # -g'' ... second derivative equals the edge density on every piece
        for k, p in enumerate(sl):
            for piece in p.pieces:
                assert piece.derivative().derivative() == Poly.const(mu.density(k))
        # vertex balance: -(sum of outgoing slopes) = δ_x - μ at each vertex
        for v in G.vertex_ids:
            expected = (1 if x == v else 0) - mu.atoms.get(v, 0)
            assert -slope_sum(G, sl, v) == expected
        if isinstance(x, EdgePoint):
            p = sl[x.edge]
            i = p.breakpoints.index(x.offset)
            jump = p.pieces[i].derivative()(x.offset) - p.pieces[i - 1].derivative()(x.offset)
            assert -jump == 1


# --- integration ----------------------------------------------------------------


def test_integrate_against_examples():
    C = circle(1)
    mu = admissible_measure(C)
    one = PiecewiseFunction((EdgePolynomial(0, (F(0), F(1)), (Poly.const(1),)),), {"o": F(1)})
    m = GraphMeasure({"o": F(2), EdgePoint(0, F(1, 3)): F(-1, 2)}, {0: F(3)})
    assert integrate_against(one, m) == F(9, 2)
    zero = PiecewiseFunction((EdgePolynomial(0, (F(0), F(1)), (Poly(),)),), {"o": F(0)})
    assert integrate_against(zero, m) == 0
    assert integrate_against(green_diagonal_function(C, mu), mu) == F(1, 12)


def test_integrate_against_guards_jumps():
    f = PiecewiseFunction(
        (EdgePolynomial(0, (F(0), F(1, 2), F(1)), (Poly.const(0), Poly.const(1))),), {"o": F(0)}
    )
    with pytest.raises(GraphError, match="jump"):
        integrate_against(f, GraphMeasure({EdgePoint(0, F(1, 2)): F(1)}, {}))


def test_measure_with_interior_atom():
    """A probability measure with an interior atom goes through exact subdivision."""
    C = circle(1)
    mu = GraphMeasure({EdgePoint(0, F(1, 2)): F(1, 2)}, {0: F(1, 2)})
    diag = green_diagonal(C, mu)
    assert diag[0].breakpoints == (F(0), F(1, 2), F(1))
    assert diag[0].is_continuous()
    for t in (F(1, 5), F(1, 2), F(4, 5)):
        x = EdgePoint(0, t)
        assert diag[0](t) == green_function(C, mu, x, x)


# --- φ and λ ---------------------------------------------------------------------


@pytest.mark.parametrize("length", [1, 2, F(7, 3)])
def test_phi_circle_is_zero(length):
    with pytest.warns(GenusOneWarning):
        assert phi_graph(circle(length)) == 0


def test_phi_good_reduction():
    assert phi_graph(point_graph(2)) == 0


def test_phi_fixed_values():
    # cross-checked against the discretization oracle in test_discretization
    assert phi_graph(theta()) == F(1, 9)
    assert phi_graph(dumbbell()) == F(7, 6)


@pytest.mark.parametrize("g1,g2", [(1, 1), (1, 2), (2, 3), (1, 4)])
def test_phi_tree_of_two_components(g1, g2):
    """Compact type: an edge separating genus i from g-i contributes 2i(g-i)/g times its length."""
    L = F(5, 3)
    G = MetrizedGraph.build([("a", g1), ("b", g2)], [("a", "b", L)])
    g = g1 + g2
    assert phi_graph(G) == F(2 * g1 * g2, g) * L


@pytest.mark.parametrize("G", [circle(3), theta(1, 2, 3), dumbbell(1, 2, 3)])
@pytest.mark.parametrize("t", [F(1, 3), 2, F(7, 2)])
def test_phi_homogeneous(G, t):
    assert phi_graph(G.scaled(t)) == t * phi_graph(G)


@given(graphs(min_genus=2))
@settings(max_examples=15, deadline=None)
def test_phi_homogeneous_random(G):
    assert phi_graph(G.scaled(F(3, 2))) == F(3, 2) * phi_graph(G)


def test_lambda_graph():
    assert lambda_graph(2, 0, 0) == 0
    assert lambda_graph(2, 0, 1) == F(1, 12)
    assert lambda_graph(3, 7, 2) == F(1, 2)
    with pytest.raises(ValueError):
        lambda_graph(1, 0, 0)


# --- types -----------------------------------------------------------------------


def test_graph_validation():
    with pytest.raises(GraphError):
        MetrizedGraph.build(["a", "a"])
    with pytest.raises(GraphError):
        MetrizedGraph.build(["a"], [("a", "a", 0)])
    with pytest.raises(GraphError):
        MetrizedGraph.build([("a", -1)])
    with pytest.raises(GraphError):
        MetrizedGraph.build(["a"], [("a", "b", 1)])
    G = dumbbell()
    assert (G.betti, G.total_genus) == (2, 2)


def test_subdivision_preserves_resistance():
    G = theta(1, 2, 3)
    sub = subdivide(G, [EdgePoint(1, F(1, 2)), EdgePoint(1, F(3, 2)), EdgePoint(2, F(1))])
    assert len(sub.graph.edges) == 6 and sub.graph.total_length == G.total_length
    assert effective_resistance(sub.graph, "p", "q") == effective_resistance(G, "p", "q")
