import math
from fractions import Fraction

import numpy as np
import pytest

from gross_schoen.discretization import _tridiag_inverse_diagonal, discretization_oracle
from gross_schoen.metric_graph import (
    GraphError,
    MetrizedGraph,
    admissible_measure,
    circle,
    dumbbell,
    green_diagonal,
    phi_graph,
    theta,
)

pytestmark = pytest.mark.filterwarnings("ignore::gross_schoen.metric_graph.GenusOneWarning")


def test_tridiagonal_inverse_diagonal():
    rng = np.random.default_rng(0)
    n = 12
    off = -rng.uniform(0.5, 1.5, n - 1)
    d = np.abs(np.concatenate(([0], off))) + np.abs(np.concatenate((off, [0]))) + rng.uniform(0.1, 1, n)
    A = np.diag(d) + np.diag(off, 1) + np.diag(off, -1)
    np.testing.assert_allclose(_tridiag_inverse_diagonal(d, off), np.diag(np.linalg.inv(A)), rtol=1e-12)


def test_circle_phi_near_zero():
    assert abs(discretization_oracle(circle(1), 1000).phi) < 1e-3


def test_tree_rejected():
    with pytest.raises(GraphError):
        discretization_oracle(MetrizedGraph.build(["a", "b"], [("a", "b", 1)]), 10)


def test_segments_validated():
    with pytest.raises(ValueError):
        discretization_oracle(circle(1), 1)


def test_theta_measure_matches_exact():
    G = theta()
    res = discretization_oracle(G, 2000)
    mu = admissible_measure(G)
    for v in G.vertex_ids:
        assert res.atoms[v] == pytest.approx(float(mu.atoms.get(v, 0)), abs=1e-9)
    for k in range(3):
        assert res.densities[k] == pytest.approx(float(mu.density(k)), abs=1e-9)
    assert sum(res.atoms.values()) + sum(res.densities[k] * float(e.length) for k, e in enumerate(G.edges)) == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("G", [theta(), theta(1, 2, 3)])
def test_theta_green_diagonal_samples(G):
    N = 2000
    res = discretization_oracle(G, N)
    diag = green_diagonal(G, admissible_measure(G))
    for k, e in enumerate(G.edges):
        for i in range(101):
            t = e.length * Fraction(i, 100)
            node = i * N // 100
            assert res.green_diagonal[k][node] == pytest.approx(float(diag[k](t)), abs=1e-8 * float(G.total_length) / 3)


@pytest.mark.parametrize("G", [theta(), dumbbell(), theta(1, 2, 3)])
def test_convergence_order_at_least_one(G):
    exact = float(phi_graph(G))
    errs = [abs(discretization_oracle(G, N).phi - exact) for N in (250, 500, 1000)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert min(orders) >= 1


@pytest.mark.parametrize("G", [theta(), dumbbell(), theta(1, 2, 3)])
def test_phi_matches_extrapolated_oracle(G):
    # second-order error: one Richardson step on N and 2N removes the h² term
    coarse, fine = (discretization_oracle(G, N).phi for N in (2000, 4000))
    extrapolated = (4 * fine - coarse) / 3
    assert extrapolated == pytest.approx(float(phi_graph(G)), rel=1e-8)
