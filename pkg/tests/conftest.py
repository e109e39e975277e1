import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from gross_schoen.metric_graph import MetrizedGraph


def random_graph(rng: random.Random, max_vertices: int = 6, max_edges: int = 9, min_genus: int = 1) -> MetrizedGraph:
    """Connected multigraph with loops, random genus marks and small rational lengths."""
    while True:
        n = rng.randint(1, max_vertices)
        ids = [f"v{i}" for i in range(n)]
        edges = []
        for i in range(1, n):
            edges.append((ids[rng.randrange(i)], ids[i]))
        extra = rng.randint(0, max(0, max_edges - len(edges)))
        for _ in range(extra):
            edges.append((rng.choice(ids), rng.choice(ids)))
        lengths = [Fraction(rng.randint(1, 7), rng.randint(1, 4)) for _ in edges]
        genera = [rng.choice([0, 0, 0, 1, 2]) for _ in ids]
        G = MetrizedGraph.build(list(zip(ids, genera)), [(u, v, l) for (u, v), l in zip(edges, lengths)])
        if G.total_genus >= min_genus:
            return G


@st.composite
def graphs(draw, min_genus: int = 1):
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_graph(random.Random(seed), min_genus=min_genus)


@pytest.fixture
def rng():
    return random.Random(20261015)
