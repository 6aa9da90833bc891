from __future__ import annotations

import numpy as np
import pytest

from fairdsg.graph import BLUE, RED, Coloring, LabeledGraph


def random_graph(rng: np.random.Generator, n: int, p: float,
                 weighted: bool = False) -> LabeledGraph:
    edges = []
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                w = float(rng.integers(1, 5)) if weighted else 1.0
                edges.append((u, v, w))
    return LabeledGraph.from_edges(n, edges)


def random_coloring(rng: np.random.Generator, n: int,
                    balanced: bool = False) -> Coloring:
    if balanced:
        if n % 2:
            raise ValueError("balanced coloring needs even n")
        codes = np.array([RED] * (n // 2) + [BLUE] * (n // 2), dtype=np.int8)
        rng.shuffle(codes)
    else:
        codes = rng.integers(0, 2, size=n).astype(np.int8)
    return Coloring(codes)


@pytest.fixture
def triangle() -> LabeledGraph:
    return LabeledGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4() -> LabeledGraph:
    return LabeledGraph.from_edges(4, [(u, v) for u in range(4) for v in range(u + 1, 4)])


@pytest.fixture
def k4_rrbb() -> Coloring:
    return Coloring.from_labels("RRBB")


@pytest.fixture
def path3() -> LabeledGraph:
    return LabeledGraph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def k22() -> LabeledGraph:
    return LabeledGraph.from_edges(4, [(0, 2), (0, 3), (1, 2), (1, 3)])
