import itertools
import sys

import numpy as np
import pytest

from powerlabel.graph import Graph


def random_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    upper = np.triu(rng.random((n, n)) < p, 1)
    return Graph.from_edges(n, np.argwhere(upper))


def path(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def all_graph_degree_sequences(n: int) -> set:
    """Sorted degree sequences of every labeled simple graph on n vertices."""
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return {tuple([0] * n)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(len(pairs))) & 1).astype(np.int8)
    inc = np.zeros((len(pairs), n), dtype=np.int8)
    for e, (a, b) in enumerate(pairs):
        inc[e, a] = inc[e, b] = 1
    degs = np.sort(bits.astype(np.int32) @ inc, axis=1)
    return {tuple(r) for r in np.unique(degs, axis=0)}


@pytest.fixture
def rng():
    return np.random.default_rng(20150721)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
