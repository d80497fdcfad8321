"""Simple undirected graphs in CSR form, edge-list ingestion and degree-sequence tools."""

from __future__ import annotations

import heapq
import io
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence, Union

import numpy as np


class EdgeListParseError(ValueError):
    """Raised for a malformed line in an edge-list file."""

    def __init__(self, lineno: int, line: str, reason: str):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno


class NotGraphicalError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable simple undirected graph.

    Neighbors of ``v`` are ``indices[indptr[v]:indptr[v + 1]]`` in strictly
    ascending order. ``ids`` optionally maps internal indices back to the
    external vertex ids seen at load time.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    ids: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_edges(cls, n: int, edges, ids=None) -> "Graph":
        """Build a graph on ``n`` vertices, dropping loops and duplicate edges."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise ValueError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        keys = np.unique(lo * max(n, 1) + hi)
        lo, hi = keys // max(n, 1), keys % max(n, 1)
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        src, dst = src[order], dst[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        if ids is not None:
            ids = np.asarray(ids, dtype=np.int64)
        return cls(n, indptr, dst.astype(np.int64), ids)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls.from_edges(n, np.empty((0, 2), dtype=np.int64))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        iu = np.triu_indices(n, k=1)
        return cls.from_edges(n, np.column_stack(iu))

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max()) if self.n else 0

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edges(self) -> np.ndarray:
        """Array of shape (m, 2) with each edge once, as ``u < v``."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def external_id(self, v: int) -> int:
        return int(self.ids[v]) if self.ids is not None else v

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=bool)
        e = self.edges()
        a[e[:, 0], e[:, 1]] = True
        a[e[:, 1], e[:, 0]] = True
        return a

    def check_invariants(self) -> None:
        """Raise AssertionError unless the graph is simple, symmetric and sorted."""
        assert len(self.indptr) == self.n + 1 and self.indptr[0] == 0
        assert len(self.indices) % 2 == 0
        for v in range(self.n):
            nb = self.neighbors(v)
            assert np.all(np.diff(nb) > 0), f"adjacency of {v} not strictly ascending"
            assert not np.any(nb == v), f"self-loop at {v}"
        e = self.edges()
        assert len(e) == self.m
        # symmetry: every directed arc appears in both orientations
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        fwd = np.sort(src * max(self.n, 1) + self.indices)
        bwd = np.sort(self.indices * max(self.n, 1) + src)
        assert np.array_equal(fwd, bwd), "adjacency not symmetric"


def load_edge_list(source: Union[IO, bytes, str]) -> Graph:
    """Parse an edge list; external ids are remapped to 0.. in first-seen order.

    ``source`` is a binary or text stream, or raw bytes. Lines starting with
    ``#`` and blank lines are skipped.
    """
    if isinstance(source, (bytes, str)):
        source = io.BytesIO(source.encode() if isinstance(source, str) else source)
    index: dict[int, int] = {}
    us: list[int] = []
    vs: list[int] = []
    for lineno, raw in enumerate(source, start=1):
        line = raw.decode() if isinstance(raw, bytes) else raw
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        tokens = s.split()
        if len(tokens) != 2:
            raise EdgeListParseError(lineno, s, f"expected 2 tokens, got {len(tokens)}")
        try:
            a, b = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(lineno, s, "non-integer token") from None
        us.append(index.setdefault(a, len(index)))
        vs.append(index.setdefault(b, len(index)))
    ids = np.fromiter(index.keys(), dtype=np.int64, count=len(index))
    return Graph.from_edges(len(index), np.column_stack([us, vs]) if us else [], ids=ids)


def read_edge_list(path) -> Graph:
    with open(path, "rb") as f:
        return load_edge_list(f)


def write_edge_list(g: Graph, stream: IO[str]) -> None:
    ext = g.ids if g.ids is not None else np.arange(g.n)
    for u, v in g.edges():
        stream.write(f"{ext[u]} {ext[v]}\n")


@dataclass(frozen=True)
class DegreeHistogram:
    """``counts[k]`` is the number of vertices of degree ``k``."""

    counts: np.ndarray

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> "DegreeHistogram":
        d = np.asarray(list(degrees) if not isinstance(degrees, np.ndarray) else degrees,
                       dtype=np.int64)
        return cls(np.bincount(d, minlength=1) if len(d) else np.zeros(1, dtype=np.int64))

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def max_degree(self) -> int:
        nz = np.flatnonzero(self.counts)
        return int(nz[-1]) if len(nz) else 0

    def __getitem__(self, k: int) -> int:
        return int(self.counts[k]) if 0 <= k < len(self.counts) else 0

    def as_dict(self) -> dict[int, int]:
        return {int(k): int(c) for k, c in enumerate(self.counts) if c}

    def degrees(self) -> np.ndarray:
        """The histogram expanded back into a sorted degree sequence."""
        return np.repeat(np.arange(len(self.counts)), self.counts)


def degree_histogram(g: Graph) -> DegreeHistogram:
    return DegreeHistogram.from_degrees(g.degrees)


def is_graphical(degrees: Sequence[int]) -> bool:
    """Erdős–Gallai test, O(n log n)."""
    d = np.sort(np.asarray(degrees, dtype=np.int64))[::-1]
    n = len(d)
    if n == 0:
        return True
    if d[-1] < 0 or d[0] > n - 1 or d.sum() % 2:
        return False
    prefix = np.concatenate([[0], np.cumsum(d)])
    k = np.arange(1, n + 1)
    # c[k-1] = number of entries >= k; they form a prefix of the descending array
    c = n - np.searchsorted(d[::-1], k, side="left")
    split = np.maximum(k, c)
    rhs = k * (k - 1) + k * (split - k) + (prefix[-1] - prefix[split])
    return bool(np.all(prefix[1:] <= rhs))


def havel_hakimi(degrees: Sequence[int]) -> Graph:
    """Realize a graphical sequence; vertex ``i`` gets degree ``degrees[i]``.

    The vertex with the largest residual degree is joined to the next-largest
    ones, ties going to the lower index.
    """
    d = [int(x) for x in degrees]
    n = len(d)
    if any(x < 0 for x in d):
        raise NotGraphicalError("negative degree")
    heap = [(-r, v) for v, r in enumerate(d) if r > 0]
    heapq.heapify(heap)
    us: list[int] = []
    vs: list[int] = []
    while heap:
        r, v = heapq.heappop(heap)
        r = -r
        if r > len(heap):
            raise NotGraphicalError("degree sequence is not graphical")
        taken = [heapq.heappop(heap) for _ in range(r)]
        for rr, u in taken:
            us.append(v)
            vs.append(u)
            if rr < -1:
                heapq.heappush(heap, (rr + 1, u))
    return Graph.from_edges(n, np.column_stack([us, vs]) if us else [])


def is_induced_subgraph(g: Graph, h: Graph, mapping: Sequence[int]) -> bool:
    """True iff ``mapping`` embeds ``h`` into ``g`` as an induced subgraph."""
    mp = np.asarray(mapping, dtype=np.int64)
    if len(mp) != h.n:
        raise ValueError("mapping must cover every vertex of h")
    if len(mp) and (mp.min() < 0 or mp.max() >= g.n):
        raise IndexError("mapping target out of range")
    if len(np.unique(mp)) != len(mp):
        raise ValueError("mapping is not injective")
    image = set(mp.tolist())
    for u in range(h.n):
        want = {int(mp[w]) for w in h.neighbors(u)}
        got = image.intersection(g.neighbors(int(mp[u])).tolist())
        if want != got:
            return False
    return True
