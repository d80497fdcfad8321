"""Graph generators: power-law degree sequences, Barabási–Albert with online labels,
and the construction that plants an arbitrary graph inside an alpha-proper power-law graph."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import IO, Optional

import numpy as np

from .graph import Graph, havel_hakimi, is_graphical, is_induced_subgraph, degree_histogram
from .labeling import Label, MalformedLabelError, id_bits
from .powerlaw import constants, hurwitz_zeta, verify_proper, zeta


class InfeasibleError(ValueError):
    """The lower-bound construction cannot be carried out for these parameters."""


# --- power-law degree sequences ------------------------------------------------


def powerlaw_quantile(u, alpha: float) -> np.ndarray:
    """Smallest k >= 1 with P(K >= k + 1) <= u, for P(K = k) = k^-alpha / zeta(alpha).

    ``u`` is the upper-tail probability (1 - CDF value). Exponential doubling
    brackets every entry, then bisection narrows it down, all vectorized.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    z = zeta(alpha)

    def tail(k):
        # P(K >= k); relative slack absorbs rounding at exact CDF boundaries
        return hurwitz_zeta(alpha, k.astype(float)) / z * (1 - 1e-12)

    # small k straight from a table; only the far tail goes through the search
    ks = np.arange(2, _TABLE_SIZE + 2)
    neg_tail = -tail(ks)
    out = np.searchsorted(neg_tail, -u, side="left") + 1
    far = out > _TABLE_SIZE
    if far.any():
        out[far] = _search(u[far], tail)
    return out


_TABLE_SIZE = 1 << 14


def _search(u: np.ndarray, tail) -> np.ndarray:
    hi = np.ones(len(u), dtype=np.int64)
    todo = tail(hi + 1) > u
    while todo.any():
        hi[todo] *= 2
        todo = tail(hi + 1) > u
    lo = np.maximum(hi // 2, 1)
    # invariant: answer in [lo, hi], tail(hi + 1) <= u
    while True:
        open_ = lo < hi
        if not open_.any():
            return hi
        mid = (lo + hi) // 2
        ok = tail(mid + 1) <= u
        hi = np.where(open_ & ok, mid, hi)
        lo = np.where(open_ & ~ok, mid + 1, lo)


def sample_powerlaw_degrees(n: int, alpha: float, seed: int) -> np.ndarray:
    """n i.i.d. draws from the discrete power law on k >= 1 (inverse CDF)."""
    if n < 1 or not alpha > 1:
        raise ValueError("need n >= 1 and alpha > 1")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # in (0, 1]
    return powerlaw_quantile(u, alpha)


def repair_degree_sequence(degrees) -> np.ndarray:
    """Make a sequence graphical with small changes.

    Entries are capped at n-1; an odd sum bumps one minimum-degree entry; then
    the maximum entry is decremented until Erdős–Gallai holds (odd-sum
    intermediate states simply fail the check and get decremented again).
    """
    d = np.array(degrees, dtype=np.int64)
    n = len(d)
    if n == 0:
        return d
    np.clip(d, 0, n - 1, out=d)
    if d.sum() % 2:
        i = int(np.argmin(d))
        if d[i] < n - 1:
            d[i] += 1
        else:
            d[int(np.argmax(d))] -= 1
    while not is_graphical(d):
        d[int(np.argmax(d))] -= 1
    return d


def generate_powerlaw_graph(n: int, alpha: float, seed: int) -> Graph:
    """Sample a power-law degree sequence, repair it and realize it with Havel–Hakimi."""
    if n < 2:
        raise ValueError("n must be >= 2")
    d = repair_degree_sequence(sample_powerlaw_degrees(n, alpha, seed))
    return havel_hakimi(d)


# --- Barabási–Albert ---------------------------------------------------------------


@dataclass
class AttachmentLog:
    """Per added vertex (n0, n0+1, ...), the m distinct earlier vertices it attached to."""

    m: int
    n0: int
    seed_edges: np.ndarray
    targets: list = field(default_factory=list)

    def write(self, stream: IO[str]) -> None:
        for i, row in enumerate(self.targets):
            stream.write(f"{self.n0 + i}: {' '.join(str(x) for x in row)}\n")

    @classmethod
    def read(cls, stream: IO[str], m: int, n0: int, seed_edges) -> "AttachmentLog":
        log = cls(m, n0, np.asarray(seed_edges, dtype=np.int64).reshape(-1, 2))
        for line in stream:
            if line.strip():
                vertex, rest = line.split(":", 1)
                if int(vertex) != n0 + len(log.targets):
                    raise ValueError(f"attachment log out of order at vertex {vertex}")
                log.targets.append([int(x) for x in rest.split()])
        return log


def generate_ba(n: int, m: int, seed: int, seed_graph: Optional[Graph] = None):
    """Preferential attachment; returns (graph, attachment log).

    Each new vertex picks m distinct targets by repeated degree-proportional
    draws (a draw hitting an already chosen target is discarded).
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if seed_graph is None:
        seed_graph = Graph.complete(m + 1)
    n0 = seed_graph.n
    if n0 < m or seed_graph.m < 1:
        raise ValueError("seed graph needs at least m vertices and one edge")
    if n <= n0:
        raise ValueError("n must exceed the seed graph size")
    rng = np.random.default_rng(seed)
    seed_edges = seed_graph.edges()
    # every edge endpoint once: uniform draws from it are degree-proportional
    ends = np.empty(2 * (seed_graph.m + m * (n - n0)), dtype=np.int64)
    size = 2 * seed_graph.m
    ends[:size] = seed_edges.ravel()
    log = AttachmentLog(m, n0, seed_edges)
    for v in range(n0, n):
        chosen: list[int] = []
        while len(chosen) < m:
            u = int(ends[rng.integers(size)])
            if u not in chosen:
                chosen.append(u)
        log.targets.append(chosen)
        for u in chosen:
            ends[size] = u
            ends[size + 1] = v
            size += 2
    new = np.column_stack([np.repeat(np.arange(n0, n), m), np.array(log.targets).ravel()])
    return Graph.from_edges(n, np.vstack([seed_edges, new])), log


@dataclass
class OnlineLabels:
    """Labels ``[id][count][count ids]`` built while the BA graph grows."""

    n: int
    idbits: int
    countbits: int
    labels: list

    def adjacent(self, u: int, v: int) -> bool:
        return self.decode(self.labels[u], self.labels[v])

    def _parse(self, lab: Label) -> tuple[int, list]:
        w, cw = self.idbits, self.countbits
        if lab.length < w + cw:
            raise MalformedLabelError("label shorter than its header")
        plen = lab.length - w - cw
        count = (lab.bits >> plen) & ((1 << cw) - 1)
        ident = lab.bits >> (plen + cw)
        if plen != count * w:
            raise MalformedLabelError("payload length disagrees with count field")
        ids = [(lab.bits >> (plen - (j + 1) * w)) & ((1 << w) - 1) for j in range(count)]
        for x in [ident, *ids]:
            if not 1 <= x <= self.n:
                raise MalformedLabelError(f"identifier {x} out of range 1..{self.n}")
        return ident, ids

    def decode(self, a: Label, b: Label) -> bool:
        ia, la = self._parse(a)
        ib, lb = self._parse(b)
        return ib in la or ia in lb

    @property
    def max_length(self) -> int:
        return max(lab.length for lab in self.labels)

    def decoded_edges(self) -> np.ndarray:
        """Every pair (u < v) that :meth:`decode` reports adjacent, from label contents only.

        decode(a, b) is true iff one label lists the other's identifier, so the
        listed pairs, symmetrized and deduplicated, are exactly the decoded edges.
        """
        us, vs = [], []
        idx = {}
        parsed = [self._parse(lab) for lab in self.labels]
        for v, (ident, _) in enumerate(parsed):
            idx[ident] = v
        for v, (_, listed) in enumerate(parsed):
            for x in listed:
                u = idx.get(x)
                if u is not None and u != v:
                    us.append(min(u, v))
                    vs.append(max(u, v))
        if not us:
            return np.empty((0, 2), dtype=np.int64)
        return np.unique(np.column_stack([us, vs]), axis=0)


def ba_online_labels(log: AttachmentLog, n: int) -> OnlineLabels:
    """Vertex v gets identifier v+1; added vertices list their m attachment targets,
    seed vertices list their lower-indexed seed neighbors."""
    if len(log.targets) != n - log.n0:
        raise ValueError("attachment log does not describe an n-vertex graph")
    w = id_bits(n)
    cw = id_bits(log.n0)
    lists: list[list[int]] = [[] for _ in range(log.n0)]
    for u, v in log.seed_edges:
        lo, hi = sorted((int(u), int(v)))
        lists[hi].append(lo)
    lists.extend(log.targets)
    labels = []
    for v, row in enumerate(lists):
        if len(row) >= 1 << cw:
            raise ValueError("attachment list longer than the count field allows")
        bits = ((v + 1) << cw) | len(row)
        for u in sorted(row):
            if not 0 <= u < v:
                raise ValueError(f"vertex {v} attached to non-earlier vertex {u}")
            bits = (bits << w) | (u + 1)
        labels.append(Label(bits, w + cw + len(row) * w))
    return OnlineLabels(n, w, cw, labels)


# --- lower-bound construction ----------------------------------------------------


@dataclass
class Embedding:
    G: Graph
    H: Graph
    mapping: np.ndarray
    target: np.ndarray

    def check(self, alpha: float) -> None:
        """Raise AssertionError unless every construction postcondition holds."""
        assert is_induced_subgraph(self.G, self.H, self.mapping)
        assert np.array_equal(self.G.degrees, self.target)
        report = verify_proper(degree_histogram(self.G), constants(self.G.n, alpha))
        assert report.member, report.format()


class _Builder:
    def __init__(self, target: np.ndarray):
        self.target = target
        self.deg = np.zeros(len(target), dtype=np.int64)
        self.adj: list[set] = [set() for _ in range(len(target))]
        self.us: list[int] = []
        self.vs: list[int] = []

    def residual(self, v) -> int:
        return int(self.target[v] - self.deg[v])

    def add(self, u: int, v: int) -> None:
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.deg[u] += 1
        self.deg[v] += 1
        self.us.append(u)
        self.vs.append(v)

    def check_caps(self, phase: str) -> None:
        if np.any(self.deg > self.target):
            raise AssertionError(f"a vertex exceeded its target degree during {phase}")


def _partition_sizes(n: int, C: float, alpha: float, i1: int) -> dict[int, int]:
    sizes = {1: math.floor(C * n) - i1}
    for i in range(2, i1):
        sizes[i] = math.floor(C * n / i ** alpha)
    rest = n - sum(sizes.values())
    for i in range(i1, i1 + rest):
        sizes[i] = 1
    return sizes


def embed_lower_bound(H: Graph, n: int, alpha: float, seed: int) -> Embedding:
    """Build an n-vertex alpha-proper power-law graph containing H as induced subgraph.

    ``H`` must have exactly i1 vertices. Vertices are laid out by target degree
    (degree-1 block first); the seed picks which degree->=i1 singletons host H.
    """
    if not alpha > 2:
        raise InfeasibleError("construction requires alpha > 2")
    consts = constants(n, alpha)
    C, i1 = consts.C, consts.i1
    if H.n != i1:
        raise ValueError(f"H must have i1 = {i1} vertices, got {H.n}")
    if math.floor(C * n) - i1 < 0:
        raise InfeasibleError(f"floor(C n) - i1 = {math.floor(C * n) - i1} < 0")
    if i1 < 3:
        raise InfeasibleError(f"i1 = {i1} < 3: n too small for the partition")
    sizes = _partition_sizes(n, C, alpha, i1)
    singles = n - sum(s for i, s in sizes.items() if i < i1)
    if singles < i1:
        raise InfeasibleError(f"only {singles} singleton classes for i1 = {i1} vertices of H")

    target = np.repeat(np.array(list(sizes.keys()), dtype=np.int64),
                       np.array(list(sizes.values()), dtype=np.int64))
    v1 = np.flatnonzero(target == 1)
    first_single = int(np.searchsorted(target, i1))
    rng = np.random.default_rng(seed)
    hosts = np.sort(rng.choice(np.arange(first_single, n), size=i1, replace=False))
    b = _Builder(target)

    for u, w in H.edges():
        b.add(int(hosts[u]), int(hosts[w]))
    in_h = np.zeros(n, dtype=bool)
    in_h[hosts] = True
    rest = np.flatnonzero((target > 1) & ~in_h)

    # phase 1: V' x V_H, neediest first on both sides
    heap = [(-b.residual(v), int(v)) for v in rest]
    heapq.heapify(heap)
    for h in sorted(hosts.tolist(), key=lambda v: (-b.residual(v), v)):
        need = b.residual(h)
        taken = []
        while need > 0 and heap:
            r, v = heapq.heappop(heap)
            b.add(v, h)
            need -= 1
            if r < -1:
                taken.append((r + 1, v))
        for item in taken:
            heapq.heappush(heap, item)
        if need > 0:
            raise InfeasibleError(f"phase 1: V' cannot absorb the demand of H-vertex {h}")
    b.check_caps("phase 1")

    # phase 2: V' x V', Havel–Hakimi order on residual demand
    leftover = []
    while heap:
        r, v = heapq.heappop(heap)
        r = -r
        partners = [heapq.heappop(heap) for _ in range(min(r, len(heap)))]
        for rr, u in partners:
            b.add(v, u)
        for rr, u in partners:
            if rr < -1:
                heapq.heappush(heap, (rr + 1, u))
        if r > len(partners):
            leftover.append(v)
    b.check_caps("phase 2")

    # leftovers are finished off with fresh degree-1 vertices
    fresh = iter(v1.tolist())
    for v in leftover:
        for _ in range(b.residual(v)):
            u = next(fresh, None)
            if u is None:
                raise InfeasibleError("V1 too small to absorb phase-2 leftovers")
            b.add(v, u)

    # phase 3: pair unprocessed degree-1 vertices; an odd one out joins a processed
    # partner, which moves to degree 2
    open_v1 = [int(u) for u in v1 if b.deg[u] == 0]
    for x, y in zip(open_v1[0::2], open_v1[1::2]):
        b.add(x, y)
    if len(open_v1) % 2:
        w = open_v1[-1]
        partner = next((int(u) for u in v1 if b.deg[u] == 1 and int(u) != w), None)
        if partner is None:
            raise InfeasibleError("phase 3: no processed degree-1 vertex to pair with")
        b.add(w, partner)
        target = target.copy()
        target[partner] = 2
        b.target = target
    b.check_caps("phase 3")

    if np.any(b.deg != b.target):
        raise InfeasibleError("construction left unprocessed vertices")
    G = Graph.from_edges(n, np.column_stack([b.us, b.vs]))
    return Embedding(G, H, hosts.astype(np.int64), target)
