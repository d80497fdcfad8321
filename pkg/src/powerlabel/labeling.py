"""Thin/fat adjacency labels: encoding, decoding, threshold choice and sweeps.

A label is ``[flag][identifier][payload]`` read most-significant bit first:
the flag is 0 for thin and 1 for fat vertices, the identifier takes ``idbits``
bits, and the payload is either a sorted list of ``idbits``-bit identifiers
(thin vertices, and fat vertices in CONCAT mode) or a ``k``-bit incidence
vector over the fat identifiers 1..k (fat vertices in BITSTRING mode).
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from typing import IO, NamedTuple, Optional

import numpy as np

from .graph import Graph


class Mode(str, enum.Enum):
    BITSTRING = "bitstring"
    CONCAT = "concat"


class MalformedLabelError(ValueError):
    pass


class Label(NamedTuple):
    bits: int
    length: int


def id_bits(n: int) -> int:
    """Bits needed for identifiers 1..n, i.e. ceil(log2(n + 1))."""
    return int(n).bit_length()


def assign_identifiers(g: Graph, threshold: int) -> tuple[np.ndarray, int]:
    """Return (identifier of each vertex, number of fat vertices).

    Fat vertices (degree >= threshold) take 1..k by decreasing degree, ties by
    index; thin vertices take k+1..n by index.
    """
    threshold = max(1, int(threshold))
    deg = g.degrees
    fat = deg >= threshold
    k = int(fat.sum())
    fat_order = np.lexsort((np.arange(g.n), -deg))[:k]
    ids = np.empty(g.n, dtype=np.int64)
    ids[fat_order] = np.arange(1, k + 1)
    ids[~fat] = np.arange(k + 1, g.n + 1)
    return ids, k


def _pack(values, width: int) -> int:
    out = 0
    for x in values:
        out = (out << width) | int(x)
    return out


@dataclass
class LabelSet:
    n: int
    idbits: int
    threshold: int
    mode: Mode
    fat_count: int
    labels: list
    id_of: np.ndarray

    def adjacent(self, u: int, v: int) -> bool:
        return decode(self.labels[u], self.labels[v], self.idbits, self.mode)

    @property
    def lengths(self) -> np.ndarray:
        return np.fromiter((lab.length for lab in self.labels), dtype=np.int64, count=self.n)

    @property
    def max_length(self) -> int:
        return int(self.lengths.max()) if self.n else 0

    def dump(self, stream: IO[str], g: Optional[Graph] = None) -> None:
        """One line per vertex: external id, identifier, flag, bit length, payload hex.

        The payload is left-aligned and zero-padded to whole hex digits; an
        empty payload is written as ``-``.
        """
        stream.write(f"# n={self.n} idbits={self.idbits} threshold={self.threshold} "
                     f"mode={self.mode.value} fat={self.fat_count}\n")
        for v, lab in enumerate(self.labels):
            plen = lab.length - 1 - self.idbits
            payload = lab.bits & ((1 << plen) - 1)
            ext = g.external_id(v) if g is not None else v
            stream.write(f"{ext} {self.id_of[v]} {lab.bits >> (lab.length - 1)} {lab.length} "
                         f"{_hex_payload(payload, plen)}\n")


def _hex_payload(payload: int, plen: int) -> str:
    if plen == 0:
        return "-"
    digits = -(-plen // 4)
    return format(payload << (4 * digits - plen), f"0{digits}x")


def load_label_dump(stream: IO[str]) -> tuple[dict, list]:
    """Parse a dump back into (header fields, [(external id, Label), ...])."""
    header = {}
    rows = []
    for line in stream:
        if line.startswith("#"):
            header = dict(tok.split("=", 1) for tok in line[1:].split())
            continue
        ext, ident, flag, length, hexp = line.split()
        idbits = int(header["idbits"])
        length = int(length)
        plen = length - 1 - idbits
        payload = 0 if hexp == "-" else int(hexp, 16) >> (4 * len(hexp) - plen)
        bits = (((int(flag) << idbits) | int(ident)) << plen) | payload
        rows.append((int(ext), Label(bits, length)))
    return header, rows


def encode(g: Graph, threshold: int, mode: Mode = Mode.BITSTRING) -> LabelSet:
    mode = Mode(mode)
    threshold = max(1, int(threshold))
    ids, k = assign_identifiers(g, threshold)
    w = id_bits(g.n)
    deg = g.degrees
    labels = []
    for v in range(g.n):
        nb_ids = np.sort(ids[g.neighbors(v)])
        if deg[v] < threshold:
            head = int(ids[v])
            payload, plen = _pack(nb_ids, w), len(nb_ids) * w
        else:
            head = (1 << w) | int(ids[v])
            fat_nb = nb_ids[nb_ids <= k]
            if mode is Mode.BITSTRING:
                payload = 0
                for i in fat_nb:
                    payload |= 1 << (k - int(i))
                plen = k
            else:
                payload, plen = _pack(fat_nb, w), len(fat_nb) * w
        labels.append(Label((head << plen) | payload, 1 + w + plen))
    return LabelSet(g.n, w, threshold, mode, k, labels, ids)


def _split(lab: Label, idbits: int) -> tuple[int, int, int, int]:
    plen = lab.length - 1 - idbits
    if plen < 0 or lab.bits >> lab.length:
        raise MalformedLabelError(f"label of length {lab.length} too short or overlong bits")
    flag = lab.bits >> (lab.length - 1)
    ident = (lab.bits >> plen) & ((1 << idbits) - 1)
    if ident == 0:
        raise MalformedLabelError("identifier 0 is not valid")
    return flag, ident, lab.bits & ((1 << plen) - 1), plen


def _list_contains(payload: int, plen: int, idbits: int, target: int) -> bool:
    if idbits == 0 or plen % idbits:
        raise MalformedLabelError(f"list payload of {plen} bits is not a multiple of {idbits}")
    mask = (1 << idbits) - 1
    lo, hi = 0, plen // idbits
    while lo < hi:
        mid = (lo + hi) // 2
        x = (payload >> (plen - (mid + 1) * idbits)) & mask
        if x == target:
            return True
        if x < target:
            lo = mid + 1
        else:
            hi = mid
    return False


def decode(a: Label, b: Label, idbits: int, mode: Mode = Mode.BITSTRING) -> bool:
    """Adjacency of two vertices from their labels alone."""
    fa, ia, pa, la = _split(a, idbits)
    fb, ib, pb, lb = _split(b, idbits)
    if ia == ib:
        return False
    if not fa:
        return _list_contains(pa, la, idbits, ib)
    if not fb:
        return _list_contains(pb, lb, idbits, ia)
    if Mode(mode) is Mode.CONCAT:
        return _list_contains(pa, la, idbits, ib)
    if ib > la:
        raise MalformedLabelError(f"fat identifier {ib} outside a {la}-bit fat bit string")
    return bool((pa >> (la - ib)) & 1)


def fat_degrees(g: Graph, threshold: int) -> np.ndarray:
    """Number of neighbors with degree >= threshold, for every vertex."""
    deg = g.degrees
    src = np.repeat(np.arange(g.n), deg)
    hit = deg[g.indices] >= threshold
    return np.bincount(src[hit], minlength=g.n)


def label_lengths(g: Graph, threshold: int, mode: Mode = Mode.BITSTRING) -> np.ndarray:
    """Bit length of every label, without building the labels."""
    threshold = max(1, int(threshold))
    w = id_bits(g.n)
    deg = g.degrees
    fat = deg >= threshold
    out = 1 + w + deg * w
    if Mode(mode) is Mode.BITSTRING:
        out[fat] = 1 + w + int(fat.sum())
    else:
        out[fat] = (1 + w + fat_degrees(g, threshold) * w)[fat]
    return out


def max_label_bits(g: Graph, threshold: int, mode: Mode = Mode.BITSTRING) -> int:
    return int(label_lengths(g, threshold, mode).max()) if g.n else 0


def sparse_threshold(n: int, c: float) -> int:
    """ceil(sqrt(2cn / log2 n)), at least 1."""
    if n < 3:
        raise ValueError("sparse threshold needs n >= 3")
    return max(1, math.ceil(math.sqrt(2 * c * n / math.log2(n))))


def predicted_threshold(n: int, alpha: float) -> int:
    """ceil((C n / (alpha - 1))^(1/alpha)) with C = 1/zeta(alpha), at least 1."""
    from .powerlaw import zeta

    if not alpha > 1:
        raise ValueError("alpha must be > 1")
    if n < 1:
        raise ValueError("n must be >= 1")
    return max(1, math.ceil((n / zeta(alpha) / (alpha - 1)) ** (1 / alpha)))


def powerlaw_threshold(n: int, alpha: float, cprime: float) -> int:
    if n < 3:
        raise ValueError("power-law threshold needs n >= 3")
    if not alpha > 1:
        raise ValueError("alpha must be > 1")
    lg = math.log2(n)
    return max(math.ceil((cprime * n / lg) ** (1 / alpha)), math.ceil((n / lg) ** (1 / alpha)), 1)


@dataclass
class ThresholdSweep:
    """Maximum thin and fat label sizes for thresholds 1..max_degree+1."""

    mode: Mode
    thresholds: np.ndarray
    max_thin: np.ndarray
    max_fat: np.ndarray

    @property
    def max_bits(self) -> np.ndarray:
        return np.maximum(self.max_thin, self.max_fat)

    @property
    def empirical_threshold(self) -> int:
        return int(self.thresholds[np.argmin(self.max_bits)])

    @property
    def empirical_max_label(self) -> int:
        return int(self.max_bits.min())

    def at(self, threshold: int) -> int:
        """Max label size at ``threshold`` (thresholds past the sweep end behave like its last row)."""
        i = min(max(int(threshold), 1), int(self.thresholds[-1])) - 1
        return int(self.max_bits[i])

    def write_csv(self, stream: IO[str]) -> None:
        w = csv.writer(stream, lineterminator="\n")
        w.writerow(["threshold", "max_thin_bits", "max_fat_bits", "max_bits"])
        for row in zip(self.thresholds, self.max_thin, self.max_fat, self.max_bits):
            w.writerow([int(x) for x in row])


def sweep_thresholds(g: Graph, mode: Mode = Mode.CONCAT) -> ThresholdSweep:
    """Evaluate every threshold in [1, max_degree + 1] in O(n + m + max_degree) numpy passes.

    Fat vertices at threshold t are those of degree >= t, and an edge joins two
    fat vertices exactly when t <= min(deg u, deg v); so fat degrees are built
    up by adding edges in decreasing order of that level.
    """
    mode = Mode(mode)
    w = id_bits(g.n)
    deg = g.degrees
    dmax = g.max_degree
    t = np.arange(1, dmax + 2)
    hist = np.bincount(deg, minlength=dmax + 2)

    # largest degree strictly below t; -1 when no vertex is thin
    present = np.where(hist[:dmax + 1] > 0, np.arange(dmax + 1), -1)
    below = np.maximum.accumulate(present)[t - 1]
    max_thin = np.where(below >= 0, 1 + w + below * w, 0)

    fat_count = np.cumsum(hist[::-1])[::-1][t]
    if mode is Mode.BITSTRING:
        max_fat = np.where(fat_count > 0, 1 + w + fat_count, 0)
    else:
        e = g.edges()
        level = np.minimum(deg[e[:, 0]], deg[e[:, 1]])
        order = np.argsort(-level, kind="stable")
        e, level = e[order], level[order]
        cuts = np.searchsorted(-level, -t, side="right")
        fd = np.zeros(g.n, dtype=np.int64)
        best = np.zeros(len(t), dtype=np.int64)
        cur, start = 0, 0
        for j in range(len(t) - 1, -1, -1):
            stop = cuts[j]
            if stop > start:
                chunk = e[start:stop].ravel()
                np.add.at(fd, chunk, 1)
                cur = max(cur, int(fd[chunk].max()))
                start = stop
            best[j] = cur
        max_fat = np.where(fat_count > 0, 1 + w + best * w, 0)
    return ThresholdSweep(mode, t, max_thin.astype(np.int64), max_fat.astype(np.int64))


@dataclass(frozen=True)
class BoundsReport:
    n: int
    max_degree: int
    c: float
    alpha: float
    Cprime: float
    sparse_bound: int
    powerlaw_bound: int
    bd_bound: int
    aktz_bound: int


def aktz_bound(n: int) -> int:
    """General-graph labeling size floor(n/2) + 6 (matches every published row)."""
    return n // 2 + 6


def bd_bound(max_degree: int, n: int) -> int:
    """Bounded-degree labeling size ceil(D/2) * ceil(log2 n)."""
    return -(-max_degree // 2) * math.ceil(math.log2(n))


def sparse_bound(n: int, c: float) -> int:
    lg = math.log2(n)
    return math.ceil(math.sqrt(2 * c * n * lg) + 2 * lg + 1)


def powerlaw_bound(n: int, alpha: float, cprime: float) -> int:
    lg = math.log2(n)
    return math.ceil((cprime * n) ** (1 / alpha) * lg ** (1 - 1 / alpha) + 2 * lg + 1)


def theoretical_bounds(n: int, max_degree: int, c: float, alpha: float, cprime: float) -> BoundsReport:
    if n < 3:
        raise ValueError("bounds need n >= 3")
    return BoundsReport(n, max_degree, c, alpha, cprime,
                        sparse_bound(n, c), powerlaw_bound(n, alpha, cprime),
                        bd_bound(max_degree, n), aktz_bound(n))


def decode_matrix(ls: LabelSet) -> np.ndarray:
    """All-pairs decode as an n x n boolean matrix, using label contents only.

    Applies the same rules as :func:`decode`, batched: each label is parsed
    once into its flag, identifier and payload membership row.
    """
    n, w = ls.n, ls.idbits
    flags = np.zeros(n, dtype=bool)
    idents = np.zeros(n, dtype=np.int64)
    member = np.zeros((n, n + 1), dtype=bool)  # member[row, identifier]
    for v, lab in enumerate(ls.labels):
        flag, ident, payload, plen = _split(lab, w)
        flags[v], idents[v] = bool(flag), ident
        if flag and ls.mode is Mode.BITSTRING:
            for i in range(1, plen + 1):
                if (payload >> (plen - i)) & 1:
                    member[v, i] = True
        else:
            if plen % w:
                raise MalformedLabelError(f"list payload of {plen} bits is not a multiple of {w}")
            mask = (1 << w) - 1
            for j in range(plen // w):
                x = (payload >> (plen - (j + 1) * w)) & mask
                if x > n:
                    raise MalformedLabelError(f"identifier {x} out of range")
                member[v, x] = True
    a_lists_b = member[:, idents]  # [a, b]: b's identifier in a's payload
    out = np.where(~flags[:, None], a_lists_b,
                   np.where(~flags[None, :], a_lists_b.T, a_lists_b))
    np.fill_diagonal(out, False)
    return out
