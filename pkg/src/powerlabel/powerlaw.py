"""Power-law statistics: zeta values, MLE exponent fit, family constants and membership verifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .graph import DegreeHistogram

# B_2j / (2j)! for j = 1..6
_EM_COEFFS = (1 / 12, -1 / 720, 1 / 30240, -1 / 1209600, 1 / 47900160, -691 / 1307674368000)
_EM_TERMS = 16


def hurwitz_zeta(s: float, q):
    """Hurwitz zeta sum_{k>=0} (q+k)^-s for s > 1, q > 0; ``q`` may be an array.

    Direct summation of the first terms, then an Euler–Maclaurin tail.
    """
    if not s > 1:
        raise ValueError(f"zeta requires s > 1, got {s}")
    q = np.asarray(q, dtype=float)
    total = np.zeros_like(q)
    for k in range(_EM_TERMS):
        total += (q + k) ** -s
    a = q + _EM_TERMS
    total += a ** (1 - s) / (s - 1) + 0.5 * a ** -s
    rising = s
    power = a ** (-s - 1)
    for j, coef in enumerate(_EM_COEFFS):
        total += coef * rising * power
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
        power /= a * a
    return total if total.ndim else float(total)


def zeta(alpha: float) -> float:
    """Riemann zeta for real ``alpha > 1`` (relative error well below 1e-9)."""
    return hurwitz_zeta(alpha, 1.0)


@dataclass(frozen=True)
class PowerLawConstants:
    alpha: float
    C: float
    n: int
    i1: int
    Cprime: float
    maxdeg_bound: float


def constants(n: int, alpha: float) -> PowerLawConstants:
    """C = 1/zeta(alpha), i1, the tightest admissible C' and the max-degree bound."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not alpha > 1:
        raise ValueError("alpha must be > 1")
    C = 1.0 / zeta(alpha)
    i1 = 1
    while math.floor(C * n / i1 ** alpha) > 1:
        i1 += 1
    root = n ** (1 / alpha)
    cprime = (C / (alpha - 1) + i1 / root + 5) ** alpha + C / (alpha - 1)
    maxdeg = (C / (alpha - 1) + 2) * root + i1 + 3
    return PowerLawConstants(alpha, C, n, i1, cprime, maxdeg)


def fit_alpha_mle(h: DegreeHistogram, xmin: int = 1) -> float:
    """Discrete power-law exponent via the continuous approximation.

    alpha = 1 + n_tail / sum(ln(k / (xmin - 1/2))) over vertices with degree >= xmin.
    """
    if xmin < 1:
        raise ValueError("xmin must be >= 1")
    counts = h.counts[xmin:]
    ntail = int(counts.sum())
    if ntail == 0:
        raise ValueError(f"no vertex with degree >= {xmin}")
    k = np.arange(xmin, xmin + len(counts), dtype=float)
    return 1.0 + ntail / float(np.sum(counts * np.log(k / (xmin - 0.5))))


class Violation(NamedTuple):
    condition: str
    index: int
    observed: float
    bound: float


@dataclass
class MembershipReport:
    violations: list = field(default_factory=list)

    @property
    def member(self) -> bool:
        return not self.violations

    def format(self, limit: int = 20) -> str:
        if self.member:
            return "member"
        lines = [f"not a member: {len(self.violations)} violation(s)"]
        for v in self.violations[:limit]:
            lines.append(f"  condition {v.condition} at {v.index}: observed {v.observed:g}, "
                         f"allowed {v.bound:g}")
        if len(self.violations) > limit:
            lines.append(f"  ... {len(self.violations) - limit} more")
        return "\n".join(lines)


def _counts_upto(h: DegreeHistogram, size: int) -> np.ndarray:
    out = np.zeros(size, dtype=np.int64)
    m = min(size, len(h.counts))
    out[:m] = h.counts[:m]
    return out


def palpha_range(n: int, alpha: float) -> tuple[int, int]:
    """Inclusive k-range checked by verify_palpha (empty when lo > hi)."""
    if n <= 2:
        return (1, 0)
    return math.ceil((n / math.log2(n)) ** (1 / alpha)), n - 1


def verify_palpha(h: DegreeHistogram, consts: PowerLawConstants) -> MembershipReport:
    """Tail condition: for k in range, #vertices of degree >= k <= C' n / k^(alpha-1)."""
    n = h.n
    report = MembershipReport()
    lo, hi = palpha_range(n, consts.alpha)
    if lo > hi:
        return report
    counts = _counts_upto(h, n)
    suffix = np.cumsum(counts[::-1])[::-1]
    k = np.arange(lo, hi + 1)
    bound = consts.Cprime * n / k.astype(float) ** (consts.alpha - 1)
    bad = np.flatnonzero(suffix[lo:hi + 1] > bound)
    report.violations = [Violation("tail", int(k[i]), int(suffix[lo + i]), float(bound[i]))
                         for i in bad]
    return report


def verify_proper(h: DegreeHistogram, consts: PowerLawConstants) -> MembershipReport:
    """Exact-count conditions of an alpha-proper power-law graph."""
    n = h.n
    report = MembershipReport()
    if n == 0:
        return report
    C, a, i1 = consts.C, consts.alpha, consts.i1
    counts = _counts_upto(h, n + 2)
    v = report.violations

    cn = C * n
    lo1, hi1 = math.floor(cn) - i1 - 1, math.ceil(cn)
    if not lo1 <= counts[1] <= hi1:
        v.append(Violation("1", 1, int(counts[1]), lo1 if counts[1] < lo1 else hi1))
    x2 = cn / 2 ** a
    lo2, hi2 = math.floor(x2), math.ceil(x2) + 1
    if n >= 2 and not lo2 <= counts[2] <= hi2:
        v.append(Violation("2", 2, int(counts[2]), lo2 if counts[2] < lo2 else hi2))

    if n >= 3:
        i = np.arange(3, n + 1)
        x = cn / i.astype(float) ** a
        fl, cl = np.floor(x), np.ceil(x)
        got = counts[3:n + 1]
        for j in np.flatnonzero((got != fl) & (got != cl)):
            v.append(Violation("3", int(i[j]), int(got[j]), float(fl[j] if got[j] < fl[j] else cl[j])))
    if n >= 3:
        i = np.arange(2, n)
        for j in np.flatnonzero(counts[2:n] < counts[3:n + 1]):
            v.append(Violation("4", int(i[j]), int(counts[i[j] + 1]), int(counts[i[j]])))
    return report
