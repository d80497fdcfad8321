"""Per-dataset experiment rows in the layout of the published label-size table."""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass, fields
from typing import IO, Optional

from .graph import Graph, degree_histogram
from .labeling import (Mode, ThresholdSweep, aktz_bound, bd_bound, powerlaw_bound,
                       predicted_threshold, sparse_bound, sweep_thresholds)
from .powerlaw import constants, fit_alpha_mle


@dataclass
class ExperimentReport:
    dataset: str
    n: int
    m: int
    max_degree: int
    alpha: Optional[float]
    fitted_alpha: Optional[float]
    predicted_threshold: Optional[int]
    predicted_bits: Optional[int]
    empirical_threshold: int
    empirical_bits: int
    bound_bits: Optional[int]
    sparse_bits: Optional[int]
    bd_bits: Optional[int]
    aktz_bits: Optional[int]
    mode: str
    seed: Optional[int] = None
    error: str = ""


def build_report(g: Graph, name: str, alpha: Optional[float] = None, mode: Mode = Mode.CONCAT,
                 seed: Optional[int] = None, xmin: int = 1,
                 sweep: Optional[ThresholdSweep] = None) -> ExperimentReport:
    """Fit (or take) alpha, sweep every threshold and evaluate the closed-form bounds.

    A supplied ``alpha`` wins; the fitted value is still recorded when it exists.
    """
    mode = Mode(mode)
    h = degree_histogram(g)
    try:
        fitted = fit_alpha_mle(h, xmin)
    except ValueError:
        fitted = None
    a = alpha if alpha is not None else fitted
    if a is not None and not a > 1:
        a = None
    if sweep is None:
        sweep = sweep_thresholds(g, mode) if g.n else None
    pt = predicted_threshold(g.n, a) if (a is not None and g.n >= 1) else None
    big = g.n >= 3
    return ExperimentReport(
        dataset=name, n=g.n, m=g.m, max_degree=g.max_degree,
        alpha=a, fitted_alpha=fitted,
        predicted_threshold=pt,
        predicted_bits=sweep.at(pt) if (pt is not None and sweep is not None) else None,
        empirical_threshold=sweep.empirical_threshold if sweep is not None else 0,
        empirical_bits=sweep.empirical_max_label if sweep is not None else 0,
        bound_bits=powerlaw_bound(g.n, a, constants(g.n, a).Cprime) if (big and a) else None,
        sparse_bits=sparse_bound(g.n, g.m / g.n) if big else None,
        bd_bits=bd_bound(g.max_degree, g.n) if big else None,
        aktz_bits=aktz_bound(g.n) if g.n else None,
        mode=mode.value, seed=seed,
    )


def failed_report(name: str, error: str, mode: Mode = Mode.CONCAT) -> ExperimentReport:
    return ExperimentReport(name, 0, 0, 0, None, None, None, None, 0, 0, None, None, None, None,
                            Mode(mode).value, error=error)


COLUMNS = [f.name for f in fields(ExperimentReport)]


def write_reports(rows, stream: IO[str]) -> None:
    w = csv.DictWriter(stream, fieldnames=COLUMNS, lineterminator="\n")
    w.writeheader()
    for r in rows:
        d = asdict(r)
        for k in ("alpha", "fitted_alpha"):
            if d[k] is not None:
                d[k] = f"{d[k]:.4f}"
        w.writerow({k: ("" if v is None else v) for k, v in d.items()})


def read_reports(stream: IO[str]) -> list[dict]:
    return list(csv.DictReader(stream))


def percent_over(predicted: int, empirical: int) -> float:
    return math.inf if empirical == 0 else 100.0 * (predicted - empirical) / empirical
