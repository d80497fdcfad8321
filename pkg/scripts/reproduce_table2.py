#!/usr/bin/env python3
"""Regenerate the label-size table: synthetic rows always, real rows when the files exist.

    python scripts/reproduce_table2.py --out table2.csv --data-dir ~/datasets
"""

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from powerlabel import Mode, build_report, generate_powerlaw_graph, read_edge_list
from powerlabel.report import percent_over, write_reports

log = logging.getLogger("table2")


@dataclass
class Config:
    seed: int = 0
    mode: Mode = Mode.CONCAT
    synthetic: list = field(default_factory=lambda: [
        (1_000_000, 2.4), (1_000_000, 2.6), (1_000_000, 2.8),
        (300_000, 2.2), (300_000, 2.4), (300_000, 2.6), (300_000, 2.8)])
    # published exponents for the real-world graphs
    real_alpha: dict = field(default_factory=lambda: {"www": 2.16, "enron": 1.97, "internet": 2.09})
    data_dir: Path | None = None


def rows(cfg: Config):
    for n, a in cfg.synthetic:
        t0 = time.perf_counter()
        g = generate_powerlaw_graph(n, a, cfg.seed)
        name = f"s{'1M' if n == 10 ** 6 else n // 1000}-a{a}"
        r = build_report(g, name, a, cfg.mode, seed=cfg.seed)
        log.info("%s done in %.1fs", name, time.perf_counter() - t0)
        yield r
    if cfg.data_dir is None:
        return
    for name, a in cfg.real_alpha.items():
        p = cfg.data_dir / f"{name}.txt"
        if not p.exists():
            log.warning("skipping %s: %s not found", name, p)
            continue
        yield build_report(read_edge_list(p), name, a, cfg.mode)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="-")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.CONCAT.value)
    ap.add_argument("--data-dir", type=Path)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s", stream=sys.stderr)
    cfg = Config(seed=args.seed, mode=Mode(args.mode), data_dir=args.data_dir)
    table = list(rows(cfg))
    for r in table:
        log.info("%-14s predicted %6s empirical %6s (+%.1f%%)", r.dataset, r.predicted_bits,
                 r.empirical_bits, percent_over(r.predicted_bits, r.empirical_bits))
    if args.out == "-":
        write_reports(table, sys.stdout)
    else:
        with open(args.out, "w", newline="") as f:
            write_reports(table, f)
    return 0


if __name__ == "__main__":
    sys.exit(main())
