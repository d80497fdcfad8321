"""Command-line entry point: ``powerlabel <command> ...``.

Relative output paths are resolved against ``$POWERLABEL_OUTPUT_DIR`` when it
is set. Exit codes: 0 success, 1 input/ingestion error, 2 usage error or
(for ``verify``) non-membership, 3 infeasible construction.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import os
import sys
from pathlib import Path
from typing import Optional

from .generators import (InfeasibleError, embed_lower_bound, generate_ba,
                         generate_powerlaw_graph)
from .graph import EdgeListParseError, Graph, degree_histogram, read_edge_list, write_edge_list
from .labeling import (Mode, encode, powerlaw_threshold, predicted_threshold, sparse_threshold,
                       sweep_thresholds)
from .powerlaw import constants, fit_alpha_mle, verify_palpha, verify_proper
from .report import build_report, failed_report, write_reports

log = logging.getLogger("powerlabel")

OUTPUT_DIR_ENV = "POWERLABEL_OUTPUT_DIR"

EXIT_INPUT = 1
EXIT_USAGE = 2
EXIT_NOT_MEMBER = 2
EXIT_INFEASIBLE = 3


class UsageError(Exception):
    pass


def resolve_output(path: Optional[str]) -> Optional[Path]:
    if path is None or path == "-":
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


@contextlib.contextmanager
def open_output(path: Optional[str]):
    p = resolve_output(path)
    if p is None:
        yield sys.stdout
    else:
        with open(p, "w", newline="") as f:
            yield f


def _load(path: str) -> Graph:
    try:
        return read_edge_list(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e
    except EdgeListParseError as e:
        raise InputError(f"{path}: {e}") from e


class InputError(Exception):
    pass


def _alpha_for(g: Graph, alpha: Optional[float], xmin: int) -> tuple[float, Optional[float]]:
    """(alpha to use, fitted alpha or None); the flag wins when given."""
    try:
        fitted = fit_alpha_mle(degree_histogram(g), xmin)
    except ValueError:
        fitted = None
    use = alpha if alpha is not None else fitted
    if use is None:
        raise InputError("cannot fit alpha: no vertex of degree >= xmin; pass --alpha")
    if not use > 1:
        raise InputError(f"alpha must exceed 1, got {use:g}")
    return use, fitted


def _summary(**kv) -> None:
    for k, v in kv.items():
        if isinstance(v, float):
            v = f"{v:.4f}"
        print(f"{k}: {v}")


# --- commands ---------------------------------------------------------------


def cmd_fit(args) -> int:
    g = _load(args.input)
    h = degree_histogram(g)
    if g.n == 0:
        raise InputError("graph is empty (n=0): nothing to fit")
    try:
        a = fit_alpha_mle(h, args.xmin)
    except ValueError as e:
        raise InputError(str(e)) from e
    _summary(n=g.n, m=g.m, max_degree=g.max_degree, xmin=args.xmin, alpha=a)
    return 0


def _resolve_threshold(token: str, g: Graph, alpha: Optional[float]) -> int:
    if token == "predicted":
        return predicted_threshold(g.n, alpha)
    if token == "sparse":
        return sparse_threshold(g.n, max(g.m / g.n, 1e-12))
    if token == "powerlaw":
        return powerlaw_threshold(g.n, alpha, constants(g.n, alpha).Cprime)
    try:
        t = int(token)
    except ValueError:
        raise UsageError(f"invalid threshold {token!r}: use predicted, sparse, powerlaw or an integer")
    if t < 1:
        raise UsageError("threshold must be >= 1")
    return t


def cmd_label(args) -> int:
    g = _load(args.input)
    needs_alpha = args.threshold in ("predicted", "powerlaw")
    if not needs_alpha and args.threshold != "sparse":
        _resolve_threshold(args.threshold, g, None)  # validate early
    alpha = fitted = None
    if needs_alpha or args.alpha is not None:
        alpha, fitted = _alpha_for(g, args.alpha, args.xmin)
    if args.threshold in ("sparse", "powerlaw") and g.n < 3:
        raise InputError("sparse/powerlaw thresholds need n >= 3")
    t = _resolve_threshold(args.threshold, g, alpha)
    labels = encode(g, t, Mode(args.mode))
    if args.out is not None or os.environ.get(OUTPUT_DIR_ENV):
        with open_output(args.out or "labels.txt") as f:
            labels.dump(f, g)
    lengths = labels.lengths
    deg = g.degrees
    _summary(n=g.n, m=g.m, max_degree=g.max_degree,
             alpha="" if alpha is None else alpha, fitted_alpha="" if fitted is None else fitted,
             threshold=t, mode=labels.mode.value, idbits=labels.idbits, fat=labels.fat_count,
             max_thin_bits=int(lengths[deg < t].max()) if (deg < t).any() else 0,
             max_fat_bits=int(lengths[deg >= t].max()) if (deg >= t).any() else 0,
             max_bits=labels.max_length)
    return 0


def cmd_sweep(args) -> int:
    g = _load(args.input)
    if g.n == 0:
        raise InputError("graph is empty (n=0)")
    sweep = sweep_thresholds(g, Mode(args.mode))
    try:
        alpha, _ = _alpha_for(g, args.alpha, args.xmin)
        pt = predicted_threshold(g.n, alpha)
        trailer = f"predicted_threshold={pt},predicted_bits={sweep.at(pt)}"
    except InputError:
        trailer = "predicted_threshold=,predicted_bits="
    with open_output(args.out) as f:
        sweep.write_csv(f)
        f.write(f"# empirical_threshold={sweep.empirical_threshold},"
                f"empirical_bits={sweep.empirical_max_label},{trailer}\n")
    return 0


def cmd_generate(args) -> int:
    if args.kind == "powerlaw":
        if args.alpha is None or args.m is not None:
            raise UsageError("--kind powerlaw takes --alpha (and not --m)")
        if args.n < 2 or not args.alpha > 1:
            raise UsageError("powerlaw needs --n >= 2 and --alpha > 1")
        g = generate_powerlaw_graph(args.n, args.alpha, args.seed)
        attach = None
    else:
        if args.m is None or args.alpha is not None:
            raise UsageError("--kind ba takes --m (and not --alpha)")
        if args.m < 1 or args.n <= args.m + 1:
            raise UsageError("ba needs --m >= 1 and --n > m + 1")
        g, attach = generate_ba(args.n, args.m, args.seed)
    with open_output(args.out) as f:
        write_edge_list(g, f)
    if attach is not None and args.log:
        with open_output(args.log) as f:
            attach.write(f)
    try:
        a = fit_alpha_mle(degree_histogram(g), args.xmin)
    except ValueError:
        a = ""
    out = sys.stderr if args.out in (None, "-") else sys.stdout
    with contextlib.redirect_stdout(out):
        _summary(n=g.n, m=g.m, max_degree=g.max_degree, alpha_hat=a, seed=args.seed)
    return 0


def cmd_verify(args) -> int:
    g = _load(args.input)
    h = degree_histogram(g)
    if g.n == 0:
        print("member (vacuous: n=0)")
        return 0
    if not args.alpha > 1:
        raise UsageError("--alpha must exceed 1")
    consts = constants(g.n, args.alpha)
    report = (verify_palpha if args.family == "palpha" else verify_proper)(h, consts)
    print(report.format())
    return 0 if report.member else EXIT_NOT_MEMBER


def cmd_embed(args) -> int:
    h = _load(args.h_input)
    if args.h_n is not None:
        if args.h_n < h.n:
            raise UsageError(f"--h-n {args.h_n} is smaller than the {h.n} vertices in the file")
        ids = list(h.ids) + list(range(max(h.ids, default=-1) + 1,
                                       max(h.ids, default=-1) + 1 + args.h_n - h.n))
        h = Graph.from_edges(args.h_n, h.edges(), ids=ids)
    i1 = constants(args.n, args.alpha).i1
    if h.n != i1:
        raise UsageError(f"H has {h.n} vertices but i1(n={args.n}, alpha={args.alpha}) = {i1}")
    emb = embed_lower_bound(h, args.n, args.alpha, args.seed)
    consts = constants(args.n, args.alpha)
    hist = degree_histogram(emb.G)
    for name, rep in (("proper", verify_proper(hist, consts)), ("palpha", verify_palpha(hist, consts))):
        if not rep.member:
            print(f"refusing to write: {name} verification failed\n{rep.format()}", file=sys.stderr)
            return EXIT_INFEASIBLE
    with open_output(args.out_graph) as f:
        write_edge_list(emb.G, f)
    with open_output(args.out_mapping) as f:
        for hv, gv in enumerate(emb.mapping):
            f.write(f"{h.external_id(hv)} {gv}\n")
    print(f"n: {emb.G.n}\nm: {emb.G.m}\ni1: {i1}\nverified: proper palpha", file=sys.stderr)
    return 0


def _parse_alpha_overrides(tokens) -> tuple[Optional[float], dict]:
    default, named = None, {}
    for tok in tokens or []:
        if "=" in tok:
            k, v = tok.split("=", 1)
            named[k] = float(v)
        else:
            default = float(tok)
    return default, named


def _synthetic(spec: str) -> tuple[str, Graph, int]:
    """``powerlaw:N:ALPHA:SEED`` or ``ba:N:M:SEED``."""
    kind, n, p, seed = spec.split(":")
    if kind == "powerlaw":
        return f"powerlaw-n{n}-a{p}-s{seed}", generate_powerlaw_graph(int(n), float(p), int(seed)), int(seed)
    if kind == "ba":
        return f"ba-n{n}-m{p}-s{seed}", generate_ba(int(n), int(p), int(seed))[0], int(seed)
    raise ValueError(f"unknown synthetic kind {kind!r}")


def cmd_report(args) -> int:
    default, named = _parse_alpha_overrides(args.alpha)
    rows = []
    for item in args.inputs:
        name = Path(item).stem
        seed = None
        try:
            if ":" in item and not os.path.exists(item):
                name, g, seed = _synthetic(item)
            else:
                g = _load(item)
            alpha = named.get(name, default)
            rows.append(build_report(g, name, alpha, Mode(args.mode), seed=seed, xmin=args.xmin))
        except (InputError, ValueError) as e:
            log.error("%s: %s", item, e)
            rows.append(failed_report(name, str(e), Mode(args.mode)))
    with open_output(args.out) as f:
        write_reports(rows, f)
    return 0 if all(not r.error for r in rows) else EXIT_INPUT


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="powerlabel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    modes = [m.value for m in Mode]

    s = sub.add_parser("fit", help="fit the power-law exponent of a graph's degrees")
    s.add_argument("input")
    s.add_argument("--xmin", type=int, default=1)
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("label", help="encode labels and print their sizes")
    s.add_argument("input")
    s.add_argument("--alpha", type=float)
    s.add_argument("--xmin", type=int, default=1)
    s.add_argument("--threshold", default="predicted",
                   help="predicted | sparse | powerlaw | integer degree threshold")
    s.add_argument("--mode", choices=modes, default=Mode.CONCAT.value)
    s.add_argument("--out", help="label dump path")
    s.set_defaults(func=cmd_label)

    s = sub.add_parser("sweep", help="max thin/fat label sizes for every threshold (CSV)")
    s.add_argument("input")
    s.add_argument("--alpha", type=float)
    s.add_argument("--xmin", type=int, default=1)
    s.add_argument("--mode", choices=modes, default=Mode.CONCAT.value)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("generate", help="write a synthetic graph as an edge list")
    s.add_argument("--kind", choices=["powerlaw", "ba"], required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", type=float)
    s.add_argument("--m", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--xmin", type=int, default=1)
    s.add_argument("--out")
    s.add_argument("--log", help="BA attachment log path")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("verify", help="check membership in a power-law graph family")
    s.add_argument("input")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--family", choices=["palpha", "proper"], required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("embed", help="plant H in an alpha-proper power-law graph")
    s.add_argument("--h-input", required=True)
    s.add_argument("--h-n", type=int, help="vertex count of H (pads isolated vertices)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-graph", required=True)
    s.add_argument("--out-mapping", required=True)
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("report", help="one label-size table row per dataset (CSV)")
    s.add_argument("inputs", nargs="+", help="edge-list paths or powerlaw:N:ALPHA:SEED / ba:N:M:SEED")
    s.add_argument("--alpha", action="append", help="VALUE for all, or NAME=VALUE per dataset")
    s.add_argument("--xmin", type=int, default=1)
    s.add_argument("--mode", choices=modes, default=Mode.CONCAT.value)
    s.add_argument("--out")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        parser.error(str(e))  # exits with EXIT_USAGE
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InfeasibleError as e:
        print(f"infeasible: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
