"""Command-line interface: ``dimultiverse {score,sweep,plot,gen}``.

Exit codes: 0 success, 1 output I/O failure, 2 missing/unreadable input,
3 unknown paper id, 4 nothing to plot, 5 invalid configuration.
"""

from __future__ import annotations

import argparse
import csv
import logging
import os
import sys

from . import __version__
from .core import NFMode, Specification, WindowMode, WindowSpec, compute_score
from .errors import ConfigError, IngestError, UnknownPaperError, UnknownYearError
from .graph import load_graph, write_graph
from .multiverse import (
    DEFAULT_X,
    DEFAULT_Y,
    DEFAULT_Z,
    SpecGrid,
    build_grid,
    extremes,
    kde,
    resolve_workers,
    run_sweep,
    spec_curve,
    summarize,
)
from .oracle import GenParams, gen_synthetic
from .report import (
    SCORES_HEADER,
    curve_csv,
    format_y,
    kde_csv,
    outcome_fields,
    parse_summary_csv,
    parse_y,
    render_svg,
    run_json,
    scores_csv,
    spec_fields,
    summary_csv,
    write_atomic,
)

log = logging.getLogger("dimultiverse")

EXIT_OK = 0
EXIT_IO = 1
EXIT_MISSING = 2
EXIT_UNKNOWN_ID = 3
EXIT_NOTHING_TO_PLOT = 4
EXIT_CONFIG = 5

WINDOW_CHOICES = {"post": WindowMode.POST_ONLY, "all": WindowMode.ALL_PUBLICATIONS}
NF_CHOICES = {"complement": NFMode.COMPLEMENT, "strict-zero": NFMode.STRICT_ZERO}


class CLIError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse's own exit code 2 would collide with "missing input"
    def error(self, message):
        self.print_usage(sys.stderr)
        raise CLIError(f"{self.prog}: {message}", EXIT_CONFIG)


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _y_list(text):
    try:
        return tuple(parse_y(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers or 'inf', got {text!r}")


def _y_single(text):
    try:
        return parse_y(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}")


def _delimiter(text):
    if text in ("tab", "\\t"):
        return "\t"
    if len(text) != 1:
        raise argparse.ArgumentTypeError("delimiter must be a single character or 'tab'")
    return text


def _add_corpus_args(p):
    p.add_argument("--metadata", required=True, help="CSV with header paper_id,pub_year")
    p.add_argument("--edges", required=True, help="CSV with header citing_id,cited_id")
    p.add_argument("--delimiter", type=_delimiter, default=",", help="field separator (default ',')")


def _add_spec_args(p):
    p.add_argument("--window", choices=WINDOW_CHOICES, default="post",
                   help="post: only papers from the FP year on; all: also earlier papers")
    p.add_argument("--z-cites", type=int, default=0, help="minimum citations of the FP")
    p.add_argument("--nf-mode", choices=NF_CHOICES, default="complement")


def build_parser():
    parser = _Parser(prog="dimultiverse", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("score", help="score one focal paper under one specification")
    _add_corpus_args(p)
    p.add_argument("--fp", required=True, help="focal paper id")
    p.add_argument("--x", type=int, default=1, help="coupling threshold")
    p.add_argument("--y", type=_y_single, default=None, help="window length in years or 'inf'")
    p.add_argument("--z-refs", type=int, default=0, help="minimum cited references of the FP")
    _add_spec_args(p)

    p = sub.add_parser("sweep", help="run the full specification grid over a set of focal papers")
    _add_corpus_args(p)
    p.add_argument("--fps", required=True, help="file with one focal paper id per line")
    p.add_argument("--x", type=_int_list, default=DEFAULT_X)
    p.add_argument("--y", type=_y_list, default=DEFAULT_Y)
    p.add_argument("--z-refs", type=_int_list, default=DEFAULT_Z)
    _add_spec_args(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, default=1, help="worker processes (0 = one per CPU)")

    p = sub.add_parser("plot", help="kernel density of the per-specification means")
    p.add_argument("--summary", required=True, help="summary.csv written by sweep")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--bandwidth", type=float, default=None, help="override Silverman's rule")

    p = sub.add_parser("gen", help="write a seeded synthetic corpus")
    p.add_argument("--n-papers", type=int, required=True)
    p.add_argument("--year-min", type=int, default=1980)
    p.add_argument("--year-max", type=int, default=2020)
    p.add_argument("--mean-refs", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _require_readable(*paths):
    for path in paths:
        if not os.path.isfile(path) or not os.access(path, os.R_OK):
            raise CLIError(f"cannot read input file {path!r}", EXIT_MISSING)


def _prepare_out_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise CLIError(f"cannot create output directory {path!r}: {exc}", EXIT_IO)


def _load(args):
    _require_readable(args.metadata, args.edges)
    graph = load_graph(args.metadata, args.edges, args.delimiter)
    log.info("loaded %r", graph)
    return graph


def _read_fps(path):
    _require_readable(path)
    with open(path, encoding="utf-8") as fh:
        fps = [line.strip().lstrip("\ufeff") for line in fh]
    return [fp for fp in fps if fp]


def cmd_score(args, out=None):
    spec = Specification(
        x=args.x,
        window=WindowSpec(args.y, WINDOW_CHOICES[args.window]),
        z_refs=args.z_refs,
        z_cites=args.z_cites,
        nf_mode=NF_CHOICES[args.nf_mode],
    )
    graph = _load(args)
    outcome = compute_score(graph, args.fp, spec)
    w = csv.writer(out or sys.stdout, lineterminator="\n")
    w.writerow(SCORES_HEADER)
    w.writerow([args.fp] + spec_fields(spec) + outcome_fields(outcome))
    return EXIT_OK


def cmd_sweep(args):
    axes = SpecGrid(
        x_values=args.x,
        y_values=args.y,
        z_values=args.z_refs,
        window_mode=WINDOW_CHOICES[args.window],
        nf_mode=NF_CHOICES[args.nf_mode],
        z_cites=args.z_cites,
    )
    grid = build_grid(axes)
    workers = resolve_workers(args.workers)
    fps = _read_fps(args.fps)
    graph = _load(args)
    _prepare_out_dir(args.out)

    matrix = run_sweep(graph, fps, grid, workers=workers)
    summaries = summarize(matrix)
    ext = extremes(summaries) if any(s.mean is not None for s in summaries) else None
    config = {
        "metadata": args.metadata,
        "edges": args.edges,
        "fps": args.fps,
        "x": list(axes.x_values),
        "y": [format_y(y) for y in axes.y_values],
        "z_refs": list(axes.z_values),
        "z_cites": axes.z_cites,
        "window_mode": axes.window_mode.value,
        "nf_mode": axes.nf_mode.value,
        "workers": workers,
    }
    files = {
        os.path.join(args.out, "scores.csv"): scores_csv(matrix),
        os.path.join(args.out, "summary.csv"): summary_csv(summaries),
        os.path.join(args.out, "curve.csv"): curve_csv(spec_curve(summaries)),
        os.path.join(args.out, "run.json"): run_json(
            config, graph.counters.as_dict(), ext, __version__, len(fps), len(grid)
        ),
    }
    write_atomic(files)
    if ext is not None:
        log.info("min mean %r at %s; max mean %r at %s",
                 ext.min.mean, ext.min.spec.label(), ext.max.mean, ext.max.spec.label())
    return EXIT_OK


def cmd_plot(args):
    if args.bandwidth is not None and not args.bandwidth > 0:
        raise ConfigError("--bandwidth must be positive")
    _require_readable(args.summary)
    with open(args.summary, encoding="utf-8") as fh:
        summaries = parse_summary_csv(fh.read(), source=args.summary)
    means = [s.mean for s in summaries if s.mean is not None]
    if not means:
        raise CLIError("summary has no mean scores to plot", EXIT_NOTHING_TO_PLOT)
    curve = kde(means, args.bandwidth)
    _prepare_out_dir(args.out)
    write_atomic({
        os.path.join(args.out, "kde.csv"): kde_csv(curve),
        os.path.join(args.out, "plot.svg"): render_svg(curve, means),
    })
    return EXIT_OK


def cmd_gen(args):
    params = GenParams(args.n_papers, (args.year_min, args.year_max), args.mean_refs, args.seed)
    graph, fps = gen_synthetic(params)
    _prepare_out_dir(args.out)
    write_graph(graph, os.path.join(args.out, "metadata.csv"), os.path.join(args.out, "edges.csv"))
    with open(os.path.join(args.out, "fps.txt"), "w", encoding="utf-8") as fh:
        fh.writelines(f"{fp}\n" for fp in fps)
    return EXIT_OK


COMMANDS = {"score": cmd_score, "sweep": cmd_sweep, "plot": cmd_plot, "gen": cmd_gen}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except CLIError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnknownPaperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN_ID
    except IngestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISSING
    except (ConfigError, UnknownYearError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
