"""Specification grid sweeps and their aggregation."""

from __future__ import annotations

import itertools
import math
import multiprocessing
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (
    FocalNeighborhood,
    NFMode,
    ScoreOutcome,
    Specification,
    Status,
    WindowMode,
    WindowSpec,
)
from .errors import ConfigError, DIError, UnknownPaperError, UnknownYearError
from .graph import CitationGraph

DEFAULT_X = (1, 2, 3, 4, 5)
DEFAULT_Y = (3, 5, 10)
DEFAULT_Z = (1, 5, 10)

KDE_POINTS = 512
KDE_PAD = 4.0
BANDWIDTH_FLOOR = 1e-6

_trapezoid = getattr(np, "trapezoid", None) or np.trapz


@dataclass(frozen=True)
class SpecGrid:
    x_values: tuple = DEFAULT_X
    y_values: tuple = DEFAULT_Y
    z_values: tuple = DEFAULT_Z
    window_mode: WindowMode = WindowMode.POST_ONLY
    nf_mode: NFMode = NFMode.COMPLEMENT
    z_cites: int = 0

    def __post_init__(self):
        for name in ("x_values", "y_values", "z_values"):
            values = tuple(getattr(self, name))
            if not values:
                raise ConfigError(f"{name} must not be empty")
            if len(set(values)) != len(values):
                raise ConfigError(f"{name} contains duplicates: {list(values)}")
            object.__setattr__(self, name, values)
        object.__setattr__(self, "window_mode", WindowMode(self.window_mode))
        object.__setattr__(self, "nf_mode", NFMode(self.nf_mode))

    def __len__(self):
        return len(self.x_values) * len(self.y_values) * len(self.z_values)


def build_grid(axes: SpecGrid) -> list:
    """All specifications of ``axes``, x outermost, then y, then z."""
    return [
        Specification(
            x=x,
            window=WindowSpec(y, axes.window_mode),
            z_refs=z,
            z_cites=axes.z_cites,
            nf_mode=axes.nf_mode,
        )
        for x, y, z in itertools.product(axes.x_values, axes.y_values, axes.z_values)
    ]


@dataclass(frozen=True)
class ScoreMatrix:
    fps: tuple
    specs: tuple
    cells: tuple  # cells[i][j] is the outcome of fps[i] under specs[j]

    def cell(self, fp: str, spec: Specification) -> ScoreOutcome:
        return self.cells[self.fps.index(fp)][self.specs.index(spec)]

    def column(self, j: int) -> list:
        return [row[j] for row in self.cells]

    def __iter__(self):
        for fp, row in zip(self.fps, self.cells):
            for spec, outcome in zip(self.specs, row):
                yield fp, spec, outcome


# Set in worker processes by _init_worker; fork inherits it without pickling.
_WORKER_GRAPH: Optional[CitationGraph] = None


def _init_worker(graph):
    global _WORKER_GRAPH
    _WORKER_GRAPH = graph


def _score_rows(graph, fps, specs):
    rows = []
    for fp in fps:
        hood = FocalNeighborhood(graph, fp)
        rows.append(tuple(hood.score(s) for s in specs))
    return rows


def _worker_chunk(args):
    fps, specs = args
    return _score_rows(_WORKER_GRAPH, fps, specs)


def _chunks(items, n):
    size = max(1, math.ceil(len(items) / n))
    return [items[i : i + size] for i in range(0, len(items), size)]


def resolve_workers(workers: int) -> int:
    if workers < 0:
        raise ConfigError("workers must be >= 0")
    return workers or os.cpu_count() or 1


def run_sweep(
    graph: CitationGraph, fps: Sequence[str], grid: Sequence[Specification], workers: int = 1
) -> ScoreMatrix:
    """Score every (focal paper, specification) cell.

    ``workers`` > 1 distributes focal papers over processes; 0 means one
    per CPU. The result does not depend on the worker count.
    """
    fps = tuple(fps)
    specs = tuple(grid)
    if len(set(fps)) != len(fps):
        raise ConfigError("focal paper list contains duplicates")
    for fp in fps:
        if fp not in graph:
            raise UnknownPaperError(fp)
        if graph.year(fp) is None:
            raise UnknownYearError(fp)

    workers = resolve_workers(workers)
    if workers == 1 or len(fps) < 2:
        rows = _score_rows(graph, fps, specs)
    else:
        chunks = _chunks(list(fps), workers * 4)
        methods = multiprocessing.get_all_start_methods()
        ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
        with ProcessPoolExecutor(
            max_workers=workers, mp_context=ctx, initializer=_init_worker, initargs=(graph,)
        ) as pool:
            rows = []
            for part in pool.map(_worker_chunk, [(c, specs) for c in chunks]):
                rows.extend(part)
    return ScoreMatrix(fps, specs, tuple(rows))


@dataclass(frozen=True)
class SpecSummary:
    spec: Specification
    mean: Optional[float]
    n_included: int
    n_undefined: int
    n_ineligible: int
    total_skipped_unknown_year: int = 0


def summarize(matrix: ScoreMatrix) -> list:
    """Per-specification mean over Defined cells, with exclusion counts."""
    out = []
    for j, spec in enumerate(matrix.specs):
        scores = []
        n_undefined = n_ineligible = skipped = 0
        for outcome in matrix.column(j):
            if outcome.counts is not None:
                skipped += outcome.counts.skipped_unknown_year
            if outcome.status is Status.DEFINED:
                scores.append(outcome.score)
            elif outcome.status is Status.UNDEFINED:
                n_undefined += 1
            else:
                n_ineligible += 1
        mean = math.fsum(scores) / len(scores) if scores else None
        out.append(SpecSummary(spec, mean, len(scores), n_undefined, n_ineligible, skipped))
    return out


@dataclass(frozen=True)
class Extremes:
    min: SpecSummary
    max: SpecSummary
    min_tied: bool = False
    max_tied: bool = False


def extremes(summaries: Sequence[SpecSummary]) -> Extremes:
    """Lowest and highest mean; ties go to the first in grid order."""
    present = [s for s in summaries if s.mean is not None]
    if not present:
        raise DIError("no specification has a mean score")
    lo = hi = present[0]
    for s in present[1:]:
        if s.mean < lo.mean:
            lo = s
        if s.mean > hi.mean:
            hi = s
    return Extremes(
        lo,
        hi,
        min_tied=sum(s.mean == lo.mean for s in present) > 1,
        max_tied=sum(s.mean == hi.mean for s in present) > 1,
    )


@dataclass(frozen=True)
class CurvePoint:
    rank: Optional[int]
    spec: Specification
    mean: Optional[float]
    n_included: int


def spec_curve(summaries: Sequence[SpecSummary]) -> list:
    """Specification curve: present means ascending, then unranked specs."""
    present = sorted(
        (s for s in summaries if s.mean is not None), key=lambda s: s.mean
    )  # sorted() is stable, so ties keep grid order
    curve = [CurvePoint(i, s.spec, s.mean, s.n_included) for i, s in enumerate(present, 1)]
    curve += [CurvePoint(None, s.spec, None, s.n_included) for s in summaries if s.mean is None]
    return curve


class UnderResolvedDensityWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class DensityCurve:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float
    values: tuple = field(default=())

    def evaluate(self, points) -> np.ndarray:
        """Density of the fitted estimate at arbitrary ``points``."""
        return _gaussian_sum(np.atleast_1d(np.asarray(points, dtype=float)), self.values, self.bandwidth)

    def integral(self) -> float:
        return float(_trapezoid(self.density, self.grid))

    def peak(self) -> tuple:
        i = int(np.argmax(self.density))
        return float(self.grid[i]), float(self.density[i])


def silverman_bandwidth(values) -> float:
    """0.9 * min(sd, IQR/1.34) * n**-0.2, floored for degenerate input."""
    v = np.asarray(values, dtype=float)
    n = v.size
    sd = float(np.std(v, ddof=1)) if n > 1 else 0.0
    q75, q25 = np.percentile(v, [75, 25])
    iqr = float(q75 - q25) / 1.34
    spread = min(sd, iqr) if sd > 0 and iqr > 0 else max(sd, iqr)
    if spread <= 0:
        return BANDWIDTH_FLOOR
    return max(0.9 * spread * n ** -0.2, BANDWIDTH_FLOOR)


def _gaussian_sum(points, values, h):
    v = np.asarray(values, dtype=float)
    u = (points[:, None] - v[None, :]) / h
    return np.exp(-0.5 * u * u).sum(axis=1) / (v.size * h * math.sqrt(2 * math.pi))


def kde(values, bandwidth: Optional[float] = None) -> DensityCurve:
    """Gaussian kernel density estimate on 512 points over [min-4h, max+4h].

    ``bandwidth=None`` selects Silverman's rule of thumb.
    """
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ConfigError("kde needs at least one value")
    if not np.all(np.isfinite(v)):
        raise ConfigError("kde values must be finite")
    if bandwidth is None:
        h = silverman_bandwidth(v)
    else:
        h = float(bandwidth)
        if not (math.isfinite(h) and h > 0):
            raise ConfigError(f"bandwidth must be a positive finite number, got {bandwidth!r}")
    grid = np.linspace(v.min() - KDE_PAD * h, v.max() + KDE_PAD * h, KDE_POINTS)
    if grid[1] - grid[0] > h:
        warnings.warn(
            f"bandwidth {h:.3g} is below the grid spacing {grid[1] - grid[0]:.3g}; "
            "the emitted curve under-resolves the density and may not integrate to 1",
            UnderResolvedDensityWarning,
            stacklevel=2,
        )
    return DensityCurve(grid, _gaussian_sum(grid, v, h), h, tuple(float(a) for a in v))
