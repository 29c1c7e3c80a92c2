"""Reference classifier, synthetic corpora and shipped fixtures.

``naive_classify`` is deliberately slow: it walks every paper in the corpus
and applies the N_F / N_B / N_R membership tests literally. It shares no
code with :mod:`dimultiverse.core` beyond the data types, so agreement
between the two is meaningful.

Synthetic corpora
-----------------
``gen_synthetic`` is a pure function of :class:`GenParams`. Its random
stream is SplitMix64 seeded with ``params.seed``:

1. for ``i`` in ``0..n-1``: ``year_i = year_lo + below(year_hi - year_lo + 1)``
2. papers are visited in order ``i = 0..n-1``; paper ``i`` draws
   ``k ~ Poisson(mean_out_refs)`` and then ``k`` indices uniformly (with
   replacement) from the papers whose year is strictly earlier, ordered by
   ``(year, index)``. Repeated draws collapse, so a paper has at most ``k``
   references. Papers with no earlier candidate draw ``k`` but cite nothing.
3. ids are ``P`` followed by the zero-padded index.

``below(m)`` rejects raw outputs under ``2**64 mod m`` and returns
``raw mod m``; ``uniform()`` is ``(raw >> 11) * 2**-53``. Poisson variates
use Knuth's product-of-uniforms method, splitting the mean into chunks of at
most 30 to stay clear of ``exp`` underflow.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from importlib import resources

from .core import NFMode, Specification, TriCount, WindowMode
from .errors import ConfigError, UnknownPaperError, UnknownYearError
from .graph import CitationGraph, build_graph, load_graph

_MASK = (1 << 64) - 1


class SplitMix64:
    """Steele, Lea & Flood's SplitMix64 generator."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def below(self, m: int) -> int:
        if m <= 0:
            raise ValueError("m must be positive")
        cutoff = (1 << 64) % m
        while True:
            r = self.next()
            if r >= cutoff:
                return r % m

    def uniform(self) -> float:
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def poisson(self, mean: float) -> int:
        total = 0
        while mean > 0:
            chunk = min(mean, 30.0)
            mean -= chunk
            limit = math.exp(-chunk)
            k = 0
            p = self.uniform()
            while p > limit:
                k += 1
                p *= self.uniform()
            total += k
        return total


@dataclass(frozen=True)
class GenParams:
    n_papers: int
    year_range: tuple = (1980, 2020)
    mean_out_refs: float = 10.0
    seed: int = 0

    def validate(self) -> None:
        if self.n_papers < 1:
            raise ConfigError("n_papers must be positive")
        lo, hi = self.year_range
        if hi - lo < 1:
            raise ConfigError("year_range must span at least two distinct years")
        if not math.isfinite(self.mean_out_refs) or self.mean_out_refs < 0:
            raise ConfigError("mean_out_refs must be a finite non-negative number")
        if not 0 <= self.seed <= _MASK:
            raise ConfigError("seed must be a 64-bit unsigned integer")


def gen_synthetic(params: GenParams) -> tuple:
    """Generate ``(graph, fps)`` where fps have at least one reference and one citer."""
    params.validate()
    rng = SplitMix64(params.seed)
    n = params.n_papers
    lo, hi = params.year_range
    width = len(str(n - 1))
    ids = [f"P{i:0{width}d}" for i in range(n)]
    years = [lo + rng.below(hi - lo + 1) for _ in range(n)]

    by_year = sorted(range(n), key=lambda i: (years[i], i))
    sorted_years = [years[i] for i in by_year]

    edges = []
    for i in range(n):
        k = rng.poisson(params.mean_out_refs)
        m = bisect.bisect_left(sorted_years, years[i])
        if k == 0 or m == 0:
            continue
        picked = {by_year[rng.below(m)] for _ in range(k)}
        edges.extend((ids[i], ids[j]) for j in sorted(picked))

    graph = build_graph(dict(zip(ids, years)), edges)
    fps = [p for p in ids if graph.out_refs.get(p) and graph.in_cites.get(p)]
    return graph, fps


def naive_classify(graph: CitationGraph, fp: str, spec: Specification) -> TriCount:
    """Classify every paper of the corpus against ``fp`` by the definitions."""
    if fp not in graph.years:
        raise UnknownPaperError(fp)
    fp_year = graph.years[fp]
    if fp_year is None:
        raise UnknownYearError(fp)
    out_refs = graph.out_refs
    no_refs = frozenset()
    fp_refs = out_refs.get(fp, no_refs)
    length = spec.window.length
    post_only = spec.window.mode == WindowMode.POST_ONLY
    x = spec.x
    complement = spec.nf_mode == NFMode.COMPLEMENT

    n_f = n_b = n_r = skipped = 0
    for paper, year in graph.years.items():
        if paper == fp:
            continue
        refs = out_refs.get(paper, no_refs)
        cites_fp = fp in refs
        shared = len([r for r in refs if r in fp_refs])
        if not cites_fp and shared == 0:
            continue
        if year is None:
            skipped += 1
            continue
        if post_only and year < fp_year:
            continue
        if length is not None and year > fp_year + length:
            continue
        if cites_fp:
            if shared >= x:
                n_b += 1
            elif complement or shared == 0:
                n_f += 1
        else:
            n_r += 1
    return TriCount(n_f, n_b, n_r, skipped)


def fixture_path(name: str):
    return resources.files("dimultiverse") / "fixtures" / name


def load_fixture(name: str) -> CitationGraph:
    """Load a shipped fixture corpus, ``"g1"`` or ``"g2"``."""
    with resources.as_file(fixture_path(f"{name}_metadata.csv")) as meta, resources.as_file(
        fixture_path(f"{name}_edges.csv")
    ) as edges:
        return load_graph(meta, edges)
