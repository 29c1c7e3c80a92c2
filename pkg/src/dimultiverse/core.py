"""Disruption index DI1 under one specification of its free parameters.

For a focal paper (FP) and a candidate universe ``W`` of papers inside the
citation window:

* N_B  citers of the FP sharing at least ``x`` of the FP's references,
* N_F  the remaining citers (``COMPLEMENT``) or only citers sharing none of
  them (``STRICT_ZERO``),
* N_R  papers citing at least one FP reference but not the FP itself,

and ``DI1 = (N_F - N_B) / (N_F + N_B + N_R)``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .errors import ConfigError, UnknownYearError
from .graph import CitationGraph, PaperMeta, cited_references, citing_papers


class WindowMode(str, enum.Enum):
    POST_ONLY = "post"
    ALL_PUBLICATIONS = "all"


class NFMode(str, enum.Enum):
    COMPLEMENT = "complement"
    STRICT_ZERO = "strict-zero"


class Status(str, enum.Enum):
    DEFINED = "defined"
    UNDEFINED = "undefined"
    INELIGIBLE = "ineligible"


@dataclass(frozen=True)
class WindowSpec:
    """Citation window of ``length`` years after the FP; ``None`` is unbounded."""

    length: Optional[int] = None
    mode: WindowMode = WindowMode.POST_ONLY

    def __post_init__(self):
        if self.length is not None and (
            isinstance(self.length, bool) or not isinstance(self.length, int) or self.length < 1
        ):
            raise ConfigError(f"window length must be a positive integer or None, got {self.length!r}")
        object.__setattr__(self, "mode", WindowMode(self.mode))

    def bounds(self, fp_year: int) -> tuple:
        """Inclusive ``(lo, hi)`` year bounds; either side may be None (open)."""
        hi = None if self.length is None else fp_year + self.length
        lo = fp_year if self.mode is WindowMode.POST_ONLY else None
        return lo, hi


@dataclass(frozen=True)
class Specification:
    x: int = 1
    window: WindowSpec = WindowSpec()
    z_refs: int = 0
    z_cites: int = 0
    nf_mode: NFMode = NFMode.COMPLEMENT

    def __post_init__(self):
        for name, lo in (("x", 1), ("z_refs", 0), ("z_cites", 0)):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < lo:
                raise ConfigError(f"{name} must be an integer >= {lo}, got {v!r}")
        object.__setattr__(self, "nf_mode", NFMode(self.nf_mode))

    @property
    def y(self) -> Optional[int]:
        return self.window.length

    @property
    def window_mode(self) -> WindowMode:
        return self.window.mode

    def label(self) -> str:
        y = "inf" if self.y is None else self.y
        return f"X={self.x}, Y={y}, Z={self.z_refs}"


@dataclass(frozen=True)
class TriCount:
    n_f: int
    n_b: int
    n_r: int
    skipped_unknown_year: int = 0

    @property
    def denominator(self) -> int:
        return self.n_f + self.n_b + self.n_r


@dataclass(frozen=True)
class ScoreOutcome:
    status: Status
    score: Optional[float] = None
    counts: Optional[TriCount] = None

    @property
    def is_defined(self) -> bool:
        return self.status is Status.DEFINED


INELIGIBLE = ScoreOutcome(Status.INELIGIBLE)


def in_window(meta: PaperMeta, fp_meta: PaperMeta, window: WindowSpec) -> bool:
    """Whether ``meta`` falls inside the FP's citation window.

    Bounds are inclusive calendar years. Unknown years never pass.
    """
    if fp_meta.pub_year is None:
        raise UnknownYearError(fp_meta.id)
    year = meta.pub_year
    if year is None:
        return False
    lo, hi = window.bounds(fp_meta.pub_year)
    if lo is not None and year < lo:
        return False
    if hi is not None and year > hi:
        return False
    return True


def coupling_strength(graph: CitationGraph, fp_refs, citer: str) -> int:
    """Number of ``fp_refs`` that ``citer`` also cites."""
    refs = cited_references(graph, citer)
    if len(refs) > len(fp_refs):
        refs, fp_refs = fp_refs, refs
    return sum(1 for r in refs if r in fp_refs)


def di_score(counts: TriCount) -> ScoreOutcome:
    d = counts.denominator
    if d == 0:
        return ScoreOutcome(Status.UNDEFINED, None, counts)
    return ScoreOutcome(Status.DEFINED, (counts.n_f - counts.n_b) / d, counts)


def eligible(graph: CitationGraph, fp: str, spec: Specification) -> bool:
    # citation count is over the whole graph, not the window
    return (
        len(cited_references(graph, fp)) >= spec.z_refs
        and len(citing_papers(graph, fp)) >= spec.z_cites
    )


class FocalNeighborhood:
    """Window-independent summary of one FP's citation neighbourhood.

    Holds year histograms of citers (keyed by coupling strength) and of
    reference-only citers, so that classifying under any number of
    specifications costs O(distinct years) each.
    """

    __slots__ = ("fp", "fp_year", "n_refs", "n_cites", "citers", "others", "unknown")

    def __init__(self, graph: CitationGraph, fp: str):
        fp_year = graph.year(fp)
        if fp_year is None:
            raise UnknownYearError(fp)
        refs = cited_references(graph, fp)
        cites = citing_papers(graph, fp)
        years = graph.years
        out = graph.out_refs
        in_cites = graph.in_cites

        citers: Counter = Counter()
        unknown = 0
        for c in cites:
            y = years[c]
            if y is None:
                unknown += 1
                continue
            c_refs = out[c]
            citers[y, sum(1 for r in refs if r in c_refs)] += 1

        others: Counter = Counter()
        seen = set()
        for r in refs:
            for p in in_cites.get(r, ()):
                if p in seen or p == fp or p in cites:
                    continue
                seen.add(p)
                y = years[p]
                if y is None:
                    unknown += 1
                else:
                    others[y] += 1

        self.fp = fp
        self.fp_year = fp_year
        self.n_refs = len(refs)
        self.n_cites = len(cites)
        self.citers = tuple(sorted(citers.items()))
        self.others = tuple(sorted(others.items()))
        self.unknown = unknown

    def eligible(self, spec: Specification) -> bool:
        return self.n_refs >= spec.z_refs and self.n_cites >= spec.z_cites

    def classify(self, spec: Specification) -> TriCount:
        lo, hi = spec.window.bounds(self.fp_year)
        lo = -1 if lo is None else lo
        hi = 1 << 30 if hi is None else hi
        x = spec.x
        strict = spec.nf_mode is NFMode.STRICT_ZERO
        n_f = n_b = n_r = 0
        for (y, k), n in self.citers:
            if y < lo or y > hi:
                continue
            if k >= x:
                n_b += n
            elif k == 0 or not strict:
                n_f += n
        for y, n in self.others:
            if lo <= y <= hi:
                n_r += n
        return TriCount(n_f, n_b, n_r, self.unknown)

    def score(self, spec: Specification) -> ScoreOutcome:
        if not self.eligible(spec):
            return INELIGIBLE
        return di_score(self.classify(spec))


def classify(graph: CitationGraph, fp: str, spec: Specification) -> TriCount:
    """Count N_F, N_B and N_R for ``fp`` under ``spec``."""
    return FocalNeighborhood(graph, fp).classify(spec)


def compute_score(graph: CitationGraph, fp: str, spec: Specification) -> ScoreOutcome:
    """DI1 of ``fp`` under ``spec``, or Ineligible if the Z filter rejects it."""
    return FocalNeighborhood(graph, fp).score(spec)
