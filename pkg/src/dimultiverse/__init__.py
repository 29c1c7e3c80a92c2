"""Disruption index DI1 and its specification multiverse over citation graphs."""

__version__ = "0.1.0"

from .core import (
    FocalNeighborhood,
    NFMode,
    ScoreOutcome,
    Specification,
    Status,
    TriCount,
    WindowMode,
    WindowSpec,
    classify,
    compute_score,
    coupling_strength,
    di_score,
    eligible,
    in_window,
)
from .errors import ConfigError, ConflictError, IngestError, UnknownPaperError, UnknownYearError
from .graph import (
    CitationGraph,
    PaperMeta,
    build_graph,
    cited_references,
    citing_papers,
    ingest_edges,
    ingest_metadata,
    load_graph,
)
from .multiverse import (
    SpecGrid,
    build_grid,
    extremes,
    kde,
    run_sweep,
    spec_curve,
    summarize,
)
