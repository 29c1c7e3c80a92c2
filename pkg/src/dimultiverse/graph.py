"""Citation graph ingestion and lookup.

Two CSV inputs are supported::

    paper_id,pub_year        (metadata; pub_year may be empty)
    citing_id,cited_id       (one row per citation)

The resulting :class:`CitationGraph` is immutable: ``out_refs`` maps a paper
to the papers it cites, ``in_cites`` is the exact transpose.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Optional

from .errors import ConflictError, IngestError, UnknownPaperError

MIN_YEAR = 1500
MAX_YEAR = 2100

METADATA_HEADER = ("paper_id", "pub_year")
EDGES_HEADER = ("citing_id", "cited_id")

_EMPTY: frozenset = frozenset()


@dataclass(frozen=True)
class PaperMeta:
    id: str
    pub_year: Optional[int] = None  # None means Unknown


@dataclass
class PaperTable:
    """Papers read from a metadata file, before any edges are attached."""

    years: dict = field(default_factory=dict)
    duplicates: int = 0

    def add(self, paper_id: str, year: Optional[int], line=None, source=None) -> None:
        _check_id(paper_id, line, source)
        if year is not None and not MIN_YEAR <= year <= MAX_YEAR:
            raise IngestError(
                f"year {year} for {paper_id!r} outside [{MIN_YEAR}, {MAX_YEAR}]", line, source
            )
        if paper_id in self.years:
            if self.years[paper_id] != year:
                raise ConflictError(paper_id, self.years[paper_id], year, line, source)
            self.duplicates += 1
            return
        self.years[paper_id] = year

    def __len__(self):
        return len(self.years)


@dataclass(frozen=True)
class GraphCounters:
    edges_ingested: int = 0
    duplicates_dropped: int = 0
    self_loops_dropped: int = 0
    edges_with_unregistered_endpoints: int = 0
    papers_autoregistered: int = 0
    metadata_duplicates: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class CitationGraph:
    """Immutable, deduplicated citation graph.

    Build one with :func:`ingest_edges`, :func:`build_graph` or
    :func:`load_graph`; the constructor expects already-consistent indices.
    """

    __slots__ = ("_years", "_out", "_in", "counters", "_n_edges")

    def __init__(self, years, out_refs, in_cites, counters=None):
        self._years = MappingProxyType(years)
        self._out = MappingProxyType(out_refs)
        self._in = MappingProxyType(in_cites)
        self.counters = counters or GraphCounters()
        self._n_edges = sum(len(v) for v in out_refs.values())

    # -- read-only views -------------------------------------------------
    @property
    def papers(self) -> Mapping[str, PaperMeta]:
        return {p: PaperMeta(p, y) for p, y in self._years.items()}

    @property
    def years(self) -> Mapping[str, Optional[int]]:
        return self._years

    @property
    def out_refs(self) -> Mapping[str, frozenset]:
        return self._out

    @property
    def in_cites(self) -> Mapping[str, frozenset]:
        return self._in

    @property
    def n_papers(self) -> int:
        return len(self._years)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    def __contains__(self, paper_id) -> bool:
        return paper_id in self._years

    def __len__(self):
        return len(self._years)

    def __eq__(self, other):
        # counters are bookkeeping, not structure
        if not isinstance(other, CitationGraph):
            return NotImplemented
        return self._years == other._years and self._out == other._out

    __hash__ = None

    def __repr__(self):
        return f"CitationGraph(papers={self.n_papers}, edges={self.n_edges})"

    def meta(self, paper_id: str) -> PaperMeta:
        try:
            return PaperMeta(paper_id, self._years[paper_id])
        except KeyError:
            raise UnknownPaperError(paper_id) from None

    def year(self, paper_id: str) -> Optional[int]:
        try:
            return self._years[paper_id]
        except KeyError:
            raise UnknownPaperError(paper_id) from None

    def edges(self):
        """Yield every stored ``(citing, cited)`` pair in sorted order."""
        for citing in sorted(self._out):
            for cited in sorted(self._out[citing]):
                yield citing, cited


def cited_references(graph: CitationGraph, paper_id: str) -> frozenset:
    """Papers cited by ``paper_id`` (empty if it cites nothing)."""
    if paper_id not in graph:
        raise UnknownPaperError(paper_id)
    return graph.out_refs.get(paper_id, _EMPTY)


def citing_papers(graph: CitationGraph, paper_id: str) -> frozenset:
    """Papers that cite ``paper_id``."""
    if paper_id not in graph:
        raise UnknownPaperError(paper_id)
    return graph.in_cites.get(paper_id, _EMPTY)


class _GraphBuilder:
    """Single-writer accumulator behind the ingest functions."""

    def __init__(self, table: Optional[PaperTable] = None):
        self.years = dict(table.years) if table is not None else {}
        self.metadata_ids = frozenset(self.years)
        self.metadata_duplicates = table.duplicates if table is not None else 0
        self.out: dict = {}
        self.ingested = 0
        self.duplicates = 0
        self.self_loops = 0
        self.unregistered_edges = 0
        self.autoregistered = 0

    def add_edge(self, citing: str, cited: str) -> None:
        self.ingested += 1
        years = self.years
        if citing not in self.metadata_ids or cited not in self.metadata_ids:
            self.unregistered_edges += 1
            for p in (citing, cited):
                if p not in years:
                    years[p] = None
                    self.autoregistered += 1
        if citing == cited:
            self.self_loops += 1
            return
        refs = self.out.get(citing)
        if refs is None:
            self.out[citing] = {cited}
        elif cited in refs:
            self.duplicates += 1
        else:
            refs.add(cited)

    def build(self) -> CitationGraph:
        out = {p: frozenset(refs) for p, refs in self.out.items()}
        incoming: dict = {}
        for citing, refs in out.items():
            for cited in refs:
                incoming.setdefault(cited, []).append(citing)
        in_cites = {p: frozenset(v) for p, v in incoming.items()}
        counters = GraphCounters(
            edges_ingested=self.ingested,
            duplicates_dropped=self.duplicates,
            self_loops_dropped=self.self_loops,
            edges_with_unregistered_endpoints=self.unregistered_edges,
            papers_autoregistered=self.autoregistered,
            metadata_duplicates=self.metadata_duplicates,
        )
        return CitationGraph(self.years, out, in_cites, counters)


def _check_id(paper_id, line, source):
    if not paper_id:
        raise IngestError("empty paper id", line, source)


def _rows(lines, expected_header, delimiter, source):
    reader = csv.reader(lines, delimiter=delimiter)
    try:
        header = next(reader)
    except StopIteration:
        raise IngestError("missing header row", 1, source) from None
    except csv.Error as exc:
        raise IngestError(str(exc), 1, source) from None
    header = tuple(h.strip().lstrip("\ufeff") for h in header)
    if header != expected_header:
        raise IngestError(
            f"expected header {','.join(expected_header)!r}, got {','.join(header)!r}", 1, source
        )
    while True:
        try:
            row = next(reader)
        except StopIteration:
            return
        except csv.Error as exc:
            raise IngestError(str(exc), reader.line_num, source) from None
        if not row:
            continue
        if len(row) != len(expected_header):
            raise IngestError(
                f"expected {len(expected_header)} columns, got {len(row)}", reader.line_num, source
            )
        yield reader.line_num, [c.strip() for c in row]


def ingest_metadata(lines: Iterable[str], delimiter: str = ",", source=None) -> PaperTable:
    """Read ``paper_id,pub_year`` records into a :class:`PaperTable`.

    An empty year is stored as Unknown (``None``). Re-registering an id with
    the same year is counted in ``PaperTable.duplicates``; with a different
    year it raises :class:`ConflictError`.
    """
    table = PaperTable()
    for line_no, (paper_id, year_text) in _rows(lines, METADATA_HEADER, delimiter, source):
        if year_text == "":
            year = None
        else:
            try:
                year = int(year_text)
            except ValueError:
                raise IngestError(f"non-integer year {year_text!r}", line_no, source) from None
        table.add(paper_id, year, line_no, source)
    return table


def ingest_edges(
    lines: Iterable[str], table: Optional[PaperTable] = None, delimiter: str = ",", source=None
) -> CitationGraph:
    """Read ``citing_id,cited_id`` records and freeze the citation graph.

    Duplicate edges and self-citations are dropped and counted; endpoints
    absent from ``table`` are registered with an Unknown year.
    """
    builder = _GraphBuilder(table)
    for line_no, (citing, cited) in _rows(lines, EDGES_HEADER, delimiter, source):
        _check_id(citing, line_no, source)
        _check_id(cited, line_no, source)
        builder.add_edge(citing, cited)
    return builder.build()


def build_graph(years: Mapping[str, Optional[int]], edges: Iterable[tuple]) -> CitationGraph:
    """Construct a graph directly from a year table and an edge iterable."""
    table = PaperTable()
    for p, y in years.items():
        table.add(p, y)
    builder = _GraphBuilder(table)
    for citing, cited in edges:
        builder.add_edge(citing, cited)
    return builder.build()


def load_graph(metadata_path, edges_path, delimiter: str = ",") -> CitationGraph:
    with open(metadata_path, newline="", encoding="utf-8") as fh:
        table = ingest_metadata(fh, delimiter, source=os.fspath(metadata_path))
    with open(edges_path, newline="", encoding="utf-8") as fh:
        return ingest_edges(fh, table, delimiter, source=os.fspath(edges_path))


def write_graph(graph: CitationGraph, metadata_path, edges_path, delimiter: str = ",") -> None:
    """Write ``graph`` in the two-file CSV format (ids sorted)."""
    with open(metadata_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(METADATA_HEADER)
        for p in sorted(graph.years):
            y = graph.years[p]
            w.writerow((p, "" if y is None else y))
    with open(edges_path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        w.writerow(EDGES_HEADER)
        w.writerows(graph.edges())


def parse_graph(metadata_text: str, edges_text: str, delimiter: str = ",") -> CitationGraph:
    """Convenience wrapper for in-memory CSV text."""
    table = ingest_metadata(io.StringIO(metadata_text), delimiter)
    return ingest_edges(io.StringIO(edges_text), table, delimiter)
