import io

import pytest
from hypothesis import given

from dimultiverse.errors import ConflictError, IngestError, UnknownPaperError
from dimultiverse.graph import (
    build_graph,
    cited_references,
    citing_papers,
    ingest_edges,
    ingest_metadata,
    load_graph,
    parse_graph,
    write_graph,
)

from strategies import citation_graphs


def meta(*rows):
    return io.StringIO("paper_id,pub_year\n" + "".join(f"{a},{b}\n" for a, b in rows))


def edges(*rows):
    return io.StringIO("citing_id,cited_id\n" + "".join(f"{a},{b}\n" for a, b in rows))


class TestIngestMetadata:
    def test_years_stored(self):
        table = ingest_metadata(meta(("F", 2000), ("R1", 1995)))
        assert table.years == {"F": 2000, "R1": 1995}

    def test_empty_year_is_unknown(self):
        assert ingest_metadata(meta(("P0", ""))).years == {"P0": None}

    def test_conflicting_duplicate(self):
        with pytest.raises(ConflictError) as exc:
            ingest_metadata(meta(("F", 2000), ("F", 1999)))
        assert exc.value.paper_id == "F"
        assert "'F'" in str(exc.value)

    def test_identical_duplicate_counted(self):
        table = ingest_metadata(meta(("F", 2000), ("F", 2000)))
        assert table.years == {"F": 2000}
        assert table.duplicates == 1

    @pytest.mark.parametrize(
        "text, line",
        [
            ("paper_id,pub_year\nF,2000\nG,20x0\n", 3),
            ("paper_id,pub_year\nF,2000,1\n", 2),
            ("paper_id,pub_year\nF\n", 2),
            ("paper_id,pub_year\nF,1499\n", 2),
            ("paper_id,pub_year\nF,2101\n", 2),
            ("paper_id,pub_year\n,2000\n", 2),
        ],
    )
    def test_malformed_rows_report_line(self, text, line):
        with pytest.raises(IngestError) as exc:
            ingest_metadata(io.StringIO(text))
        assert exc.value.line == line

    def test_header_required(self):
        with pytest.raises(IngestError):
            ingest_metadata(io.StringIO("F,2000\n"))
        with pytest.raises(IngestError):
            ingest_metadata(io.StringIO(""))

    def test_tab_dialect(self):
        table = ingest_metadata(io.StringIO("paper_id\tpub_year\nF\t2000\n"), delimiter="\t")
        assert table.years == {"F": 2000}


class TestIngestEdges:
    def test_duplicates_dropped(self):
        g = ingest_edges(edges(("C1", "F"), ("C1", "F")), ingest_metadata(meta(("C1", 2001), ("F", 2000))))
        assert g.n_edges == 1
        assert g.counters.duplicates_dropped == 1

    def test_self_loop_dropped(self):
        g = ingest_edges(edges(("F", "F")), ingest_metadata(meta(("F", 2000))))
        assert g.n_edges == 0
        assert g.counters.self_loops_dropped == 1
        assert "F" not in cited_references(g, "F")

    def test_unregistered_endpoints_autocreated(self):
        g = ingest_edges(edges(("X", "F"), ("C", "F")), ingest_metadata(meta(("F", 2000), ("C", 2001))))
        assert g.year("X") is None
        assert g.counters.edges_with_unregistered_endpoints == 1
        assert g.counters.papers_autoregistered == 1

    def test_no_metadata_at_all(self):
        g = ingest_edges(edges(("A", "B")))
        assert g.years == {"A": None, "B": None}

    def test_malformed_row(self):
        with pytest.raises(IngestError) as exc:
            ingest_edges(io.StringIO("citing_id,cited_id\nA,B\nA\n"))
        assert exc.value.line == 3

    def test_g1(self, g1):
        assert g1.n_papers == 12
        assert cited_references(g1, "F") == {"R1", "R2"}
        assert citing_papers(g1, "F") == {"C1", "C2", "C4"}


class TestLookups:
    def test_cited_references(self, g1):
        assert cited_references(g1, "F") == {"R1", "R2"}
        assert cited_references(g1, "F2") == set()
        assert cited_references(g1, "C4") == {"F", "R1", "R2"}

    def test_citing_papers(self, g1):
        assert citing_papers(g1, "F") == {"C1", "C2", "C4"}
        assert citing_papers(g1, "I0") == set()
        assert citing_papers(g1, "R1") == {"P0", "F", "C2", "C4"}

    def test_unknown_id(self, g1):
        with pytest.raises(UnknownPaperError):
            cited_references(g1, "NOPE")
        with pytest.raises(UnknownPaperError):
            citing_papers(g1, "NOPE")


def test_read_only(g1):
    with pytest.raises(TypeError):
        g1.out_refs["F"] = frozenset()


def test_roundtrip_files(tmp_path, g1):
    write_graph(g1, tmp_path / "m.csv", tmp_path / "e.csv")
    assert load_graph(tmp_path / "m.csv", tmp_path / "e.csv") == g1


@given(citation_graphs())
def test_transpose_consistency(g):
    for p, refs in g.out_refs.items():
        assert p not in refs
        for q in refs:
            assert p in g.in_cites[q]
    for q, citers in g.in_cites.items():
        for p in citers:
            assert q in g.out_refs[p]
    for p in list(g.out_refs) + list(g.in_cites):
        assert p in g


@given(citation_graphs())
def test_ingest_idempotent_and_conserving(g):
    meta_text = "paper_id,pub_year\n" + "".join(
        f"{p},{'' if y is None else y}\n" for p, y in sorted(g.years.items())
    )
    body = "".join(f"{a},{b}\n" for a, b in g.edges())
    once = parse_graph(meta_text, "citing_id,cited_id\n" + body)
    twice = parse_graph(meta_text, "citing_id,cited_id\n" + body + body)
    assert once == twice == g
    assert twice.counters.duplicates_dropped == once.counters.duplicates_dropped + g.n_edges
    for h in (once, twice):
        c = h.counters
        assert c.edges_ingested == h.n_edges + c.duplicates_dropped + c.self_loops_dropped


def test_conservation_with_noise():
    g = build_graph({"a": 2000, "b": 2001}, [("b", "a"), ("b", "a"), ("a", "a"), ("c", "a")])
    c = g.counters
    assert (c.edges_ingested, g.n_edges, c.duplicates_dropped, c.self_loops_dropped) == (4, 2, 1, 1)
