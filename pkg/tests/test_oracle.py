import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimultiverse.core import TriCount, classify
from dimultiverse.errors import ConfigError, UnknownPaperError, UnknownYearError
from dimultiverse.graph import build_graph
from dimultiverse.multiverse import SpecGrid, build_grid
from dimultiverse.oracle import GenParams, SplitMix64, gen_synthetic, naive_classify

from strategies import citation_graphs, spec, specifications


class TestSplitMix64:
    def test_reference_vector(self):
        # published test vector for seed 1234567
        rng = SplitMix64(1234567)
        assert [rng.next() for _ in range(5)] == [
            6457827717110365317,
            3203168211198807973,
            9817491932198370423,
            4593380528125082431,
            16408922859458223821,
        ]

    def test_below_range_and_coverage(self):
        rng = SplitMix64(7)
        draws = [rng.below(6) for _ in range(6000)]
        assert set(draws) == set(range(6))
        assert all(800 < draws.count(k) < 1200 for k in range(6))

    def test_uniform_unit_interval(self):
        rng = SplitMix64(3)
        us = [rng.uniform() for _ in range(2000)]
        assert all(0.0 <= u < 1.0 for u in us)
        assert abs(sum(us) / len(us) - 0.5) < 0.03

    @pytest.mark.parametrize("mean", [0.5, 10.0, 45.0])
    def test_poisson_moments(self, mean):
        rng = SplitMix64(11)
        xs = [rng.poisson(mean) for _ in range(4000)]
        m = sum(xs) / len(xs)
        var = sum((x - m) ** 2 for x in xs) / (len(xs) - 1)
        se = math.sqrt(mean / len(xs))
        assert abs(m - mean) < 5 * se
        assert abs(var / mean - 1) < 0.15

    def test_poisson_zero(self):
        assert SplitMix64(1).poisson(0.0) == 0


class TestNaiveClassify:
    def test_g1(self, g1):
        assert naive_classify(g1, "F", spec(1, 5, "post")) == TriCount(1, 2, 1)

    @pytest.mark.parametrize("s", [spec(), spec(3, None, "all"), spec(2, 3, nf="strict-zero")])
    def test_isolated_fp(self, g1, s):
        assert naive_classify(g1, "I0", s) == TriCount(0, 0, 0)

    def test_vacuous_corpus(self):
        g = build_graph({"F": 2000}, [])
        assert naive_classify(g, "F", spec()) == TriCount(0, 0, 0)

    def test_errors(self, g2):
        with pytest.raises(UnknownPaperError):
            naive_classify(g2, "NOPE", spec())
        with pytest.raises(UnknownYearError):
            naive_classify(g2, "U", spec())


@given(citation_graphs(), specifications)
def test_naive_agrees_with_classify(g, s):
    for fp, y in g.years.items():
        if y is not None:
            assert classify(g, fp, s) == naive_classify(g, fp, s)


class TestGenerator:
    def test_deterministic(self):
        p = GenParams(300, (1990, 2000), 4.0, seed=99)
        g1, fps1 = gen_synthetic(p)
        g2, fps2 = gen_synthetic(p)
        assert g1 == g2 and fps1 == fps2
        assert list(g1.edges()) == list(g2.edges())

    def test_seed_matters(self):
        a, _ = gen_synthetic(GenParams(300, (1990, 2000), 4.0, seed=1))
        b, _ = gen_synthetic(GenParams(300, (1990, 2000), 4.0, seed=2))
        assert a != b

    def test_no_references(self):
        g, fps = gen_synthetic(GenParams(100, (1990, 2000), 0.0, seed=5))
        assert g.n_edges == 0 and fps == []

    @pytest.mark.parametrize(
        "params",
        [
            GenParams(0),
            GenParams(10, (2000, 2000)),
            GenParams(10, (2001, 2000)),
            GenParams(10, mean_out_refs=-1.0),
            GenParams(10, mean_out_refs=float("nan")),
            GenParams(10, seed=-1),
            GenParams(10, seed=1 << 64),
        ],
    )
    def test_degenerate_params(self, params):
        with pytest.raises(ConfigError):
            gen_synthetic(params)

    @given(st.integers(2, 120), st.integers(0, 2**64 - 1), st.floats(0, 8))
    def test_time_order_and_fp_list(self, n, seed, mean):
        g, fps = gen_synthetic(GenParams(n, (1990, 1996), mean, seed))
        assert g.n_papers == n
        assert all(1990 <= y <= 1996 for y in g.years.values())
        for citing, cited in g.edges():
            # strictly earlier also rules out cycles
            assert g.years[cited] < g.years[citing]
        expected = sorted(p for p in g.years if g.out_refs.get(p) and g.in_cites.get(p))
        assert fps == expected

    def test_fifty_paper_equivalence_on_default_grid(self):
        g, fps = gen_synthetic(GenParams(50, (1990, 2005), 3.0, seed=42))
        assert fps
        grid = build_grid(SpecGrid())
        for fp in fps:
            for s in grid:
                assert classify(g, fp, s) == naive_classify(g, fp, s)
