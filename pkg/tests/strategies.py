from hypothesis import strategies as st

from dimultiverse.core import NFMode, Specification, WindowMode, WindowSpec
from dimultiverse.graph import build_graph


def spec(x=1, y=5, mode="post", z_refs=0, z_cites=0, nf="complement"):
    return Specification(x, WindowSpec(y, WindowMode(mode)), z_refs, z_cites, NFMode(nf))


@st.composite
def citation_graphs(draw, max_papers=14):
    """Small graphs with arbitrary edge direction and some Unknown years."""
    n = draw(st.integers(1, max_papers))
    ids = [f"p{i}" for i in range(n)]
    years = {
        p: draw(st.one_of(st.none(), st.integers(1990, 2010)) if i else st.integers(1990, 2010))
        for i, p in enumerate(ids)
    }
    edges = draw(st.lists(st.tuples(st.sampled_from(ids), st.sampled_from(ids)), max_size=4 * n))
    return build_graph(years, edges)


specifications = st.builds(
    Specification,
    x=st.integers(1, 5),
    window=st.builds(
        WindowSpec,
        length=st.one_of(st.none(), st.integers(1, 12)),
        mode=st.sampled_from(list(WindowMode)),
    ),
    z_refs=st.integers(0, 4),
    z_cites=st.integers(0, 3),
    nf_mode=st.sampled_from(list(NFMode)),
)
