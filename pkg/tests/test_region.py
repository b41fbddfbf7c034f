import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mlcc.core import Lattice, PValueField
from mlcc.region import (
    UnionFind,
    connected_components,
    nested_components,
    neighbour_offsets,
    threshold,
)

import reference


def grid3():
    return Lattice((3, 3), (0, 0), (2, 2))


def as_sets(comps):
    return {frozenset(g.tolist()) for g in comps.groups()}


def test_threshold_example():
    f = PValueField(Lattice((4,), (0,), (3,)), [1, 2, 3, 4], 3)  # 0.25 .. 1.0
    assert threshold(f, 0.5).tolist() == [1, 2, 3]
    assert threshold(f, 0.2).tolist() == [0, 1, 2, 3]
    assert threshold(f, 0.99).tolist() == [3]
    with pytest.raises(ValueError):
        threshold(f, 1.0)
    with pytest.raises(ValueError):
        threshold(f, 0.0)


def test_diagonal_neighbours_join_under_moore():
    lat = grid3()
    members = [lat.flat_index((0, 0)), lat.flat_index((1, 1))]
    assert connected_components(lat, members).count == 1
    assert connected_components(lat, members, "vonneumann").count == 2


def test_gap_of_two_separates():
    lat = grid3()
    members = [lat.flat_index((0, 0)), lat.flat_index((0, 2))]
    assert connected_components(lat, members).count == 2


def test_single_member_and_empty():
    c = connected_components(grid3(), [4])
    assert c.count == 1 and c.sizes().tolist() == [1]
    assert connected_components(grid3(), []).count == 0


def test_offsets():
    assert len(neighbour_offsets(3)) == 26
    assert len(neighbour_offsets(3, "vonneumann")) == 6


def test_canonical_numbering():
    lat = Lattice((1, 9), (0, 0), (1, 8))
    # components {0}, {2,3}, {5,6}, {8}: sizes 1,2,2,1
    c = connected_components(lat, [0, 2, 3, 5, 6, 8])
    assert c.labels.tolist() == [2, 0, 0, 1, 1, 3]


def test_union_find():
    uf = UnionFind(6)
    uf.union(0, 1)
    uf.union(3, 4)
    uf.union(1, 4)
    r = uf.roots(np.arange(6))
    assert len(set(r[[0, 1, 3, 4]].tolist())) == 1
    assert len(set(r.tolist())) == 3


@given(
    st.lists(st.integers(1, 6), min_size=1, max_size=3),
    st.sampled_from(["moore", "vonneumann"]),
    st.data(),
)
def test_matches_flood_fill(res, adjacency, data):
    lat = Lattice(tuple(res), (0,) * len(res), (1,) * len(res))
    members = data.draw(st.sets(st.integers(0, lat.size - 1)))
    got = as_sets(connected_components(lat, sorted(members), adjacency))
    want = set(reference.flood_fill(lat.resolution, members, adjacency == "moore"))
    assert got == want


def random_field(rng, res, l=20):
    lat = Lattice(res, (0,) * len(res), (1,) * len(res))
    return PValueField(lat, rng.integers(1, l + 2, size=lat.size), l)


def test_nested_components_match_direct(rng):
    for res in [(7, 9), (4, 4, 4), (30,)]:
        f = random_field(rng, res)
        levels = [k / 21 for k in range(1, 21)]
        for lvl, comp in zip(levels, nested_components(f, levels)):
            direct = connected_components(f.lattice, threshold(f, lvl))
            assert np.array_equal(comp.nodes, direct.nodes)
            assert np.array_equal(comp.labels, direct.labels)


def test_nesting_and_refinement(rng):
    f = random_field(rng, (12, 12))
    levels = [k / 21 for k in range(1, 21)]
    comps = nested_components(f, levels)
    for lo, hi in zip(comps, comps[1:]):
        assert set(hi.nodes.tolist()) <= set(lo.nodes.tolist())
        lo_lab = lo.as_array(f.lattice.size)
        for g in hi.groups():
            assert len(set(lo_lab[g].tolist())) == 1
