from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlcc.conformal import field, p_value, p_value_counts
from mlcc.core import Dataset, InsufficientDataError, Lattice
from mlcc.ncm import NcmConfig

import reference


def test_p_value_far_point():
    # alphas (1, 1, 1, 8): only the query itself reaches 8
    assert p_value(Dataset([[0], [1], [2]]), [10], NcmConfig(1)) == Fraction(1, 4)


def test_p_value_between_points():
    # alphas (1, 0.5, 0.5, 0.5): every score >= 0.5
    assert p_value(Dataset([[0], [1], [2]]), [1.5], NcmConfig(1)) == 1


def test_p_value_full_tie():
    assert p_value(Dataset([[2.0, 2.0]] * 4), [2.0, 2.0], NcmConfig(2)) == 1


def test_p_value_matches_reference():
    pts = [[0], [1], [2]]
    for z in ([10], [1.5], [0.2], [-3]):
        assert p_value(Dataset(pts), z, NcmConfig(1)) == reference.p_value(pts, z, 1)


def test_insufficient_data():
    with pytest.raises(InsufficientDataError):
        p_value(Dataset([[0], [1]]), [0.5], NcmConfig(3))
    with pytest.raises(InsufficientDataError):
        field(Dataset([[0], [1]]), Lattice((3,), (0,), (1,)), NcmConfig(3))


def test_single_point_dataset():
    lat = Lattice((5,), (0,), (4,))
    f = field(Dataset([[2.0]]), lat, NcmConfig(1))
    assert set(f.p.tolist()) <= {0.5, 1.0}
    # with one training point both scores are the same distance, so always tied
    assert f.p.tolist() == [1.0] * 5


def test_field_equals_per_node_calls():
    ds = Dataset([[0.0], [1.0], [3.5]])
    lat = Lattice((5,), (0,), (4,))
    f = field(ds, lat, NcmConfig(1))
    expected = [p_value(ds, lat.node_coordinates(i), NcmConfig(1)) for i in range(5)]
    assert [f.fraction(i) for i in range(5)] == expected


@settings(max_examples=30)
@given(st.integers(1, 12), st.integers(1, 3), st.data())
def test_field_matches_reference_on_integer_data(l, d, data):
    # integer coordinates produce many exact ties
    k = data.draw(st.integers(1, l))
    pts = data.draw(st.lists(st.lists(st.integers(0, 3), min_size=d, max_size=d), min_size=l, max_size=l))
    lat = Lattice((4,) * d, (0,) * d, (3,) * d)
    f = field(Dataset(np.array(pts, float)), lat, NcmConfig(k))
    for i in range(lat.size):
        assert f.fraction(i) == reference.p_value(pts, lat.node_coordinates(i).tolist(), k)


def test_field_permutation_invariant(rng):
    pts = rng.normal(size=(25, 2)) * 5 + 10
    lat = Lattice.regular(2, 9, 20)
    a = field(Dataset(pts), lat, NcmConfig(4))
    b = field(Dataset(pts[rng.permutation(25)]), lat, NcmConfig(4))
    assert a == b


def test_field_independent_of_workers_and_blocks(rng):
    ds = Dataset(rng.uniform(0, 20, size=(60, 2)))
    lat = Lattice.regular(2, 21, 20)
    base = field(ds, lat, NcmConfig(5), workers=1)
    for workers, block in [(3, 7), (4, 256), ("max", 50), (2, 1)]:
        assert field(ds, lat, NcmConfig(5), workers=workers, block=block) == base


def test_counts_range(rng):
    ds = Dataset(rng.normal(size=(30, 3)))
    counts = p_value_counts(ds, rng.normal(size=(100, 3)) * 3, NcmConfig(5))
    assert counts.min() >= 1 and counts.max() <= 31


def test_validity_small_monte_carlo():
    # each p-value of an exchangeable query is uniform on {1..l+1}/(l+1) up to ties
    rng = np.random.default_rng(7)
    l, reps = 19, 400
    hits = 0
    for _ in range(reps):
        x = rng.normal(size=(l + 1, 2))
        c = p_value_counts(Dataset(x[:l]), x[l:], NcmConfig(3))[0]
        hits += c <= 2  # p <= 0.1
    assert hits / reps <= 0.1 + 3 * np.sqrt(0.1 * 0.9 / reps)
