import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mlcc.core import InsufficientDataError, ShapeError
from mlcc.ncm import NcmConfig, knn_sum_ncm


def test_examples():
    assert knn_sum_ncm([[0], [1], [2]], [10], NcmConfig(1)) == 8.0
    assert knn_sum_ncm([[0], [1], [2]], [1], NcmConfig(1)) == 0.0
    assert knn_sum_ncm([[0], [3]], [1], NcmConfig(2)) == 3.0


def test_errors():
    with pytest.raises(InsufficientDataError):
        knn_sum_ncm([[0], [1]], [3], NcmConfig(3))
    with pytest.raises(ShapeError):
        knn_sum_ncm([[0, 1], [1, 1]], [3], NcmConfig(1))
    with pytest.raises(ValueError):
        NcmConfig(0)
    with pytest.raises(ValueError):
        NcmConfig(3, metric="manhattan")


bags = arrays(float, st.tuples(st.integers(3, 20), st.just(2)), elements=st.floats(-50, 50))


@given(bags, st.tuples(st.floats(-50, 50), st.floats(-50, 50)))
def test_monotone_in_k(bag, z):
    scores = [knn_sum_ncm(bag, z, NcmConfig(k)) for k in range(1, len(bag) + 1)]
    assert all(b >= a for a, b in zip(scores, scores[1:]))


@given(bags, st.tuples(st.floats(-50, 50), st.floats(-50, 50)), st.randoms())
def test_permutation_invariant(bag, z, rnd):
    perm = list(range(len(bag)))
    rnd.shuffle(perm)
    assert knn_sum_ncm(bag[perm], z, NcmConfig(3)) == knn_sum_ncm(bag, z, NcmConfig(3))


@given(bags, st.tuples(st.floats(-50, 50), st.floats(-50, 50)), st.tuples(st.floats(-50, 50), st.floats(-50, 50)))
def test_translation_invariant(bag, z, shift):
    a = knn_sum_ncm(bag, z, NcmConfig(3))
    b = knn_sum_ncm(bag + np.array(shift), np.array(z) + np.array(shift), NcmConfig(3))
    assert b == pytest.approx(a, rel=1e-9, abs=1e-9)
