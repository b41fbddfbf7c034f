import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlcc.baseline_hc import single_linkage
from mlcc.core import Dataset, EmptyInputError, Lattice, PValueField, UndefinedMetricError
from mlcc.metrics import anomaly_auc, averaged_purity_hc, averaged_purity_mlcc, purity
from mlcc.multilevel import build_tree, default_ladder, leaf_order, trajectories


def test_purity_examples():
    assert purity([1, 1, 2, 2]) == 0.5
    assert purity(["a"] * 7 + ["b"] * 3) == 0.7
    assert purity([3]) == 1.0
    with pytest.raises(EmptyInputError):
        purity([])


def test_mlcc_purity_averages_split_children():
    # two islands on a line; left island holds a pure class, right is mixed
    lat = Lattice((5,), (0,), (4,))
    f = PValueField(lat, [5, 5, 1, 5, 5], 4)
    tree = build_tree(f, default_ladder(4))
    data = Dataset([[0.0], [1.0], [3.0], [4.0]])
    dn = leaf_order(trajectories(data, tree), tree)
    rep = averaged_purity_mlcc(dn, ["a", "a", "a", "b"])
    assert sorted(rep.purities) == [0.5, 1.0]
    assert rep.mean == 0.75


def test_mlcc_purity_without_splits():
    lat = Lattice((3,), (0,), (2,))
    tree = build_tree(PValueField(lat, [4, 4, 4], 3), default_ladder(3))
    dn = leaf_order(trajectories(Dataset([[0.0], [1.0], [2.0]]), tree), tree)
    rep = averaged_purity_mlcc(dn, [1, 1, 2])
    assert rep.warning == "no splits"
    assert rep.mean == pytest.approx(2 / 3)


def test_hc_purity_two_blocks():
    pts = [[0.0], [0.1], [0.2], [10.0], [10.1]]
    tree = single_linkage(Dataset(pts))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = averaged_purity_hc(tree, [0, 0, 0, 1, 1], n_splits=1)
    assert rep.purities == (1.0, 1.0)
    assert sorted(rep.sizes) == [2, 3]


def test_hc_purity_warns_on_small_samples():
    with pytest.warns(UserWarning):
        averaged_purity_hc(single_linkage(Dataset([[0.0], [1.0], [5.0]])), [0, 0, 1])


def test_auc_examples():
    assert anomaly_auc([0.1, 0.2, 0.8, 0.9], [1, 1, 0, 0]).auc == 1.0
    assert anomaly_auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]).auc == 0.0
    assert anomaly_auc([0.5, 0.5], [1, 0]).auc == 0.5
    with pytest.raises(UndefinedMetricError):
        anomaly_auc([0.1, 0.2], [0, 0])


def sweep_auc(p, noise):
    """Trapezoidal area under the ROC curve traced by thresholding p <= t."""
    p, noise = np.asarray(p, float), np.asarray(noise, bool)
    fpr, tpr = [0.0], [0.0]
    for t in np.unique(p):
        flagged = p <= t
        tpr.append((flagged & noise).sum() / noise.sum())
        fpr.append((flagged & ~noise).sum() / (~noise).sum())
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    return float(trapezoid(tpr, fpr))


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(0, 6), st.booleans()), min_size=2, max_size=40))
def test_auc_matches_threshold_sweep(rows):
    p = [v / 7 for v, _ in rows]
    noise = [n for _, n in rows]
    if all(noise) or not any(noise):
        return
    assert anomaly_auc(p, noise).auc == pytest.approx(sweep_auc(p, noise), abs=1e-12)


def test_auc_invariant_under_monotone_transform(rng):
    p = rng.uniform(size=50)
    noise = rng.uniform(size=50) < 0.3
    assert anomaly_auc(p, noise).auc == pytest.approx(anomaly_auc(np.sqrt(p) * 3 + 1, noise).auc)
