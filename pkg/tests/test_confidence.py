import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geocohort.confidence import (POSITIVE_FEATURES, Forest, FeatureVector, ForestParams,
                                  binarize_labels, check_label, evaluate_auc, holdout_evaluation,
                                  precision_recall_curve, predict, roc_curve, rows_to_matrix,
                                  split_holdout, train_forest)
from geocohort.errors import InvalidLabel, SchemaMismatch, SingleClass, TooFewRows

from fixtures import threshold_rows
from oracles import auc_pairwise, tree_predict_loop

SMALL = ForestParams(seed=1, n_trees=25, max_depth=5, min_leaf=3)


def test_feature_vector_schema():
    fv = FeatureVector(3, 10, 5.0, 0.5, 1, 1000)
    assert fv.variant == "positive" and len(fv.values()) == len(POSITIVE_FEATURES)
    neg = FeatureVector(3, 10, 5.0)
    assert neg.variant == "negative" and neg.values() == [3.0, 10.0, 5.0]
    with pytest.raises(SchemaMismatch):
        FeatureVector(3, 10, 5.0, 0.5)
    with pytest.raises(SchemaMismatch):
        neg.values("positive")
    assert FeatureVector.from_dict(fv.as_dict()) == fv


def test_labels():
    assert binarize_labels([0, 0.5, 1]) == [0, 1, 1]
    with pytest.raises(InvalidLabel):
        check_label(0.7)


def test_auc_examples():
    assert evaluate_auc([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0]) == 1.0
    assert evaluate_auc([0.5, 0.5, 0.5, 0.5], [1, 0, 1, 0]) == 0.5
    assert evaluate_auc([0.1, 0.2, 0.8, 0.9], [1, 1, 0, 0]) == 0.0
    with pytest.raises(SingleClass):
        evaluate_auc([0.1, 0.2], [1, 1])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 6).map(lambda v: v / 6), st.integers(0, 1)),
                min_size=2, max_size=60).filter(lambda r: 0 < sum(y for _, y in r) < len(r)))
def test_auc_matches_pairwise(rows):
    s, y = zip(*rows)
    assert abs(evaluate_auc(s, y) - auc_pairwise(s, y)) <= 1e-12


def test_roc_and_pr_curves():
    s, y = [0.9, 0.8, 0.8, 0.3, 0.1], [1, 0, 1, 1, 0]
    fpr, tpr, thr = roc_curve(s, y)
    assert fpr[0] == 0 and tpr[0] == 0 and fpr[-1] == 1 and tpr[-1] == 1
    assert np.all(np.diff(fpr) >= 0) and np.all(np.diff(tpr) >= 0)
    assert np.trapezoid(tpr, fpr) == pytest.approx(evaluate_auc(s, y))
    prec, rec, _ = precision_recall_curve(s, y)
    assert prec[0] == 1.0 and rec[-1] == 1.0 and prec[-1] == pytest.approx(3 / 5)


def test_split_holdout():
    tr, te = split_holdout(100, 0.33, seed=4)
    assert len(te) == 33 and len(tr) == 67
    assert sorted(np.r_[tr, te].tolist()) == list(range(100))
    tr2, te2 = split_holdout(100, 0.33, seed=4)
    assert (te == te2).all()


def test_too_few_rows():
    with pytest.raises(TooFewRows):
        train_forest(threshold_rows(9), SMALL)


def test_forest_round_trip_and_oracle():
    rows = threshold_rows(120, seed=2)
    f = train_forest(rows, SMALL)
    X, _ = rows_to_matrix(rows, "positive")
    text = json.dumps(f.as_dict())
    g = Forest.from_dict(json.loads(text))
    assert json.dumps(g.as_dict()) == text
    assert np.array_equal(f.predict_matrix(X), g.predict_matrix(X))
    trees = f.as_dict()["trees"]
    for row, p in zip(X[:30], f.predict_matrix(X[:30])):
        manual = sum(tree_predict_loop(t, row) for t in trees) / len(trees)
        assert p == pytest.approx(min(max(manual, 0.0), 1.0), abs=1e-12)


def test_forest_bounds_and_schema():
    rows = threshold_rows(80, seed=5)
    f = train_forest(rows, SMALL)
    X, _ = rows_to_matrix(rows, "positive")
    p = f.predict_matrix(X)
    assert p.min() >= 0 and p.max() <= 1
    assert sum(f.importance_by_name().values()) == pytest.approx(1.0)
    with pytest.raises(SchemaMismatch):
        predict(f, FeatureVector(1, 2, 3.0))
    with pytest.raises(SchemaMismatch):
        Forest.from_dict({**f.as_dict(), "format": "other"})


def test_same_seed_identical_different_seed_not():
    rows = threshold_rows(100, seed=9)
    a = train_forest(rows, SMALL).as_dict()
    assert train_forest(rows, SMALL).as_dict() == a
    assert train_forest(rows, ForestParams(seed=2, n_trees=25, max_depth=5)).as_dict() != a


def test_constant_labels_uniform_importance():
    rows = [(fv, 1.0) for fv, _ in threshold_rows(30)]
    f = train_forest(rows, SMALL)
    assert f.predict_matrix(rows_to_matrix(rows, "positive")[0]).tolist() == [1.0] * 30
    assert set(f.importance_by_name().values()) == {1 / 6}


def test_negative_variant():
    rng = np.random.default_rng(0)
    rows = []
    for _ in range(60):
        ents = int(rng.integers(0, 10))
        rows.append((FeatureVector(ents, int(rng.integers(1, 100)), float(rng.uniform(0, 500))),
                     1.0 if ents < 3 else 0.0))
    f = train_forest(rows, SMALL)
    assert f.variant == "negative"
    assert max(f.importance_by_name(), key=f.importance_by_name().get) == "total_entities"


def test_holdout_evaluation_shape():
    out = holdout_evaluation(threshold_rows(150), SMALL, 0.33)
    assert out["n_test"] == 50 and out["n_train"] == 100 and 0.5 < out["auc"] <= 1.0
