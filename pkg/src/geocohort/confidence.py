"""Confidence scoring: bagged CART regression forests over guess features,
plus ROC/PR/AUC utilities for holdout evaluation."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .errors import InvalidLabel, SchemaMismatch, SingleClass, TooFewRows

POSITIVE_FEATURES = ("cluster_size_fraction", "total_entities", "is_us", "total_posts",
                     "history_duration_days", "guess_population")
NEGATIVE_FEATURES = ("total_entities", "total_posts", "history_duration_days")
SCHEMAS = {"positive": POSITIVE_FEATURES, "negative": NEGATIVE_FEATURES}
_GUESS_ONLY = ("cluster_size_fraction", "is_us", "guess_population")

LABEL_VALUES = (0.0, 0.5, 1.0)
MIN_TRAINING_ROWS = 10
FOREST_FORMAT = "geocohort-forest/1"


@dataclass(frozen=True)
class FeatureVector:
    total_entities: int
    total_posts: int
    history_duration_days: float
    cluster_size_fraction: float | None = None
    is_us: int | None = None
    guess_population: int | None = None

    def __post_init__(self):
        present = [getattr(self, f) is not None for f in _GUESS_ONLY]
        if any(present) and not all(present):
            raise SchemaMismatch("guess features must be all present or all absent")

    @property
    def variant(self) -> str:
        return "positive" if self.cluster_size_fraction is not None else "negative"

    def values(self, variant: str | None = None) -> list[float]:
        variant = variant or self.variant
        if variant != self.variant:
            raise SchemaMismatch(f"{self.variant} features given to a {variant} model")
        return [float(getattr(self, f)) for f in SCHEMAS[variant]]

    def as_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureVector":
        return cls(**{f.name: d.get(f.name) for f in fields(cls)})


def check_label(value: float) -> float:
    v = float(value)
    if v not in LABEL_VALUES:
        raise InvalidLabel(f"label {value!r} not in {LABEL_VALUES}")
    return v


def binarize_labels(labels: Iterable[float]) -> list[int]:
    """Partial and full credit count as positive."""
    return [1 if check_label(v) > 0 else 0 for v in labels]


@dataclass(frozen=True)
class ForestParams:
    seed: int
    n_trees: int = 200
    max_depth: int = 8
    min_leaf: int = 3
    features_per_split: int | None = None  # None: ceil(sqrt(d))

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 0 or self.min_leaf < 1:
            raise ValueError(f"invalid forest params {self}")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ValueError("features_per_split must be >= 1")

    def mtry(self, d: int) -> int:
        k = self.features_per_split or math.ceil(math.sqrt(d))
        return min(k, d)


@dataclass
class Tree:
    """Flat node arrays; ``feature == -1`` marks a leaf. Samples with
    ``x[feature] <= threshold`` go left."""
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        while True:
            feat = self.feature[node]
            internal = feat >= 0
            if not internal.any():
                return self.value[node]
            rows = np.nonzero(internal)[0]
            go_left = X[rows, feat[rows]] <= self.threshold[node[rows]]
            node[rows] = np.where(go_left, self.left[node[rows]], self.right[node[rows]])

    def as_dict(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Tree":
        return cls(np.asarray(d["feature"], dtype=np.int64),
                   np.asarray(d["threshold"], dtype=np.float64),
                   np.asarray(d["left"], dtype=np.int64),
                   np.asarray(d["right"], dtype=np.int64),
                   np.asarray(d["value"], dtype=np.float64))


def _best_split(x: np.ndarray, y: np.ndarray, min_leaf: int):
    """Best MSE split on one feature: (gain, threshold) or None."""
    n = len(y)
    order = np.argsort(x, kind="stable")
    xs, ys = x[order], y[order]
    csum = np.cumsum(ys)
    csq = np.cumsum(ys * ys)
    total, total_sq = csum[-1], csq[-1]
    nl = np.arange(1, n)  # left size for a split after position nl-1
    valid = (nl >= min_leaf) & (n - nl >= min_leaf) & (xs[1:] > xs[:-1])
    if not valid.any():
        return None
    sl, sql = csum[:-1], csq[:-1]
    sr, sqr = total - sl, total_sq - sql
    nr = n - nl
    sse = (sql - sl * sl / nl) + (sqr - sr * sr / nr)
    parent = total_sq - total * total / n
    gain = np.where(valid, parent - sse, -np.inf)
    i = int(np.argmax(gain))
    if not gain[i] > 0:
        return None
    lo, hi = xs[i], xs[i + 1]
    thr = lo + (hi - lo) / 2.0
    if not lo <= thr < hi:
        thr = lo
    return float(gain[i]), float(thr)


def _grow_tree(X: np.ndarray, y: np.ndarray, params: ForestParams, rng: np.random.Generator,
               gains: np.ndarray) -> Tree:
    d = X.shape[1]
    mtry = params.mtry(d)
    feature, threshold, left, right, value = [], [], [], [], []

    def new_node(v: float) -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(v)
        return len(value) - 1

    stack = [(np.arange(len(y)), 0, new_node(float(y.mean())))]
    while stack:
        idx, depth, node = stack.pop()
        yy = y[idx]
        if depth >= params.max_depth or len(idx) < 2 * params.min_leaf or yy.min() == yy.max():
            continue
        best = None
        for f in rng.choice(d, size=mtry, replace=False):
            split = _best_split(X[idx, f], yy, params.min_leaf)
            if split is not None and (best is None or split[0] > best[0]):
                best = (split[0], split[1], int(f))
        if best is None:
            continue
        gain, thr, f = best
        mask = X[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        gains[f] += gain
        feature[node], threshold[node] = f, thr
        left[node] = new_node(float(y[li].mean()))
        right[node] = new_node(float(y[ri].mean()))
        stack.append((ri, depth + 1, right[node]))
        stack.append((li, depth + 1, left[node]))

    return Tree(np.array(feature, dtype=np.int64), np.array(threshold, dtype=np.float64),
                np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
                np.array(value, dtype=np.float64))


@dataclass
class Forest:
    trees: list[Tree]
    params: ForestParams
    variant: str
    feature_importances: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def feature_names(self) -> tuple[str, ...]:
        return SCHEMAS[self.variant]

    def importance_by_name(self) -> dict[str, float]:
        return dict(zip(self.feature_names, map(float, self.feature_importances)))

    def predict_matrix(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != len(self.feature_names):
            raise SchemaMismatch(f"expected {len(self.feature_names)} {self.variant} features")
        total = np.zeros(len(X))
        for t in self.trees:
            total += t.predict(X)
        return np.clip(total / len(self.trees), 0.0, 1.0)

    def as_dict(self) -> dict:
        return {
            "format": FOREST_FORMAT,
            "variant": self.variant,
            "feature_names": list(self.feature_names),
            "params": asdict(self.params),
            "feature_importances": [float(v) for v in self.feature_importances],
            "trees": [t.as_dict() for t in self.trees],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Forest":
        if d.get("format") != FOREST_FORMAT:
            raise SchemaMismatch(f"unknown model format {d.get('format')!r}")
        if tuple(d["feature_names"]) != SCHEMAS[d["variant"]]:
            raise SchemaMismatch("model feature names do not match its variant")
        return cls([Tree.from_dict(t) for t in d["trees"]], ForestParams(**d["params"]),
                   d["variant"], np.asarray(d["feature_importances"], dtype=np.float64))


def rows_to_matrix(rows: Sequence[tuple[FeatureVector, float]], variant: str):
    X = np.array([fv.values(variant) for fv, _ in rows], dtype=np.float64).reshape(len(rows), -1)
    y = np.array([check_label(lab) for _, lab in rows], dtype=np.float64)
    return X, y


def train_forest(rows: Sequence[tuple[FeatureVector, float]], params: ForestParams,
                 variant: str | None = None) -> Forest:
    """Bagged MSE regression trees; deterministic given ``params.seed``."""
    if len(rows) < MIN_TRAINING_ROWS:
        raise TooFewRows(f"need at least {MIN_TRAINING_ROWS} rows, got {len(rows)}")
    variant = variant or rows[0][0].variant
    if variant not in SCHEMAS:
        raise SchemaMismatch(f"unknown variant {variant!r}")
    X, y = rows_to_matrix(rows, variant)
    n, d = X.shape
    gains = np.zeros(d)
    trees = []
    for t in range(params.n_trees):
        rng = np.random.default_rng([params.seed, t])
        boot = rng.integers(0, n, size=n)
        trees.append(_grow_tree(X[boot], y[boot], params, rng, gains))
    total = gains.sum()
    importances = gains / total if total > 0 else np.full(d, 1.0 / d)
    return Forest(trees, params, variant, importances)


def predict(forest: Forest, features: FeatureVector) -> float:
    return float(forest.predict_matrix([features.values(forest.variant)])[0])


def _check_binary(scores, labels):
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    if s.shape != y.shape or s.ndim != 1:
        raise ValueError("scores and labels must be equal-length vectors")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be 0/1")
    n_pos = int((y == 1).sum())
    if n_pos == 0 or n_pos == len(y):
        raise SingleClass("AUC needs both classes")
    return s, y.astype(np.int64)


def evaluate_auc(scores: Sequence[float], labels: Sequence[int]) -> float:
    """ROC AUC from the Mann-Whitney rank statistic; ties get average ranks."""
    s, y = _check_binary(scores, labels)
    ranks = rankdata(s, method="average")
    n1 = int(y.sum())
    n0 = len(y) - n1
    return float((ranks[y == 1].sum() - n1 * (n1 + 1) / 2.0) / (n1 * n0))


def _cumulative_counts(scores, labels):
    s, y = _check_binary(scores, labels)
    order = np.argsort(-s, kind="stable")
    s, y = s[order], y[order]
    last = np.r_[np.nonzero(np.diff(s))[0], len(s) - 1]
    tp = np.cumsum(y)[last]
    fp = (last + 1) - tp
    return s[last], tp, fp, int(y.sum()), len(y) - int(y.sum())


def roc_curve(scores, labels):
    """(fpr, tpr, thresholds), starting at (0, 0)."""
    thr, tp, fp, n1, n0 = _cumulative_counts(scores, labels)
    fpr = np.r_[0.0, fp / n0]
    tpr = np.r_[0.0, tp / n1]
    return fpr, tpr, np.r_[np.inf, thr]


def precision_recall_curve(scores, labels):
    """(precision, recall, thresholds) at each distinct threshold, highest first."""
    thr, tp, fp, n1, _ = _cumulative_counts(scores, labels)
    return tp / (tp + fp), tp / n1, thr


def split_holdout(n: int, fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic (train, test) index split with ``round(fraction * n)`` test rows."""
    if not 0.0 < fraction < 1.0:
        raise ValueError("holdout fraction must be in (0, 1)")
    perm = np.random.default_rng([seed, 0x5EED]).permutation(n)
    k = int(round(fraction * n))
    return np.sort(perm[k:]), np.sort(perm[:k])


def holdout_evaluation(rows: Sequence[tuple[FeatureVector, float]], params: ForestParams,
                       fraction: float = 0.33) -> dict:
    """Train on the non-held-out rows and score the holdout with binarized labels."""
    train_idx, test_idx = split_holdout(len(rows), fraction, params.seed)
    forest = train_forest([rows[i] for i in train_idx], params)
    test = [rows[i] for i in test_idx]
    X, _ = rows_to_matrix(test, forest.variant)
    scores = forest.predict_matrix(X)
    labels = binarize_labels(lab for _, lab in test)
    out = {"n_train": len(train_idx), "n_test": len(test_idx), "scores": scores.tolist(),
           "labels": labels, "auc": None}
    if 0 < sum(labels) < len(labels):
        out["auc"] = evaluate_auc(scores, labels)
    return out
