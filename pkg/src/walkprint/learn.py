"""From-scratch random forest and the repeated cross-validation protocol.

Trees are CART classifiers: axis-aligned splits chosen by Gini impurity over
ceil(sqrt(F)) features sampled per node, grown until leaves are pure (or no
sampled feature separates the rows). Each tree sees a bootstrap resample of
the training rows. All randomness flows from integer seeds through fixed
derivation tuples, so training is reproducible and independent of how many
workers run it: tree i always uses the stream derived from (seed, i).

Tie rules, everywhere, favor the smallest index: equal-impurity splits take
the lowest feature then the lowest threshold, tied votes take the lowest
class in sorted-class order, and tied cross-validation scores take the
smallest tree count in the grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .util import derived_rng, derived_seed, ordered_map

SERIAL_FORMAT = "walkprint-forest"
SERIAL_VERSION = 1


@dataclass
class _Tree:
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf: np.ndarray  # class index at leaves, -1 on internal nodes
    bootstrap_indices: np.ndarray | None = None


@dataclass(frozen=True)
class RandomForestModel:
    trees: list[_Tree]
    classes: np.ndarray
    num_features: int
    num_features_per_split: int
    seed: int


@dataclass(frozen=True)
class EvaluationReport:
    mean_accuracy: float
    std_accuracy: float
    per_repeat_accuracies: list[float]
    chosen_hyperparameters: list[dict]

    def to_dict(self) -> dict:
        return {
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "per_repeat_accuracies": list(self.per_repeat_accuracies),
            "chosen_hyperparameters": list(self.chosen_hyperparameters),
        }


def _best_split(Xn: np.ndarray, yn: np.ndarray, feats: np.ndarray, n_classes: int):
    """Best (feature, threshold) over the sampled feature columns.

    Maximizes sum_c nL_c^2 / nL + sum_c nR_c^2 / nR, which is equivalent to
    minimizing the size-weighted Gini impurity. Returns None when no sampled
    column separates the rows.
    """
    n = yn.size
    sub = Xn[:, feats]
    order = np.argsort(sub, axis=0, kind="stable")
    sx = np.take_along_axis(sub, order, axis=0)
    sy = yn[order]
    onehot = np.identity(n_classes)[sy]  # (n, f, C)
    cum_left = np.cumsum(onehot, axis=0)[:-1]  # counts left of each boundary
    total = np.bincount(yn, minlength=n_classes).astype(np.float64)
    cum_right = total[None, None, :] - cum_left
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    score = (cum_left**2).sum(axis=2) / n_left + (cum_right**2).sum(axis=2) / n_right
    valid = sx[:-1] < sx[1:]
    if not valid.any():
        return None
    score = np.where(valid, score, -np.inf)
    per_feat_pos = np.argmax(score, axis=0)  # first max: lowest threshold
    per_feat_score = score[per_feat_pos, np.arange(feats.size)]
    best_f = int(np.argmax(per_feat_score))  # first max: lowest feature index
    if not np.isfinite(per_feat_score[best_f]):
        return None
    pos = int(per_feat_pos[best_f])
    threshold = 0.5 * (sx[pos, best_f] + sx[pos + 1, best_f])
    return int(feats[best_f]), float(threshold)


def _grow_tree(
    X: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    max_features: int,
    rng: np.random.Generator,
) -> _Tree:
    n = y.size
    feature, threshold, left, right, leaf = [], [], [], [], []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf.append(-1)
        return len(feature) - 1

    root = new_node()
    stack = [(root, np.arange(n))]
    while stack:
        node, rows = stack.pop()
        yn = y[rows]
        counts = np.bincount(yn, minlength=n_classes)
        if counts.max() == yn.size:
            leaf[node] = int(np.argmax(counts))
            continue
        feats = np.sort(rng.choice(X.shape[1], size=max_features, replace=False))
        split = _best_split(X[rows], yn, feats, n_classes)
        if split is None:
            leaf[node] = int(np.argmax(counts))
            continue
        f, thr = split
        mask = X[rows, f] < thr
        feature[node] = f
        threshold[node] = thr
        li, ri = new_node(), new_node()
        left[node], right[node] = li, ri
        # left child first keeps node ids in pre-order
        stack.append((ri, rows[~mask]))
        stack.append((li, rows[mask]))
    return _Tree(
        feature=np.asarray(feature, dtype=np.int32),
        threshold=np.asarray(threshold, dtype=np.float64),
        left=np.asarray(left, dtype=np.int32),
        right=np.asarray(right, dtype=np.int32),
        leaf=np.asarray(leaf, dtype=np.int32),
    )


def _tree_predict(tree: _Tree, X: np.ndarray) -> np.ndarray:
    node = np.zeros(X.shape[0], dtype=np.int64)
    rows = np.arange(X.shape[0])
    while True:
        internal = tree.leaf[node] < 0
        if not internal.any():
            break
        act = rows[internal]
        cur = node[act]
        go_left = X[act, tree.feature[cur]] < tree.threshold[cur]
        node[act] = np.where(go_left, tree.left[cur], tree.right[cur])
    return tree.leaf[node].astype(np.int64)


def train_forest(
    X, y, num_trees: int, seed: int, threads: int = 1
) -> RandomForestModel:
    """Train a forest of ``num_trees`` CART trees on bootstrap resamples."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.size:
        raise ValueError("X must be (rows, features) with one label per row")
    if X.shape[0] < 2:
        raise ValueError("need at least 2 training rows")
    if num_trees < 1:
        raise ValueError("num_trees must be >= 1")
    classes, y_idx = np.unique(y, return_inverse=True)
    if classes.size < 2:
        raise ValueError("training data holds a single class")

    n, F = X.shape
    m = math.ceil(math.sqrt(F))

    def build(i: int) -> _Tree:
        rng = derived_rng(seed, i)
        boot = rng.integers(0, n, size=n)
        tree = _grow_tree(X[boot], y_idx[boot], classes.size, m, rng)
        tree.bootstrap_indices = boot
        return tree

    trees = ordered_map(build, range(num_trees), threads=threads)
    return RandomForestModel(
        trees=trees,
        classes=classes,
        num_features=F,
        num_features_per_split=m,
        seed=seed,
    )


def predict(model: RandomForestModel, X) -> np.ndarray:
    """Majority vote over the forest; ties take the lowest class."""
    if not model.trees:
        raise ValueError("untrained model")
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.num_features:
        raise ValueError(
            f"feature matrix has {X.shape[1] if X.ndim == 2 else 'bad'} columns, "
            f"model expects {model.num_features}"
        )
    votes = np.zeros((X.shape[0], model.classes.size), dtype=np.int64)
    for tree in model.trees:
        pred = _tree_predict(tree, X)
        votes[np.arange(X.shape[0]), pred] += 1
    return model.classes[np.argmax(votes, axis=1)]


def accuracy_score(y_true, y_pred) -> float:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    return float(np.mean(y_true == y_pred))


def forest_to_dict(model: RandomForestModel) -> dict:
    """Self-describing flat representation, suitable for JSON."""
    return {
        "format": SERIAL_FORMAT,
        "version": SERIAL_VERSION,
        "classes": model.classes.tolist(),
        "num_features": model.num_features,
        "num_features_per_split": model.num_features_per_split,
        "seed": model.seed,
        "trees": [
            {
                "feature": t.feature.tolist(),
                "threshold": t.threshold.tolist(),
                "left": t.left.tolist(),
                "right": t.right.tolist(),
                "leaf": t.leaf.tolist(),
            }
            for t in model.trees
        ],
    }


def forest_from_dict(payload: dict) -> RandomForestModel:
    if payload.get("format") != SERIAL_FORMAT:
        raise ValueError(f"not a {SERIAL_FORMAT} payload")
    if payload.get("version") != SERIAL_VERSION:
        raise ValueError(f"unsupported version {payload.get('version')}")
    trees = [
        _Tree(
            feature=np.asarray(t["feature"], dtype=np.int32),
            threshold=np.asarray(t["threshold"], dtype=np.float64),
            left=np.asarray(t["left"], dtype=np.int32),
            right=np.asarray(t["right"], dtype=np.int32),
            leaf=np.asarray(t["leaf"], dtype=np.int32),
        )
        for t in payload["trees"]
    ]
    return RandomForestModel(
        trees=trees,
        classes=np.asarray(payload["classes"]),
        num_features=int(payload["num_features"]),
        num_features_per_split=int(payload["num_features_per_split"]),
        seed=int(payload["seed"]),
    )


def _stratified_split(y_idx: np.ndarray, fraction: float, rng: np.random.Generator):
    """Per-class split into train/test index arrays (both non-empty per class)."""
    train, test = [], []
    for c in range(y_idx.max() + 1):
        idx = rng.permutation(np.flatnonzero(y_idx == c))
        n_tr = int(round(fraction * idx.size))
        n_tr = min(max(n_tr, 1), idx.size - 1)
        train.append(idx[:n_tr])
        test.append(idx[n_tr:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def _stratified_fold_assignment(
    y_idx: np.ndarray, folds: int, rng: np.random.Generator
) -> np.ndarray:
    """Fold id per row; each class is dealt round-robin after a shuffle."""
    assign = np.empty(y_idx.size, dtype=np.int64)
    for c in range(y_idx.max() + 1):
        idx = rng.permutation(np.flatnonzero(y_idx == c))
        assign[idx] = np.arange(idx.size) % folds
    return assign


def evaluate_protocol(
    X,
    y,
    trees_grid,
    repeats: int = 10,
    folds: int = 10,
    split_fraction: float = 0.9,
    master_seed: int = 0,
    threads: int = 1,
) -> EvaluationReport:
    """Repeated train/test evaluation with inner CV model selection.

    Each repeat draws a stratified train/test split, picks the tree count
    from ``trees_grid`` by mean stratified ``folds``-fold cross-validation
    accuracy on the training portion only, retrains on the full training
    portion, and scores the held-out rows. Reported accuracy aggregates the
    per-repeat test accuracies.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y)
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    if not 0.0 < split_fraction < 1.0:
        raise ValueError("split_fraction must be in (0, 1)")
    grid = sorted(set(int(g) for g in trees_grid))
    if not grid or grid[0] < 1:
        raise ValueError("trees_grid must hold positive tree counts")

    classes, y_idx = np.unique(y, return_inverse=True)
    counts = np.bincount(y_idx)
    lacking = np.flatnonzero(counts < folds)
    if lacking.size:
        raise ValueError(
            f"class {classes[lacking[0]]!r} has {counts[lacking[0]]} members, "
            f"fewer than {folds} folds"
        )

    per_repeat = []
    chosen = []
    for r in range(repeats):
        tr, te = _stratified_split(y_idx, split_fraction, derived_rng(master_seed, r, 1))
        assign = _stratified_fold_assignment(
            y_idx[tr], folds, derived_rng(master_seed, r, 2)
        )
        best_g = grid[0]
        best_cv = -1.0
        for gi, g in enumerate(grid):
            fold_accs = []
            for f in range(folds):
                fit = tr[assign != f]
                val = tr[assign == f]
                model = train_forest(
                    X[fit],
                    y[fit],
                    num_trees=g,
                    seed=derived_seed(master_seed, r, 3, gi, f),
                    threads=threads,
                )
                fold_accs.append(accuracy_score(y[val], predict(model, X[val])))
            cv = float(np.mean(fold_accs))
            if cv > best_cv:  # strict: ties keep the smaller grid value
                best_cv = cv
                best_g = g
        final = train_forest(
            X[tr], y[tr], num_trees=best_g, seed=derived_seed(master_seed, r, 4),
            threads=threads,
        )
        per_repeat.append(accuracy_score(y[te], predict(final, X[te])))
        chosen.append({"num_trees": best_g, "cv_accuracy": best_cv})

    mean = float(np.mean(per_repeat))
    std = float(np.std(per_repeat, ddof=1)) if len(per_repeat) > 1 else 0.0
    return EvaluationReport(
        mean_accuracy=mean,
        std_accuracy=std,
        per_repeat_accuracies=per_repeat,
        chosen_hyperparameters=chosen,
    )
