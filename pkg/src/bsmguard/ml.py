"""From-scratch supervised baselines on (avg_speed, avg_accel) features.

Binary classifiers only: KNN, CART decision trees, bootstrap-aggregated
forests, and a one-hidden-layer network trained with Adam, plus SMOTE-style
class balancing and a stratified k-fold grid search. Labels are 0 (clean)
and 1 (attack); every predictor returns (label, attack_probability_or_score).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

#: Half-width of the uniform weight initialization interval.
NN_INIT_RANGE = 0.5


# ---------------------------------------------------------------------------
# Splitting and balancing
# ---------------------------------------------------------------------------


def stratified_split(
    y: np.ndarray, test_fraction: float, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Seeded per-class split. Returns (train_idx, test_idx), both sorted."""
    if not (0.0 < test_fraction < 1.0):
        raise ValueError(f"test_fraction must be in (0, 1), got {test_fraction}")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for cls in np.unique(y):
        idx = np.flatnonzero(y == cls)
        idx = rng.permutation(idx)
        n_test = int(round(len(idx) * test_fraction))
        n_test = min(max(n_test, 1), len(idx) - 1)
        test.append(idx[:n_test])
        train.append(idx[n_test:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def stratified_folds(y: np.ndarray, folds: int, seed: int) -> list[np.ndarray]:
    """Seeded stratified partition into ``folds`` validation index arrays."""
    if folds < 2:
        raise ValueError("need at least 2 folds")
    counts = np.bincount(y, minlength=2)
    if np.any(counts[np.unique(y)] < folds):
        raise ValueError(
            f"infeasible stratification: every class needs >= {folds} samples, "
            f"got counts {counts.tolist()}"
        )
    rng = np.random.default_rng(seed)
    buckets: list[list[int]] = [[] for _ in range(folds)]
    for cls in np.unique(y):
        idx = rng.permutation(np.flatnonzero(y == cls))
        for pos, i in enumerate(idx):
            buckets[pos % folds].append(int(i))
    return [np.sort(np.array(b, dtype=int)) for b in buckets]


def class_weights(y: np.ndarray) -> dict[int, float]:
    """Weights inversely proportional to class frequency, mean-normalized to 1."""
    classes, counts = np.unique(y, return_counts=True)
    n = len(y)
    k = len(classes)
    return {int(c): n / (k * int(cnt)) for c, cnt in zip(classes, counts)}


def smote_balance(
    X: np.ndarray, y: np.ndarray, k: int = 5, seed: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Balance classes by majority under-sampling plus minority interpolation.

    Synthetic minority points lie on the segment between a minority point and
    one of its k minority-class nearest neighbors (uniform interpolation
    coefficient). Both classes end at the midpoint count, so the result is
    balanced within one sample. Already balanced input passes through.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    classes, counts = np.unique(y, return_counts=True)
    if len(classes) < 2:
        raise ValueError("balancing needs both classes present")
    minority = int(classes[np.argmin(counts)])
    majority = int(classes[np.argmax(counts)])
    n_min, n_maj = int(counts.min()), int(counts.max())
    if n_min == n_maj:
        return X.copy(), y.copy()
    if n_min < 2:
        raise ValueError("minority class needs at least 2 samples for interpolation")

    rng = np.random.default_rng(seed)
    target = (n_min + n_maj) // 2
    maj_idx = np.flatnonzero(y == majority)
    min_idx = np.flatnonzero(y == minority)
    keep_maj = rng.choice(maj_idx, size=target, replace=False)

    X_min = X[min_idx]
    d2 = np.sum((X_min[:, None, :] - X_min[None, :, :]) ** 2, axis=2)
    np.fill_diagonal(d2, np.inf)
    k_eff = min(k, n_min - 1)
    neighbor_idx = np.argsort(d2, axis=1, kind="stable")[:, :k_eff]

    n_new = target - n_min
    synth = np.empty((n_new, X.shape[1]))
    for s in range(n_new):
        i = int(rng.integers(0, n_min))
        j = int(neighbor_idx[i, int(rng.integers(0, k_eff))])
        frac = rng.uniform()
        synth[s] = X_min[i] + frac * (X_min[j] - X_min[i])

    X_out = np.concatenate([X[keep_maj], X_min, synth])
    y_out = np.concatenate(
        [
            np.full(target, majority, dtype=int),
            np.full(n_min + n_new, minority, dtype=int),
        ]
    )
    return X_out, y_out


# ---------------------------------------------------------------------------
# K-nearest neighbors
# ---------------------------------------------------------------------------


def knn_predict(
    X_train: np.ndarray, y_train: np.ndarray, query: Sequence[float], k: int
) -> tuple[int, float]:
    """Majority vote among the k nearest training points (Euclidean).

    Distance ties break by training-set index order. The score is the attack
    fraction among the neighbors; the label is attack only on a strict
    majority.
    """
    X_train = np.asarray(X_train, dtype=float)
    y_train = np.asarray(y_train, dtype=int)
    if len(X_train) == 0:
        raise ValueError("empty training set")
    if k < 1 or k > len(X_train):
        raise ValueError(f"k must be in [1, {len(X_train)}], got {k}")
    d2 = np.sum((X_train - np.asarray(query, dtype=float)) ** 2, axis=1)
    order = np.argsort(d2, kind="stable")[:k]
    score = float(np.mean(y_train[order] == 1))
    return (1 if score > 0.5 else 0, score)


# ---------------------------------------------------------------------------
# CART decision trees
# ---------------------------------------------------------------------------


def impurity(
    counts: Sequence[float],
    criterion: str = "gini",
    costs: Sequence[Sequence[float]] | None = None,
) -> float:
    """Node impurity from (possibly weighted) per-class counts.

    gini with unit costs reduces to sum_{c1 != c2} p(c1) p(c2); a 2x2 cost
    matrix costs[c1][c2] prices mistaking a c2 case for c1. entropy is the
    usual -sum p log2 p. All-zero counts are rejected.
    """
    total = float(sum(counts))
    if total <= 0:
        raise ValueError("impurity needs at least one counted sample")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be non-negative")
    p = [float(c) / total for c in counts]
    if criterion == "gini":
        value = 0.0
        for c1 in range(len(p)):
            for c2 in range(len(p)):
                if c1 == c2:
                    continue
                cost = 1.0 if costs is None else float(costs[c1][c2])
                value += cost * p[c1] * p[c2]
        return value
    if criterion == "entropy":
        if costs is not None:
            raise ValueError("misclassification costs apply to gini only")
        return -sum(pi * math.log2(pi) for pi in p if pi > 0.0)
    raise ValueError(f"unknown criterion {criterion!r}")


def _impurity_vec(w0: np.ndarray, w1: np.ndarray, criterion: str) -> np.ndarray:
    total = w0 + w1
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(total > 0, w1 / total, 0.0)
    if criterion == "gini":
        return 2.0 * p * (1.0 - p)
    q = 1.0 - p
    out = np.zeros_like(p)
    mask = p > 0
    out[mask] -= p[mask] * np.log2(p[mask])
    mask = q > 0
    out[mask] -= q[mask] * np.log2(q[mask])
    return out


@dataclass
class CartNode:
    """One node of a fitted tree. Leaves carry class probabilities."""

    impurity: float
    counts: tuple[float, float]  # weighted class counts (clean, attack)
    n_samples: int
    feature: int | None = None
    threshold: float | None = None
    left: "CartNode | None" = None
    right: "CartNode | None" = None
    probs: tuple[float, float] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.feature is None


def _best_split(X, y, w, criterion, min_leaf):
    """Scan every midpoint threshold of every feature; return the best gain.

    Candidates leaving fewer than ``min_leaf`` samples on a side are skipped.
    Returns (gain, feature, threshold, left_mask) or None when no candidate
    exists. Zero-gain candidates are eligible (an impure node keeps
    splitting while any split exists); ties keep the first candidate in
    (feature, threshold) order.
    """
    n = len(y)
    w0_total = float(np.sum(w[y == 0]))
    w1_total = float(np.sum(w[y == 1]))
    total = w0_total + w1_total
    parent = float(_impurity_vec(np.array([w0_total]), np.array([w1_total]), criterion)[0])
    best = None
    for j in range(X.shape[1]):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        ys = y[order]
        ws = w[order]
        cum0 = np.cumsum(np.where(ys == 0, ws, 0.0))
        cum1 = np.cumsum(np.where(ys == 1, ws, 0.0))
        # Candidate boundaries sit between distinct consecutive values.
        boundary = np.flatnonzero(xs[1:] > xs[:-1]) + 1
        boundary = boundary[(boundary >= min_leaf) & (boundary <= n - min_leaf)]
        if len(boundary) == 0:
            continue
        left0 = cum0[boundary - 1]
        left1 = cum1[boundary - 1]
        right0 = w0_total - left0
        right1 = w1_total - left1
        wl = (left0 + left1) / total
        wr = (right0 + right1) / total
        gains = (
            parent
            - wl * _impurity_vec(left0, left1, criterion)
            - wr * _impurity_vec(right0, right1, criterion)
        )
        for pos, gain in zip(boundary, gains):
            if best is None or gain > best[0] + 1e-15:
                thr = (xs[pos - 1] + xs[pos]) / 2.0
                best = (float(gain), j, float(thr), int(pos), order)
    if best is None:
        return None
    gain, j, thr, pos, order = best
    left_mask = np.zeros(n, dtype=bool)
    left_mask[order[:pos]] = True
    return gain, j, thr, left_mask


def cart_fit(
    X: np.ndarray,
    y: np.ndarray,
    criterion: str = "entropy",
    max_depth: int = 8,
    min_split: int = 2,
    min_leaf: int = 1,
    weights: Mapping[int, float] | None = None,
) -> CartNode:
    """Greedy axis-aligned tree on midpoint thresholds.

    A node stops splitting when it is pure, hits the depth/size limits, or
    no candidate threshold remains (so no impurity decrease is possible).
    ``weights`` maps class label to sample weight; weighted counts feed the
    impurity and the leaf probabilities.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if len(X) == 0:
        raise ValueError("empty training set")
    w = np.array([1.0 if weights is None else float(weights[int(c)]) for c in y])

    def build(idx: np.ndarray, depth: int) -> CartNode:
        ys = y[idx]
        ws = w[idx]
        w0 = float(np.sum(ws[ys == 0]))
        w1 = float(np.sum(ws[ys == 1]))
        total = w0 + w1
        node = CartNode(
            impurity=float(_impurity_vec(np.array([w0]), np.array([w1]), criterion)[0]),
            counts=(w0, w1),
            n_samples=len(idx),
        )
        if (
            depth >= max_depth
            or len(idx) < min_split
            or w0 == 0.0
            or w1 == 0.0
        ):
            node.probs = (w0 / total, w1 / total)
            return node
        found = _best_split(X[idx], ys, ws, criterion, min_leaf)
        if found is None:
            node.probs = (w0 / total, w1 / total)
            return node
        _, feature, threshold, left_mask = found
        node.feature = feature
        node.threshold = threshold
        node.left = build(idx[left_mask], depth + 1)
        node.right = build(idx[~left_mask], depth + 1)
        return node

    return build(np.arange(len(y)), 0)


def cart_predict(tree: CartNode, x: Sequence[float]) -> tuple[int, float]:
    """Walk the tree; returns (label, attack probability)."""
    node = tree
    while not node.is_leaf:
        node = node.left if x[node.feature] <= node.threshold else node.right
    p1 = node.probs[1]
    return (1 if p1 > 0.5 else 0, float(p1))


# ---------------------------------------------------------------------------
# Random forest
# ---------------------------------------------------------------------------


@dataclass
class Forest:
    trees: list[CartNode]


def rf_fit(
    X: np.ndarray,
    y: np.ndarray,
    n_trees: int = 400,
    max_depth: int = 90,
    min_split: int = 12,
    min_leaf: int = 5,
    seed: int = 0,
    criterion: str = "gini",
    weights: Mapping[int, float] | None = None,
    bootstrap: bool = True,
) -> Forest:
    """Bag ``n_trees`` CART trees on bootstrap resamples of the same size.

    Per-tree randomness comes from independently spawned sub-generators of
    the master seed, so refits are reproducible regardless of evaluation
    order. ``bootstrap=False`` fits every tree on the full sample.
    """
    if n_trees < 1:
        raise ValueError("n_trees must be at least 1")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    n = len(y)
    children = np.random.SeedSequence(seed).spawn(n_trees)
    trees = []
    for ss in children:
        if bootstrap:
            rng = np.random.default_rng(ss)
            idx = rng.integers(0, n, size=n)
        else:
            idx = np.arange(n)
        trees.append(
            cart_fit(
                X[idx],
                y[idx],
                criterion=criterion,
                max_depth=max_depth,
                min_split=min_split,
                min_leaf=min_leaf,
                weights=weights,
            )
        )
    return Forest(trees=trees)


def rf_predict(forest: Forest, x: Sequence[float]) -> tuple[int, float]:
    """Average the member trees' leaf probabilities; label at 0.5."""
    p1 = float(np.mean([cart_predict(t, x)[1] for t in forest.trees]))
    return (1 if p1 > 0.5 else 0, p1)


# ---------------------------------------------------------------------------
# One-hidden-layer neural network
# ---------------------------------------------------------------------------


@dataclass
class NnModel:
    """relu hidden layer, sigmoid output, binary cross-entropy training."""

    w_hidden: np.ndarray  # (n_features, n_hidden)
    b_hidden: np.ndarray  # (n_hidden,)
    w_out: np.ndarray  # (n_hidden,)
    b_out: float


def nn_init(n_features: int, n_hidden: int, seed: int, init_range: float = NN_INIT_RANGE) -> NnModel:
    rng = np.random.default_rng(seed)
    return NnModel(
        w_hidden=rng.uniform(-init_range, init_range, size=(n_features, n_hidden)),
        b_hidden=rng.uniform(-init_range, init_range, size=n_hidden),
        w_out=rng.uniform(-init_range, init_range, size=n_hidden),
        b_out=float(rng.uniform(-init_range, init_range)),
    )


def _nn_logits(model: NnModel, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden_pre = X @ model.w_hidden + model.b_hidden
    hidden = np.maximum(hidden_pre, 0.0)
    return hidden @ model.w_out + model.b_out, hidden


def nn_forward(model: NnModel, x: Sequence[float] | np.ndarray) -> float | np.ndarray:
    """Attack probability for one feature row or a matrix of rows."""
    X = np.asarray(x, dtype=float)
    single = X.ndim == 1
    logits, _ = _nn_logits(model, np.atleast_2d(X))
    probs = 1.0 / (1.0 + np.exp(-logits))
    return float(probs[0]) if single else probs


def nn_loss_and_grads(model: NnModel, X: np.ndarray, y: np.ndarray):
    """Mean binary cross-entropy and its gradients for one batch.

    Loss is computed from logits (softplus form) so it stays finite for any
    weights, and the analytic gradients match it exactly; the tests compare
    them against central finite differences.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    logits, hidden = _nn_logits(model, X)
    loss = float(np.mean(np.maximum(logits, 0.0) - y * logits + np.log1p(np.exp(-np.abs(logits)))))
    probs = 1.0 / (1.0 + np.exp(-logits))
    dlogits = (probs - y) / n
    grads = {
        "w_out": hidden.T @ dlogits,
        "b_out": float(np.sum(dlogits)),
    }
    dhidden = np.outer(dlogits, model.w_out)
    dhidden[hidden <= 0.0] = 0.0
    grads["w_hidden"] = X.T @ dhidden
    grads["b_hidden"] = np.sum(dhidden, axis=0)
    return loss, grads


def nn_train(
    X: np.ndarray,
    y: np.ndarray,
    epochs: int = 100,
    batch_size: int = 50,
    lr: float = 0.2,
    seed: int = 0,
    n_hidden: int = 10,
    init_range: float = NN_INIT_RANGE,
) -> NnModel:
    """Mini-batch Adam on binary cross-entropy.

    Raises RuntimeError if the loss goes non-finite (lower the learning
    rate). Deterministic per seed: initialization and epoch shuffles come
    from the same generator.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    rng = np.random.default_rng(seed)
    model = nn_init(X.shape[1], n_hidden, seed=int(rng.integers(2**32)), init_range=init_range)
    m = {k: 0.0 for k in ("w_hidden", "b_hidden", "w_out", "b_out")}
    v = {k: 0.0 for k in m}
    params = {
        "w_hidden": model.w_hidden,
        "b_hidden": model.b_hidden,
        "w_out": model.w_out,
    }
    step = 0
    n = len(y)
    for _ in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start : start + batch_size]
            loss, grads = nn_loss_and_grads(model, X[batch], y[batch])
            if not math.isfinite(loss):
                raise RuntimeError(
                    "training diverged to a non-finite loss; the learning rate "
                    f"{lr} is likely too high for this data"
                )
            step += 1
            corr1 = 1.0 - ADAM_BETA1**step
            corr2 = 1.0 - ADAM_BETA2**step
            for key in ("w_hidden", "b_hidden", "w_out"):
                g = grads[key]
                m[key] = ADAM_BETA1 * m[key] + (1 - ADAM_BETA1) * g
                v[key] = ADAM_BETA2 * v[key] + (1 - ADAM_BETA2) * g * g
                params[key] -= lr * (m[key] / corr1) / (np.sqrt(v[key] / corr2) + ADAM_EPS)
            g = grads["b_out"]
            m["b_out"] = ADAM_BETA1 * m["b_out"] + (1 - ADAM_BETA1) * g
            v["b_out"] = ADAM_BETA2 * v["b_out"] + (1 - ADAM_BETA2) * g * g
            model.b_out -= lr * (m["b_out"] / corr1) / (
                math.sqrt(v["b_out"] / corr2) + ADAM_EPS
            )
    return model


# ---------------------------------------------------------------------------
# Model facade and grid search
# ---------------------------------------------------------------------------

MODEL_FAMILIES = ("knn", "cart", "rf", "nn")

#: Families balanced by resampling; the tree families use class weights.
SMOTE_FAMILIES = ("knn", "nn")


@dataclass
class FittedModel:
    """A fitted baseline of any family, with a uniform predict surface."""

    family: str
    params: dict
    knn_X: np.ndarray | None = None
    knn_y: np.ndarray | None = None
    tree: CartNode | None = None
    forest: Forest | None = None
    nn: NnModel | None = None

    def predict(self, x: Sequence[float]) -> tuple[int, float]:
        if self.family == "knn":
            return knn_predict(self.knn_X, self.knn_y, x, self.params["k"])
        if self.family == "cart":
            return cart_predict(self.tree, x)
        if self.family == "rf":
            return rf_predict(self.forest, x)
        prob = nn_forward(self.nn, x)
        return (1 if prob > 0.5 else 0, float(prob))

    def predict_labels(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict(row)[0] for row in np.asarray(X, dtype=float)])

    def predict_scores(self, X: np.ndarray) -> np.ndarray:
        return np.array([self.predict(row)[1] for row in np.asarray(X, dtype=float)])


def fit_family(
    family: str, params: Mapping[str, object], X: np.ndarray, y: np.ndarray, seed: int
) -> FittedModel:
    """Balance (per family policy) and fit one model. Deterministic per seed."""
    if family not in MODEL_FAMILIES:
        raise ValueError(f"unknown model family {family!r}; expected {MODEL_FAMILIES}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    params = dict(params)
    if family in SMOTE_FAMILIES:
        X, y = smote_balance(X, y, k=int(params.pop("smote_k", 5)), seed=seed)
    if family == "knn":
        return FittedModel(family, params, knn_X=X, knn_y=y)
    if family == "cart":
        tree = cart_fit(
            X,
            y,
            criterion=str(params.get("criterion", "entropy")),
            max_depth=int(params.get("max_depth", 8)),
            min_split=int(params.get("min_split", 2)),
            min_leaf=int(params.get("min_leaf", 1)),
            weights=class_weights(y),
        )
        return FittedModel(family, params, tree=tree)
    if family == "rf":
        forest = rf_fit(
            X,
            y,
            n_trees=int(params.get("n_trees", 400)),
            max_depth=int(params.get("max_depth", 90)),
            min_split=int(params.get("min_split", 12)),
            min_leaf=int(params.get("min_leaf", 5)),
            seed=seed,
            criterion=str(params.get("criterion", "gini")),
            weights=class_weights(y),
        )
        return FittedModel(family, params, forest=forest)
    nn = nn_train(
        X,
        y,
        epochs=int(params.get("epochs", 100)),
        batch_size=int(params.get("batch_size", 50)),
        lr=float(params.get("lr", 0.2)),
        seed=seed,
        n_hidden=int(params.get("n_hidden", 10)),
    )
    return FittedModel(family, params, nn=nn)


def expand_grid(grid: Mapping[str, Sequence[object]]) -> list[dict]:
    """Cartesian product of a {param: values} grid, in insertion order."""
    keys = list(grid.keys())
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        cells.append(dict(zip(keys, combo)))
    return cells


@dataclass(frozen=True)
class GridSearchSpec:
    family: str
    cells: tuple[Mapping[str, object], ...]
    folds: int = 5
    train_fraction: float = 0.8
    metric: str = "accuracy"

    def validate(self) -> None:
        if self.family not in MODEL_FAMILIES:
            raise ValueError(f"unknown model family {self.family!r}")
        if self.folds < 2:
            raise ValueError("folds must be at least 2")
        if not self.cells:
            raise ValueError("parameter grid must be non-empty")
        if self.metric != "accuracy":
            raise ValueError("only the accuracy metric is supported")


@dataclass
class GridCell:
    params: dict
    fold_accuracies: list[float]
    fold_predictions: list[np.ndarray]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracies))


@dataclass
class GridSearchResult:
    best_params: dict
    best_accuracy: float
    cells: list[GridCell]


def grid_search(
    spec: GridSearchSpec,
    X: np.ndarray,
    y: np.ndarray,
    seed: int = 0,
    folds_idx: list[np.ndarray] | None = None,
) -> GridSearchResult:
    """Stratified k-fold selection by mean validation accuracy.

    Class balancing happens inside each training fold only; validation folds
    are never resampled, and their labels are read only to score. Ties keep
    the earliest cell in grid order. ``folds_idx`` overrides the seeded fold
    assignment (used by tests).
    """
    spec.validate()
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if folds_idx is None:
        folds_idx = stratified_folds(y, spec.folds, seed)
    all_idx = np.arange(len(y))
    cells: list[GridCell] = []
    for c_i, params in enumerate(spec.cells):
        accs: list[float] = []
        preds: list[np.ndarray] = []
        for f_i, val_idx in enumerate(folds_idx):
            train_idx = np.setdiff1d(all_idx, val_idx)
            sub_seed = int(
                np.random.SeedSequence((seed, c_i, f_i)).generate_state(1)[0]
            )
            model = fit_family(spec.family, params, X[train_idx], y[train_idx], sub_seed)
            pred = model.predict_labels(X[val_idx])
            preds.append(pred)
            accs.append(float(np.mean(pred == y[val_idx])))
        cells.append(GridCell(params=dict(params), fold_accuracies=accs, fold_predictions=preds))
    best = max(range(len(cells)), key=lambda i: (cells[i].mean_accuracy, -i))
    return GridSearchResult(
        best_params=cells[best].params,
        best_accuracy=cells[best].mean_accuracy,
        cells=cells,
    )


DEFAULT_GRIDS: dict[str, dict[str, list]] = {
    "knn": {"k": [5, 19]},
    "cart": {"criterion": ["entropy"], "max_depth": [4, 8]},
    "rf": {"n_trees": [400], "max_depth": [90], "min_split": [12], "min_leaf": [5]},
    "nn": {"epochs": [100], "batch_size": [50], "lr": [0.2], "n_hidden": [10]},
}
