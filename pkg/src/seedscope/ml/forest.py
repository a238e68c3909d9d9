"""Random forest of fully grown Gini trees.

Each tree draws a bootstrap sample of ``n`` rows and considers
``max_features`` random candidate features per split (falling back to the
remaining features when none of the candidates can split). Tree ``t`` uses
the RNG stream seeded by ``(seed, t)``, so trees can be grown in any order
or in parallel with identical results. Trees are stored as flat node arrays.
"""
from __future__ import annotations

import math

import numpy as np

LEAF = -1


def _best_split(Xn, yn, features, n_classes):
    """Lowest weighted Gini split among ``features`` for the node rows.

    Returns ``(feature, threshold)`` or ``None``. Ties go to the earlier
    candidate feature, then to the smaller threshold.
    """
    n = len(yn)
    vals = Xn[:, features]
    order = np.argsort(vals, axis=0, kind="stable")
    sorted_vals = np.take_along_axis(vals, order, axis=0)
    onehot = np.eye(n_classes)[yn]
    left = np.cumsum(onehot[order], axis=0)[:-1]  # (n-1, m, J)
    total = onehot.sum(axis=0)
    right = total[None, None, :] - left
    n_left = np.arange(1, n, dtype=np.float64)[:, None]
    n_right = n - n_left
    gini_left = n_left - (left ** 2).sum(axis=2) / n_left
    gini_right = n_right - (right ** 2).sum(axis=2) / n_right
    impurity = gini_left + gini_right  # already weighted by node counts
    valid = sorted_vals[:-1] < sorted_vals[1:]
    if not valid.any():
        return None
    impurity = np.where(valid, impurity, np.inf)
    # column-major argmin: earliest feature first, then smallest position
    flat = np.argmin(impurity.T.ravel())
    f_idx, pos = divmod(int(flat), n - 1)
    lo, hi = sorted_vals[pos, f_idx], sorted_vals[pos + 1, f_idx]
    threshold = lo + (hi - lo) / 2.0
    if not lo <= threshold < hi:
        threshold = lo
    return int(features[f_idx]), float(threshold)


def grow_tree(X, y, n_classes, max_features, rng):
    n, d = X.shape
    sample = rng.integers(0, n, size=n)
    feature, threshold, left, right, leaf_class = [], [], [], [], []

    def new_node():
        feature.append(LEAF)
        threshold.append(0.0)
        left.append(LEAF)
        right.append(LEAF)
        leaf_class.append(0)
        return len(feature) - 1

    root = new_node()
    stack = [(root, sample)]
    while stack:
        node, rows = stack.pop()
        yn = y[rows]
        counts = np.bincount(yn, minlength=n_classes)
        leaf_class[node] = int(np.argmax(counts))
        if np.count_nonzero(counts) <= 1:
            continue
        Xn = X[rows]
        perm = rng.permutation(d)
        split = _best_split(Xn, yn, perm[:max_features], n_classes)
        if split is None and max_features < d:
            split = _best_split(Xn, yn, perm[max_features:], n_classes)
        if split is None:
            continue
        f, t = split
        goes_left = Xn[:, f] <= t
        feature[node], threshold[node] = f, t
        left[node] = new_node()
        right[node] = new_node()
        # push right first so the left subtree is numbered first
        stack.append((right[node], rows[~goes_left]))
        stack.append((left[node], rows[goes_left]))
    return (np.array(feature, dtype=np.int64), np.array(threshold, dtype=np.float64),
            np.array(left, dtype=np.int64), np.array(right, dtype=np.int64),
            np.array(leaf_class, dtype=np.int64))


def default_max_features(d: int) -> int:
    return max(1, int(math.floor(math.sqrt(d))))


def fit(X, y, n_classes, trees=100, max_features=None, seed=0):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if trees < 1:
        raise ValueError("trees must be >= 1")
    m = default_max_features(X.shape[1]) if not max_features else min(int(max_features), X.shape[1])
    parts = [grow_tree(X, y, n_classes, m, np.random.default_rng([int(seed), t]))
             for t in range(int(trees))]
    offsets = np.cumsum([0] + [len(p[0]) for p in parts])
    feature = np.concatenate([p[0] for p in parts])
    threshold = np.concatenate([p[1] for p in parts])
    left = np.concatenate([np.where(p[2] >= 0, p[2] + o, LEAF) for p, o in zip(parts, offsets)])
    right = np.concatenate([np.where(p[3] >= 0, p[3] + o, LEAF) for p, o in zip(parts, offsets)])
    leaf_class = np.concatenate([p[4] for p in parts])
    return {"roots": offsets[:-1].astype(np.int64), "feature": feature, "threshold": threshold,
            "left": left, "right": right, "leaf_class": leaf_class}


def scores(params, X, n_classes, **_):
    X = np.asarray(X, dtype=np.float64)
    feature, threshold = params["feature"], params["threshold"]
    left, right = params["left"], params["right"]
    roots = params["roots"]
    n = X.shape[0]
    rows = np.arange(n)
    votes = np.zeros((n, n_classes))
    for root in roots:
        node = np.full(n, root, dtype=np.int64)
        while True:
            f = feature[node]
            inner = f >= 0
            if not inner.any():
                break
            idx = np.nonzero(inner)[0]
            go_left = X[idx, f[idx]] <= threshold[node[idx]]
            node[idx] = np.where(go_left, left[node[idx]], right[node[idx]])
        np.add.at(votes, (rows, params["leaf_class"][node]), 1.0)
    return votes / len(roots)
