"""Linear one-vs-one SVM trained by dual coordinate descent.

Each pair of classes gets an L2-regularised hinge-loss machine solved in the
dual, one coordinate at a time (Hsieh et al.'s method, without shrinking).
The bias is learnt as the weight of a constant feature. Prediction is a
majority vote over the J(J-1)/2 machines; equal vote counts are settled by
the summed signed margins, then by the lower class index.
"""
from __future__ import annotations

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - pure-Python fallback
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _cd_epoch(X, y, alpha, w, qii, order, C):
    max_pg = -np.inf
    min_pg = np.inf
    d = X.shape[1]
    for k in range(order.shape[0]):
        i = order[k]
        g = 0.0
        for j in range(d):
            g += w[j] * X[i, j]
        g = y[i] * g - 1.0
        a = alpha[i]
        if a == 0.0:
            pg = min(g, 0.0)
        elif a == C:
            pg = max(g, 0.0)
        else:
            pg = g
        if pg > max_pg:
            max_pg = pg
        if pg < min_pg:
            min_pg = pg
        if pg != 0.0 and qii[i] > 0.0:
            new = min(max(a - g / qii[i], 0.0), C)
            step = (new - a) * y[i]
            alpha[i] = new
            for j in range(d):
                w[j] += step * X[i, j]
    return max_pg - min_pg


def train_binary(X, y, C=1.0, max_epochs=1000, tol=1e-4, rng=None):
    """Weights (last entry = bias) for labels ``y`` in {-1, +1}."""
    Xa = np.hstack([np.asarray(X, dtype=np.float64), np.ones((X.shape[0], 1))])
    y = np.asarray(y, dtype=np.float64)
    alpha = np.zeros(Xa.shape[0])
    w = np.zeros(Xa.shape[1])
    qii = (Xa * Xa).sum(axis=1)
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(int(max_epochs)):
        order = rng.permutation(Xa.shape[0]).astype(np.int64)
        if _cd_epoch(Xa, y, alpha, w, qii, order, float(C)) < tol:
            break
    return w


def fit(X, y, n_classes, c=1.0, max_epochs=1000, tol=1e-4, seed=0):
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    pairs, weights = [], []
    for a in range(n_classes):
        for b in range(a + 1, n_classes):
            pairs.append((a, b))
            in_a, in_b = y == a, y == b
            w = np.zeros(X.shape[1] + 1)
            if in_a.any() and in_b.any():
                rows = in_a | in_b
                target = np.where(y[rows] == a, 1.0, -1.0)
                rng = np.random.default_rng([int(seed), a, b])
                w = train_binary(X[rows], target, c, max_epochs, tol, rng)
            elif in_a.any():
                w[-1] = 1.0
            elif in_b.any():
                w[-1] = -1.0
            weights.append(w)
    return {"pairs": np.array(pairs, dtype=np.int64).reshape(-1, 2),
            "weights": np.array(weights, dtype=np.float64).reshape(len(pairs), -1)}


def votes_and_margins(params, X, n_classes):
    X = np.asarray(X, dtype=np.float64)
    pairs, W = params["pairs"], params["weights"]
    decision = X @ W[:, :-1].T + W[:, -1][None, :]
    votes = np.zeros((X.shape[0], n_classes))
    margins = np.zeros((X.shape[0], n_classes))
    for p, (a, b) in enumerate(pairs):
        f = decision[:, p]
        win_a = f >= 0
        votes[:, a] += win_a
        votes[:, b] += ~win_a
        margins[:, a] += f
        margins[:, b] -= f
    return votes, margins


def scores(params, X, n_classes, **_):
    votes, _ = votes_and_margins(params, X, n_classes)
    return votes / max(1, len(params["pairs"]))


def predict(params, X, n_classes):
    votes, margins = votes_and_margins(params, X, n_classes)
    labels = np.empty(votes.shape[0], dtype=np.int64)
    for r in range(votes.shape[0]):
        tied = np.flatnonzero(votes[r] == votes[r].max())
        labels[r] = tied[np.argmax(margins[r, tied])]
    return labels
