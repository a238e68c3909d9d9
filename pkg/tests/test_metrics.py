import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from seedscope.errors import EmptyMatrix, LengthMismatch
from seedscope.metrics import ConfusionMatrix, compute_metrics, confusion_from_predictions

AGGREGATES = ("accuracy", "macro_specificity", "macro_sensitivity", "macro_precision",
              "mavg", "mava", "mfm")


def cm(counts):
    return ConfusionMatrix(np.asarray(counts))


def test_perfect_classifier():
    m = compute_metrics(cm([[50, 0], [0, 50]]))
    assert all(getattr(m, k) == 100 for k in AGGREGATES)


def test_two_class_golden():
    m = compute_metrics(cm([[40, 10], [20, 30]]))
    assert m.accuracy == pytest.approx(70)
    assert m.mava == pytest.approx(70)
    assert m.mavg == pytest.approx(100 * math.sqrt(0.48), abs=1e-9)
    assert round(m.mavg, 2) == 69.28
    assert [c.precision for c in m.per_class] == pytest.approx([40 / 60, 30 / 40])
    f1 = [2 * p * s / (p + s) for p, s in ((40 / 60, 0.8), (30 / 40, 0.6))]
    assert m.mfm == pytest.approx(100 * sum(f1) / 2)
    assert m.macro_sensitivity == m.mava


def test_zero_true_positive_class_zeroes_mavg():
    m = compute_metrics(cm([[5, 0, 0], [3, 0, 2], [0, 1, 4]]))
    assert m.mavg == 0.0


def test_undefined_precision_is_flagged():
    m = compute_metrics(cm([[5, 0], [5, 0]]))
    assert m.per_class[1].precision == 0.0
    assert any(f.startswith("precision") for f in m.flags)


def test_empty_matrix():
    with pytest.raises(EmptyMatrix):
        compute_metrics(cm([[0, 0], [0, 0]]))


def test_confusion_examples():
    assert np.array_equal(confusion_from_predictions([0, 1, 2, 1], [0, 1, 2, 1], 3).counts,
                          np.diag([1, 2, 1]))
    c = confusion_from_predictions([2], [0], 3).counts
    assert c[2, 0] == 1 and c.sum() == 1
    with pytest.raises(LengthMismatch):
        confusion_from_predictions([0, 1], [0], 2)


def test_confusion_fuzz_rows_match_true_counts(rng):
    t = rng.integers(0, 5, 1000)
    p = rng.integers(0, 5, 1000)
    c = confusion_from_predictions(t, p, 5).counts
    assert np.array_equal(c.sum(axis=1), np.bincount(t, minlength=5))
    for i in range(5):
        for j in range(5):
            assert c[i, j] == np.sum((t == i) & (p == j))


def test_confusion_addition():
    a, b = cm([[1, 2], [3, 4]]), cm([[4, 3], [2, 1]])
    assert (a + b) == cm([[5, 5], [5, 5]])


def test_am_gm_on_random_matrices():
    rng = np.random.default_rng(7)
    for _ in range(10000):
        j = int(rng.integers(2, 6))
        m = compute_metrics(cm(rng.integers(0, 20, size=(j, j)) + np.eye(j, dtype=int)))
        assert m.mavg <= m.mava


matrices = st.integers(2, 5).flatmap(
    lambda j: st.lists(st.lists(st.integers(0, 30), min_size=j, max_size=j),
                       min_size=j, max_size=j))


@given(matrices)
def test_metric_ranges(counts):
    c = np.array(counts)
    if c.sum() == 0:
        return
    m = compute_metrics(cm(c))
    for k in AGGREGATES:
        assert 0 <= getattr(m, k) <= 100
    assert m.mavg <= m.mava
    sens = [pc.sensitivity for pc in m.per_class]
    if len(set(sens)) == 1 and sens[0] > 0:
        assert m.mavg == pytest.approx(m.mava)


@given(matrices, st.randoms(use_true_random=False))
def test_class_permutation_invariance(counts, rnd):
    c = np.array(counts)
    if c.sum() == 0:
        return
    perm = list(range(len(c)))
    rnd.shuffle(perm)
    a = compute_metrics(cm(c))
    b = compute_metrics(cm(c[np.ix_(perm, perm)]))
    for k in AGGREGATES:
        assert getattr(b, k) == pytest.approx(getattr(a, k), abs=1e-9)


@given(matrices, st.integers(2, 9))
def test_scaling_invariance(counts, s):
    c = np.array(counts)
    if c.sum() == 0:
        return
    a, b = compute_metrics(cm(c)), compute_metrics(cm(c * s))
    for k in AGGREGATES:
        assert getattr(b, k) == pytest.approx(getattr(a, k), abs=1e-9)
