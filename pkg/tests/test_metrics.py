import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wdbc_ml.exceptions import DimensionError, EmptyDatasetError
from wdbc_ml.metrics import ConfusionCounts, confusion, evaluate, rates


def test_hand_case():
    m = rates(ConfusionCounts(tp=60, tn=93, fp=7, fn=11))
    assert m.accuracy == pytest.approx(153 / 171)
    assert m.tpr == pytest.approx(60 / 71)
    assert m.tnr == pytest.approx(0.93)
    assert m.fpr == pytest.approx(0.07)
    assert m.fnr == pytest.approx(11 / 71)


def test_perfect_and_inverted():
    assert rates(ConfusionCounts(5, 5, 0, 0)).accuracy == 1.0
    m = rates(ConfusionCounts(0, 0, 5, 5))
    assert (m.accuracy, m.tpr, m.tnr) == (0.0, 0.0, 0.0)


def test_undefined_rates():
    m = rates(ConfusionCounts(tp=0, tn=4, fp=1, fn=0))
    assert m.tpr is None and m.fnr is None
    assert m.tnr == 0.8


def test_empty_counts():
    with pytest.raises(EmptyDatasetError):
        rates(ConfusionCounts(0, 0, 0, 0))
    with pytest.raises(EmptyDatasetError):
        confusion([], [])


def test_confusion_tally_and_positive_class():
    pred, act = [1, 1, 0, 0, 1], [1, 0, 0, 1, 1]
    assert confusion(pred, act) == ConfusionCounts(tp=2, tn=1, fp=1, fn=1)
    assert confusion(pred, act, positive_class=0) == ConfusionCounts(tp=1, tn=2, fp=1, fn=1)
    with pytest.raises(DimensionError):
        confusion([1], [1, 0])


def test_evaluate_pair():
    c, m = evaluate(np.array([1, 0]), np.array([1, 1]))
    assert c.total == 2 and m.accuracy == 0.5


counts = st.integers(0, 10**6)


@given(counts, counts, counts, counts)
def test_rate_identities(tp, tn, fp, fn):
    c = ConfusionCounts(tp, tn, fp, fn)
    if c.total == 0:
        return
    m = rates(c)
    assert 0 <= m.accuracy <= 1
    if tp + fn:
        assert m.tpr + m.fnr == 1.0
    if tn + fp:
        assert m.tnr + m.fpr == 1.0
    if tp + fn and tn + fp:
        lo, hi = sorted((m.tpr, m.tnr))
        assert lo - 1e-12 <= m.accuracy <= hi + 1e-12
