"""Confusion counts and the accuracy / TPR / TNR / FPR / FNR rates derived from them."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .exceptions import DimensionError, EmptyDatasetError


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self):
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricReport:
    """Rates in [0, 1]; a rate whose denominator is zero is ``None`` (undefined)."""

    accuracy: float
    tpr: Optional[float]
    tnr: Optional[float]
    fpr: Optional[float]
    fnr: Optional[float]

    def as_dict(self):
        return {"accuracy": self.accuracy, "tpr": self.tpr, "tnr": self.tnr,
                "fpr": self.fpr, "fnr": self.fnr}


def confusion(predicted, actual, positive_class=1):
    predicted = np.asarray(predicted).reshape(-1)
    actual = np.asarray(actual).reshape(-1)
    if predicted.shape != actual.shape:
        raise DimensionError(f"{predicted.shape[0]} predictions for {actual.shape[0]} labels")
    if predicted.shape[0] == 0:
        raise EmptyDatasetError("cannot tally an empty prediction set")
    pred_pos = predicted == positive_class
    act_pos = actual == positive_class
    return ConfusionCounts(
        tp=int(np.sum(pred_pos & act_pos)),
        tn=int(np.sum(~pred_pos & ~act_pos)),
        fp=int(np.sum(pred_pos & ~act_pos)),
        fn=int(np.sum(~pred_pos & act_pos)),
    )


def _ratio(num, den):
    # exact rational first so complementary rates sum to exactly 1
    return None if den == 0 else float(Fraction(num, den))


def rates(c):
    if c.total == 0:
        raise EmptyDatasetError("no samples in confusion counts")
    return MetricReport(
        accuracy=_ratio(c.tp + c.tn, c.total),
        tpr=_ratio(c.tp, c.tp + c.fn),
        tnr=_ratio(c.tn, c.tn + c.fp),
        fpr=_ratio(c.fp, c.fp + c.tn),
        fnr=_ratio(c.fn, c.fn + c.tp),
    )


def evaluate(predicted, actual, positive_class=1):
    c = confusion(predicted, actual, positive_class)
    return c, rates(c)
