"""Confusion counts and the derived evaluation measures.

Conventions: class 1 is an attack, so tp counts correctly flagged attacks
and fp counts normal records flagged as attacks. The false alarm rate is
the mean of the false-positive and false-negative rates. Metrics with a
zero denominator are undefined and reported as None (JSON null).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import EmptyInputError, LengthMismatchError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass(frozen=True)
class MetricsReport:
    accuracy: float | None
    fpr: float | None
    fnr: float | None
    far: float | None
    precision: float | None
    recall: float | None

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "fpr": self.fpr,
            "fnr": self.fnr,
            "far": self.far,
            "precision": self.precision,
            "recall": self.recall,
        }


def confusion(predictions: Sequence[int], truth: Sequence[int]) -> ConfusionMatrix:
    if len(predictions) != len(truth):
        raise LengthMismatchError(
            f"{len(predictions)} predictions for {len(truth)} truth labels"
        )
    if not predictions:
        raise EmptyInputError("cannot evaluate zero predictions")
    tp = tn = fp = fn = 0
    for p, t in zip(predictions, truth):
        if p == 1 and t == 1:
            tp += 1
        elif p == 0 and t == 0:
            tn += 1
        elif p == 1 and t == 0:
            fp += 1
        else:
            fn += 1
    return ConfusionMatrix(tp, tn, fp, fn)


def _ratio(num: int, den: int) -> float | None:
    return num / den if den else None


def compute_metrics(cm: ConfusionMatrix) -> MetricsReport:
    if cm.total < 1:
        raise EmptyInputError("confusion matrix is empty")
    accuracy = (cm.tp + cm.tn) / cm.total
    fpr = _ratio(cm.fp, cm.fp + cm.tn)
    fnr = _ratio(cm.fn, cm.fn + cm.tp)
    far = (fpr + fnr) / 2 if fpr is not None and fnr is not None else None
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    recall = _ratio(cm.tp, cm.tp + cm.fn)
    return MetricsReport(accuracy, fpr, fnr, far, precision, recall)
