"""Confusion counts, accuracy, and F1 with 'ad' as the positive class."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import FusionSample
from .forward import forward_sample
from .model import FusionModel


@dataclass
class EvalReport:
    tp: int
    tn: int
    fp: int
    fn: int
    accuracy: float
    f1: float
    fold_reports: list["EvalReport"] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def to_json_dict(self) -> dict:
        return {
            "tp": self.tp,
            "tn": self.tn,
            "fp": self.fp,
            "fn": self.fn,
            "accuracy": self.accuracy,
            "f1": self.f1,
            "acc_pct": f"{100.0 * self.accuracy:.2f}%",
            "f1_pct": f"{100.0 * self.f1:.2f}%",
            "n": self.n,
        }


def report_from_counts(tp: int, tn: int, fp: int, fn: int) -> EvalReport:
    total = tp + tn + fp + fn
    if total == 0:
        raise ValueError("empty split")
    accuracy = (tp + tn) / total
    denom = 2 * tp + fp + fn
    f1 = (2 * tp / denom) if denom > 0 else 0.0
    return EvalReport(tp=tp, tn=tn, fp=fp, fn=fn, accuracy=accuracy, f1=f1)


def evaluate(model: FusionModel, split: list[FusionSample],
             threshold: float = 0.5) -> EvalReport:
    """Score a labeled split; pure function of (model, split), order-invariant."""
    if not split:
        raise ValueError("empty split")
    tp = tn = fp = fn = 0
    for sample in split:
        label = sample.require_label()
        prediction, _ = forward_sample(model, sample, threshold)
        predicted = int(prediction.label == "ad")
        if predicted == 1 and label == 1:
            tp += 1
        elif predicted == 0 and label == 0:
            tn += 1
        elif predicted == 1 and label == 0:
            fp += 1
        else:
            fn += 1
    return report_from_counts(tp, tn, fp, fn)


def accuracy_summary(accuracies: list[float]) -> tuple[float, float, str]:
    """Mean and population std of fold accuracies, plus the report string."""
    arr = np.asarray(accuracies, dtype=np.float64)
    mean = float(arr.mean())
    std = float(arr.std())
    return mean, std, f"{100.0 * mean:.2f}% ± {100.0 * std:.2f}%"
