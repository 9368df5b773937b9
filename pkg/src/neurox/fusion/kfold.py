"""Stratified k-fold cross-validation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import FusionConfig, TrainingConfig
from .data import FusionSample
from .metrics import EvalReport, accuracy_summary, evaluate
from .train import train


@dataclass
class KFoldResult:
    fold_reports: list[EvalReport]
    mean_accuracy: float
    std_accuracy: float
    summary: str

    def to_json_dict(self) -> dict:
        return {
            "k": len(self.fold_reports),
            "folds": [r.to_json_dict() for r in self.fold_reports],
            "mean_accuracy": self.mean_accuracy,
            "std_accuracy": self.std_accuracy,
            "summary": self.summary,
        }


def stratified_folds(labels: list[int], k: int, seed: int = 0) -> list[np.ndarray]:
    """Assign samples to k folds, stratified by label.

    Samples of each class are shuffled, then dealt round-robin into folds
    with a cursor that carries over between classes, which keeps both the
    per-class counts and the overall fold sizes within one of each other.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    labels_arr = np.asarray(labels)
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels_arr), dtype=int)
    cursor = 0
    for cls in sorted(set(labels_arr.tolist())):
        members = np.flatnonzero(labels_arr == cls)
        if len(members) < k:
            raise ValueError(
                f"class {cls} has {len(members)} samples; need at least k={k}"
            )
        members = rng.permutation(members)
        for idx in members:
            assignment[idx] = cursor % k
            cursor += 1
    return [np.flatnonzero(assignment == fold) for fold in range(k)]


def kfold_cv(
    dataset: list[FusionSample],
    k: int,
    config: TrainingConfig,
    model_config: FusionConfig | None = None,
) -> KFoldResult:
    """Train and evaluate once per fold; report mean +/- population std."""
    folds = stratified_folds([s.require_label() for s in dataset], k, config.seed)
    reports = []
    for holdout in folds:
        holdout_set = set(holdout.tolist())
        train_split = [s for i, s in enumerate(dataset) if i not in holdout_set]
        test_split = [dataset[i] for i in holdout]
        result = train(train_split, config, model_config)
        reports.append(evaluate(result.model, test_split))
    mean, std, summary = accuracy_summary([r.accuracy for r in reports])
    return KFoldResult(
        fold_reports=reports, mean_accuracy=mean, std_accuracy=std, summary=summary
    )
