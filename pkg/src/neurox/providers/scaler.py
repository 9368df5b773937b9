"""Standardization and mean imputation for the 47-dim acoustic vectors.

Fitted on the training split only.  Masked entries are excluded from the
statistics, imputed with the training mean, and therefore standardize to
exactly zero.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..dsp.features import N_FEATURES, SCHEMA_VERSION, AcousticFeatureVector

logger = logging.getLogger(__name__)


@dataclass
class Scaler:
    means: np.ndarray
    stds: np.ndarray
    impute_values: np.ndarray

    def __post_init__(self) -> None:
        for name in ("means", "stds", "impute_values"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            if arr.shape != (N_FEATURES,):
                raise ValueError(f"{name} must have {N_FEATURES} entries")
            setattr(self, name, arr)
        if np.any(self.stds <= 0):
            raise ValueError("stds must be strictly positive")

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "means": self.means.tolist(),
            "stds": self.stds.tolist(),
            "impute_values": self.impute_values.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "Scaler":
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported scaler version {payload.get('schema_version')!r}")
        return cls(
            means=np.array(payload["means"]),
            stds=np.array(payload["stds"]),
            impute_values=np.array(payload["impute_values"]),
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json_dict(), sort_keys=True))

    @classmethod
    def load(cls, path: str | Path) -> "Scaler":
        return cls.from_json_dict(json.loads(Path(path).read_text()))


def fit_scaler(features: list[AcousticFeatureVector]) -> Scaler:
    """Per-dimension mean/std over non-masked entries (population std).

    Zero-variance dimensions get std 1; a dimension masked in every sample
    falls back to mean 0 with a logged warning.
    """
    if not features:
        raise ValueError("cannot fit a scaler on an empty training set")
    values = np.stack([f.values for f in features])
    present = ~np.stack([f.mask for f in features])

    means = np.zeros(N_FEATURES)
    stds = np.ones(N_FEATURES)
    for dim in range(N_FEATURES):
        column = values[present[:, dim], dim]
        if len(column) == 0:
            logger.warning(
                "feature %d masked in every training sample; imputing 0", dim
            )
            continue
        means[dim] = column.mean()
        std = column.std()
        if std > 0:
            stds[dim] = std
    return Scaler(means=means, stds=stds, impute_values=means.copy())


def apply_scaler(scaler: Scaler, feature: AcousticFeatureVector) -> np.ndarray:
    """Impute masked entries with the training means, then z-score."""
    filled = np.where(feature.mask, scaler.impute_values, feature.values)
    return (filled - scaler.means) / scaler.stds
