"""Modality ablation: retrain from scratch per combination, same seed."""

from __future__ import annotations

from dataclasses import dataclass

from .config import FusionConfig, Modalities, TrainingConfig
from .data import FusionSample
from .metrics import EvalReport, evaluate
from .train import train

# Grid rows in fixed (audio embeddings, acoustic features, transcription)
# order: full model first, then one modality dropped at a time.
DEFAULT_GRID: tuple[Modalities, ...] = (
    Modalities(acoustic=True, speech=True, text=True),
    Modalities(acoustic=True, speech=False, text=True),
    Modalities(acoustic=False, speech=True, text=True),
    Modalities(acoustic=True, speech=True, text=False),
)


@dataclass
class AblationRow:
    modalities: Modalities
    report: EvalReport

    def to_json_dict(self) -> dict:
        return {
            "audio_embeddings": self.modalities.speech,
            "acoustic_features": self.modalities.acoustic,
            "transcription": self.modalities.text,
            **self.report.to_json_dict(),
        }


def run_ablation(
    train_split: list[FusionSample],
    eval_split: list[FusionSample],
    config: TrainingConfig,
    model_config: FusionConfig | None = None,
    combos: tuple[Modalities, ...] = DEFAULT_GRID,
) -> list[AblationRow]:
    """One table row per modality combination.

    Each row rebuilds the token assembly with only the requested sources
    (absent projections dropped, token count shrunk) and trains from
    scratch with the shared seed, so the full-modality row reproduces the
    unablated model exactly.
    """
    if not combos:
        raise ValueError("ablation grid must be non-empty")
    base = model_config or FusionConfig()
    rows = []
    for modalities in combos:
        variant = base.with_modalities(modalities)
        result = train(train_split, config, variant)
        rows.append(AblationRow(
            modalities=modalities,
            report=evaluate(result.model, eval_split),
        ))
    return rows
