"""From-scratch multimodal fusion transformer: forward, backward, training."""

from .ablation import DEFAULT_GRID, AblationRow, run_ablation
from .backward import batch_loss_and_gradients, bce_loss, loss_and_gradients, zero_gradients
from .config import FusionConfig, Modalities, TrainingConfig
from .data import FusionSample, label_to_int
from .forward import (
    Prediction,
    assemble_tokens,
    attention_forward,
    classify,
    encoder_forward,
    forward_sample,
    project_inputs,
    sample_tokens,
)
from .kfold import KFoldResult, kfold_cv, stratified_folds
from .metrics import EvalReport, accuracy_summary, evaluate, report_from_counts
from .model import (
    CheckpointError,
    EncoderLayerParams,
    FusionModel,
    init_model,
    load_model,
    save_model,
)
from .train import EpochRecord, TrainResult, train

__all__ = [
    "DEFAULT_GRID",
    "AblationRow",
    "run_ablation",
    "batch_loss_and_gradients",
    "bce_loss",
    "loss_and_gradients",
    "zero_gradients",
    "FusionConfig",
    "Modalities",
    "TrainingConfig",
    "FusionSample",
    "label_to_int",
    "Prediction",
    "assemble_tokens",
    "attention_forward",
    "classify",
    "encoder_forward",
    "forward_sample",
    "project_inputs",
    "sample_tokens",
    "KFoldResult",
    "kfold_cv",
    "stratified_folds",
    "EvalReport",
    "accuracy_summary",
    "evaluate",
    "report_from_counts",
    "CheckpointError",
    "EncoderLayerParams",
    "FusionModel",
    "init_model",
    "load_model",
    "save_model",
    "EpochRecord",
    "TrainResult",
    "train",
]
