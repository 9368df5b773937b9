"""Adam training loop, single-threaded and bit-reproducible per seed."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .backward import batch_loss_and_gradients, zero_gradients
from .config import FusionConfig, TrainingConfig
from .data import FusionSample
from .model import FusionModel, init_model

logger = logging.getLogger(__name__)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    train_acc: float

    def to_json_dict(self) -> dict:
        return {"epoch": self.epoch, "loss": self.loss, "train_acc": self.train_acc}


@dataclass
class AdamState:
    m: dict[str, np.ndarray]
    v: dict[str, np.ndarray]
    step: int = 0


@dataclass
class TrainResult:
    model: FusionModel
    log: list[EpochRecord] = field(default_factory=list)
    diverged: bool = False


def _adam_step(model: FusionModel, grads: dict[str, np.ndarray],
               state: AdamState, config: TrainingConfig) -> None:
    state.step += 1
    b1, b2 = config.beta1, config.beta2
    correction1 = 1.0 - b1**state.step
    correction2 = 1.0 - b2**state.step
    for name, param in model.named_parameters():
        g = grads[name]
        state.m[name] = b1 * state.m[name] + (1.0 - b1) * g
        state.v[name] = b2 * state.v[name] + (1.0 - b2) * g * g
        m_hat = state.m[name] / correction1
        v_hat = state.v[name] / correction2
        param -= config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)


def train(
    dataset: list[FusionSample],
    config: TrainingConfig,
    model_config: FusionConfig | None = None,
) -> TrainResult:
    """Train from scratch on a labeled dataset.

    Initialization, shuffle order, and every update are functions of
    ``config.seed`` alone, so identical calls produce bitwise-identical
    parameters.  A non-finite loss aborts training and restores the last
    finite epoch's parameters.
    """
    if not dataset:
        raise ValueError("dataset must be non-empty")
    labels = {s.require_label() for s in dataset}
    if labels != {0, 1}:
        raise ValueError("training set must contain both classes")

    model_config = model_config or FusionConfig()
    model = init_model(model_config, seed=config.seed)
    shuffle_rng = np.random.default_rng(config.seed)
    adam = AdamState(m=zero_gradients(model), v=zero_gradients(model))

    log: list[EpochRecord] = []
    last_good = model.copy_parameters()
    best_loss = np.inf
    stall = 0

    for epoch in range(1, config.max_epochs + 1):
        order = shuffle_rng.permutation(len(dataset))
        epoch_loss = 0.0
        correct = 0
        diverged = False
        for start in range(0, len(order), config.batch_size):
            batch = [dataset[i] for i in order[start : start + config.batch_size]]
            try:
                loss, grads, probs = batch_loss_and_gradients(batch, model)
            except FloatingPointError:
                diverged = True
                break
            if not np.isfinite(loss):
                diverged = True
                break
            epoch_loss += loss * len(batch)
            correct += sum(
                int((p >= 0.5) == bool(s.require_label()))
                for p, s in zip(probs, batch)
            )
            _adam_step(model, grads, adam, config)

        if diverged:
            logger.warning("loss diverged at epoch %d; restoring last checkpoint", epoch)
            model.load_parameter_state(last_good)
            return TrainResult(model=model, log=log, diverged=True)

        record = EpochRecord(
            epoch=epoch,
            loss=epoch_loss / len(dataset),
            train_acc=correct / len(dataset),
        )
        log.append(record)
        last_good = model.copy_parameters()

        if config.early_stop_patience > 0:
            if record.loss < best_loss - 1e-12:
                best_loss = record.loss
                stall = 0
            else:
                stall += 1
                if stall >= config.early_stop_patience:
                    logger.info("early stop at epoch %d (patience %d)",
                                epoch, config.early_stop_patience)
                    break

    return TrainResult(model=model, log=log)
