import numpy as np
import pytest

from neurox.fusion.ablation import DEFAULT_GRID, run_ablation
from neurox.fusion.config import Modalities, TrainingConfig
from neurox.fusion.metrics import evaluate
from neurox.fusion.train import train

from conftest import reduced_config, separable_dataset


def cfg(**overrides):
    defaults = dict(max_epochs=30, learning_rate=3e-3, batch_size=8, seed=13)
    defaults.update(overrides)
    return TrainingConfig(**defaults)


def test_grid_has_four_rows_in_reference_order():
    assert len(DEFAULT_GRID) == 4
    assert DEFAULT_GRID[0] == Modalities(True, True, True)
    # rows 2-4 drop audio embeddings, acoustic features, transcription in turn
    assert DEFAULT_GRID[1].speech is False and DEFAULT_GRID[1].text
    assert DEFAULT_GRID[2].acoustic is False and DEFAULT_GRID[2].text
    assert DEFAULT_GRID[3].text is False


def test_full_modality_row_reproduces_direct_training():
    config = reduced_config()
    train_set = separable_dataset(config, 16, seed=21)
    eval_set = separable_dataset(config, 12, seed=22)
    rows = run_ablation(train_set, eval_set, cfg(), config,
                        combos=(Modalities(True, True, True),))
    direct = evaluate(train(train_set, cfg(), config).model, eval_set)
    assert rows[0].report == direct


def test_text_only_signal_separates_text_rows_from_chance():
    config = reduced_config()
    train_set = separable_dataset(config, 32, seed=23, signal="text")
    eval_set = separable_dataset(config, 32, seed=24, signal="text")
    rows = run_ablation(train_set, eval_set, cfg(max_epochs=60), config)
    by_text = {row.modalities.text: row for row in rows if True}

    for row in rows:
        if row.modalities.text:
            assert row.report.accuracy >= 0.9, row.modalities.label
        else:
            assert abs(row.report.accuracy - 0.5) <= 0.1, row.modalities.label


def test_empty_grid_rejected():
    config = reduced_config()
    data = separable_dataset(config, 8, seed=25)
    with pytest.raises(ValueError):
        run_ablation(data, data, cfg(), config, combos=())


def test_rows_expose_modality_flags_in_json():
    config = reduced_config()
    train_set = separable_dataset(config, 8, seed=26)
    rows = run_ablation(train_set, train_set, cfg(max_epochs=2), config,
                        combos=(Modalities(True, True, False),))
    payload = rows[0].to_json_dict()
    assert payload["transcription"] is False
    assert payload["audio_embeddings"] is True
    assert payload["acoustic_features"] is True
    assert "accuracy" in payload and "f1" in payload
