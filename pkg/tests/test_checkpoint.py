import numpy as np
import pytest

from neurox.fusion.config import TrainingConfig
from neurox.fusion.metrics import evaluate
from neurox.fusion.model import CheckpointError, init_model, load_model, save_model
from neurox.fusion.train import train

from conftest import reduced_config, separable_dataset


def test_save_load_save_identical_bytes(tmp_path):
    model = init_model(reduced_config(), seed=3)
    first = tmp_path / "a.ckpt"
    second = tmp_path / "b.ckpt"
    save_model(model, first)
    save_model(load_model(first), second)
    assert first.read_bytes() == second.read_bytes()


def test_round_trip_preserves_parameters_bitwise(tmp_path):
    model = init_model(reduced_config(), seed=4)
    path = tmp_path / "m.ckpt"
    save_model(model, path)
    back = load_model(path)
    assert back.config == model.config
    assert back.seed == model.seed
    for (name_a, a), (name_b, b) in zip(
        model.named_parameters(), back.named_parameters()
    ):
        assert name_a == name_b
        np.testing.assert_array_equal(a, b)


def test_loaded_model_evaluates_identically(tmp_path):
    config = reduced_config()
    dataset = separable_dataset(config, 12, seed=8)
    result = train(
        dataset,
        TrainingConfig(max_epochs=10, learning_rate=3e-3, batch_size=4, seed=5),
        config,
    )
    before = evaluate(result.model, dataset)
    path = tmp_path / "trained.ckpt"
    save_model(result.model, path)
    after = evaluate(load_model(path), dataset)
    assert before == after


def test_corrupt_payload_detected(tmp_path):
    model = init_model(reduced_config(), seed=6)
    path = tmp_path / "m.ckpt"
    save_model(model, path)
    raw = bytearray(path.read_bytes())
    raw[len(raw) // 2] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises(CheckpointError, match="checksum"):
        load_model(path)


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "m.ckpt"
    path.write_bytes(b"NOTRIGHT" + bytes(100))
    with pytest.raises(CheckpointError, match="magic"):
        load_model(path)


def test_wrong_version_rejected(tmp_path):
    model = init_model(reduced_config(), seed=6)
    path = tmp_path / "m.ckpt"
    save_model(model, path)
    raw = path.read_bytes()
    tampered = raw.replace(b'"version": 1', b'"version": 9', 1)
    # recompute the trailer so only the version check can fail
    import hashlib

    body = tampered[:-32]
    path.write_bytes(body + hashlib.sha256(body).digest())
    with pytest.raises(CheckpointError, match="version"):
        load_model(path)


def test_truncated_file_rejected(tmp_path):
    path = tmp_path / "tiny.ckpt"
    path.write_bytes(b"xx")
    with pytest.raises(CheckpointError, match="short"):
        load_model(path)
