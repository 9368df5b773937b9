"""Finite-difference verification of every parameter tensor's gradient."""

import numpy as np
import pytest

from neurox.fusion.backward import batch_loss_and_gradients, bce_loss, loss_and_gradients
from neurox.fusion.model import init_model

from conftest import random_sample, reduced_config

H = 1e-4
REL_TOL = 1e-4
REL_FLOOR = 1e-5


def _loss_only(batch, model) -> float:
    from neurox.fusion.forward import forward_sample

    total = 0.0
    for sample in batch:
        _, cache = forward_sample(model, sample, want_cache=True)
        total += bce_loss(cache.probability, sample.label)
    return total / len(batch)


def _gradcheck_model(seed: int = 20):
    """Reduced model with rescaled weights so every gradient is exercised."""
    config = reduced_config()
    model = init_model(config, seed=seed)
    rng = np.random.default_rng(seed + 1)
    for name, arr in model.named_parameters():
        if name.endswith(("gamma",)):
            arr[...] = 1.0 + 0.2 * rng.standard_normal(arr.shape)
        elif name.endswith(("beta", ".b")):
            arr[...] = 0.1 * rng.standard_normal(arr.shape)
        else:
            arr[...] = 0.3 * rng.standard_normal(arr.shape)
    # keep the logit unsaturated so the loss clamp never engages
    model.head_out.w[...] *= 0.3
    return config, model


def test_gradients_match_central_differences_everywhere():
    config, model = _gradcheck_model()
    rng = np.random.default_rng(40)
    batch = [random_sample(config, rng, label=1, sample_id="a"),
             random_sample(config, rng, label=0, sample_id="b")]

    _, cache_probe = __import__("neurox.fusion.forward", fromlist=["forward_sample"]) \
        .forward_sample(model, batch[0], want_cache=True)
    assert 0.05 < cache_probe.probability < 0.95, "fixture saturates the sigmoid"

    loss, grads, _ = batch_loss_and_gradients(batch, model)
    assert np.isfinite(loss)

    worst = 0.0
    worst_name = ""
    for name, arr in model.named_parameters():
        analytic = grads[name]
        flat = arr.reshape(-1)
        flat_grad = analytic.reshape(-1)
        for i in range(flat.size):
            original = flat[i]
            flat[i] = original + H
            plus = _loss_only(batch, model)
            flat[i] = original - H
            minus = _loss_only(batch, model)
            flat[i] = original
            fd = (plus - minus) / (2.0 * H)
            rel = abs(fd - flat_grad[i]) / max(abs(fd), abs(flat_grad[i]), REL_FLOOR)
            if rel > worst:
                worst, worst_name = rel, f"{name}[{i}]"
        assert worst < REL_TOL, f"gradient mismatch at {worst_name}: rel={worst:.3e}"
    assert worst < REL_TOL


def test_gradient_shapes_mirror_parameters():
    config, model = _gradcheck_model(seed=30)
    rng = np.random.default_rng(41)
    batch = [random_sample(config, rng, label=1)]
    _, grads = loss_and_gradients(batch, model)
    for name, arr in model.named_parameters():
        assert grads[name].shape == arr.shape


def test_loss_closed_form_at_half():
    assert bce_loss(0.5, 1) == pytest.approx(np.log(2.0), abs=1e-12)
    assert bce_loss(0.5, 0) == pytest.approx(np.log(2.0), abs=1e-12)


def test_duplicated_sample_keeps_mean_loss():
    config, model = _gradcheck_model(seed=31)
    rng = np.random.default_rng(42)
    sample = random_sample(config, rng, label=1)
    single, _ = loss_and_gradients([sample], model)
    doubled, _ = loss_and_gradients([sample, sample], model)
    assert doubled == pytest.approx(single, rel=1e-12)


def test_empty_batch_rejected():
    _, model = _gradcheck_model(seed=32)
    with pytest.raises(ValueError):
        loss_and_gradients([], model)


@pytest.mark.parametrize("modalities", [
    dict(acoustic=False, speech=True, text=True),
    dict(acoustic=True, speech=False, text=True),
    dict(acoustic=True, speech=True, text=False),
])
def test_gradcheck_ablated_configurations(modalities):
    from neurox.fusion.config import Modalities

    config = reduced_config(modalities=Modalities(**modalities))
    model = init_model(config, seed=51)
    rng = np.random.default_rng(52)
    for name, arr in model.named_parameters():
        if not name.endswith(("gamma", "beta")):
            arr[...] = 0.3 * rng.standard_normal(arr.shape)
    batch = [random_sample(reduced_config(), rng, label=1),
             random_sample(reduced_config(), rng, label=0)]

    _, grads, _ = batch_loss_and_gradients(batch, model)
    pick = np.random.default_rng(53)
    for name, arr in model.named_parameters():
        flat = arr.reshape(-1)
        flat_grad = grads[name].reshape(-1)
        for i in pick.choice(flat.size, size=min(6, flat.size), replace=False):
            original = flat[i]
            flat[i] = original + H
            plus = _loss_only(batch, model)
            flat[i] = original - H
            minus = _loss_only(batch, model)
            flat[i] = original
            fd = (plus - minus) / (2.0 * H)
            rel = abs(fd - flat_grad[i]) / max(abs(fd), abs(flat_grad[i]), REL_FLOOR)
            assert rel < REL_TOL, f"{name}[{i}]: rel={rel:.3e}"


def test_gradcheck_with_masked_attention():
    # padding mask changes the graph; gradients must still match
    config = reduced_config(use_key_padding_mask=True)
    model = init_model(config, seed=33)
    rng = np.random.default_rng(43)
    for name, arr in model.named_parameters():
        if not name.endswith(("gamma", "beta")):
            arr[...] = 0.3 * rng.standard_normal(arr.shape)
    sample = random_sample(config, rng, label=1)
    sample.text_valid_len = 2
    sample.text_tokens[2:] = 0.0
    batch = [sample]

    _, grads, _ = batch_loss_and_gradients(batch, model)
    check = np.random.default_rng(44)
    for name, arr in model.named_parameters():
        flat = arr.reshape(-1)
        flat_grad = grads[name].reshape(-1)
        for i in check.choice(flat.size, size=min(8, flat.size), replace=False):
            original = flat[i]
            flat[i] = original + H
            plus = _loss_only(batch, model)
            flat[i] = original - H
            minus = _loss_only(batch, model)
            flat[i] = original
            fd = (plus - minus) / (2.0 * H)
            rel = abs(fd - flat_grad[i]) / max(abs(fd), abs(flat_grad[i]), REL_FLOOR)
            assert rel < REL_TOL, f"{name}[{i}]: rel={rel:.3e}"
