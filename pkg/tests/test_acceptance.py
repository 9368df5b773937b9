"""Acceptance gate: one test per release criterion, at the stated tolerances.

Each test prints a single [PASS]/[FAIL] line (visible with `pytest -s` or
in the captured output) so the gate can be read without pytest knowledge.
"""

import json
import socket
import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import (
    build_demo_dataset,
    noise_clip,
    random_sample,
    reduced_config,
    separable_dataset,
    silence_clip,
    sine_clip,
)
from oracles import brute_force_knn, naive_mfcc


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"\n[FAIL] {name}")
        raise
    print(f"\n[PASS] {name}")


# 1 -------------------------------------------------------------------------


def test_gradient_correctness_reduced_model():
    from neurox.fusion.backward import batch_loss_and_gradients, bce_loss
    from neurox.fusion.forward import forward_sample
    from neurox.fusion.model import init_model

    with criterion("gradient correctness: max rel err < 1e-4, runtime < 60 s"):
        start = time.monotonic()
        config = reduced_config()  # d_model 16, 2 heads, 2+4 = 6 tokens
        assert config.d_model == 16 and config.n_heads == 2
        assert config.token_count == 6
        model = init_model(config, seed=77)
        rng = np.random.default_rng(78)
        for name, arr in model.named_parameters():
            if name.endswith("gamma"):
                arr[...] = 1.0 + 0.2 * rng.standard_normal(arr.shape)
            elif name.endswith(("beta", ".b")):
                arr[...] = 0.1 * rng.standard_normal(arr.shape)
            else:
                arr[...] = 0.3 * rng.standard_normal(arr.shape)
        model.head_out.w[...] *= 0.3

        batch = [random_sample(config, rng, label=1),
                 random_sample(config, rng, label=0)]

        def loss_fn():
            total = 0.0
            for sample in batch:
                _, cache = forward_sample(model, sample, want_cache=True)
                total += bce_loss(cache.probability, sample.label)
            return total / len(batch)

        _, grads, _ = batch_loss_and_gradients(batch, model)
        h = 1e-4
        worst = 0.0
        for name, arr in model.named_parameters():
            flat, flat_grad = arr.reshape(-1), grads[name].reshape(-1)
            for i in range(flat.size):
                keep = flat[i]
                flat[i] = keep + h
                plus = loss_fn()
                flat[i] = keep - h
                minus = loss_fn()
                flat[i] = keep
                fd = (plus - minus) / (2 * h)
                rel = abs(fd - flat_grad[i]) / max(abs(fd), abs(flat_grad[i]), 1e-5)
                worst = max(worst, rel)
        elapsed = time.monotonic() - start
        assert worst < 1e-4, f"max relative error {worst:.3e}"
        assert elapsed < 60.0, f"took {elapsed:.1f} s"


# 2 -------------------------------------------------------------------------


def test_shape_and_invariant_chain_full_size():
    from neurox.fusion.config import FusionConfig
    from neurox.fusion.forward import (
        assemble_tokens,
        classify,
        encoder_forward,
        project_inputs,
    )
    from neurox.fusion.forward import ForwardCache
    from neurox.fusion.data import FusionSample
    from neurox.fusion.model import init_model

    with criterion("shape chain 47/768 -> 514x768 -> 514x768 -> (0,1); "
                   "softmax rows sum to 1 +/- 1e-6; runtime < 30 s"):
        start = time.monotonic()
        config = FusionConfig()
        assert config.n_heads * config.d_k == config.d_model == 768
        model = init_model(config, seed=0)
        rng = np.random.default_rng(1)

        f_a = rng.standard_normal(47)
        f_e = rng.standard_normal(768)
        h_a, h_e = project_inputs(f_a, f_e, model)
        assert h_a.shape == (768,) and h_e.shape == (768,)

        text = np.zeros((512, 768))
        text[:40] = rng.standard_normal((40, 768))
        tokens = assemble_tokens(h_a, h_e, text, config)
        assert tokens.shape == (514, 768)

        sample = FusionSample("probe", f_a, f_e, text, 40, label=None)
        cache = ForwardCache(sample=sample, tokens_in=tokens)
        encoded = encoder_forward(tokens, model, cache=cache)
        assert encoded.shape == (514, 768)
        for attn in cache.attn_weights:
            assert attn.shape == (8, 514, 514)
            assert np.all(np.abs(attn.sum(axis=-1) - 1.0) < 1e-6)
            assert np.all(attn >= 0.0)

        prediction = classify(encoded, model)
        assert 0.0 < prediction.probability < 1.0
        elapsed = time.monotonic() - start
        assert elapsed < 30.0, f"took {elapsed:.1f} s"


# 3 -------------------------------------------------------------------------


def test_trainability_within_200_epochs():
    from neurox.fusion.config import TrainingConfig
    from neurox.fusion.train import train

    with criterion("16-sample separable set hits 100% train accuracy "
                   "within 200 epochs, bit-identically per seed, < 5 min"):
        start = time.monotonic()
        config = reduced_config()
        dataset = separable_dataset(config, 16, seed=101)
        train_cfg = TrainingConfig(max_epochs=200, learning_rate=3e-3,
                                   batch_size=4, seed=59)
        result = train(dataset, train_cfg, config)
        assert any(r.train_acc == 1.0 for r in result.log), "never reached 100%"
        assert len(result.log) <= 200

        rerun = train(dataset, train_cfg, config)
        for (_, a), (_, b) in zip(result.model.named_parameters(),
                                  rerun.model.named_parameters()):
            np.testing.assert_array_equal(a, b)
        elapsed = time.monotonic() - start
        assert elapsed < 300.0, f"took {elapsed:.1f} s"


# 4 -------------------------------------------------------------------------


def test_metric_oracle_20_confusion_configurations():
    from neurox.fusion.metrics import report_from_counts

    from test_metrics import CONFUSION_CASES

    with criterion("metrics reproduce the accuracy/F1 definitions on 20 "
                   "hand-enumerated confusion configurations exactly"):
        assert len(CONFUSION_CASES) == 20
        for tp, tn, fp, fn, accuracy, f1 in CONFUSION_CASES:
            report = report_from_counts(tp, tn, fp, fn)
            assert report.accuracy == pytest.approx(accuracy, abs=1e-12)
            assert report.f1 == pytest.approx(f1, abs=1e-12)


# 5 -------------------------------------------------------------------------


def test_five_fold_protocol_on_166_entry_cohort():
    import re

    from neurox.fusion.config import TrainingConfig
    from neurox.fusion.kfold import kfold_cv, stratified_folds

    with criterion("5-fold on 79 cn / 87 ad: disjoint folds, class ratio "
                   "within +/-1, mean +/- std report format"):
        labels = [0] * 79 + [1] * 87
        folds = stratified_folds(labels, 5, seed=8)
        union = np.concatenate(folds)
        assert len(union) == 166 and len(set(union.tolist())) == 166
        arr = np.asarray(labels)
        pos = [int(arr[f].sum()) for f in folds]
        neg = [len(f) - p for f, p in zip(folds, pos)]
        assert max(pos) - min(pos) <= 1
        assert max(neg) - min(neg) <= 1

        config = reduced_config()
        dataset = separable_dataset(config, 166, seed=5)
        for i, sample in enumerate(dataset):  # reshape to the 79/87 cohort
            sample.label = 0 if i < 79 else 1
            sign = 1.0 if sample.label else -1.0
            sample.acoustic = sign * 2.0 * np.ones(config.acoustic_dim)
        result = kfold_cv(dataset, 5,
                          TrainingConfig(max_epochs=8, learning_rate=3e-3,
                                         batch_size=16, seed=8), config)
        assert len(result.fold_reports) == 5
        assert sum(r.n for r in result.fold_reports) == 166
        assert re.fullmatch(r"\d+\.\d{2}% ± \d+\.\d{2}%", result.summary), \
            result.summary


# 6 -------------------------------------------------------------------------


def test_ablation_grid_and_signal_placement():
    from neurox.fusion.ablation import DEFAULT_GRID, run_ablation
    from neurox.fusion.config import TrainingConfig

    with criterion("ablation emits the 4-row grid; text-absent rows at "
                   "0.5 +/- 0.1, text-present rows >= 0.9"):
        assert len(DEFAULT_GRID) == 4
        config = reduced_config()
        train_set = separable_dataset(config, 32, seed=61, signal="text")
        eval_set = separable_dataset(config, 32, seed=62, signal="text")
        rows = run_ablation(
            train_set, eval_set,
            TrainingConfig(max_epochs=60, learning_rate=3e-3, batch_size=8,
                           seed=13),
            config,
        )
        assert len(rows) == 4
        assert [r.modalities for r in rows] == list(DEFAULT_GRID)
        for row in rows:
            if row.modalities.text:
                assert row.report.accuracy >= 0.9, row.modalities.label
            else:
                assert abs(row.report.accuracy - 0.5) <= 0.1, row.modalities.label


# 7 -------------------------------------------------------------------------


def test_dsp_oracles():
    from neurox.dsp.audio import AudioClip
    from neurox.dsp.mfcc import compute_mfcc
    from neurox.dsp.pitch import estimate_pitch
    from neurox.dsp.quality import compute_voice_quality
    from neurox.dsp.vad import detect_speech_pauses

    with criterion("DSP oracles: MFCC within 1e-6 of naive DFT+mel+DCT; "
                   "pitch +/-2 Hz; jitter/shimmer < 0.5%; HNR 6 +/- 1.5 dB; "
                   "speech ratio 2/3 +/- 0.05"):
        # MFCC vs the naive pipeline on a 0.5 s fixture
        rng = np.random.default_rng(7)
        clip = sine_clip(300.0, duration_s=0.5)
        clip.samples += 0.05 * rng.standard_normal(len(clip.samples))
        ours = compute_mfcc(clip, n_coeff=13)
        reference = naive_mfcc(clip.samples, 16000, 13)
        assert np.max(np.abs(ours - reference)) < 1e-6

        # sine pitch at three frequencies
        for freq in (150.0, 220.0, 440.0):
            track = estimate_pitch(sine_clip(freq))
            assert abs(track.voiced_values().mean() - freq) <= 2.0

        # voice quality of a strictly periodic signal
        tone = sine_clip(200.0)
        quality = compute_voice_quality(tone, estimate_pitch(tone))
        assert quality.jitter_pct < 0.5
        assert quality.shimmer_pct < 0.5

        # HNR of a +6 dB SNR fixture
        noise_rng = np.random.default_rng(99)
        t = np.arange(16000) / 16000
        signal = 0.5 * np.sin(2 * np.pi * 200.0 * t)
        sigma = np.sqrt((0.5**2 / 2) / 10 ** 0.6)
        noisy = AudioClip(signal + sigma * noise_rng.standard_normal(16000), 16000)
        quality = compute_voice_quality(noisy, estimate_pitch(noisy))
        assert abs(quality.hnr_db - 6.0) <= 1.5

        # speech ratio of the one-third-silence fixture
        tone_samples = sine_clip(220.0).samples
        composed = AudioClip(
            np.concatenate([tone_samples, np.zeros(16000), tone_samples]), 16000
        )
        ratio = detect_speech_pauses(composed).speech_ratio
        assert abs(ratio - 2.0 / 3.0) <= 0.05


# 8 -------------------------------------------------------------------------


def test_retrieval_exactness_and_persistence(tmp_path):
    from neurox.rag.chunking import Chunk
    from neurox.rag.index import VectorIndex, load_index, save_index, search

    with criterion("top-5 retrieval equals the exhaustive oracle on 50 "
                   "queries (ids and order); persistence preserves results"):
        rng = np.random.default_rng(17)
        vectors = rng.standard_normal((200, 384))
        ids = np.arange(200)
        chunks = {
            int(i): Chunk(id=int(i), doc_id="doc", paragraph_idx=0,
                          sentence_idx=int(i), text=f"s{i}")
            for i in ids
        }
        index = VectorIndex(vectors=vectors, ids=ids, chunks=chunks)
        queries = [rng.standard_normal(384) for _ in range(50)]
        for query in queries:
            ours = search(index, query, 5)
            expected = brute_force_knn(vectors, ids, query, 5)
            assert ours.chunk_ids == [cid for _, cid in expected]

        save_index(index, tmp_path / "a.index", tmp_path / "a.chunks.json")
        loaded = load_index(tmp_path / "a.index", tmp_path / "a.chunks.json")
        for query in queries:
            a = search(index, query, 5)
            b = search(loaded, query, 5)
            assert a.chunk_ids == b.chunk_ids
            assert [d for _, d in a.hits] == [d for _, d in b.hits]


# 9 -------------------------------------------------------------------------


def test_end_to_end_offline_pipeline(tmp_path, monkeypatch):
    from click.testing import CliRunner

    from neurox.cli import main
    from neurox.schemas import validate

    with criterion("fixture pipeline: exit 0, schema-valid JSON at every "
                   "stage, zero network calls, runtime < 3 min"):
        def guard(*args, **kwargs):
            raise AssertionError("network access attempted in fixture mode")

        monkeypatch.setattr(socket, "socket", guard)
        monkeypatch.setattr(socket, "create_connection", guard)
        monkeypatch.setattr(socket, "getaddrinfo", guard)

        start = time.monotonic()
        manifest_path, store_dir = build_demo_dataset(tmp_path)
        config_path = tmp_path / "run.json"
        config_path.write_text(json.dumps({
            "providers": "fixture",
            "fixture_store": str(store_dir),
            "artifacts_dir": str(tmp_path / "artifacts"),
            "seed": 3,
            "training": {"max_epochs": 2, "learning_rate": 1e-4,
                         "batch_size": 2, "seed": 3},
        }))
        result = CliRunner().invoke(
            main, ["--config", str(config_path), "pipeline", str(manifest_path)]
        )
        assert result.exit_code == 0, result.output

        artifacts = tmp_path / "artifacts"
        summary = json.loads((artifacts / "summary.json").read_text())
        validate(summary, "summary")
        assert summary["ok"] is True
        assert all(s["status"] == "ok" for s in summary["stages"])

        validate(json.loads(
            (artifacts / "features" / "rec_ad_train.acoustic.json").read_text()),
            "feature_vector")
        validate(json.loads((artifacts / "model" / "scaler.json").read_text()),
                 "scaler")
        validate(json.loads(
            (artifacts / "reports" / "eval_holdout.json").read_text()),
            "eval_report")
        validate(json.loads(
            (artifacts / "explanations" / "rec_cn_test.json").read_text()),
            "explanation")
        elapsed = time.monotonic() - start
        assert elapsed < 180.0, f"took {elapsed:.1f} s"
