import numpy as np
import pytest

from neurox.artifacts import ArtifactError, FeatureStore
from neurox.dsp.features import extract_acoustic_features
from neurox.providers.base import TextEncoding
from neurox.providers.text import TranscriptText

from conftest import sine_clip


@pytest.fixture
def store(tmp_path):
    return FeatureStore(tmp_path)


def _write_sample(store, entry_id="rec"):
    features = extract_acoustic_features(sine_clip(200.0))
    transcript = TranscriptText(raw="The boy eats.", clip_id=entry_id)
    speech = np.linspace(-1, 1, 768)
    tokens = np.zeros((512, 768))
    tokens[:3] = 0.25
    encoding = TextEncoding(tokens=tokens, pooled=tokens[:3].mean(axis=0), valid_len=3)
    store.write_all(entry_id, features, transcript, speech, encoding)
    return features, transcript, speech, encoding


def test_round_trip(store):
    features, transcript, speech, encoding = _write_sample(store)
    assert store.has_all("rec")

    back_features = store.read_features("rec")
    np.testing.assert_array_equal(back_features.mask, features.mask)
    np.testing.assert_array_equal(
        back_features.values[~back_features.mask], features.values[~features.mask]
    )

    back_transcript = store.read_transcript("rec")
    assert back_transcript.raw == transcript.raw
    assert back_transcript.normalized == transcript.normalized

    np.testing.assert_array_equal(store.read_speech_embedding("rec"), speech)

    back_encoding = store.read_text_encoding("rec")
    assert back_encoding.valid_len == 3
    np.testing.assert_array_equal(back_encoding.tokens, encoding.tokens)


def test_missing_artifacts_reported(store):
    assert not store.has_all("ghost")
    assert store.missing_ids(["ghost", "phantom"]) == ["ghost", "phantom"]
    with pytest.raises(ArtifactError, match="missing"):
        store.read_features("ghost")


def test_rewrite_is_idempotent(store):
    _write_sample(store)
    first = store.path("rec", "acoustic").read_bytes()
    _write_sample(store)
    assert store.path("rec", "acoustic").read_bytes() == first
