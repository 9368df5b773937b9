"""Inference backends.

``StubBackend`` is fully deterministic and has no model dependencies, so
the service can run (and be integration-tested) offline.  The
``TransformersBackend`` lazy-loads one pretrained checkpoint per endpoint
on first use and reports 503 through ``ModelNotLoaded`` until a load
succeeds; a lock per model serializes inference.
"""

from __future__ import annotations

import threading

import numpy as np

from .config import Settings
from .hashing import content_vector, fnv1a_64, seeded_uniform

SPEECH_DIM = 768
TEXT_DIM = 768
TEXT_TOKENS = 512
SENTENCE_DIM = 384

SILENCE_THRESHOLD = 1e-4

_STUB_VOCABULARY = (
    "the boy is reaching for cookies while water runs over the sink and "
    "mother dries a plate near the open window in the small kitchen"
).split()


class ModelNotLoaded(RuntimeError):
    """Endpoint's model is unavailable; maps to HTTP 503."""


class Backend:
    name = "base"

    def asr(self, samples: np.ndarray, sample_rate: int) -> str:
        raise NotImplementedError

    def embed_speech(self, samples: np.ndarray, sample_rate: int) -> np.ndarray:
        raise NotImplementedError

    def encode_text(self, text: str) -> tuple[np.ndarray, np.ndarray, int]:
        raise NotImplementedError

    def embed_sentence(self, text: str) -> np.ndarray:
        raise NotImplementedError

    def generate(self, prompt: str, temperature: float, top_p: float,
                 max_tokens: int) -> str:
        raise NotImplementedError

    def loaded(self) -> dict[str, bool]:
        raise NotImplementedError


class StubBackend(Backend):
    """Hash-seeded deterministic stand-ins with the exact wire dims."""

    name = "stub"

    def asr(self, samples: np.ndarray, sample_rate: int) -> str:
        if float(np.max(np.abs(samples))) < SILENCE_THRESHOLD:
            return ""
        seed = fnv1a_64(samples.tobytes())
        count = 4 + seed % 9
        picks = seeded_uniform(seed, count)
        words = [
            _STUB_VOCABULARY[int((u + 1.0) / 2.0 * len(_STUB_VOCABULARY))
                             % len(_STUB_VOCABULARY)]
            for u in picks
        ]
        return " ".join(words)

    def embed_speech(self, samples: np.ndarray, sample_rate: int) -> np.ndarray:
        return content_vector("speech", samples.tobytes(), SPEECH_DIM)

    def encode_text(self, text: str) -> tuple[np.ndarray, np.ndarray, int]:
        words = text.split()[:TEXT_TOKENS]
        tokens = np.zeros((TEXT_TOKENS, TEXT_DIM))
        for pos, word in enumerate(words):
            tokens[pos] = content_vector(f"token.{pos}", word.encode("utf-8"),
                                         TEXT_DIM)
        valid_len = len(words)
        pooled = tokens[:valid_len].mean(axis=0) if valid_len else np.zeros(TEXT_DIM)
        return tokens, pooled, valid_len

    def embed_sentence(self, text: str) -> np.ndarray:
        return content_vector("sentence", text.encode("utf-8"), SENTENCE_DIM)

    def generate(self, prompt: str, temperature: float, top_p: float,
                 max_tokens: int) -> str:
        # deterministic template echo; temperature/top_p only recorded
        words = (
            f"stub explanation (t={temperature:g}, p={top_p:g}): "
            + " ".join(prompt.split()[:40])
        ).split()
        return " ".join(words[:max_tokens])

    def loaded(self) -> dict[str, bool]:
        return {key: True for key in ("asr", "speech", "text", "sentence",
                                      "generator")}


class TransformersBackend(Backend):
    """Real checkpoints, loaded lazily per endpoint."""

    name = "transformers"

    def __init__(self, settings: Settings):
        self.settings = settings
        self._models: dict[str, object] = {}
        self._locks = {key: threading.Lock() for key in
                       ("asr", "speech", "text", "sentence", "generator")}

    def loaded(self) -> dict[str, bool]:
        return {key: key in self._models for key in self._locks}

    def _get(self, key: str, loader):
        with self._locks[key]:
            if key not in self._models:
                try:
                    self._models[key] = loader()
                except Exception as exc:
                    raise ModelNotLoaded(
                        f"{key} model {self.settings.model_names[key]!r} "
                        f"unavailable: {exc}"
                    ) from exc
            return self._models[key]

    def asr(self, samples: np.ndarray, sample_rate: int) -> str:
        def load():
            from transformers import pipeline

            return pipeline("automatic-speech-recognition",
                            model=self.settings.model_names["asr"])

        recognizer = self._get("asr", load)
        with self._locks["asr"]:
            out = recognizer({"array": samples, "sampling_rate": sample_rate})
        return str(out.get("text", "")).strip()

    def embed_speech(self, samples: np.ndarray, sample_rate: int) -> np.ndarray:
        def load():
            import torch
            from transformers import AutoModel, AutoProcessor

            name = self.settings.model_names["speech"]
            return (AutoProcessor.from_pretrained(name),
                    AutoModel.from_pretrained(name).eval(), torch)

        processor, model, torch = self._get("speech", load)
        with self._locks["speech"]:
            inputs = processor(samples, sampling_rate=sample_rate,
                               return_tensors="pt")
            with torch.no_grad():
                hidden = model(**inputs).last_hidden_state
        vector = hidden.squeeze(0).mean(dim=0).numpy().astype(np.float64)
        return vector

    def encode_text(self, text: str) -> tuple[np.ndarray, np.ndarray, int]:
        def load():
            import torch
            from transformers import AutoModel, AutoTokenizer

            name = self.settings.model_names["text"]
            return (AutoTokenizer.from_pretrained(name),
                    AutoModel.from_pretrained(name).eval(), torch)

        tokenizer, model, torch = self._get("text", load)
        with self._locks["text"]:
            inputs = tokenizer(text, return_tensors="pt", truncation=True,
                               max_length=TEXT_TOKENS)
            with torch.no_grad():
                hidden = model(**inputs).last_hidden_state.squeeze(0)
        states = hidden.numpy().astype(np.float64)
        valid_len = min(len(states), TEXT_TOKENS)
        tokens = np.zeros((TEXT_TOKENS, TEXT_DIM))
        tokens[:valid_len] = states[:valid_len]
        pooled = tokens[:valid_len].mean(axis=0) if valid_len else np.zeros(TEXT_DIM)
        return tokens, pooled, valid_len

    def embed_sentence(self, text: str) -> np.ndarray:
        def load():
            from sentence_transformers import SentenceTransformer

            return SentenceTransformer(self.settings.model_names["sentence"])

        model = self._get("sentence", load)
        with self._locks["sentence"]:
            vector = model.encode([text])[0]
        return np.asarray(vector, dtype=np.float64)

    def generate(self, prompt: str, temperature: float, top_p: float,
                 max_tokens: int) -> str:
        def load():
            import torch
            from transformers import AutoModelForSeq2SeqLM, AutoTokenizer

            name = self.settings.model_names["generator"]
            kwargs = {}
            if self.settings.load_4bit:
                kwargs["load_in_4bit"] = True  # contract unchanged either way
            return (AutoTokenizer.from_pretrained(name),
                    AutoModelForSeq2SeqLM.from_pretrained(name, **kwargs).eval(),
                    torch)

        tokenizer, model, torch = self._get("generator", load)
        with self._locks["generator"]:
            inputs = tokenizer(prompt, return_tensors="pt", truncation=True)
            with torch.no_grad():
                out = model.generate(
                    **inputs,
                    max_new_tokens=max_tokens,
                    do_sample=temperature > 0,
                    temperature=temperature if temperature > 0 else None,
                    top_p=top_p if temperature > 0 else None,
                )
        return tokenizer.decode(out[0], skip_special_tokens=True)


def make_backend(settings: Settings) -> Backend:
    if settings.backend == "stub":
        return StubBackend()
    return TransformersBackend(settings)
