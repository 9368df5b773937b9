"""Parameter containers, initialization, and the versioned checkpoint format."""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import FusionConfig, Modalities

CHECKPOINT_MAGIC = b"NXFUSE01"
CHECKPOINT_VERSION = 1
INIT_SCALE = 0.02


class CheckpointError(ValueError):
    """Malformed, corrupt, or incompatible checkpoint file."""


@dataclass
class AffineParams:
    w: np.ndarray
    b: np.ndarray


@dataclass
class LayerNormParams:
    gamma: np.ndarray
    beta: np.ndarray


@dataclass
class EncoderLayerParams:
    """One pre-norm encoder block.

    Attention projections are stored per head: q_w/k_w/v_w have shape
    (n_heads, d_model, d_k); o_w is (d_model, d_model).  The feed-forward
    weights are (d_model, d_ffn) and (d_ffn, d_model), bias-free.
    """

    q_w: np.ndarray
    k_w: np.ndarray
    v_w: np.ndarray
    o_w: np.ndarray
    ffn_w1: np.ndarray
    ffn_w2: np.ndarray
    ln1: LayerNormParams
    ln2: LayerNormParams


@dataclass
class FusionModel:
    config: FusionConfig
    acoustic_projection: AffineParams | None
    speech_projection: AffineParams | None
    layers: list[EncoderLayerParams]
    head_hidden: AffineParams
    head_out: AffineParams
    seed: int | None = None

    def named_parameters(self) -> list[tuple[str, np.ndarray]]:
        """All learned tensors in a fixed canonical order."""
        out: list[tuple[str, np.ndarray]] = []
        if self.acoustic_projection is not None:
            out += [("proj_acoustic.w", self.acoustic_projection.w),
                    ("proj_acoustic.b", self.acoustic_projection.b)]
        if self.speech_projection is not None:
            out += [("proj_speech.w", self.speech_projection.w),
                    ("proj_speech.b", self.speech_projection.b)]
        for i, layer in enumerate(self.layers):
            prefix = f"layers.{i}"
            out += [
                (f"{prefix}.q_w", layer.q_w),
                (f"{prefix}.k_w", layer.k_w),
                (f"{prefix}.v_w", layer.v_w),
                (f"{prefix}.o_w", layer.o_w),
                (f"{prefix}.ffn_w1", layer.ffn_w1),
                (f"{prefix}.ffn_w2", layer.ffn_w2),
                (f"{prefix}.ln1.gamma", layer.ln1.gamma),
                (f"{prefix}.ln1.beta", layer.ln1.beta),
                (f"{prefix}.ln2.gamma", layer.ln2.gamma),
                (f"{prefix}.ln2.beta", layer.ln2.beta),
            ]
        out += [
            ("head_hidden.w", self.head_hidden.w),
            ("head_hidden.b", self.head_hidden.b),
            ("head_out.w", self.head_out.w),
            ("head_out.b", self.head_out.b),
        ]
        return out

    def parameter(self, name: str) -> np.ndarray:
        for candidate, arr in self.named_parameters():
            if candidate == name:
                return arr
        raise KeyError(name)

    def copy_parameters(self) -> dict[str, np.ndarray]:
        return {name: arr.copy() for name, arr in self.named_parameters()}

    def load_parameter_state(self, state: dict[str, np.ndarray]) -> None:
        for name, arr in self.named_parameters():
            arr[...] = state[name]


def init_model(config: FusionConfig, seed: int = 0) -> FusionModel:
    """Gaussian(0, 0.02) weights, zero biases, identity layer norms."""
    rng = np.random.default_rng(seed)

    def affine(n_in: int, n_out: int) -> AffineParams:
        return AffineParams(
            w=rng.normal(0.0, INIT_SCALE, (n_in, n_out)),
            b=np.zeros(n_out),
        )

    def encoder_layer() -> EncoderLayerParams:
        d, h, dk, f = config.d_model, config.n_heads, config.d_k, config.d_ffn
        return EncoderLayerParams(
            q_w=rng.normal(0.0, INIT_SCALE, (h, d, dk)),
            k_w=rng.normal(0.0, INIT_SCALE, (h, d, dk)),
            v_w=rng.normal(0.0, INIT_SCALE, (h, d, dk)),
            o_w=rng.normal(0.0, INIT_SCALE, (d, d)),
            ffn_w1=rng.normal(0.0, INIT_SCALE, (d, f)),
            ffn_w2=rng.normal(0.0, INIT_SCALE, (f, d)),
            ln1=LayerNormParams(np.ones(d), np.zeros(d)),
            ln2=LayerNormParams(np.ones(d), np.zeros(d)),
        )

    modalities = config.modalities
    return FusionModel(
        config=config,
        acoustic_projection=(
            affine(config.acoustic_dim, config.d_model) if modalities.acoustic else None
        ),
        speech_projection=(
            affine(config.speech_dim, config.d_model) if modalities.speech else None
        ),
        layers=[encoder_layer() for _ in range(config.n_layers)],
        head_hidden=affine(config.d_model, config.head_hidden),
        head_out=affine(config.head_hidden, 1),
        seed=seed,
    )


def _config_dict(config: FusionConfig) -> dict:
    return {
        "d_model": config.d_model,
        "n_heads": config.n_heads,
        "d_ffn": config.d_ffn,
        "n_layers": config.n_layers,
        "text_tokens": config.text_tokens,
        "acoustic_dim": config.acoustic_dim,
        "speech_dim": config.speech_dim,
        "head_hidden": config.head_hidden,
        "modalities": {
            "acoustic": config.modalities.acoustic,
            "speech": config.modalities.speech,
            "text": config.modalities.text,
        },
        "use_key_padding_mask": config.use_key_padding_mask,
        "layer_norm_eps": config.layer_norm_eps,
    }


def _config_from_dict(payload: dict) -> FusionConfig:
    modalities = Modalities(**payload.pop("modalities"))
    return FusionConfig(modalities=modalities, **payload)


def save_model(model: FusionModel, path: str | Path) -> None:
    """Write magic, JSON header, float64 LE tensors, and a sha256 trailer."""
    names = model.named_parameters()
    header = {
        "version": CHECKPOINT_VERSION,
        "config": _config_dict(model.config),
        "seed": model.seed,
        "tensors": [{"name": n, "shape": list(a.shape)} for n, a in names],
    }
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")

    blob = bytearray()
    blob += CHECKPOINT_MAGIC
    blob += struct.pack("<I", len(header_bytes))
    blob += header_bytes
    for _, arr in names:
        blob += np.ascontiguousarray(arr, dtype="<f8").tobytes()
    blob += hashlib.sha256(bytes(blob)).digest()
    Path(path).write_bytes(bytes(blob))


def load_model(path: str | Path) -> FusionModel:
    raw = Path(path).read_bytes()
    if len(raw) < len(CHECKPOINT_MAGIC) + 4 + 32:
        raise CheckpointError(f"{path}: file too short to be a checkpoint")
    if raw[: len(CHECKPOINT_MAGIC)] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: bad magic bytes")

    payload, digest = raw[:-32], raw[-32:]
    if hashlib.sha256(payload).digest() != digest:
        raise CheckpointError(f"{path}: checksum mismatch (corrupt file)")

    offset = len(CHECKPOINT_MAGIC)
    (header_len,) = struct.unpack_from("<I", payload, offset)
    offset += 4
    try:
        header = json.loads(payload[offset : offset + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: unreadable header ({exc})") from exc
    offset += header_len

    if header.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: checkpoint version {header.get('version')!r}, "
            f"expected {CHECKPOINT_VERSION}"
        )
    config = _config_from_dict(header["config"])
    model = init_model(config, seed=header["seed"] if header["seed"] is not None else 0)
    model.seed = header["seed"]

    expected = {name: arr for name, arr in model.named_parameters()}
    if [t["name"] for t in header["tensors"]] != list(expected):
        raise CheckpointError(f"{path}: tensor list does not match the config dims")
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        if expected[entry["name"]].shape != shape:
            raise CheckpointError(
                f"{path}: tensor {entry['name']} has shape {shape}, "
                f"config requires {expected[entry['name']].shape}"
            )
        size = int(np.prod(shape)) * 8
        arr = np.frombuffer(payload[offset : offset + size], dtype="<f8").reshape(shape)
        if not np.all(np.isfinite(arr)):
            raise CheckpointError(f"{path}: tensor {entry['name']} has non-finite values")
        expected[entry["name"]][...] = arr
        offset += size
    if offset != len(payload):
        raise CheckpointError(f"{path}: trailing bytes after tensor data")
    return model
