"""Forward pass of the fusion classifier.

Token layout for the full modality set: row 0 is the projected acoustic
vector, row 1 the projected speech embedding, rows 2.. the transcript
token matrix.  Ablated configurations drop rows (and projections) but
keep this relative order.  The classification head reads token 0 of the
encoder output.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import FusionConfig
from .data import FusionSample
from .model import EncoderLayerParams, FusionModel
from .ops import gelu, layer_norm, sigmoid, softmax

MASK_FILL = -1e30


@dataclass
class Prediction:
    probability: float
    label: str
    threshold: float = 0.5

    @classmethod
    def from_probability(cls, p: float, threshold: float = 0.5) -> "Prediction":
        return cls(probability=p, label="ad" if p >= threshold else "cn",
                   threshold=threshold)


@dataclass
class LayerCache:
    n1: np.ndarray
    ln1_cache: tuple
    q: np.ndarray
    k: np.ndarray
    v: np.ndarray
    attn: np.ndarray
    concat: np.ndarray
    n2: np.ndarray
    ln2_cache: tuple
    f1: np.ndarray
    g: np.ndarray


@dataclass
class ForwardCache:
    sample: FusionSample
    tokens_in: np.ndarray
    layers: list[LayerCache] = field(default_factory=list)
    z0: np.ndarray | None = None
    head_pre: np.ndarray | None = None
    head_act: np.ndarray | None = None
    logit: float = 0.0
    probability: float = 0.0
    attn_weights: list[np.ndarray] = field(default_factory=list)
    key_mask: np.ndarray | None = None


def project_inputs(f_a: np.ndarray, f_e: np.ndarray, model: FusionModel):
    """Affine maps of both raw inputs into the shared model dimension."""
    config = model.config
    if f_a.shape != (config.acoustic_dim,):
        raise ValueError(f"acoustic input must have {config.acoustic_dim} dims")
    if f_e.shape != (config.speech_dim,):
        raise ValueError(f"speech input must have {config.speech_dim} dims")
    if model.acoustic_projection is None or model.speech_projection is None:
        raise ValueError("model was built without both input projections")
    h_a = f_a @ model.acoustic_projection.w + model.acoustic_projection.b
    h_e = f_e @ model.speech_projection.w + model.speech_projection.b
    return h_a, h_e


def assemble_tokens(
    h_a: np.ndarray | None,
    h_e: np.ndarray | None,
    text_tokens: np.ndarray | None,
    config: FusionConfig,
) -> np.ndarray:
    """Stack the enabled modality rows into the (token_count, d_model) input."""
    rows = []
    if config.modalities.acoustic:
        if h_a is None or h_a.shape != (config.d_model,):
            raise ValueError("acoustic row missing or mis-shaped")
        rows.append(h_a[None, :])
    if config.modalities.speech:
        if h_e is None or h_e.shape != (config.d_model,):
            raise ValueError("speech row missing or mis-shaped")
        rows.append(h_e[None, :])
    if config.modalities.text:
        if text_tokens is None or text_tokens.shape != (config.text_tokens, config.d_model):
            raise ValueError(
                f"text token matrix must be {config.text_tokens}x{config.d_model}"
            )
        rows.append(text_tokens)
    h = np.concatenate(rows, axis=0)
    assert h.shape == (config.token_count, config.d_model)
    return h


def heads_matrix(per_head: np.ndarray) -> np.ndarray:
    """(n_heads, d_model, d_k) -> (d_model, n_heads*d_k) for one dgemm."""
    h, d, k = per_head.shape
    return per_head.transpose(1, 0, 2).reshape(d, h * k)


def project_heads(x: np.ndarray, per_head: np.ndarray) -> np.ndarray:
    """(T, d_model) x (n_heads, d_model, d_k) -> (n_heads, T, d_k)."""
    h, _, k = per_head.shape
    return (x @ heads_matrix(per_head)).reshape(len(x), h, k).transpose(1, 0, 2)


def attention_forward(
    x: np.ndarray,
    layer: EncoderLayerParams,
    config: FusionConfig,
    key_mask: np.ndarray | None = None,
):
    """Multi-head scaled dot-product attention.

    Returns (output, attention weights (n_heads, T, T), cache pieces).
    Every attention row is a softmax distribution and sums to 1.
    """
    q = project_heads(x, layer.q_w)
    k = project_heads(x, layer.k_w)
    v = project_heads(x, layer.v_w)
    scores = q @ k.transpose(0, 2, 1) / np.sqrt(config.d_k)
    if key_mask is not None:
        scores = scores + np.where(key_mask, MASK_FILL, 0.0)[None, None, :]
    attn = softmax(scores, axis=-1)
    ctx = attn @ v  # (heads, T, d_k)
    concat = ctx.transpose(1, 0, 2).reshape(x.shape[0], config.n_heads * config.d_k)
    out = concat @ layer.o_w
    if not np.all(np.isfinite(out)):
        raise FloatingPointError("non-finite attention output")
    return out, attn, (q, k, v, concat)


def encoder_forward(tokens: np.ndarray, model: FusionModel,
                    key_mask: np.ndarray | None = None,
                    cache: ForwardCache | None = None) -> np.ndarray:
    """Two pre-norm encoder blocks: x + Attn(LN(x)), then x + FFN(LN(x))."""
    config = model.config
    x = tokens
    for index, layer in enumerate(model.layers):
        n1, ln1_cache = layer_norm(x, layer.ln1.gamma, layer.ln1.beta,
                                   config.layer_norm_eps)
        try:
            attn_out, attn, (q, k, v, concat) = attention_forward(
                n1, layer, config, key_mask
            )
        except FloatingPointError as exc:
            raise FloatingPointError(f"layer {index}: {exc}") from exc
        x_mid = x + attn_out

        n2, ln2_cache = layer_norm(x_mid, layer.ln2.gamma, layer.ln2.beta,
                                   config.layer_norm_eps)
        f1 = n2 @ layer.ffn_w1
        g = gelu(f1)
        x = x_mid + g @ layer.ffn_w2

        if cache is not None:
            cache.layers.append(LayerCache(
                n1=n1, ln1_cache=ln1_cache, q=q, k=k, v=v, attn=attn,
                concat=concat, n2=n2, ln2_cache=ln2_cache, f1=f1, g=g,
            ))
            cache.attn_weights.append(attn)
    return x


def classify(encoded: np.ndarray, model: FusionModel, threshold: float = 0.5,
             cache: ForwardCache | None = None) -> Prediction:
    """Sigmoid head over encoder token 0: d_model -> hidden (GELU) -> 1."""
    z0 = encoded[0]
    pre = z0 @ model.head_hidden.w + model.head_hidden.b
    act = gelu(pre)
    logit = float(act @ model.head_out.w[:, 0] + model.head_out.b[0])
    probability = float(sigmoid(np.array(logit)))
    if cache is not None:
        cache.z0 = z0
        cache.head_pre = pre
        cache.head_act = act
        cache.logit = logit
        cache.probability = probability
    return Prediction.from_probability(probability, threshold)


def sample_tokens(model: FusionModel, sample: FusionSample) -> np.ndarray:
    """Project and assemble one sample's enabled modalities."""
    config = model.config
    h_a = h_e = None
    if config.modalities.acoustic:
        proj = model.acoustic_projection
        h_a = sample.acoustic @ proj.w + proj.b
    if config.modalities.speech:
        proj = model.speech_projection
        h_e = sample.speech @ proj.w + proj.b
    text = sample.text_tokens if config.modalities.text else None
    return assemble_tokens(h_a, h_e, text, config)


def _key_mask(model: FusionModel, sample: FusionSample) -> np.ndarray | None:
    config = model.config
    if not (config.use_key_padding_mask and config.modalities.text):
        return None
    lead = int(config.modalities.acoustic) + int(config.modalities.speech)
    mask = np.zeros(config.token_count, dtype=bool)
    mask[lead + sample.text_valid_len :] = True
    return mask


def forward_sample(model: FusionModel, sample: FusionSample,
                   threshold: float = 0.5,
                   want_cache: bool = False):
    """Full forward pass; returns (Prediction, ForwardCache | None)."""
    tokens = sample_tokens(model, sample)
    key_mask = _key_mask(model, sample)
    cache = ForwardCache(sample=sample, tokens_in=tokens, key_mask=key_mask) \
        if want_cache else None
    encoded = encoder_forward(tokens, model, key_mask, cache)
    prediction = classify(encoded, model, threshold, cache)
    return prediction, cache
