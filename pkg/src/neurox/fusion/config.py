"""Model and training configuration for the fusion classifier."""

from __future__ import annotations

from dataclasses import dataclass, field, replace


@dataclass(frozen=True)
class Modalities:
    """Which token sources feed the fusion encoder."""

    acoustic: bool = True  # the 47-dim engineered feature vector
    speech: bool = True  # the pooled speech embedding
    text: bool = True  # transcript token matrix

    def __post_init__(self) -> None:
        if not (self.acoustic or self.speech or self.text):
            raise ValueError("at least one modality must be enabled")

    @property
    def label(self) -> str:
        parts = []
        if self.speech:
            parts.append("audio_embed")
        if self.acoustic:
            parts.append("audio_feat")
        if self.text:
            parts.append("text_trans")
        return "+".join(parts)


@dataclass(frozen=True)
class FusionConfig:
    d_model: int = 768
    n_heads: int = 8
    d_ffn: int = 3072
    n_layers: int = 2
    text_tokens: int = 512
    acoustic_dim: int = 47
    speech_dim: int = 768
    head_hidden: int = 256
    modalities: Modalities = field(default_factory=Modalities)
    use_key_padding_mask: bool = False
    layer_norm_eps: float = 1e-5

    def __post_init__(self) -> None:
        if self.d_model % self.n_heads != 0:
            raise ValueError(
                f"d_model {self.d_model} not divisible by n_heads {self.n_heads}"
            )

    @property
    def d_k(self) -> int:
        return self.d_model // self.n_heads

    @property
    def token_count(self) -> int:
        count = int(self.modalities.acoustic) + int(self.modalities.speech)
        if self.modalities.text:
            count += self.text_tokens
        return count

    def with_modalities(self, modalities: Modalities) -> "FusionConfig":
        return replace(self, modalities=modalities)


@dataclass(frozen=True)
class TrainingConfig:
    max_epochs: int = 200
    learning_rate: float = 1e-4
    batch_size: int = 8
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    early_stop_patience: int = 0  # 0 disables early stopping

    def __post_init__(self) -> None:
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")
        if self.learning_rate < 0:
            raise ValueError("learning_rate must be >= 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
