"""Run configuration: one TOML or JSON document mirroring RunConfig."""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .fusion.config import FusionConfig, Modalities, TrainingConfig

FIXTURE = "fixture"
HTTP = "http"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RagConfig:
    k: int = 5
    temperature: float = 0.7
    top_p: float = 0.9
    corpus_dir: str | None = None  # None = the bundled synthetic corpus


@dataclass(frozen=True)
class RunConfig:
    providers: str = FIXTURE
    sidecar_url: str | None = None
    fixture_store: str | None = None
    artifacts_dir: str = "artifacts"
    seed: int = 0
    extract_workers: int = 4
    training: TrainingConfig = field(default_factory=TrainingConfig)
    model: FusionConfig = field(default_factory=FusionConfig)
    rag: RagConfig = field(default_factory=RagConfig)

    def __post_init__(self) -> None:
        if self.providers not in (FIXTURE, HTTP):
            raise ConfigError(f"providers must be fixture or http, got {self.providers!r}")


def _sub_config(cls, payload: dict, context: str):
    known = {f.name for f in fields(cls)}
    unknown = set(payload) - known
    if unknown:
        raise ConfigError(f"{context}: unknown keys {sorted(unknown)}")
    return cls(**payload)


def config_from_dict(payload: dict) -> RunConfig:
    payload = dict(payload)
    training = payload.pop("training", {})
    model = dict(payload.pop("model", {}))
    rag = payload.pop("rag", {})
    if isinstance(model.get("modalities"), dict):
        model["modalities"] = Modalities(**model["modalities"])
    known = {f.name for f in fields(RunConfig)}
    unknown = set(payload) - known
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    try:
        return RunConfig(
            training=_sub_config(TrainingConfig, training, "training"),
            model=_sub_config(FusionConfig, model, "model"),
            rag=_sub_config(RagConfig, rag, "rag"),
            **payload,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    if path.suffix.lower() == ".toml":
        payload = tomllib.loads(path.read_text())
    else:
        payload = json.loads(path.read_text())
    return config_from_dict(payload)


def apply_overrides(config: RunConfig, *, providers: str | None = None,
                    seed: int | None = None, artifacts_dir: str | None = None,
                    sidecar_url: str | None = None) -> RunConfig:
    if providers is not None:
        config = replace(config, providers=providers)
    if seed is not None:
        config = replace(config, seed=seed,
                         training=replace(config.training, seed=seed))
    if artifacts_dir is not None:
        config = replace(config, artifacts_dir=artifacts_dir)
    if sidecar_url is not None:
        config = replace(config, sidecar_url=sidecar_url)
    return config
