"""Stage orchestration behind the CLI: extract, train, eval, index, explain.

Stages write marker files under <artifacts>/markers so an interrupted
pipeline resumes at the first incomplete stage instead of recomputing
finished work.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .artifacts import FeatureStore
from .config import FIXTURE, RunConfig
from .dsp.audio import load_audio, resample
from .dsp.features import extract_acoustic_features
from .fusion.ablation import AblationRow, run_ablation
from .fusion.data import FusionSample, label_to_int
from .fusion.kfold import KFoldResult, kfold_cv
from .fusion.metrics import EvalReport, evaluate
from .fusion.model import FusionModel, load_model, save_model
from .fusion.train import train
from .manifest import TEST, TRAIN, DatasetManifest
from .providers.base import Providers
from .providers.fixture import FixtureProviders
from .providers.http import HttpProviders
from .providers.scaler import Scaler, apply_scaler, fit_scaler
from .rag.chunking import chunk_corpus, read_corpus_dir
from .rag.explain import explain
from .rag.index import VectorIndex, build_index, load_index, save_index, search
from .rag.query import build_query, speech_note
from .fusion.forward import forward_sample
from . import report as report_mod
from .schemas import validate

logger = logging.getLogger(__name__)

STAGES = ("extract", "train", "eval", "index", "explain")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"stage {stage}: {message}")
        self.stage = stage


@dataclass
class Paths:
    root: Path

    @classmethod
    def from_config(cls, config: RunConfig) -> "Paths":
        return cls(root=Path(config.artifacts_dir))

    @property
    def model_dir(self) -> Path:
        return self.root / "model"

    @property
    def checkpoint(self) -> Path:
        return self.model_dir / "checkpoint.bin"

    @property
    def scaler(self) -> Path:
        return self.model_dir / "scaler.json"

    @property
    def training_log(self) -> Path:
        return self.model_dir / "training_log.jsonl"

    @property
    def reports_dir(self) -> Path:
        return self.root / "reports"

    @property
    def index_dir(self) -> Path:
        return self.root / "index"

    @property
    def index_file(self) -> Path:
        return self.index_dir / "corpus.index"

    @property
    def chunks_file(self) -> Path:
        return self.index_dir / "corpus.chunks.json"

    @property
    def explanations_dir(self) -> Path:
        return self.root / "explanations"

    @property
    def markers_dir(self) -> Path:
        return self.root / "markers"

    @property
    def summary(self) -> Path:
        return self.root / "summary.json"

    def marker(self, stage: str) -> Path:
        return self.markers_dir / f"{stage}.ok"


def build_providers(config: RunConfig) -> Providers:
    if config.providers == FIXTURE:
        return FixtureProviders(config.fixture_store)
    return HttpProviders(config.sidecar_url)


def corpus_documents(config: RunConfig) -> list[tuple[str, str]]:
    if config.rag.corpus_dir:
        return read_corpus_dir(config.rag.corpus_dir)
    root = resources.files("neurox") / "data" / "corpus"
    return [
        (p.name[:-4], p.read_text(encoding="utf-8"))
        for p in sorted(root.iterdir(), key=lambda p: p.name)
        if p.name.endswith(".txt")
    ]


# --- extract ---------------------------------------------------------------


def extract_one(entry, providers: Providers, store: FeatureStore) -> None:
    clip = load_audio(entry.audio_path)
    clip.clip_id = entry.id
    clip = resample(clip, 16000)
    features = extract_acoustic_features(clip)
    transcript = providers.transcribe(clip)
    speech = providers.embed_speech(clip)
    encoding = providers.encode_text(transcript)
    validate(features.to_json_dict(), "feature_vector")
    validate({"schema_version": 1, "raw": transcript.raw,
              "normalized": transcript.normalized}, "transcript")
    validate({"schema_version": 1, "vector": speech.tolist()}, "speech_embedding")
    store.write_all(entry.id, features, transcript, speech, encoding)


def run_extract(manifest: DatasetManifest, config: RunConfig,
                force: bool = False) -> dict:
    store = FeatureStore(config.artifacts_dir)
    providers = build_providers(config)
    todo = [e for e in manifest.entries if force or not store.has_all(e.id)]
    skipped = [e.id for e in manifest.entries if e not in todo]
    for entry_id in skipped:
        logger.info("extract: %s already present, skipped", entry_id)

    failures: dict[str, str] = {}
    workers = max(1, min(config.extract_workers, len(todo) or 1))

    def worker(entry):
        try:
            extract_one(entry, providers, store)
        except Exception as exc:  # collected, reported at the end
            failures[entry.id] = str(exc)

    if todo:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(worker, todo))
    return {
        "extracted": [e.id for e in todo if e.id not in failures],
        "skipped": skipped,
        "failures": failures,
    }


# --- dataset assembly -------------------------------------------------------


def load_samples(manifest: DatasetManifest, split: str, scaler: Scaler,
                 config: RunConfig, require_labels: bool) -> list[FusionSample]:
    store = FeatureStore(config.artifacts_dir)
    entries = manifest.split(split)
    missing = store.missing_ids([e.id for e in entries])
    if missing:
        raise PipelineError("train" if split == TRAIN else "eval",
                            f"missing artifacts for ids {missing}")
    samples = []
    for entry in entries:
        if require_labels and entry.label is None:
            raise PipelineError("eval", f"{entry.id}: unlabeled entry cannot be scored")
        features = store.read_features(entry.id)
        encoding = store.read_text_encoding(entry.id)
        samples.append(FusionSample(
            sample_id=entry.id,
            acoustic=apply_scaler(scaler, features),
            speech=store.read_speech_embedding(entry.id),
            text_tokens=encoding.tokens,
            text_valid_len=encoding.valid_len,
            label=label_to_int(entry.label) if entry.label else None,
        ))
    return samples


# --- train -------------------------------------------------------------------


def run_train(manifest: DatasetManifest, config: RunConfig) -> dict:
    store = FeatureStore(config.artifacts_dir)
    train_entries = manifest.split(TRAIN)
    if not train_entries:
        raise PipelineError("train", "manifest has no train entries")
    missing = store.missing_ids([e.id for e in train_entries])
    if missing:
        raise PipelineError("train", f"missing artifacts for ids {missing}")

    scaler = fit_scaler([store.read_features(e.id) for e in train_entries])
    samples = load_samples(manifest, TRAIN, scaler, config, require_labels=True)
    result = train(samples, config.training, config.model)

    paths = Paths.from_config(config)
    paths.model_dir.mkdir(parents=True, exist_ok=True)
    save_model(result.model, paths.checkpoint)
    validate(scaler.to_json_dict(), "scaler")
    scaler.save(paths.scaler)
    with paths.training_log.open("w") as handle:
        for record in result.log:
            payload = record.to_json_dict()
            validate(payload, "training_log_record")
            handle.write(json.dumps(payload) + "\n")
    report_mod.training_log_csv(result.log, paths.model_dir / "training_log.csv")
    report_mod.training_curve_figure(result.log, paths.model_dir / "training_curve.png")
    return {
        "epochs": len(result.log),
        "final_loss": result.log[-1].loss if result.log else None,
        "final_train_acc": result.log[-1].train_acc if result.log else None,
        "diverged": result.diverged,
        "checkpoint": str(paths.checkpoint),
    }


# --- eval --------------------------------------------------------------------


def _write_report(paths: Paths, name: str, payload: dict, schema: str) -> Path:
    paths.reports_dir.mkdir(parents=True, exist_ok=True)
    validate(payload, schema)
    out = paths.reports_dir / f"{name}.json"
    out.write_text(json.dumps(payload, indent=2, sort_keys=True))
    return out


def run_eval_holdout(manifest: DatasetManifest, config: RunConfig,
                     checkpoint: Path | None = None) -> EvalReport:
    paths = Paths.from_config(config)
    model = load_model(checkpoint or paths.checkpoint)
    scaler = Scaler.load(paths.scaler)
    samples = load_samples(manifest, TEST, scaler, config, require_labels=True)
    if not samples:
        raise PipelineError("eval", "manifest has no test entries")
    report = evaluate(model, samples)
    payload = {"mode": "holdout", **report.to_json_dict()}
    _write_report(paths, "eval_holdout", payload, "eval_report")
    report_mod.holdout_csv(report, paths.reports_dir / "eval_holdout.csv")
    report_mod.confusion_figure(report, paths.reports_dir / "eval_holdout.png")
    return report


def run_eval_kfold(manifest: DatasetManifest, config: RunConfig,
                   k: int = 5) -> KFoldResult:
    paths = Paths.from_config(config)
    store = FeatureStore(config.artifacts_dir)
    train_entries = manifest.split(TRAIN)
    scaler = fit_scaler([store.read_features(e.id) for e in train_entries])
    samples = load_samples(manifest, TRAIN, scaler, config, require_labels=True)
    result = kfold_cv(samples, k, config.training, config.model)
    payload = {"mode": "kfold", **result.to_json_dict()}
    _write_report(paths, "eval_kfold", payload, "eval_kfold")
    report_mod.kfold_csv(result, paths.reports_dir / "eval_kfold.csv")
    report_mod.fold_accuracy_figure(result, paths.reports_dir / "eval_kfold.png")
    return result


def run_eval_ablation(manifest: DatasetManifest, config: RunConfig) -> list[AblationRow]:
    paths = Paths.from_config(config)
    store = FeatureStore(config.artifacts_dir)
    train_entries = manifest.split(TRAIN)
    scaler = fit_scaler([store.read_features(e.id) for e in train_entries])
    train_samples = load_samples(manifest, TRAIN, scaler, config, require_labels=True)
    eval_samples = load_samples(manifest, TEST, scaler, config, require_labels=True)
    rows = run_ablation(train_samples, eval_samples, config.training, config.model)
    payload = {"mode": "ablation", "rows": [row.to_json_dict() for row in rows]}
    _write_report(paths, "eval_ablation", payload, "eval_ablation")
    report_mod.ablation_csv(rows, paths.reports_dir / "eval_ablation.csv")
    report_mod.ablation_figure(rows, paths.reports_dir / "eval_ablation.png")
    return rows


# --- index -------------------------------------------------------------------


def run_index(config: RunConfig) -> VectorIndex:
    documents = corpus_documents(config)
    chunks = chunk_corpus(documents)
    if not chunks:
        raise PipelineError("index", "corpus produced zero chunks")
    providers = build_providers(config)
    index = build_index(chunks, providers)
    paths = Paths.from_config(config)
    paths.index_dir.mkdir(parents=True, exist_ok=True)
    save_index(index, paths.index_file, paths.chunks_file)
    return index


# --- explain -----------------------------------------------------------------


def explain_one(entry_id: str, manifest: DatasetManifest, config: RunConfig,
                model: FusionModel, scaler: Scaler, index: VectorIndex,
                providers: Providers) -> Path:
    store = FeatureStore(config.artifacts_dir)
    manifest.entry(entry_id)  # raises for unknown ids
    features = store.read_features(entry_id)
    transcript = store.read_transcript(entry_id)
    encoding = store.read_text_encoding(entry_id)
    speech = store.read_speech_embedding(entry_id)

    standardized = apply_scaler(scaler, features)
    sample = FusionSample(
        sample_id=entry_id,
        acoustic=standardized,
        speech=speech,
        text_tokens=encoding.tokens,
        text_valid_len=encoding.valid_len,
    )
    prediction, _ = forward_sample(model, sample)
    query = build_query(prediction, standardized, transcript.normalized,
                        speech_note(speech))
    result = explain(query, index, providers,
                     temperature=config.rag.temperature,
                     top_p=config.rag.top_p, k=config.rag.k)
    payload = result.to_json_dict()
    validate(payload, "explanation")
    paths = Paths.from_config(config)
    paths.explanations_dir.mkdir(parents=True, exist_ok=True)
    out = paths.explanations_dir / f"{entry_id}.json"
    out.write_text(json.dumps(payload, indent=2, sort_keys=False, ensure_ascii=False))
    return out


def run_explain(manifest: DatasetManifest, config: RunConfig,
                entry_ids: list[str]) -> list[Path]:
    paths = Paths.from_config(config)
    model = load_model(paths.checkpoint)
    scaler = Scaler.load(paths.scaler)
    index = load_index(paths.index_file, paths.chunks_file)
    providers = build_providers(config)
    return [
        explain_one(entry_id, manifest, config, model, scaler, index, providers)
        for entry_id in entry_ids
    ]


# --- full pipeline -----------------------------------------------------------


def run_pipeline(manifest: DatasetManifest, config: RunConfig,
                 force: bool = False) -> dict:
    """extract -> train -> eval(holdout) -> index -> explain-all.

    Completed stages (marker file present) are skipped unless ``force``;
    the first failure stops the chain with its stage name attached.
    """
    paths = Paths.from_config(config)
    paths.markers_dir.mkdir(parents=True, exist_ok=True)
    stage_rows = []
    ok = True

    labeled_test = [e for e in manifest.split(TEST) if e.label is not None]

    def run_stage(name: str, fn) -> None:
        nonlocal ok
        marker = paths.marker(name)
        start = time.monotonic()
        if marker.exists() and not force:
            stage_rows.append({"name": name, "status": "ok", "seconds": 0.0,
                               "resumed": True})
            logger.info("pipeline: stage %s already complete, skipped", name)
            return
        try:
            fn()
        except Exception as exc:
            ok = False
            stage_rows.append({
                "name": name, "status": "failed",
                "seconds": round(time.monotonic() - start, 3),
                "error": str(exc),
            })
            raise PipelineError(name, str(exc)) from exc
        marker.write_text("ok\n")
        stage_rows.append({"name": name, "status": "ok",
                           "seconds": round(time.monotonic() - start, 3)})

    def eval_stage() -> None:
        if labeled_test:
            run_eval_holdout(manifest, config)
        else:
            logger.info("pipeline: no labeled test entries, holdout skipped")

    def write_summary() -> None:
        payload = {"ok": ok, "stages": [
            {k: v for k, v in row.items() if k in ("name", "status", "seconds")}
            for row in stage_rows
        ]}
        validate(payload, "summary")
        paths.summary.write_text(json.dumps(payload, indent=2))

    try:
        run_stage("extract", lambda: _raise_on_failures(
            run_extract(manifest, config, force)))
        run_stage("train", lambda: run_train(manifest, config))
        run_stage("eval", eval_stage)
        run_stage("index", lambda: run_index(config))
        run_stage("explain", lambda: run_explain(manifest, config, manifest.ids))
    finally:
        write_summary()
    return {"ok": ok, "stages": stage_rows, "summary_path": str(paths.summary)}


def _raise_on_failures(result: dict) -> None:
    if result["failures"]:
        details = "; ".join(f"{k}: {v}" for k, v in result["failures"].items())
        raise RuntimeError(f"extraction failed for {details}")
