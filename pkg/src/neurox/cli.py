"""Command-line interface.

Verbs: extract, train, eval, index, explain, pipeline, convert-adresso.
Global flags select the config file, provider mode, seed, and artifact
directory; NEUROX_SIDECAR_URL overrides the sidecar base URL.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path

import click

from .config import RunConfig, apply_overrides, load_config
from .manifest import convert_adresso_layout, load_manifest, save_manifest
from . import pipeline as pl

logger = logging.getLogger(__name__)


def _fail(message: str, code: int = 1) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="TOML or JSON run configuration.")
@click.option("--seed", type=int, default=None, help="Override the run seed.")
@click.option("--providers", "providers_mode",
              type=click.Choice(["fixture", "http"]), default=None,
              help="Provider backend for the pretrained-model boundaries.")
@click.option("--artifacts-dir", type=click.Path(), default=None,
              help="Directory for features, checkpoints, reports.")
@click.option("--sidecar-url", default=None, help="Model sidecar base URL.")
@click.option("--force", is_flag=True, help="Recompute even when outputs exist.")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging.")
@click.pass_context
def main(ctx, config_path, seed, providers_mode, artifacts_dir, sidecar_url,
         force, verbose):
    """Speech-based cognitive screening: extraction, training, explanation."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = load_config(config_path) if config_path else RunConfig()
        config = apply_overrides(config, providers=providers_mode, seed=seed,
                                 artifacts_dir=artifacts_dir,
                                 sidecar_url=sidecar_url)
    except ValueError as exc:
        _fail(str(exc), 2)
    ctx.obj = {"config": config, "force": force}


def _manifest(path: str):
    try:
        return load_manifest(path)
    except ValueError as exc:
        _fail(str(exc), 2)


@main.command()
@click.argument("manifest_path", type=click.Path())
@click.pass_context
def extract(ctx, manifest_path):
    """Extract per-recording artifacts for every manifest entry."""
    manifest = _manifest(manifest_path)
    result = pl.run_extract(manifest, ctx.obj["config"], force=ctx.obj["force"])
    for entry_id in result["skipped"]:
        click.echo(f"skipped {entry_id} (already extracted)")
    for entry_id in result["extracted"]:
        click.echo(f"extracted {entry_id}")
    if result["failures"]:
        for entry_id, message in result["failures"].items():
            click.echo(f"FAILED {entry_id}: {message}", err=True)
        sys.exit(1)


@main.command()
@click.argument("manifest_path", type=click.Path())
@click.pass_context
def train(ctx, manifest_path):
    """Fit the scaler and train the fusion classifier on the train split."""
    manifest = _manifest(manifest_path)
    try:
        result = pl.run_train(manifest, ctx.obj["config"])
    except (pl.PipelineError, ValueError, FileNotFoundError) as exc:
        _fail(str(exc))
    click.echo(json.dumps(result, indent=2))


@main.command(name="eval")
@click.argument("manifest_path", type=click.Path())
@click.option("--mode", type=click.Choice(["holdout", "kfold", "ablation"]),
              default="holdout", show_default=True)
@click.option("--k", type=int, default=5, show_default=True,
              help="Fold count for kfold mode.")
@click.option("--checkpoint", type=click.Path(), default=None,
              help="Checkpoint path (holdout mode; defaults to the artifact dir).")
@click.pass_context
def eval_cmd(ctx, manifest_path, mode, k, checkpoint):
    """Score the classifier: holdout, k-fold CV, or the modality ablation."""
    manifest = _manifest(manifest_path)
    config = ctx.obj["config"]
    try:
        if mode == "holdout":
            report = pl.run_eval_holdout(
                manifest, config, Path(checkpoint) if checkpoint else None)
            click.echo(json.dumps({"mode": mode, **report.to_json_dict()}, indent=2))
        elif mode == "kfold":
            result = pl.run_eval_kfold(manifest, config, k=k)
            click.echo(json.dumps({"mode": mode, **result.to_json_dict()}, indent=2))
        else:
            rows = pl.run_eval_ablation(manifest, config)
            click.echo(json.dumps(
                {"mode": mode, "rows": [r.to_json_dict() for r in rows]}, indent=2))
    except (pl.PipelineError, ValueError, FileNotFoundError) as exc:
        _fail(str(exc))


@main.command()
@click.pass_context
def index(ctx):
    """Chunk the literature corpus and build the persisted vector index."""
    try:
        built = pl.run_index(ctx.obj["config"])
    except (pl.PipelineError, FileNotFoundError, ValueError) as exc:
        _fail(str(exc))
    paths = pl.Paths.from_config(ctx.obj["config"])
    click.echo(f"indexed {built.size} chunks -> {paths.index_file}")


@main.command()
@click.argument("manifest_path", type=click.Path())
@click.option("--id", "entry_id", default=None, help="Recording id to explain.")
@click.option("--all", "explain_all", is_flag=True, help="Explain every entry.")
@click.pass_context
def explain(ctx, manifest_path, entry_id, explain_all):
    """Generate a literature-grounded explanation for one or all recordings."""
    if bool(entry_id) == explain_all:
        _fail("pass exactly one of --id or --all", 2)
    manifest = _manifest(manifest_path)
    ids = manifest.ids if explain_all else [entry_id]
    try:
        written = pl.run_explain(manifest, ctx.obj["config"], ids)
    except (pl.PipelineError, ValueError, FileNotFoundError) as exc:
        _fail(str(exc))
    for path in written:
        click.echo(f"wrote {path}")


@main.command()
@click.argument("manifest_path", type=click.Path())
@click.pass_context
def pipeline(ctx, manifest_path):
    """Run extract -> train -> eval -> index -> explain end to end."""
    manifest = _manifest(manifest_path)
    try:
        result = pl.run_pipeline(manifest, ctx.obj["config"],
                                 force=ctx.obj["force"])
    except pl.PipelineError as exc:
        _fail(str(exc))
    click.echo(json.dumps(result["stages"], indent=2))
    click.echo(f"summary: {result['summary_path']}")


@main.command(name="convert-adresso")
@click.argument("dataset_root", type=click.Path())
@click.argument("output_manifest", type=click.Path())
def convert_adresso(dataset_root, output_manifest):
    """Write a manifest for a locally licensed copy of the benchmark corpus."""
    try:
        manifest = convert_adresso_layout(dataset_root)
    except ValueError as exc:
        _fail(str(exc), 2)
    save_manifest(manifest, output_manifest)
    counts = manifest.counts()
    click.echo(f"wrote {output_manifest}: {json.dumps(counts, sort_keys=True)}")


if __name__ == "__main__":
    main()
