"""Report rendering: delimited CSV tables plus matplotlib figures.

Every evaluation and training path writes its JSON next to a CSV of the
same table and a PNG figure, so results can be inspected without code.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .fusion.ablation import AblationRow
from .fusion.kfold import KFoldResult
from .fusion.metrics import EvalReport
from .fusion.train import EpochRecord


def write_csv(path: str | Path, header: list[str], rows: list[list]) -> None:
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        writer.writerows(rows)


def training_curve_figure(log: list[EpochRecord], path: str | Path) -> None:
    epochs = [r.epoch for r in log]
    fig, ax_loss = plt.subplots(figsize=(7, 4))
    ax_loss.plot(epochs, [r.loss for r in log], color="tab:blue", label="loss")
    ax_loss.set_xlabel("epoch")
    ax_loss.set_ylabel("training loss", color="tab:blue")
    ax_acc = ax_loss.twinx()
    ax_acc.plot(epochs, [r.train_acc for r in log], color="tab:orange",
                label="train accuracy")
    ax_acc.set_ylabel("train accuracy", color="tab:orange")
    ax_acc.set_ylim(0.0, 1.05)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def training_log_csv(log: list[EpochRecord], path: str | Path) -> None:
    write_csv(path, ["epoch", "loss", "train_acc"],
              [[r.epoch, f"{r.loss:.6f}", f"{r.train_acc:.4f}"] for r in log])


def confusion_figure(report: EvalReport, path: str | Path) -> None:
    matrix = [[report.tp, report.fn], [report.fp, report.tn]]
    fig, ax = plt.subplots(figsize=(4.5, 4))
    im = ax.imshow(matrix, cmap="Blues")
    ax.set_xticks([0, 1], labels=["pred ad", "pred cn"])
    ax.set_yticks([0, 1], labels=["true ad", "true cn"])
    for i in range(2):
        for j in range(2):
            ax.text(j, i, str(matrix[i][j]), ha="center", va="center")
    ax.set_title(f"accuracy {100 * report.accuracy:.2f}%  "
                 f"F1 {100 * report.f1:.2f}%")
    fig.colorbar(im, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def holdout_csv(report: EvalReport, path: str | Path) -> None:
    payload = report.to_json_dict()
    header = ["tp", "tn", "fp", "fn", "accuracy", "f1", "acc_pct", "f1_pct", "n"]
    write_csv(path, header, [[payload[k] for k in header]])


def fold_accuracy_figure(result: KFoldResult, path: str | Path) -> None:
    accuracies = [r.accuracy for r in result.fold_reports]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(range(1, len(accuracies) + 1), accuracies, color="tab:blue")
    ax.axhline(result.mean_accuracy, color="tab:red", linestyle="--",
               label=f"mean {result.summary}")
    ax.set_xlabel("fold")
    ax.set_ylabel("accuracy")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def kfold_csv(result: KFoldResult, path: str | Path) -> None:
    rows = [
        [i + 1, r.tp, r.tn, r.fp, r.fn, f"{r.accuracy:.4f}", f"{r.f1:.4f}"]
        for i, r in enumerate(result.fold_reports)
    ]
    rows.append(["mean±std", "", "", "", "", result.summary, ""])
    write_csv(path, ["fold", "tp", "tn", "fp", "fn", "accuracy", "f1"], rows)


def ablation_figure(rows: list[AblationRow], path: str | Path) -> None:
    labels = [row.modalities.label.replace("+", "\n") for row in rows]
    acc = [row.report.accuracy for row in rows]
    f1 = [row.report.f1 for row in rows]
    x = range(len(rows))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - 0.18 for i in x], acc, width=0.36, label="accuracy")
    ax.bar([i + 0.18 for i in x], f1, width=0.36, label="F1")
    ax.set_xticks(list(x), labels=labels, fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def ablation_csv(rows: list[AblationRow], path: str | Path) -> None:
    table = [
        [
            "yes" if row.modalities.speech else "no",
            "yes" if row.modalities.acoustic else "no",
            "yes" if row.modalities.text else "no",
            f"{100 * row.report.accuracy:.2f}",
            f"{100 * row.report.f1:.2f}",
        ]
        for row in rows
    ]
    write_csv(
        path,
        ["audio_embeddings", "acoustic_features", "transcription",
         "accuracy_pct", "f1_pct"],
        table,
    )
