"""Confusion-matrix metrics.

Overall and per-class accuracy are (TP + TN) / (TP + TN + FP + FN) on the
one-vs-rest reduction of the confusion matrix; F1 is 2TP / (2TP + FP + FN).
Macro F1 averages the per-class scores unweighted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def confusion_matrix(y_true: np.ndarray, y_pred: np.ndarray, n_classes: int) -> np.ndarray:
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (np.asarray(y_true), np.asarray(y_pred)), 1)
    return cm


@dataclass(frozen=True)
class SeedMetrics:
    seed: int
    accuracy: float
    macro_f1: float
    per_class_accuracy: tuple[float, ...]
    per_class_f1: tuple[float, ...]


def evaluate_confusion(cm: np.ndarray, seed: int = 0) -> SeedMetrics:
    cm = np.asarray(cm, dtype=np.float64)
    total = cm.sum()
    tp = np.diag(cm)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    tn = total - tp - fp - fn

    with np.errstate(invalid="ignore"):
        per_acc = (tp + tn) / total
        denom = 2 * tp + fp + fn
        per_f1 = np.where(denom > 0, 2 * tp / np.where(denom > 0, denom, 1), 0.0)
    return SeedMetrics(
        seed=seed,
        accuracy=float(tp.sum() / total),
        macro_f1=float(per_f1.mean()),
        per_class_accuracy=tuple(float(a) for a in per_acc),
        per_class_f1=tuple(float(f) for f in per_f1),
    )


@dataclass(frozen=True)
class MetricsReport:
    class_names: tuple[str, ...]
    per_seed: tuple[SeedMetrics, ...]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean([m.accuracy for m in self.per_seed]))

    @property
    def std_accuracy(self) -> float:
        return float(np.std([m.accuracy for m in self.per_seed]))

    @property
    def mean_macro_f1(self) -> float:
        return float(np.mean([m.macro_f1 for m in self.per_seed]))

    @property
    def std_macro_f1(self) -> float:
        return float(np.std([m.macro_f1 for m in self.per_seed]))

    def summary_rows(self) -> list[dict]:
        """One row per seed plus a mean +/- std row, Table-style."""
        rows = [
            {
                "seed": m.seed,
                "accuracy": m.accuracy,
                "macro_f1": m.macro_f1,
                **{f"acc_{n}": a for n, a in zip(self.class_names, m.per_class_accuracy)},
                **{f"f1_{n}": f for n, f in zip(self.class_names, m.per_class_f1)},
            }
            for m in self.per_seed
        ]
        per_acc = np.array([m.per_class_accuracy for m in self.per_seed])
        per_f1 = np.array([m.per_class_f1 for m in self.per_seed])
        rows.append(
            {
                "seed": "mean±std",
                "accuracy": f"{self.mean_accuracy:.4f}±{self.std_accuracy:.4f}",
                "macro_f1": f"{self.mean_macro_f1:.4f}±{self.std_macro_f1:.4f}",
                **{
                    f"acc_{n}": f"{per_acc[:, j].mean():.4f}±{per_acc[:, j].std():.4f}"
                    for j, n in enumerate(self.class_names)
                },
                **{
                    f"f1_{n}": f"{per_f1[:, j].mean():.4f}±{per_f1[:, j].std():.4f}"
                    for j, n in enumerate(self.class_names)
                },
            }
        )
        return rows
