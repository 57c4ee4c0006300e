"""Metrics and model-inspection reports: confusion matrices, Pearson,
MAE, partial correlation, and signed feature-weight rankings."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

CLASS_ORDER = ("low", "medium", "high")


class MetricError(ValueError):
    pass


@dataclass
class EvalReport:
    task: str
    n: int
    accuracy: Optional[float] = None
    confusion: Optional[list] = None  # gold x predicted
    classes: tuple = ()
    precision: dict = field(default_factory=dict)
    recall: dict = field(default_factory=dict)
    pearson_r: Optional[float] = None
    mae: Optional[float] = None

    def to_json(self):
        return {
            "task": self.task,
            "n": self.n,
            "accuracy": self.accuracy,
            "classes": list(self.classes),
            "confusion": self.confusion,
            "precision": self.precision,
            "recall": self.recall,
            "pearson_r": self.pearson_r,
            "mae": self.mae,
        }

    def save(self, json_path, text_path=None):
        with open(json_path, "w", encoding="utf-8") as handle:
            json.dump(self.to_json(), handle, indent=2)
            handle.write("\n")
        if text_path is not None:
            with open(text_path, "w", encoding="utf-8") as handle:
                handle.write(self.to_text())
                handle.write("\n")

    def to_text(self):
        lines = [f"task: {self.task}    n: {self.n}"]
        if self.accuracy is not None:
            lines.append(f"accuracy: {self.accuracy:.4f}")
            header = "gold\\pred".ljust(12) + "".join(
                c.rjust(10) for c in self.classes)
            lines.append(header)
            for gi, cls in enumerate(self.classes):
                row = cls.ljust(12) + "".join(
                    str(self.confusion[gi][pi]).rjust(10)
                    for pi in range(len(self.classes)))
                lines.append(row)
            lines.append("class".ljust(12) + "precision".rjust(10)
                         + "recall".rjust(10))
            for cls in self.classes:
                lines.append(cls.ljust(12)
                             + f"{self.precision[cls]:.4f}".rjust(10)
                             + f"{self.recall[cls]:.4f}".rjust(10))
        if self.pearson_r is not None:
            lines.append(f"pearson r: {self.pearson_r:.4f}")
        if self.mae is not None:
            lines.append(f"MAE: {self.mae:.4f}")
        return "\n".join(lines)


def classification_report(pred, gold) -> EvalReport:
    """Confusion matrix, accuracy and per-class precision/recall with the
    fixed class order low, medium, high (unknown classes appended)."""
    if len(pred) != len(gold):
        raise MetricError(
            f"length mismatch: {len(pred)} predictions, {len(gold)} gold")
    if not gold:
        raise MetricError("empty inputs")
    seen = set(gold) | set(pred)
    classes = tuple(c for c in CLASS_ORDER if c in seen) + tuple(
        sorted(seen - set(CLASS_ORDER), key=str))
    index = {c: i for i, c in enumerate(classes)}
    confusion = [[0] * len(classes) for _ in classes]
    for p, g in zip(pred, gold):
        confusion[index[g]][index[p]] += 1
    correct = sum(confusion[i][i] for i in range(len(classes)))
    precision = {}
    recall = {}
    for c, cls in enumerate(classes):
        col = sum(confusion[g][c] for g in range(len(classes)))
        row = sum(confusion[c])
        precision[cls] = confusion[c][c] / col if col else 0.0
        recall[cls] = confusion[c][c] / row if row else 0.0
    return EvalReport(
        task="classification",
        n=len(gold),
        accuracy=correct / len(gold),
        confusion=confusion,
        classes=classes,
        precision=precision,
        recall=recall,
    )


def regression_report(pred, gold) -> EvalReport:
    return EvalReport(
        task="regression",
        n=len(gold),
        pearson_r=pearson(pred, gold),
        mae=mae(pred, gold),
    )


def pearson(a, b) -> float:
    """Product-moment correlation; undefined for constant input."""
    if len(a) != len(b):
        raise MetricError("length mismatch")
    if len(a) < 2:
        raise MetricError("pearson needs at least 2 points")
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    dx = x - x.mean()
    dy = y - y.mean()
    sx = math.sqrt(float(dx @ dx))
    sy = math.sqrt(float(dy @ dy))
    if sx == 0.0 or sy == 0.0:
        raise MetricError("pearson is undefined for constant input")
    return float(dx @ dy) / (sx * sy)


def mae(a, b) -> float:
    if len(a) != len(b):
        raise MetricError("length mismatch")
    if not a:
        raise MetricError("empty inputs")
    x = np.asarray(a, dtype=float)
    y = np.asarray(b, dtype=float)
    return float(np.mean(np.abs(x - y)))


def partial_correlation(x, y, z) -> float:
    """Correlation of x and y controlling for z:
    (r_xy - r_xz r_yz) / sqrt((1 - r_xz^2)(1 - r_yz^2))."""
    if not (len(x) == len(y) == len(z)):
        raise MetricError("length mismatch")
    if len(x) < 3:
        raise MetricError("partial correlation needs at least 3 points")
    r_xy = pearson(x, y)
    r_xz = pearson(x, z)
    r_yz = pearson(y, z)
    # guard against collinear controls with a tolerance: exact
    # collinearity lands at |r| = 1 - 1ulp under floating point
    if 1.0 - r_xz ** 2 <= 1e-12 or 1.0 - r_yz ** 2 <= 1e-12:
        raise MetricError(
            "partial correlation undefined: control variable is "
            "collinear with an argument")
    return (r_xy - r_xz * r_yz) / math.sqrt(
        (1.0 - r_xz ** 2) * (1.0 - r_yz ** 2))


@dataclass(frozen=True)
class WeightReport:
    positive: tuple  # ((name, weight), ...) most positive first
    negative: tuple  # ((name, weight), ...) most negative first
    all_zero: bool = False


def weight_report(weights, feature_names, top_k=5) -> WeightReport:
    """Top signed weights of a linear model (the regression weight vector
    or one designated binary machine). Zero weights are reported only
    when every weight is zero, flagged as non-discriminative."""
    pairs = sorted(zip(feature_names, (float(w) for w in weights)),
                   key=lambda item: (-item[1], item[0]))
    if all(w == 0.0 for _, w in pairs):
        return WeightReport(positive=tuple(pairs[:top_k]),
                            negative=tuple(pairs[:top_k]),
                            all_zero=True)
    positive = tuple(p for p in pairs if p[1] > 0)[:top_k]
    negative = tuple(sorted((p for p in pairs if p[1] < 0),
                            key=lambda item: (item[1], item[0])))[:top_k]
    return WeightReport(positive=positive, negative=negative)
