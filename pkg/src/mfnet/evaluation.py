"""One-vs-rest confusion counts and the six per-class quality metrics.

Each carcinoma class k is scored against the rest: accuracy,
sensitivity, specificity, the geometric mean of sensitivity and
specificity, precision, and F-measure 2tp / (2tp + fp + fn).  Metrics
whose denominator is zero are reported as 0.0 and listed in the
``undefined`` set rather than returned as NaN.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import network
from ._validation import VALID_LABELS, as_label_vector
from .errors import InvalidInput

METRIC_NAMES = (
    "accuracy",
    "sensitivity",
    "specificity",
    "gmean",
    "precision",
    "f_measure",
)


@dataclass(frozen=True)
class ConfusionCounts:
    """One-vs-rest tally for a single target class."""

    tp: int
    fp: int
    fn: int
    tn: int

    def __post_init__(self):
        for name in ("tp", "fp", "fn", "tn"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise InvalidInput(f"{name} must be a nonnegative integer, got {v!r}")
            object.__setattr__(self, name, int(v))

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn


@dataclass(frozen=True)
class ClassMetrics:
    """Six derived metrics for one class; all values lie in [0, 1].

    ``undefined`` names the metrics whose denominator was zero; their
    value is the 0.0 sentinel, kept numeric so aggregation stays total.
    """

    accuracy: float
    sensitivity: float
    specificity: float
    gmean: float
    precision: float
    f_measure: float
    undefined: frozenset = frozenset()

    def __post_init__(self):
        for name in METRIC_NAMES:
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise InvalidInput(f"{name} must lie in [0, 1], got {v}")
        if abs(self.gmean**2 - self.sensitivity * self.specificity) > 1e-12:
            raise InvalidInput("gmean must be sqrt(sensitivity * specificity)")
        object.__setattr__(self, "undefined", frozenset(self.undefined))


@dataclass(frozen=True)
class ClassReport:
    """Counts and metrics for one carcinoma class."""

    label: int
    name: str
    counts: ConfusionCounts
    metrics: ClassMetrics


@dataclass(frozen=True)
class EvaluationReport:
    """Per-class reports in fixed order (breast, lung, renal)."""

    classes: tuple
    n_samples: int


def confusion(predictions, truths, target: int) -> ConfusionCounts:
    """Tally one-vs-rest outcomes of predictions against true labels."""
    pred = as_label_vector(predictions, name="predictions")
    true = as_label_vector(truths, n_rows=pred.shape[0], name="truths")
    if target not in VALID_LABELS:
        raise InvalidInput(f"target class must be in {{1, 2, 3}}, got {target}")
    p_hit = pred == target
    t_hit = true == target
    return ConfusionCounts(
        tp=int(np.sum(p_hit & t_hit)),
        fp=int(np.sum(p_hit & ~t_hit)),
        fn=int(np.sum(~p_hit & t_hit)),
        tn=int(np.sum(~p_hit & ~t_hit)),
    )


def _ratio(num, den, name, undefined):
    if den == 0:
        undefined.add(name)
        return 0.0
    return num / den


def metrics(counts: ConfusionCounts) -> ClassMetrics:
    """Derive the six metrics from one-vs-rest counts."""
    if counts.total < 1:
        raise InvalidInput("metrics need at least one evaluated sample")
    undefined = set()
    tp, fp, fn, tn = counts.tp, counts.fp, counts.fn, counts.tn
    accuracy = (tp + tn) / counts.total
    sensitivity = _ratio(tp, tp + fn, "sensitivity", undefined)
    specificity = _ratio(tn, tn + fp, "specificity", undefined)
    precision = _ratio(tp, tp + fp, "precision", undefined)
    f_measure = _ratio(2 * tp, 2 * tp + fp + fn, "f_measure", undefined)
    gmean = math.sqrt(sensitivity * specificity)
    if {"sensitivity", "specificity"} & undefined:
        undefined.add("gmean")
    return ClassMetrics(
        accuracy=accuracy,
        sensitivity=sensitivity,
        specificity=specificity,
        gmean=gmean,
        precision=precision,
        f_measure=f_measure,
        undefined=frozenset(undefined),
    )


def evaluate(model: network.Model, samples) -> EvaluationReport:
    """Predict every labelled sample and score each class one-vs-rest."""
    samples = list(samples)
    if not samples:
        raise InvalidInput("evaluation set must not be empty")
    truths = np.asarray(
        [s.label if s.label is not None else 0 for s in samples], dtype=np.int64
    )
    if not np.isin(truths, VALID_LABELS).all():
        raise InvalidInput("every evaluation sample must carry a label in {1, 2, 3}")
    predictions = network.predict_batch(model, samples)
    reports = []
    for label in VALID_LABELS:
        counts = confusion(predictions, truths, label)
        reports.append(
            ClassReport(
                label=label,
                name=network.CLASS_NAMES[label],
                counts=counts,
                metrics=metrics(counts),
            )
        )
    return EvaluationReport(classes=tuple(reports), n_samples=len(samples))


_TEXT_ROWS = (
    ("Accuracy", "accuracy", "percent"),
    ("Sensitivity", "sensitivity", "percent"),
    ("Specificity", "specificity", "percent"),
    ("Geometric mean sensitivity and specificity", "gmean", "percent"),
    ("Precision", "precision", "percent"),
    ("F-Measure", "f_measure", "plain"),
)


def format_report_text(report: EvaluationReport) -> str:
    """Human-readable report, one block of six metric rows per class."""
    lines = [f"Evaluated samples: {report.n_samples}"]
    for cls in report.classes:
        lines.append("")
        lines.append(f"{cls.name.capitalize()} cancer (class {cls.label})")
        for title, attr, style in _TEXT_ROWS:
            value = getattr(cls.metrics, attr)
            shown = f"{100.0 * value:.2f}%" if style == "percent" else f"{value:.4f}"
            if attr in cls.metrics.undefined:
                shown += " (undefined)"
            lines.append(f"  {title:<44}{shown}")
    return "\n".join(lines) + "\n"


def format_report_structured(report: EvaluationReport) -> str:
    """Flat key/value report: one ``class.<k>.<metric> = <value>`` per line."""
    lines = [f"samples = {report.n_samples}"]
    for cls in report.classes:
        prefix = f"class.{cls.label}"
        lines.append(f"{prefix}.name = {cls.name}")
        for count_name in ("tp", "fp", "fn", "tn"):
            lines.append(f"{prefix}.{count_name} = {getattr(cls.counts, count_name)}")
        for attr in METRIC_NAMES:
            lines.append(f"{prefix}.{attr} = {getattr(cls.metrics, attr):.17g}")
        lines.append(f"{prefix}.undefined = {','.join(sorted(cls.metrics.undefined))}")
    return "\n".join(lines) + "\n"
