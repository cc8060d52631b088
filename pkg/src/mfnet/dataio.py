"""Dataset CSV ingestion, stratified splitting, synthetic generation and
model persistence.

File formats
------------
Dataset CSV: header ``d_max,q,alpha_min,f_alpha_min,alpha_max,f_alpha_max,
label`` (case-insensitive, exactly this column order), one sample per
row, ``.`` decimal point, integer label in {1, 2, 3}.  For prediction
inputs the label column may be omitted entirely.

Model file (``MFNET 1``): line-oriented text.  Line 1 is the magic
``MFNET 1``; line 2 the topology ``s1 s2 s3``; line 3 the regularization
weight; lines 4 and 5 the 27 scaling means and standard deviations;
then one line per hidden-layer weight row and one per output-layer row.
Reals are written with 17 significant digits so that loading reproduces
the exact float64 values.
"""

import csv
import math
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import features, network
from .errors import (
    BadMagic,
    BadRow,
    InsufficientData,
    InvalidInput,
    MissingHeader,
    ParseError,
    ShapeMismatch,
    UnknownLabel,
    VersionUnsupported,
)

CSV_COLUMNS = features.PARAMETER_NAMES + ("label",)

MODEL_MAGIC = "MFNET"
MODEL_VERSION = "1"

# Default per-class parameter means for the synthetic generator, in
# class order breast (1), lung (2), renal (3) and parameter order
# d_max, q, alpha_min, f_alpha_min, alpha_max, f_alpha_max.
DEFAULT_CLASS_MEANS = (
    (2.797801, -6.38071, 3.121177, 0.740055, 1.993426, 1.885918),
    (2.798677, -6.37214, 3.093834, 0.758865, 1.975734, 1.872967),
    (2.786872, -6.41573, 3.103109, 0.762394, 1.993601, 1.88775),
)

# Comparable to the between-class gaps above, so default synthetic data
# is hard but not pure noise.
DEFAULT_SIGMA = 0.005


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_atomic(path, text: str) -> None:
    """Write via a temp file in the target directory; rename on success."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


@dataclass(frozen=True)
class Dataset:
    """Labelled samples plus a free-text source tag."""

    samples: tuple
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        for i, s in enumerate(self.samples):
            if s.label is None:
                raise InvalidInput(f"dataset sample {i} has no label")

    def __len__(self) -> int:
        return len(self.samples)

    def class_counts(self) -> dict:
        counts = {}
        for s in self.samples:
            counts[s.label] = counts.get(s.label, 0) + 1
        return counts


@dataclass(frozen=True)
class SplitSpec:
    """Train/validation partition parameters."""

    train_fraction: float = 0.75
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if not (0.0 < self.train_fraction < 1.0):
            raise InvalidInput(
                f"train_fraction must lie in (0, 1), got {self.train_fraction}"
            )


@dataclass(frozen=True)
class GeneratorSpec:
    """Synthetic-data parameters: per-class means, per-parameter sigma."""

    class_means: tuple = DEFAULT_CLASS_MEANS
    std_devs: tuple = tuple([DEFAULT_SIGMA] * features.N_RAW_PARAMS)
    samples_per_class: int = 350
    seed: int = 0

    def __post_init__(self):
        means = np.asarray(self.class_means, dtype=np.float64)
        stds = np.asarray(self.std_devs, dtype=np.float64)
        if means.shape != (3, features.N_RAW_PARAMS):
            raise InvalidInput(
                f"class_means must be 3 x {features.N_RAW_PARAMS}, got {means.shape}"
            )
        if stds.shape != (features.N_RAW_PARAMS,):
            raise InvalidInput(
                f"std_devs must have {features.N_RAW_PARAMS} entries, got {stds.shape}"
            )
        if not (np.isfinite(means).all() and np.isfinite(stds).all()):
            raise InvalidInput("generator means and std_devs must be finite")
        if (stds <= 0).any():
            raise InvalidInput("generator std_devs must be > 0")
        if self.samples_per_class < 1:
            raise InvalidInput(
                f"samples_per_class must be >= 1, got {self.samples_per_class}"
            )
        object.__setattr__(self, "class_means", tuple(map(tuple, means.tolist())))
        object.__setattr__(self, "std_devs", tuple(stds.tolist()))


def _parse_rows(path, require_label: bool):
    path = Path(path)
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise MissingHeader(f"{path}: file is empty") from None
        normalized = tuple(cell.strip().lower() for cell in header)
        if normalized == CSV_COLUMNS:
            labelled = True
        elif normalized == CSV_COLUMNS[:-1] and not require_label:
            labelled = False
        else:
            raise MissingHeader(
                f"{path}: expected header {','.join(CSV_COLUMNS)}"
                + ("" if require_label else " (label column optional)")
            )
        n_fields = len(CSV_COLUMNS) if labelled else len(CSV_COLUMNS) - 1

        samples = []
        for row in reader:
            line = reader.line_num
            if len(row) != n_fields:
                raise BadRow(line, f"expected {n_fields} fields, got {len(row)}")
            values = []
            for name, cell in zip(features.PARAMETER_NAMES, row):
                try:
                    v = float(cell)
                except ValueError:
                    raise BadRow(line, f"{name} is not a number: {cell!r}") from None
                if not math.isfinite(v):
                    raise BadRow(line, f"{name} is non-finite: {cell!r}")
                values.append(v)
            label = None
            if labelled:
                cell = row[-1].strip()
                try:
                    label = int(cell)
                except ValueError:
                    raise BadRow(line, f"label is not an integer: {cell!r}") from None
                if label not in (1, 2, 3):
                    raise UnknownLabel(line, cell)
            samples.append(features.MultifractalSample(*values, label=label))
    return samples


def load_csv(path) -> Dataset:
    """Load a labelled dataset CSV; malformed rows fail with line numbers."""
    samples = _parse_rows(path, require_label=True)
    return Dataset(samples=tuple(samples), provenance=str(path))


def load_samples_csv(path) -> list:
    """Load samples for prediction; the label column is optional."""
    return _parse_rows(path, require_label=False)


def save_csv(dataset: Dataset, path) -> None:
    """Write a dataset CSV that reloads to the exact same float64 values."""
    lines = [",".join(CSV_COLUMNS)]
    for s in dataset.samples:
        cells = [_fmt(getattr(s, name)) for name in features.PARAMETER_NAMES]
        cells.append(str(s.label))
        lines.append(",".join(cells))
    _write_atomic(path, "\n".join(lines) + "\n")


def split(data: Dataset, spec: SplitSpec = SplitSpec()):
    """Partition into train and validation sets, stratified by default.

    Stratified mode shuffles within each class with the seeded generator
    and moves floor(train_fraction * n_k) samples per class into the
    training set; the union is always the original multiset and the
    partition is deterministic per seed.
    """
    rng = np.random.default_rng(spec.seed)
    samples = data.samples
    train, validation = [], []
    if spec.stratified:
        labels = sorted({s.label for s in samples})
        for label in labels:
            idx = [i for i, s in enumerate(samples) if s.label == label]
            if len(idx) < 2:
                raise InsufficientData(
                    f"class {label} has {len(idx)} sample(s); stratified split "
                    "needs at least 2"
                )
            order = rng.permutation(len(idx))
            n_train = math.floor(spec.train_fraction * len(idx))
            for pos in order[:n_train]:
                train.append(samples[idx[pos]])
            for pos in order[n_train:]:
                validation.append(samples[idx[pos]])
    else:
        if len(samples) < 2:
            raise InsufficientData("split needs at least 2 samples")
        order = rng.permutation(len(samples))
        n_train = math.floor(spec.train_fraction * len(samples))
        train = [samples[i] for i in order[:n_train]]
        validation = [samples[i] for i in order[n_train:]]
    return (
        Dataset(samples=tuple(train), provenance=data.provenance),
        Dataset(samples=tuple(validation), provenance=data.provenance),
    )


def generate(spec: GeneratorSpec = GeneratorSpec()) -> Dataset:
    """Draw a synthetic dataset with normal per-parameter noise.

    Each parameter is sampled independently around its class mean with
    the per-parameter standard deviation; correlations between real
    multifractal parameters are deliberately not modelled.  A fixed seed
    reproduces the dataset bitwise.
    """
    rng = np.random.default_rng(spec.seed)
    means = np.asarray(spec.class_means)
    stds = np.asarray(spec.std_devs)
    samples = []
    for class_index, label in enumerate((1, 2, 3)):
        draws = rng.normal(
            loc=means[class_index],
            scale=stds,
            size=(spec.samples_per_class, features.N_RAW_PARAMS),
        )
        for row in draws:
            samples.append(features.MultifractalSample(*row, label=label))
    return Dataset(
        samples=tuple(samples),
        provenance=f"synthetic(seed={spec.seed}, per_class={spec.samples_per_class})",
    )


def save_model(model: network.Model, path) -> None:
    """Serialize a model to the versioned MFNET text format."""
    topo = model.topology
    lines = [
        f"{MODEL_MAGIC} {MODEL_VERSION}",
        f"{topo.s1} {topo.s2} {topo.s3}",
        _fmt(model.reg_lambda),
        " ".join(_fmt(v) for v in model.scaling.means),
        " ".join(_fmt(v) for v in model.scaling.std_devs),
    ]
    for row in model.theta1:
        lines.append(" ".join(_fmt(v) for v in row))
    for row in model.theta2:
        lines.append(" ".join(_fmt(v) for v in row))
    _write_atomic(path, "\n".join(lines) + "\n")


def _parse_floats(text: str, count: int, line_num: int, what: str) -> np.ndarray:
    tokens = text.split()
    if len(tokens) != count:
        raise ShapeMismatch(
            f"{what}: expected {count} values on line {line_num}, found {len(tokens)}"
        )
    try:
        return np.array([float(t) for t in tokens])
    except ValueError as exc:
        raise ParseError(line_num, f"{what}: {exc}") from None


def load_model(path) -> network.Model:
    """Load a model saved by ``save_model``; the round trip is exact."""
    raw = Path(path).read_text().splitlines()
    lines = [(i + 1, text) for i, text in enumerate(raw)]
    while lines and not lines[-1][1].strip():
        lines.pop()
    if not lines:
        raise BadMagic(f"{path}: file is empty")

    def take(what: str):
        if not lines:
            raise ShapeMismatch(f"unexpected end of file: missing {what}")
        return lines.pop(0)

    num, text = take("magic line")
    magic = text.split()
    if len(magic) != 2 or magic[0] != MODEL_MAGIC:
        raise BadMagic(f"line {num}: expected '{MODEL_MAGIC} <version>', got {text!r}")
    if magic[1] != MODEL_VERSION:
        raise VersionUnsupported(
            f"format version {magic[1]} not supported (expected {MODEL_VERSION})"
        )

    num, text = take("topology line")
    try:
        s1, s2, s3 = (int(t) for t in text.split())
    except ValueError:
        raise ParseError(num, f"topology must be three integers, got {text!r}") from None
    topo = network.Topology(s1=s1, s2=s2, s3=s3)

    num, text = take("lambda line")
    try:
        reg_lambda = float(text)
    except ValueError:
        raise ParseError(num, f"lambda must be a real, got {text!r}") from None

    num, text = take("scaling means")
    means = _parse_floats(text, s1, num, "scaling means")
    num, text = take("scaling std-devs")
    stds = _parse_floats(text, s1, num, "scaling std-devs")

    theta1 = np.empty((s2, s1 + 1))
    for r in range(s2):
        if not lines:
            raise ShapeMismatch(f"theta1 block: expected {s2} rows, found {r}")
        num, text = lines.pop(0)
        theta1[r] = _parse_floats(text, s1 + 1, num, "theta1 row")
    theta2 = np.empty((s3, s2 + 1))
    for r in range(s3):
        if not lines:
            raise ShapeMismatch(f"theta2 block: expected {s3} rows, found {r}")
        num, text = lines.pop(0)
        theta2[r] = _parse_floats(text, s2 + 1, num, "theta2 row")
    if lines:
        num, text = lines[0]
        raise ParseError(num, f"unexpected trailing content: {text!r}")

    return network.Model(
        theta1=theta1,
        theta2=theta2,
        topology=topo,
        scaling=features.ScalingParams(means=means, std_devs=stds),
        reg_lambda=reg_lambda,
    )
