"""Feed-forward neural-network toolkit for classifying bone-metastasis
samples by primary carcinoma (breast, lung, renal) from six multifractal
image parameters."""

from . import errors
from .dataio import (
    Dataset,
    GeneratorSpec,
    SplitSpec,
    generate,
    load_csv,
    load_model,
    load_samples_csv,
    save_csv,
    save_model,
    split,
)
from .estimator import MFNetClassifier
from .evaluation import (
    ClassMetrics,
    ConfusionCounts,
    EvaluationReport,
    confusion,
    evaluate,
    format_report_structured,
    format_report_text,
    metrics,
)
from .features import (
    MultifractalSample,
    QuadraticExpansion,
    ScalingParams,
    ZScoreScaler,
    apply_scaling,
    expand_features,
    expand_matrix,
    fit_scaling,
    invert_scaling,
)
from .network import (
    ForwardTrace,
    Model,
    Topology,
    forward,
    label_from_activations,
    predict,
    predict_batch,
    sigmoid,
)
from .training import (
    Gradients,
    TrainConfig,
    TrainReport,
    backprop,
    cost,
    gradient_check,
    init_weights,
    one_hot,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "ClassMetrics",
    "ConfusionCounts",
    "Dataset",
    "EvaluationReport",
    "ForwardTrace",
    "GeneratorSpec",
    "Gradients",
    "MFNetClassifier",
    "Model",
    "MultifractalSample",
    "QuadraticExpansion",
    "ScalingParams",
    "SplitSpec",
    "Topology",
    "TrainConfig",
    "TrainReport",
    "ZScoreScaler",
    "apply_scaling",
    "backprop",
    "confusion",
    "cost",
    "errors",
    "evaluate",
    "expand_features",
    "expand_matrix",
    "fit_scaling",
    "format_report_structured",
    "format_report_text",
    "forward",
    "generate",
    "gradient_check",
    "init_weights",
    "invert_scaling",
    "label_from_activations",
    "load_csv",
    "load_model",
    "load_samples_csv",
    "metrics",
    "one_hot",
    "predict",
    "predict_batch",
    "save_csv",
    "save_model",
    "sigmoid",
    "split",
    "train",
]
