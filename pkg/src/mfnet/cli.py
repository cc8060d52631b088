"""Command-line entry point: gen, train, predict, gradcheck.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
Diagnostics go to stderr as a single line; results go to stdout.  Every
subcommand accepts ``--config <path>``, a flat ``key = value`` file
whose keys match the long flag names; explicit flags override config
values, config values override built-in defaults.
"""

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import dataio, evaluation, features, network, training
from .errors import MFNetError, NumericError


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class _Opt:
    flag: str
    default: object = None
    type: object = str
    help: str = ""
    is_flag: bool = False
    required: bool = False

    @property
    def dest(self) -> str:
        return self.flag.replace("-", "_")


_GEN_OPTS = (
    _Opt("out", required=True, help="output CSV path"),
    _Opt("per-class", 350, int, "samples per class"),
    _Opt("sigma", dataio.DEFAULT_SIGMA, float, "per-parameter std dev (> 0)"),
    _Opt("seed", 0, int, "generator seed"),
)

_TRAIN_OPTS = (
    _Opt("data", required=True, help="labelled dataset CSV"),
    _Opt("out", required=True, help="output model path"),
    _Opt("train-fraction", 0.75, float, "fraction per class used for training"),
    _Opt("split-seed", 0, int, "seed of the train/validation shuffle"),
    _Opt("no-stratify", False, is_flag=True, help="shuffle globally, not per class"),
    _Opt("hidden", 25, int, "hidden layer size"),
    _Opt("lambda", 1.0, float, "regularization weight (>= 0)"),
    _Opt("learning-rate", 0.3, float, "gradient descent step size"),
    _Opt("max-iter", 2000, int, "iteration cap"),
    _Opt("tolerance", 1e-7, float, "convergence threshold on |cost change|"),
    _Opt("seed", 0, int, "weight initialization seed"),
    _Opt("init-epsilon", "auto", str, "uniform init bound, or 'auto'"),
    _Opt("eval", False, is_flag=True, help="evaluate after training"),
    _Opt("eval-split", "validation", help="evaluate on: validation, train or all"),
    _Opt("report", "text", help="report format: text or structured"),
)

_PREDICT_OPTS = (
    _Opt("model", required=True, help="model file path"),
    _Opt("data", required=True, help="input CSV (label column optional)"),
)

_GRADCHECK_OPTS = (
    _Opt("seed", 0, int, "seed for weights and check data"),
    _Opt("samples", 8, int, "number of check samples"),
    _Opt("hidden", 5, int, "hidden layer size"),
    _Opt("lambda", 1.0, float, "regularization weight"),
    _Opt("step", 1e-5, float, "finite-difference step"),
    _Opt("threshold", 1e-6, float, "max acceptable relative error"),
)

_COMMANDS = {
    "gen": (_GEN_OPTS, "write a synthetic dataset CSV"),
    "train": (_TRAIN_OPTS, "train a model on a dataset CSV"),
    "predict": (_PREDICT_OPTS, "print per-row class predictions"),
    "gradcheck": (_GRADCHECK_OPTS, "compare analytic and numeric gradients"),
}


def _build_parser() -> _Parser:
    parser = _Parser(prog="mfnet", description=__doc__.splitlines()[0])
    subs = parser.add_subparsers(dest="command", metavar="COMMAND")
    for name, (opts, help_text) in _COMMANDS.items():
        sub = subs.add_parser(name, help=help_text)
        sub.add_argument("--config", default=None, help="flat key=value option file")
        for o in opts:
            if o.is_flag:
                sub.add_argument(
                    f"--{o.flag}",
                    dest=o.dest,
                    action="store_const",
                    const=True,
                    default=None,
                    help=o.help,
                )
            else:
                sub.add_argument(
                    f"--{o.flag}", dest=o.dest, default=None, help=o.help
                )
    return parser


def _load_config(path: str) -> dict:
    try:
        text = open(path).read()
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from None
    values = {}
    for i, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"config line {i} is not 'key = value': {line!r}")
        key, _, value = line.partition("=")
        values[key.strip().lower().replace("-", "_")] = value.strip()
    return values


def _parse_bool(raw: str, flag: str) -> bool:
    lowered = raw.lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise UsageError(f"--{flag} expects a boolean, got {raw!r}")


def _merge(args, opts) -> dict:
    config = _load_config(args.config) if args.config else {}
    merged = {}
    for o in opts:
        raw = getattr(args, o.dest)
        if raw is None and o.dest in config:
            raw = config[o.dest]
        if raw is None:
            if o.required:
                raise UsageError(f"missing required option --{o.flag}")
            merged[o.dest] = o.default
            continue
        if o.is_flag:
            merged[o.dest] = raw if isinstance(raw, bool) else _parse_bool(raw, o.flag)
        else:
            try:
                merged[o.dest] = o.type(raw)
            except ValueError:
                raise UsageError(f"--{o.flag}: invalid value {raw!r}") from None
    return merged


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise UsageError(message)


def _cmd_gen(opt) -> int:
    _require(opt["per_class"] >= 1, "--per-class must be >= 1")
    _require(opt["sigma"] > 0, "--sigma must be > 0")
    spec = dataio.GeneratorSpec(
        std_devs=tuple([opt["sigma"]] * features.N_RAW_PARAMS),
        samples_per_class=opt["per_class"],
        seed=opt["seed"],
    )
    dataset = dataio.generate(spec)
    dataio.save_csv(dataset, opt["out"])
    print(f"wrote {len(dataset)} samples to {opt['out']}")
    return 0


def _train_config(opt) -> training.TrainConfig:
    _require(opt["lambda"] >= 0, "--lambda must be >= 0")
    _require(opt["learning_rate"] > 0, "--learning-rate must be > 0")
    _require(opt["max_iter"] >= 1, "--max-iter must be >= 1")
    _require(opt["tolerance"] > 0, "--tolerance must be > 0")
    _require(opt["hidden"] >= 1, "--hidden must be >= 1")
    epsilon = opt["init_epsilon"]
    if epsilon != "auto":
        try:
            epsilon = float(epsilon)
        except ValueError:
            raise UsageError("--init-epsilon must be a number or 'auto'") from None
        _require(epsilon > 0, "--init-epsilon must be > 0")
    return training.TrainConfig(
        reg_lambda=opt["lambda"],
        learning_rate=opt["learning_rate"],
        max_iterations=opt["max_iter"],
        cost_tolerance=opt["tolerance"],
        hidden_size=opt["hidden"],
        rng_seed=opt["seed"],
        init_epsilon=epsilon,
    )


def _cmd_train(opt) -> int:
    _require(0.0 < opt["train_fraction"] < 1.0, "--train-fraction must be in (0, 1)")
    _require(opt["eval_split"] in ("validation", "train", "all"),
             "--eval-split must be validation, train or all")
    _require(opt["report"] in ("text", "structured"),
             "--report must be text or structured")
    config = _train_config(opt)

    data = dataio.load_csv(opt["data"])
    spec = dataio.SplitSpec(
        train_fraction=opt["train_fraction"],
        seed=opt["split_seed"],
        stratified=not opt["no_stratify"],
    )
    train_set, validation_set = dataio.split(data, spec)
    model, report = training.train(train_set.samples, config)
    dataio.save_model(model, opt["out"])

    print(f"train_samples = {len(train_set)}")
    print(f"validation_samples = {len(validation_set)}")
    print(f"final_cost = {report.cost_history[-1]:.17g}")
    print(f"iterations = {report.iterations_run}")
    print(f"converged = {'true' if report.converged else 'false'}")

    if opt["eval"]:
        subset = {
            "validation": validation_set.samples,
            "train": train_set.samples,
            "all": data.samples,
        }[opt["eval_split"]]
        result = evaluation.evaluate(model, subset)
        formatter = (
            evaluation.format_report_text
            if opt["report"] == "text"
            else evaluation.format_report_structured
        )
        print(formatter(result), end="")
    return 0


def _cmd_predict(opt) -> int:
    model = dataio.load_model(opt["model"])
    samples = dataio.load_samples_csv(opt["data"])
    if not samples:
        return 0
    acts = network.activations(model, samples)
    labels = np.argmax(acts, axis=1) + 1
    for i, (label, row) in enumerate(zip(labels, acts)):
        values = ",".join(f"{v:.17g}" for v in row)
        print(f"{i},{label},{values}")
    return 0


def _cmd_gradcheck(opt) -> int:
    _require(opt["samples"] >= 1, "--samples must be >= 1")
    _require(opt["hidden"] >= 1, "--hidden must be >= 1")
    _require(opt["lambda"] >= 0, "--lambda must be >= 0")
    _require(opt["step"] > 0, "--step must be > 0")
    _require(opt["threshold"] > 0, "--threshold must be > 0")

    rng = np.random.default_rng(opt["seed"])
    topology = network.Topology(s2=opt["hidden"])
    X = rng.standard_normal((opt["samples"], topology.s1))
    Y = training.one_hot(rng.integers(1, 4, size=opt["samples"]))
    theta1, theta2 = training.init_weights(topology, opt["seed"])
    model = network.Model(
        theta1=theta1,
        theta2=theta2,
        topology=topology,
        scaling=features.ScalingParams(
            means=np.zeros(topology.s1), std_devs=np.ones(topology.s1)
        ),
        reg_lambda=opt["lambda"],
    )
    worst = training.gradient_check(model, X, Y, step=opt["step"])
    print(f"{worst:.17g}")
    if worst > opt["threshold"]:
        print(
            f"error: gradient check failed: {worst:.3g} > {opt['threshold']:.3g}",
            file=sys.stderr,
        )
        return 3
    return 0


_RUNNERS = {
    "gen": _cmd_gen,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "gradcheck": _cmd_gradcheck,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required (gen, train, predict, gradcheck)")
        opts, _ = _COMMANDS[args.command]
        return _RUNNERS[args.command](_merge(args, opts))
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except MFNetError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
