"""Command-line front end.

Subcommands cover the full experiment loop:

    gen-data   simulate the sweep campaign, shuffle, write the dataset CSV
    train      split 70:30, optionally scale, train one architecture
    hpo        TPE search over hidden nodes, optimizer and learning rate
    report     comparison table (CSV) over metrics/study documents
    plot       SVG loss curves or actual-vs-predicted traces (+ CSV sidecar)

Exit codes: 0 success, 1 I/O failure, 2 validation/config error,
3 numerical failure (divergence, or no completed trial).
Every command prints a provenance line with its seeds and input digests.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import acquisition, experiment, hpo
from .acquisition import (default_sweep, generate_grid_sweep, load_dataset,
                          load_sweep, shuffle)
from .architectures import model_to_dict
from .nn_core import TrainingDiverged
from .robot import default_robot, load_robot
from .svgplot import line_chart, torque_panels

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NUMERIC = 0, 1, 2, 3


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def _write_json(path: str, payload: dict) -> None:
    _write_text(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _parse_hidden(text: str | None, architecture: str):
    if text is None:
        return None
    sizes = [int(part) for part in text.split(",") if part.strip()]
    if architecture == "single" and len(sizes) != 1:
        raise ValueError("single architecture takes one hidden size")
    if architecture != "single" and len(sizes) not in (1, 3):
        raise ValueError(f"{architecture} architecture takes one or three hidden sizes")
    if architecture != "single" and len(sizes) == 1:
        sizes = sizes * 3
    return sizes


def cmd_gen_data(args) -> int:
    robot = load_robot(args.robot) if args.robot else default_robot()
    sweep = load_sweep(args.sweep) if args.sweep else default_sweep()
    dataset = generate_grid_sweep(robot, sweep, args.seed)
    duration = float(dataset.t[-1]) + sweep.sample_period
    dataset = shuffle(dataset, args.seed)
    digest = dataset.save_csv(args.out)
    print(f"wrote {args.out}: {len(dataset)} rows, {duration:.2f} s of motion")
    print(f"provenance: seed={args.seed} robot={robot.digest()} "
          f"sweep={sweep.digest()} data={digest}")
    return EXIT_OK


def cmd_train(args) -> int:
    dataset = load_dataset(args.data)
    hidden = _parse_hidden(args.hidden, args.arch)
    result = experiment.run_training(
        dataset, args.arch, scale=args.scale, drop_q1=not args.keep_q1,
        drop_joint6=args.drop_joint6, hidden_sizes=hidden,
        optimizer=args.optimizer, learning_rate=args.lr, epochs=args.epochs,
        batch_size=args.batch_size, train_fraction=args.train_fraction,
        cumulative_cascade=args.cumulative_cascade, seed=args.seed)
    if args.out_model:
        _write_json(args.out_model, model_to_dict(result.model))
    if args.out_metrics:
        experiment.save_metrics(result.metrics, args.out_metrics)
    if args.out_preds:
        _write_text(args.out_preds, experiment.predictions_csv_text(result))
    m = result.metrics
    print(f"{args.arch} ({'scaled' if args.scale else 'unscaled'}): "
          f"avg test MSE {m['avg_test_mse']:.6e}, "
          f"final test MSE {m['final_test_mse']:.6e} "
          f"({m['final_test_mse_nm']:.6e} N m^2)")
    print(f"provenance: seed={args.seed} data={m['dataset']['digest']}")
    return EXIT_OK


def cmd_hpo(args) -> int:
    dataset = load_dataset(args.data)
    study = experiment.hpo_search(dataset, args.arch, args.trials, args.seed,
                                  args.train_seed, scale=True,
                                  epochs=args.epochs, batch_size=args.batch_size,
                                  train_fraction=args.train_fraction)
    payload = hpo.study_to_dict(study)
    payload["architecture"] = args.arch
    _write_json(args.out_study, payload)
    best = study.best_trial
    if best is None:
        print("no trial completed", file=sys.stderr)
        return EXIT_NUMERIC
    kwargs = experiment.best_params_as_training_kwargs(study, args.arch)
    hidden_text = ", ".join(str(h) for h in kwargs["hidden_sizes"])
    print(f"best of {args.trials} trials: hidden [{hidden_text}] "
          f"optimizer {kwargs['optimizer']} lr {kwargs['learning_rate']:.6e} "
          f"-> avg test MSE {best.value:.6e}")
    if args.out_metrics or args.out_model:
        result = experiment.run_training(
            dataset, args.arch, scale=True, epochs=args.epochs,
            batch_size=args.batch_size, train_fraction=args.train_fraction,
            seed=args.train_seed, **kwargs)
        if args.out_metrics:
            experiment.save_metrics(result.metrics, args.out_metrics)
        if args.out_model:
            _write_json(args.out_model, model_to_dict(result.model))
    print(f"provenance: sampler_seed={args.seed} train_seed={args.train_seed} "
          f"data={acquisition.dataset_digest(dataset)}")
    return EXIT_OK


def cmd_report(args) -> int:
    missing = [path for path in args.inputs if not Path(path).is_file()]
    if missing:
        raise ValueError(f"missing input file(s): {', '.join(missing)}")
    documents = []
    for path in args.inputs:
        documents.append(json.loads(Path(path).read_text(encoding="utf-8")))
    _write_text(args.out, experiment.build_report(documents))
    print(f"wrote {args.out}: {len(documents)} run(s)")
    return EXIT_OK


def cmd_plot(args) -> int:
    sidecar = args.out + ".csv" if not args.out.endswith(".svg") \
        else args.out[:-4] + ".csv"
    if args.metrics:
        metrics = experiment.load_metrics(args.metrics)
        train_curve = metrics["curves"]["train_mse"]
        test_curve = metrics["curves"]["test_mse"]
        epochs = np.arange(1, len(train_curve) + 1)
        svg = line_chart([("train", epochs, np.asarray(train_curve)),
                          ("test", epochs, np.asarray(test_curve))],
                         xlabel="epoch", ylabel="MSE")
        rows = ["epoch,train_mse,test_mse"]
        rows += [f"{e},{repr(float(a))},{repr(float(b))}"
                 for e, a, b in zip(epochs, train_curve, test_curve)]
    else:
        text = Path(args.preds).read_text(encoding="utf-8")
        lines = [line for line in text.splitlines() if line]
        header = lines[0].split(",")
        if len(header) < 4 or header[0] != "sample" or header[1] != "t":
            raise ValueError(f"{args.preds}: not a predictions file")
        n_targets = (len(header) - 2) // 2
        names = header[2:2 + n_targets]
        data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        if data.shape[1] != 2 + 2 * n_targets:
            raise ValueError(f"{args.preds}: inconsistent column count")
        actual = data[:, 2:2 + n_targets]
        predicted = data[:, 2 + n_targets:]
        svg = torque_panels(data[:, 0], actual, predicted, names)
        rows = [",".join(lines[0].split(","))]
        rows += lines[1:]
    _write_text(args.out, svg)
    _write_text(sidecar, "\n".join(rows) + "\n")
    print(f"wrote {args.out} (+ sidecar {sidecar})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torquelearn",
        description="Joint-torque learning pipeline for a 6-DoF serial arm")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="simulate a sweep campaign to CSV")
    p.add_argument("--robot", help="robot parameter file (default: bundled arm)")
    p.add_argument("--sweep", help="sweep settings file (default: bundled sweep)")
    p.add_argument("--out", required=True, help="output dataset CSV")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("train", help="train one architecture on a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--arch", choices=("single", "multiple", "cascade"), required=True)
    p.add_argument("--scale", dest="scale", action="store_true", default=True)
    p.add_argument("--no-scale", dest="scale", action="store_false")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--hidden", help="hidden sizes, e.g. 30 or 5,15,30")
    p.add_argument("--optimizer", choices=("sgd", "adam", "rmsprop"), default="adam")
    p.add_argument("--lr", type=float, default=1e-3)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--keep-q1", action="store_true",
                   help="keep the base joint position as an input")
    p.add_argument("--drop-joint6", action="store_true",
                   help="drop joint-6 state columns and its torque target")
    p.add_argument("--cumulative-cascade", action="store_true",
                   help="cascade stage c also receives stage a's output")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-model")
    p.add_argument("--out-metrics")
    p.add_argument("--out-preds")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("hpo", help="TPE hyperparameter search")
    p.add_argument("--data", required=True)
    p.add_argument("--arch", choices=("single", "multiple", "cascade"), required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0, help="sampler seed")
    p.add_argument("--train-seed", type=int, default=0,
                   help="seed used for every trial's training run")
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=64)
    p.add_argument("--train-fraction", type=float, default=0.7)
    p.add_argument("--out-study", required=True)
    p.add_argument("--out-metrics", help="also retrain at the best point and save metrics")
    p.add_argument("--out-model", help="also retrain at the best point and save the model")
    p.set_defaults(func=cmd_hpo)

    p = sub.add_parser("report", help="comparison table over runs")
    p.add_argument("inputs", nargs="+", help="metrics/study JSON files")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("plot", help="SVG figure plus CSV sidecar")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--metrics", help="metrics JSON for a loss-curve figure")
    group.add_argument("--preds", help="predictions CSV for torque trace panels")
    p.add_argument("--out", required=True, help="output SVG path")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TrainingDiverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
