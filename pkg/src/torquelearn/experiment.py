"""End-to-end runs: split, scale, train, measure, and serialize.

Reported MSE numbers live in a *reference standardized space*: target
statistics are always fitted on the raw training targets, and every run's
curves are expressed in those units, whether or not the run itself trained
on scaled data.  This makes scaled and unscaled runs directly comparable.
Each metrics document also carries the equivalent N m^2 numbers.

Serialized artifacts contain no wall-clock data, so re-running a command
with the same seeds reproduces every output file byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .acquisition import Dataset, dataset_digest, split
from .architectures import (ArchitectureSpec, CombinedHistory, TorqueModel, build,
                            predict, train_architecture)
from .hpo import SearchSpace, Study, default_space, run_study
from .nn_core import OptimizerConfig, TrainConfig
from .preprocessing import FeaturePolicy, Standardizer, select_features

DEFAULT_HIDDEN = {"single": (30,), "multiple": (5, 15, 30), "cascade": (30, 30, 30)}


@dataclass
class RunResult:
    model: TorqueModel
    metrics: dict
    history: CombinedHistory
    test_t: np.ndarray
    test_X: np.ndarray        # raw policy-selected features of the test split
    test_Y: np.ndarray        # raw torques of the test split


def run_training(dataset: Dataset, architecture: str, *, scale: bool = True,
                 drop_q1: bool = True, drop_joint6: bool = False,
                 hidden_sizes=None, optimizer: str = "adam",
                 learning_rate: float = 1e-3, epochs: int = 10,
                 batch_size: int = 64, train_fraction: float = 0.7,
                 cumulative_cascade: bool = False, seed: int = 0) -> RunResult:
    """Train one model on a (pre-shuffled) dataset and collect its metrics."""
    policy = FeaturePolicy(drop_q1=drop_q1, drop_joint6=drop_joint6,
                           standardize_targets=scale)
    hidden = tuple(hidden_sizes) if hidden_sizes is not None else DEFAULT_HIDDEN[architecture]

    train_ds, test_ds = split(dataset, train_fraction)
    X_train, Y_train = select_features(train_ds, policy)
    X_test, Y_test = select_features(test_ds, policy)

    # reference target statistics: all reported MSEs are normalized by these
    ref_scaler = Standardizer().fit(Y_train)
    sigma_ref = ref_scaler.scale_

    if scale:
        x_scaler = Standardizer().fit(X_train)
        y_scaler = ref_scaler
        sets = ((x_scaler.transform(X_train), y_scaler.transform(Y_train)),
                (x_scaler.transform(X_test), y_scaler.transform(Y_test)))
    else:
        x_scaler = y_scaler = None
        sets = ((X_train, Y_train), (X_test, Y_test))

    spec = ArchitectureSpec(architecture, hidden, policy, cumulative_cascade)
    model = build(spec)
    model.x_scaler, model.y_scaler = x_scaler, y_scaler
    opt = OptimizerConfig(optimizer, learning_rate)
    tc = TrainConfig(epochs, batch_size, shuffle_each_epoch=True, seed=seed)
    model, subnet_histories, combined = train_architecture(model, sets[0], sets[1], opt, tc)

    digest = dataset_digest(dataset)
    model.provenance = {"dataset_digest": digest, "seed": int(seed),
                        "train_fraction": train_fraction}

    # working space -> reference standardized space
    to_std = np.ones_like(sigma_ref) if scale else 1.0 / sigma_ref ** 2
    test_cols_std = combined.test_mse_per_column * to_std
    train_cols_std = combined.train_mse_per_column * to_std
    test_curve = test_cols_std.mean(axis=1)
    train_curve = train_cols_std.mean(axis=1)
    final_cols_std = test_cols_std[-1]
    final_cols_nm = final_cols_std * sigma_ref ** 2

    metrics = {
        "format": "torquelearn-metrics/1",
        "architecture": architecture,
        "scaled": bool(scale),
        "cumulative_cascade": bool(cumulative_cascade),
        "feature_policy": {"drop_q1": drop_q1, "drop_joint6": drop_joint6,
                           "standardize_targets": scale},
        "hyperparameters": {"hidden_sizes": [int(h) for h in hidden],
                            "optimizer": optimizer,
                            "learning_rate": float(learning_rate),
                            "epochs": int(epochs), "batch_size": int(batch_size),
                            "train_fraction": float(train_fraction)},
        "seed": int(seed),
        "dataset": {"digest": digest, "rows": len(dataset),
                    "train_rows": len(train_ds), "test_rows": len(test_ds)},
        "target_names": list(policy.target_names()),
        "curves": {"train_mse": [float(v) for v in train_curve],
                   "test_mse": [float(v) for v in test_curve]},
        "subnet_curves": {
            name: {"train_mse": [float(v) for v in h.train_mse],
                   "test_mse": [float(v) for v in h.test_mse]}
            for name, h in subnet_histories.items()},
        "avg_test_mse": float(test_curve.mean()),
        "final_test_mse": float(test_curve[-1]),
        "final_test_mse_nm": float(final_cols_nm.mean()),
        "per_joint_final_test_mse": {
            "standardized": [float(v) for v in final_cols_std],
            "newton_meter": [float(v) for v in final_cols_nm]},
    }
    return RunResult(model=model, metrics=metrics, history=combined,
                     test_t=test_ds.t.copy(), test_X=X_test, test_Y=Y_test)


def save_metrics(metrics: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(metrics, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_metrics(path: str | Path) -> dict:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != "torquelearn-metrics/1":
        raise ValueError(f"{path}: not a torquelearn metrics document")
    return payload


def make_objective(dataset: Dataset, architecture: str, *, scale: bool = True,
                   drop_q1: bool = True, drop_joint6: bool = False,
                   epochs: int = 10, batch_size: int = 64,
                   train_fraction: float = 0.7, cumulative_cascade: bool = False):
    """Objective for the TPE study: mean of the per-epoch full test MSE."""

    def objective(params: dict, seed: int) -> float:
        hidden = ([params["hidden"]] if architecture == "single"
                  else [params[f"hidden_{g}"] for g in ("a", "b", "c")])
        result = run_training(dataset, architecture, scale=scale, drop_q1=drop_q1,
                              drop_joint6=drop_joint6, hidden_sizes=hidden,
                              optimizer=params["optimizer"],
                              learning_rate=params["learning_rate"],
                              epochs=epochs, batch_size=batch_size,
                              train_fraction=train_fraction,
                              cumulative_cascade=cumulative_cascade, seed=seed)
        return result.metrics["avg_test_mse"]

    return objective


def hpo_search(dataset: Dataset, architecture: str, n_trials: int, sampler_seed: int,
               train_seed: int, space: SearchSpace | None = None, **fixed) -> Study:
    objective = make_objective(dataset, architecture, **fixed)
    space = space or default_space(architecture)
    return run_study(objective, space, n_trials, sampler_seed,
                     objective_seed=train_seed)


def best_params_as_training_kwargs(study: Study, architecture: str) -> dict:
    best = study.best_trial
    if best is None:
        raise ValueError("study has no completed trial")
    hidden = ([best.params["hidden"]] if architecture == "single"
              else [best.params[f"hidden_{g}"] for g in ("a", "b", "c")])
    return {"hidden_sizes": hidden, "optimizer": best.params["optimizer"],
            "learning_rate": best.params["learning_rate"]}


def predictions_csv_text(result: RunResult) -> str:
    """Actual vs predicted test-set torques, one row per test sample."""
    _, torque = predict(result.model, result.test_X)
    names = result.model.target_names
    header = ("sample,t,"
              + ",".join(names) + ","
              + ",".join(f"{n}_pred" for n in names))
    lines = [header]
    for i in range(result.test_X.shape[0]):
        row = [float(result.test_t[i]), *result.test_Y[i], *torque[i]]
        lines.append(str(i) + "," + ",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


REPORT_COLUMNS = ("arch", "scaling", "avg_test_mse", "full_test_mse",
                  "hidden", "optimizer", "lr", "delta_avg_test_mse")


def build_report(documents: list[dict]) -> str:
    """Comparison table over metrics and study documents.

    One row per document.  Study rows report the best trial and, when a
    unique scaled baseline metrics row with the same architecture exists,
    a delta column (optimized minus baseline average test MSE).
    """
    rows = []
    baselines: dict[str, float] = {}
    for doc in documents:
        if doc.get("format") == "torquelearn-metrics/1" and doc["scaled"]:
            arch = doc["architecture"]
            # only an unambiguous baseline participates in deltas
            baselines[arch] = (None if arch in baselines
                               else doc["avg_test_mse"])
    for doc in documents:
        fmt = doc.get("format")
        if fmt == "torquelearn-metrics/1":
            hp = doc["hyperparameters"]
            rows.append([doc["architecture"],
                         "with" if doc["scaled"] else "without",
                         repr(doc["avg_test_mse"]),
                         repr(doc["final_test_mse"]),
                         ";".join(str(h) for h in hp["hidden_sizes"]),
                         hp["optimizer"], repr(hp["learning_rate"]), ""])
        elif fmt == "torquelearn-study/1":
            best_idx = doc["best_index"]
            if best_idx is None:
                raise ValueError("study document has no completed trial")
            best = doc["trials"][best_idx]
            params = best["params"]
            hidden = ([params["hidden"]] if "hidden" in params
                      else [params[f"hidden_{g}"] for g in ("a", "b", "c")])
            arch = doc.get("architecture", _arch_from_space(doc))
            base = baselines.get(arch)
            delta = "" if base is None else repr(best["value"] - base)
            rows.append([arch, "with", repr(best["value"]), "",
                         ";".join(str(h) for h in hidden),
                         params["optimizer"], repr(params["learning_rate"]), delta])
        else:
            raise ValueError("unrecognized report input document")
    lines = [",".join(REPORT_COLUMNS)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _arch_from_space(doc: dict) -> str:
    names = {d["name"] for d in doc["space"]}
    return "single" if "hidden" in names else "grouped"
