"""The three torque-model assemblies over the joint groups {1}, {2,3}, {4,5,6}.

single    one network mapping every retained state column to every torque.
multiple  one independent network per group; no group reads another's inputs.
cascade   like multiple, but each network's *predictions* are appended to the
          next network's inputs (a -> b -> c), so information flows strictly
          downstream.  By default net c receives only net b's outputs; the
          cumulative variant additionally feeds net a's output to net c.

Subnets are trained with no gradient flow across boundaries: a cascade stage
trains against its own targets given the already-trained upstream predictions
on the same rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .acquisition import GROUP_JOINTS, GROUP_ORDER
from .nn_core import (MLPConfig, MLPParams, OptimizerConfig, TrainConfig,
                      TrainHistory, evaluate, forward, init_params, train)
from .preprocessing import FeaturePolicy, Standardizer
from .validation import as_matrix

ARCHITECTURES = ("single", "multiple", "cascade")
LEAKY_SLOPE = 0.01


@dataclass(frozen=True)
class ArchitectureSpec:
    kind: str
    hidden_sizes: tuple[int, ...]     # 1 value for single, 3 for multiple/cascade
    policy: FeaturePolicy = FeaturePolicy()
    cumulative_cascade: bool = False

    def __post_init__(self):
        object.__setattr__(self, "hidden_sizes",
                           tuple(int(h) for h in self.hidden_sizes))
        if self.kind not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.kind!r}")
        expected = 1 if self.kind == "single" else 3
        if len(self.hidden_sizes) != expected:
            raise ValueError(f"{self.kind} architecture needs {expected} hidden "
                             f"size(s), got {len(self.hidden_sizes)}")
        if any(h < 1 for h in self.hidden_sizes):
            raise ValueError("hidden sizes must be >= 1")


@dataclass
class SubnetWiring:
    """Where one subnet reads its inputs and writes its outputs.

    feature_idx indexes the policy-selected feature columns; pred_idx and
    output_idx index the policy's target columns (pred_idx names upstream
    predictions that are spliced into this subnet's input).
    """

    name: str
    feature_idx: tuple[int, ...]
    pred_idx: tuple[int, ...]
    output_idx: tuple[int, ...]
    layer_sizes: tuple[int, ...]

    @property
    def n_inputs(self) -> int:
        return len(self.feature_idx) + len(self.pred_idx)


@dataclass
class TorqueModel:
    """An (optionally trained) assembly: wiring, subnets and scalers."""

    spec: ArchitectureSpec
    wirings: list[SubnetWiring]
    nets: list[MLPParams | None]
    x_scaler: Standardizer | None = None
    y_scaler: Standardizer | None = None
    provenance: dict = field(default_factory=dict)

    @property
    def trained(self) -> bool:
        return all(net is not None for net in self.nets)

    @property
    def feature_names(self) -> tuple[str, ...]:
        return self.spec.policy.feature_names()

    @property
    def target_names(self) -> tuple[str, ...]:
        return self.spec.policy.target_names()


def _group_feature_idx(policy: FeaturePolicy, joints) -> tuple[int, ...]:
    names = policy.feature_names()
    wanted = [f"{kind}{j + 1}" for j in joints for kind in ("q", "dq", "ddq")]
    return tuple(names.index(n) for n in wanted if n in names)


def _group_target_idx(policy: FeaturePolicy, joints) -> tuple[int, ...]:
    names = policy.target_names()
    wanted = [f"tau{j + 1}" for j in joints]
    return tuple(names.index(n) for n in wanted if n in names)


def build(spec: ArchitectureSpec) -> TorqueModel:
    """Assemble the untrained model with its full wiring resolved."""
    policy = spec.policy
    wirings: list[SubnetWiring] = []
    if spec.kind == "single":
        n_in = policy.n_inputs
        n_out = policy.n_targets
        wirings.append(SubnetWiring("all", tuple(range(n_in)), (), tuple(range(n_out)),
                                    (n_in, spec.hidden_sizes[0], n_out)))
    else:
        upstream: tuple[int, ...] = ()
        carried: tuple[int, ...] = ()
        for hidden, group in zip(spec.hidden_sizes, GROUP_ORDER):
            feat = _group_feature_idx(policy, GROUP_JOINTS[group])
            outputs = _group_target_idx(policy, GROUP_JOINTS[group])
            if spec.kind == "cascade":
                pred = tuple(carried) + upstream if spec.cumulative_cascade else upstream
            else:
                pred = ()
            wirings.append(SubnetWiring(group, feat, pred, outputs,
                                        (len(feat) + len(pred), hidden, len(outputs))))
            if spec.cumulative_cascade:
                carried = tuple(carried) + upstream
            upstream = outputs
    return TorqueModel(spec=spec, wirings=wirings, nets=[None] * len(wirings))


@dataclass
class CombinedHistory:
    """Assembly-level per-epoch curves in the training target space.

    Per-epoch values are the column-count-weighted means of the subnet
    histories, i.e. exactly the MSE over all predicted torque columns.
    """

    train_mse: list[float]
    test_mse: list[float]
    train_mse_per_column: np.ndarray   # (epochs, n_targets)
    test_mse_per_column: np.ndarray


def train_architecture(model: TorqueModel, train_set, test_set,
                       opt_config: OptimizerConfig, train_config: TrainConfig,
                       ) -> tuple[TorqueModel, dict[str, TrainHistory], CombinedHistory]:
    """Train every subnet; cascade stages are a strict pipeline.

    ``train_set``/``test_set`` are (X, Y) in the model's working space
    (already feature-selected, already scaled when scaling is on).  Subnet k
    derives its init seed as seed+k and its batch seed as seed+100+k from the
    TrainConfig seed.
    """
    X_train, Y_train = as_matrix("X_train", train_set[0]), as_matrix("Y_train", train_set[1])
    X_test, Y_test = as_matrix("X_test", test_set[0]), as_matrix("Y_test", test_set[1])
    n_targets = len(model.target_names)

    preds_train = np.zeros((X_train.shape[0], n_targets))
    preds_test = np.zeros((X_test.shape[0], n_targets))
    histories: dict[str, TrainHistory] = {}

    for k, wiring in enumerate(model.wirings):
        Xk_train = _subnet_input(X_train, preds_train, wiring)
        Xk_test = _subnet_input(X_test, preds_test, wiring)
        Yk_train = Y_train[:, wiring.output_idx]
        Yk_test = Y_test[:, wiring.output_idx]
        config = MLPConfig(wiring.layer_sizes, LEAKY_SLOPE, seed=train_config.seed + k)
        subnet_tc = TrainConfig(train_config.epochs, train_config.batch_size,
                                train_config.shuffle_each_epoch,
                                seed=train_config.seed + 100 + k)
        params, history = train(config, (Xk_train, Yk_train), (Xk_test, Yk_test),
                                opt_config, subnet_tc)
        model.nets[k] = params
        histories[wiring.name] = history
        preds_train[:, wiring.output_idx] = forward(params, Xk_train)
        preds_test[:, wiring.output_idx] = forward(params, Xk_test)

    combined = _combine_histories(model, histories, train_config.epochs, n_targets)
    return model, histories, combined


def _subnet_input(X: np.ndarray, preds: np.ndarray, wiring: SubnetWiring) -> np.ndarray:
    if wiring.pred_idx:
        return np.hstack([preds[:, wiring.pred_idx], X[:, wiring.feature_idx]])
    return X[:, wiring.feature_idx]


def _combine_histories(model: TorqueModel, histories: dict[str, TrainHistory],
                       epochs: int, n_targets: int) -> CombinedHistory:
    train_cols = np.zeros((epochs, n_targets))
    test_cols = np.zeros((epochs, n_targets))
    for wiring in model.wirings:
        h = histories[wiring.name]
        train_cols[:, wiring.output_idx] = np.vstack(h.train_mse_per_column)
        test_cols[:, wiring.output_idx] = np.vstack(h.test_mse_per_column)
    return CombinedHistory(
        train_mse=[float(v) for v in train_cols.mean(axis=1)],
        test_mse=[float(v) for v in test_cols.mean(axis=1)],
        train_mse_per_column=train_cols,
        test_mse_per_column=test_cols,
    )


def predict(model: TorqueModel, X) -> tuple[np.ndarray, np.ndarray]:
    """Predicted torques for policy-ordered raw feature rows.

    Returns (working-space prediction, torque in N m).  For unscaled models
    the two are identical.  Cascade wiring feeds each stage's own predictions
    forward, exactly as during training.
    """
    if not model.trained:
        raise ValueError("model is not trained")
    X = as_matrix("X", X, n_cols=len(model.feature_names))
    Xs = model.x_scaler.transform(X) if model.x_scaler is not None else X
    preds = np.zeros((X.shape[0], len(model.target_names)))
    for wiring, params in zip(model.wirings, model.nets):
        preds[:, wiring.output_idx] = forward(params, _subnet_input(Xs, preds, wiring))
    torque = model.y_scaler.inverse_transform(preds) if model.y_scaler is not None else preds
    return preds, torque


def evaluate_architecture(model: TorqueModel, X, Y_raw) -> tuple[float, np.ndarray]:
    """Working-space MSE of the assembled prediction against raw targets."""
    preds, _ = predict(model, X)
    Y = model.y_scaler.transform(Y_raw) if model.y_scaler is not None else np.asarray(Y_raw)
    diff = preds - Y
    per_column = np.mean(diff * diff, axis=0)
    return float(per_column.mean()), per_column


def model_to_dict(model: TorqueModel) -> dict:
    if not model.trained:
        raise ValueError("cannot serialize an untrained model")
    return {
        "format": "torquelearn-model/1",
        "architecture": model.spec.kind,
        "hidden_sizes": list(model.spec.hidden_sizes),
        "cumulative_cascade": model.spec.cumulative_cascade,
        "feature_policy": {
            "drop_q1": model.spec.policy.drop_q1,
            "drop_joint6": model.spec.policy.drop_joint6,
            "standardize_targets": model.spec.policy.standardize_targets,
        },
        "feature_names": list(model.feature_names),
        "target_names": list(model.target_names),
        "subnets": [
            {
                "name": w.name,
                "feature_idx": list(w.feature_idx),
                "pred_idx": list(w.pred_idx),
                "output_idx": list(w.output_idx),
                "layer_sizes": list(w.layer_sizes),
                "leaky_slope": net.leaky_slope,
                "weights": [[[float(v) for v in row] for row in mat] for mat in net.weights],
                "biases": [[float(v) for v in vec] for vec in net.biases],
            }
            for w, net in zip(model.wirings, model.nets)
        ],
        "x_scaler": model.x_scaler.to_dict() if model.x_scaler is not None else None,
        "y_scaler": model.y_scaler.to_dict() if model.y_scaler is not None else None,
        "provenance": model.provenance,
    }


def model_from_dict(payload: dict) -> TorqueModel:
    if payload.get("format") != "torquelearn-model/1":
        raise ValueError("not a torquelearn model artifact")
    policy = FeaturePolicy(**payload["feature_policy"])
    spec = ArchitectureSpec(payload["architecture"], tuple(payload["hidden_sizes"]),
                            policy, payload["cumulative_cascade"])
    wirings, nets = [], []
    for sub in payload["subnets"]:
        wirings.append(SubnetWiring(sub["name"], tuple(sub["feature_idx"]),
                                    tuple(sub["pred_idx"]), tuple(sub["output_idx"]),
                                    tuple(sub["layer_sizes"])))
        nets.append(MLPParams([np.asarray(m, dtype=np.float64) for m in sub["weights"]],
                              [np.asarray(v, dtype=np.float64) for v in sub["biases"]],
                              sub["leaky_slope"]))
    x_scaler = Standardizer.from_dict(payload["x_scaler"]) if payload["x_scaler"] else None
    y_scaler = Standardizer.from_dict(payload["y_scaler"]) if payload["y_scaler"] else None
    return TorqueModel(spec=spec, wirings=wirings, nets=nets,
                       x_scaler=x_scaler, y_scaler=y_scaler,
                       provenance=payload.get("provenance", {}))
