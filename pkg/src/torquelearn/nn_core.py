"""From-scratch multilayer perceptron for torque regression.

Dense layers with Leaky ReLU on every hidden layer and a linear output
(targets are signed torques).  Training is plain mini-batch backpropagation
under one of three first-order update rules (SGD, RMSProp, Adam), with the
loss being the mean squared error over all n*d output entries of a batch.

Determinism contract: weight initialization depends only on the MLPConfig
seed (He-style normals, variance 2/fan_in, zero biases) and batch order only
on the TrainConfig seed, so equal seeds reproduce runs bitwise.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .validation import as_matrix, require_rows_match


class TrainingDiverged(RuntimeError):
    """Raised when an epoch ends with a non-finite loss."""

    def __init__(self, epoch: int, detail: str = "loss is not finite"):
        super().__init__(f"training diverged at epoch {epoch}: {detail}")
        self.epoch = epoch


@dataclass(frozen=True)
class MLPConfig:
    layer_sizes: tuple[int, ...]      # (input, hidden..., output)
    leaky_slope: float = 0.01
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "layer_sizes", tuple(int(s) for s in self.layer_sizes))
        if len(self.layer_sizes) < 3:
            raise ValueError("need at least one hidden layer")
        if any(s < 1 for s in self.layer_sizes):
            raise ValueError("all layer sizes must be >= 1")
        if not 0.0 < self.leaky_slope < 1.0:
            raise ValueError("leaky slope must be in (0, 1)")


@dataclass
class MLPParams:
    """Per-layer weights (out x in) and biases, float64."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    leaky_slope: float = 0.01

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.weights[0].shape[1], *(w.shape[0] for w in self.weights))

    def copy(self) -> "MLPParams":
        return MLPParams([w.copy() for w in self.weights],
                         [b.copy() for b in self.biases], self.leaky_slope)

    def blocks(self):
        """Flat iteration over all parameter arrays (weights then bias per layer)."""
        for w, b in zip(self.weights, self.biases):
            yield w
            yield b


def init_params(config: MLPConfig) -> MLPParams:
    rng = np.random.default_rng(config.seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(config.layer_sizes[:-1], config.layer_sizes[1:]):
        weights.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return MLPParams(weights, biases, config.leaky_slope)


def _leaky(z: np.ndarray, slope: float) -> np.ndarray:
    return np.where(z > 0.0, z, slope * z)


def forward(params: MLPParams, x) -> np.ndarray:
    """Network output; accepts a single row (1-D) or a batch (2-D)."""
    arr = np.asarray(x, dtype=np.float64)
    single = arr.ndim == 1
    a = arr[None, :] if single else arr
    if a.shape[1] != params.weights[0].shape[1]:
        raise ValueError(f"input has {a.shape[1]} features, "
                         f"network expects {params.weights[0].shape[1]}")
    last = len(params.weights) - 1
    for l, (w, b) in enumerate(zip(params.weights, params.biases)):
        a = a @ w.T + b
        if l < last:
            a = _leaky(a, params.leaky_slope)
    return a[0] if single else a


def loss_and_grad(params: MLPParams, X, Y) -> tuple[float, MLPParams]:
    """Batch MSE and its gradient, gradients shaped like the parameters.

    The loss averages squared errors over every output entry (n rows times
    d output columns); gradients come from reverse-mode accumulation.
    """
    X = as_matrix("X", X)
    Y = as_matrix("Y", Y)
    require_rows_match("X", X, "Y", Y)
    if X.shape[0] == 0:
        raise ValueError("empty batch")

    last = len(params.weights) - 1
    activations = [X]
    pre_acts = []
    a = X
    for l, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = a @ w.T + b
        pre_acts.append(z)
        a = _leaky(z, params.leaky_slope) if l < last else z
        activations.append(a)

    diff = activations[-1] - Y
    loss = float(np.mean(diff * diff))

    grad_w = [np.empty_like(w) for w in params.weights]
    grad_b = [np.empty_like(b) for b in params.biases]
    delta = 2.0 * diff / diff.size
    for l in range(last, -1, -1):
        grad_w[l] = delta.T @ activations[l]
        grad_b[l] = delta.sum(axis=0)
        if l > 0:
            delta = delta @ params.weights[l]
            delta = delta * np.where(pre_acts[l - 1] > 0.0, 1.0, params.leaky_slope)
    return loss, MLPParams(grad_w, grad_b, params.leaky_slope)


@dataclass(frozen=True)
class OptimizerConfig:
    kind: str                        # "sgd" | "adam" | "rmsprop"
    learning_rate: float
    beta1: float = 0.9               # Adam
    beta2: float = 0.999             # Adam
    rho: float = 0.99                # RMSProp decay
    eps: float = 1e-8

    def __post_init__(self):
        if self.kind not in ("sgd", "adam", "rmsprop"):
            raise ValueError(f"unknown optimizer kind {self.kind!r}")
        if self.learning_rate <= 0.0:
            raise ValueError("learning rate must be > 0")
        for name in ("beta1", "beta2", "rho"):
            if not 0.0 < getattr(self, name) < 1.0:
                raise ValueError(f"{name} must be in (0, 1)")


class SGD:
    def __init__(self, config: OptimizerConfig):
        self.lr = config.learning_rate

    def step(self, params: MLPParams, grads: MLPParams) -> None:
        for p, g in zip(params.blocks(), grads.blocks()):
            p -= self.lr * g


class RMSProp:
    def __init__(self, config: OptimizerConfig):
        self.lr = config.learning_rate
        self.rho = config.rho
        self.eps = config.eps
        self.acc: list[np.ndarray] | None = None

    def step(self, params: MLPParams, grads: MLPParams) -> None:
        if self.acc is None:
            self.acc = [np.zeros_like(g) for g in grads.blocks()]
        for p, g, a in zip(params.blocks(), grads.blocks(), self.acc):
            a *= self.rho
            a += (1.0 - self.rho) * g * g
            p -= self.lr * g / np.sqrt(a + self.eps)


class Adam:
    def __init__(self, config: OptimizerConfig):
        self.lr = config.learning_rate
        self.beta1 = config.beta1
        self.beta2 = config.beta2
        self.eps = config.eps
        self.t = 0
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None

    def step(self, params: MLPParams, grads: MLPParams) -> None:
        if self.m is None:
            self.m = [np.zeros_like(g) for g in grads.blocks()]
            self.v = [np.zeros_like(g) for g in grads.blocks()]
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for p, g, m, v in zip(params.blocks(), grads.blocks(), self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def make_optimizer(config: OptimizerConfig):
    return {"sgd": SGD, "rmsprop": RMSProp, "adam": Adam}[config.kind](config)


@dataclass(frozen=True)
class TrainConfig:
    epochs: int
    batch_size: int
    shuffle_each_epoch: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size < 1:
            raise ValueError("batch size must be >= 1")


@dataclass
class TrainHistory:
    """Per-epoch metrics, recorded on the full train/test sets after each
    epoch's parameter updates.  MSE values are in the training target space."""

    train_mse: list[float] = field(default_factory=list)
    test_mse: list[float] = field(default_factory=list)
    train_mse_per_column: list[np.ndarray] = field(default_factory=list)
    test_mse_per_column: list[np.ndarray] = field(default_factory=list)
    epoch_seconds: list[float] = field(default_factory=list)


def evaluate(params: MLPParams, X, Y) -> tuple[float, np.ndarray]:
    """MSE over all entries plus the per-output-column MSE vector."""
    X = as_matrix("X", X)
    Y = as_matrix("Y", Y)
    require_rows_match("X", X, "Y", Y)
    if X.shape[0] == 0:
        raise ValueError("empty evaluation set")
    diff = forward(params, X) - Y
    per_column = np.mean(diff * diff, axis=0)
    return float(per_column.mean()), per_column


def train(config: MLPConfig, train_set, test_set, opt_config: OptimizerConfig,
          train_config: TrainConfig) -> tuple[MLPParams, TrainHistory]:
    """Mini-batch training loop; returns the final parameters and history.

    Raises TrainingDiverged (naming the epoch) as soon as the full-train
    loss stops being finite.
    """
    X_train, Y_train = (as_matrix("X_train", train_set[0]),
                        as_matrix("Y_train", train_set[1]))
    X_test, Y_test = (as_matrix("X_test", test_set[0]),
                      as_matrix("Y_test", test_set[1]))
    require_rows_match("X_train", X_train, "Y_train", Y_train)
    require_rows_match("X_test", X_test, "Y_test", Y_test)
    n = X_train.shape[0]
    if train_config.batch_size > n:
        raise ValueError(f"batch size {train_config.batch_size} exceeds "
                         f"train set size {n}")

    params = init_params(config)
    optimizer = make_optimizer(opt_config)
    rng = np.random.default_rng(train_config.seed)
    history = TrainHistory()

    for epoch in range(1, train_config.epochs + 1):
        started = time.perf_counter()
        order = rng.permutation(n) if train_config.shuffle_each_epoch else np.arange(n)
        for lo in range(0, n, train_config.batch_size):
            idx = order[lo:lo + train_config.batch_size]
            _, grads = loss_and_grad(params, X_train[idx], Y_train[idx])
            optimizer.step(params, grads)
        train_loss, train_cols = evaluate(params, X_train, Y_train)
        test_loss, test_cols = evaluate(params, X_test, Y_test)
        if not np.isfinite(train_loss):
            raise TrainingDiverged(epoch)
        history.train_mse.append(train_loss)
        history.test_mse.append(test_loss)
        history.train_mse_per_column.append(train_cols)
        history.test_mse_per_column.append(test_cols)
        history.epoch_seconds.append(time.perf_counter() - started)
    return params, history
