"""Tree-structured Parzen estimator for hyperparameter search.

Each suggestion models, per dimension independently, the density l(x) of the
best gamma-fraction of completed trials and g(x) of the rest, then returns
the candidate (drawn from l) with the largest l(x)/g(x).  Continuous and
log-scaled dimensions use truncated Gaussian kernels, one per observation
plus a bounds-wide prior kernel; categorical dimensions use re-weighted
category counts with an additive prior.  Integer dimensions are sampled
continuously, then rounded and clamped.

Constants (chosen for a 10-trial budget, see the decisions in README):

    n_startup      3      uniform trials before the model kicks in
    gamma          0.25   fraction of trials labelled "good"
    n_candidates   24     draws from l(x) scored per suggestion
    bandwidth      max distance to the neighbouring observations, with the
                   dimension bounds acting as virtual neighbours, clipped
                   to [width/100, width]

The good/bad split is rank-based, so any monotone transformation of the
objective leaves suggestions unchanged.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .nn_core import TrainingDiverged

N_STARTUP = 3
GAMMA = 0.25
N_CANDIDATES = 24


@dataclass(frozen=True)
class FloatDim:
    name: str
    low: float
    high: float
    log: bool = False

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"{self.name}: bounds must satisfy low < high")
        if self.log and self.low <= 0.0:
            raise ValueError(f"{self.name}: log dimension needs low > 0")


@dataclass(frozen=True)
class IntDim:
    name: str
    low: int
    high: int

    def __post_init__(self):
        if not self.low < self.high:
            raise ValueError(f"{self.name}: bounds must satisfy low < high")


@dataclass(frozen=True)
class CatDim:
    name: str
    choices: tuple[str, ...]

    def __post_init__(self):
        if len(self.choices) < 2:
            raise ValueError(f"{self.name}: need at least two choices")


@dataclass(frozen=True)
class SearchSpace:
    dimensions: tuple

    def __post_init__(self):
        if not self.dimensions:
            raise ValueError("search space is empty")
        names = [d.name for d in self.dimensions]
        if len(set(names)) != len(names):
            raise ValueError("dimension names must be unique")


@dataclass
class Trial:
    number: int
    params: dict
    value: float | None
    status: str                      # "complete" | "failed"
    seed: int
    wall_seconds: float = 0.0


@dataclass
class Study:
    space: SearchSpace
    seed: int
    trials: list[Trial] = field(default_factory=list)
    rng: np.random.Generator = None  # sampler state, owned by the study loop

    def __post_init__(self):
        if self.rng is None:
            self.rng = np.random.default_rng(self.seed)

    def completed(self) -> list[Trial]:
        return [t for t in self.trials if t.status == "complete"]

    @property
    def best_index(self) -> int | None:
        """Index of the minimal-objective completed trial (first on ties)."""
        best = None
        for t in self.trials:
            if t.status != "complete":
                continue
            if best is None or t.value < self.trials[best].value:
                best = t.number
        return best

    @property
    def best_trial(self) -> Trial | None:
        idx = self.best_index
        return None if idx is None else self.trials[idx]


class _Parzen:
    """1-D mixture of truncated Gaussians over [low, high]."""

    def __init__(self, values: np.ndarray, low: float, high: float):
        width = high - low
        means = [0.5 * (low + high)]          # bounds-wide prior kernel
        sigmas = [width]
        order = np.argsort(values)
        sorted_vals = np.asarray(values, dtype=np.float64)[order]
        extended = np.concatenate([[low], sorted_vals, [high]])
        for k in range(1, len(extended) - 1):
            bw = max(extended[k] - extended[k - 1], extended[k + 1] - extended[k])
            means.append(extended[k])
            sigmas.append(min(max(bw, width / 100.0), width))
        self.low, self.high = low, high
        self.means = np.asarray(means)
        self.sigmas = np.asarray(sigmas)
        # truncation mass of each kernel on [low, high]
        self.log_z = np.log(_norm_cdf((high - self.means) / self.sigmas)
                            - _norm_cdf((low - self.means) / self.sigmas))

    def log_pdf(self, x: np.ndarray) -> np.ndarray:
        z = (x[:, None] - self.means[None, :]) / self.sigmas[None, :]
        log_kernel = (-0.5 * z * z
                      - np.log(self.sigmas[None, :])
                      - 0.5 * math.log(2.0 * math.pi)
                      - self.log_z[None, :])
        log_kernel -= math.log(len(self.means))
        peak = log_kernel.max(axis=1, keepdims=True)
        return (peak + np.log(np.exp(log_kernel - peak).sum(axis=1, keepdims=True)))[:, 0]

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        out = np.empty(n)
        kernel = rng.integers(0, len(self.means), size=n)
        for i in range(n):
            mu, sigma = self.means[kernel[i]], self.sigmas[kernel[i]]
            while True:  # rejection against the bounds; acceptance >= ~0.3
                draw = rng.normal(mu, sigma)
                if self.low <= draw <= self.high:
                    out[i] = draw
                    break
        return out


def _norm_cdf(z):
    return 0.5 * (1.0 + np.vectorize(math.erf)(np.asarray(z, dtype=np.float64) / math.sqrt(2.0)))


def _split_completed(completed: list[Trial]) -> tuple[list[Trial], list[Trial]]:
    values = np.array([t.value for t in completed])
    order = np.argsort(values, kind="stable")
    n_good = max(1, math.ceil(GAMMA * len(completed)))
    good = [completed[i] for i in order[:n_good]]
    bad = [completed[i] for i in order[n_good:]]
    return good, bad


def _suggest_numeric(dim, good_vals, bad_vals, rng) -> float:
    if isinstance(dim, IntDim):
        low, high, log = float(dim.low), float(dim.high), False
    else:
        low, high, log = dim.low, dim.high, dim.log
    if log:
        low, high = math.log(low), math.log(high)
        good_vals = np.log(good_vals)
        bad_vals = np.log(bad_vals)
    density_good = _Parzen(good_vals, low, high)
    density_bad = _Parzen(bad_vals, low, high)
    candidates = density_good.sample(rng, N_CANDIDATES)
    score = density_good.log_pdf(candidates) - density_bad.log_pdf(candidates)
    choice = float(candidates[int(np.argmax(score))])
    return math.exp(choice) if log else choice


def _suggest_categorical(dim: CatDim, good, bad, rng) -> str:
    def weights(trials):
        counts = np.ones(len(dim.choices))  # additive prior
        for t in trials:
            counts[dim.choices.index(t)] += 1.0
        return counts / counts.sum()

    p_good = weights(good)
    p_bad = weights(bad)
    idx = rng.choice(len(dim.choices), size=N_CANDIDATES, p=p_good)
    score = np.log(p_good[idx]) - np.log(p_bad[idx])
    return dim.choices[int(idx[int(np.argmax(score))])]


def _sample_uniform(dim, rng):
    if isinstance(dim, IntDim):
        return int(rng.integers(dim.low, dim.high + 1))
    if isinstance(dim, CatDim):
        return str(dim.choices[rng.integers(0, len(dim.choices))])
    if dim.log:
        return float(math.exp(rng.uniform(math.log(dim.low), math.log(dim.high))))
    return float(rng.uniform(dim.low, dim.high))


def suggest(study: Study, space: SearchSpace | None = None) -> dict:
    """Next parameter assignment; uniform during startup, TPE afterwards."""
    space = space or study.space
    completed = study.completed()
    rng = study.rng
    if len(completed) < N_STARTUP:
        return {dim.name: _sample_uniform(dim, rng) for dim in space.dimensions}

    good, bad = _split_completed(completed)
    assignment = {}
    for dim in space.dimensions:
        good_vals = [t.params[dim.name] for t in good]
        bad_vals = [t.params[dim.name] for t in bad]
        if isinstance(dim, CatDim):
            assignment[dim.name] = _suggest_categorical(dim, good_vals, bad_vals, rng)
        else:
            value = _suggest_numeric(dim, np.asarray(good_vals, dtype=np.float64),
                                     np.asarray(bad_vals, dtype=np.float64), rng)
            if isinstance(dim, IntDim):
                value = int(min(max(round(value), dim.low), dim.high))
            assignment[dim.name] = value
    return assignment


def run_study(objective, space: SearchSpace, n_trials: int, seed: int,
              objective_seed: int = 0) -> Study:
    """Sequential suggest / evaluate / record loop.

    ``objective(params, seed)`` must be deterministic for fixed arguments and
    may raise TrainingDiverged (or return a non-finite value) to mark the
    trial failed; failed trials are excluded from density fitting.  A study
    whose trials all failed carries best_index None.
    """
    study = Study(space=space, seed=seed)
    for number in range(n_trials):
        params = suggest(study, space)
        started = time.perf_counter()
        try:
            value = float(objective(params, objective_seed))
            status = "complete" if math.isfinite(value) else "failed"
        except TrainingDiverged:
            value, status = None, "failed"
        wall = time.perf_counter() - started
        if status == "failed":
            value = None
        study.trials.append(Trial(number=number, params=params, value=value,
                                  status=status, seed=objective_seed,
                                  wall_seconds=wall))
    return study


def default_space(architecture: str) -> SearchSpace:
    """Hidden nodes 10..50 (per subnet), optimizer kind, log learning rate."""
    if architecture == "single":
        hidden = [IntDim("hidden", 10, 50)]
    else:
        hidden = [IntDim(f"hidden_{g}", 10, 50) for g in ("a", "b", "c")]
    return SearchSpace(tuple(hidden) + (
        CatDim("optimizer", ("sgd", "adam", "rmsprop")),
        FloatDim("learning_rate", 1e-4, 1e-1, log=True),
    ))


def _dim_to_dict(dim) -> dict:
    if isinstance(dim, IntDim):
        return {"type": "int", "name": dim.name, "low": dim.low, "high": dim.high}
    if isinstance(dim, CatDim):
        return {"type": "cat", "name": dim.name, "choices": list(dim.choices)}
    return {"type": "float", "name": dim.name, "low": dim.low, "high": dim.high,
            "log": dim.log}


def _dim_from_dict(payload: dict):
    kind = payload["type"]
    if kind == "int":
        return IntDim(payload["name"], payload["low"], payload["high"])
    if kind == "cat":
        return CatDim(payload["name"], tuple(payload["choices"]))
    return FloatDim(payload["name"], payload["low"], payload["high"], payload["log"])


def study_to_dict(study: Study) -> dict:
    """Serializable view; wall-clock times are deliberately left out so the
    file is byte-identical across reruns with the same seeds."""
    return {
        "format": "torquelearn-study/1",
        "seed": study.seed,
        "space": [_dim_to_dict(d) for d in study.space.dimensions],
        "trials": [
            {"number": t.number, "params": t.params, "value": t.value,
             "status": t.status, "seed": t.seed}
            for t in study.trials
        ],
        "best_index": study.best_index,
    }


def study_from_dict(payload: dict) -> Study:
    if payload.get("format") != "torquelearn-study/1":
        raise ValueError("not a torquelearn study artifact")
    space = SearchSpace(tuple(_dim_from_dict(d) for d in payload["space"]))
    study = Study(space=space, seed=payload["seed"])
    for t in payload["trials"]:
        study.trials.append(Trial(number=t["number"], params=t["params"],
                                  value=t["value"], status=t["status"],
                                  seed=t["seed"]))
    return study


def save_study(study: Study, path: str | Path) -> None:
    Path(path).write_text(json.dumps(study_to_dict(study), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_study(path: str | Path) -> Study:
    return study_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
