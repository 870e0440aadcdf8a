"""torquelearn: joint-torque identification for a 6-DoF serial arm.

A rigid-body model plays the role of the physical robot: it generates
(state, torque) datasets via simulated grid-sweep campaigns, neural
regressors learn the inverse map tau = f(q, dq, ddq), and a TPE sampler
tunes their hyperparameters.  See README.md for the full workflow.
"""

from .acquisition import (Dataset, SweepSpec, default_sweep, generate_grid_sweep,
                          load_dataset, load_sweep, shuffle, split)
from .architectures import (ArchitectureSpec, TorqueModel, build, predict,
                            train_architecture)
from .dynamics import (JointState, friction_torque, gravity_torque,
                       inverse_dynamics, inverse_dynamics_batch,
                       kinetic_energy, mass_matrix, potential_energy)
from .estimator import TorqueRegressor
from .hpo import (CatDim, FloatDim, IntDim, SearchSpace, Study, Trial,
                  default_space, run_study, suggest)
from .nn_core import (MLPConfig, MLPParams, OptimizerConfig, TrainConfig,
                      TrainingDiverged, evaluate, forward, init_params,
                      loss_and_grad, train)
from .preprocessing import FeaturePolicy, Standardizer, select_features
from .robot import RobotModel, default_robot, load_robot, save_robot

__version__ = "0.1.0"

__all__ = [
    "Dataset", "SweepSpec", "default_sweep", "generate_grid_sweep",
    "load_dataset", "load_sweep", "shuffle", "split",
    "ArchitectureSpec", "TorqueModel", "build", "predict", "train_architecture",
    "JointState", "friction_torque", "gravity_torque", "inverse_dynamics",
    "inverse_dynamics_batch", "kinetic_energy", "mass_matrix", "potential_energy",
    "TorqueRegressor",
    "CatDim", "FloatDim", "IntDim", "SearchSpace", "Study", "Trial",
    "default_space", "run_study", "suggest",
    "MLPConfig", "MLPParams", "OptimizerConfig", "TrainConfig",
    "TrainingDiverged", "evaluate", "forward", "init_params", "loss_and_grad",
    "train",
    "FeaturePolicy", "Standardizer", "select_features",
    "RobotModel", "default_robot", "load_robot", "save_robot",
    "__version__",
]
