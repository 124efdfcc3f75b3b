"""Polynomial kernel classification by hinge-loss ERM and proximal ADMM."""

from .admm import AdmmParams, AdmmState, IterationTrace, StopReason, hinge_risk, solve
from .dataset import Dataset, MinMaxScaling, split_dataset
from .errors import FpcError
from .features import (CenterScheme, build_design_matrix, feature_dim, generate_centers,
                       kernel_eval)
from .model import EvalReport, FpcModel, evaluate, predict, s_max, select_degree, train
from .persistence import load_csv, read_model, write_csv, write_model
from .prox import hinge_scalar, hinge_vector
from .synthetic import NoiseKind, NoiseSpec, bayes_h, generate_test, generate_toy

__version__ = "0.1.0"

__all__ = [
    "AdmmParams", "AdmmState", "IterationTrace", "StopReason", "hinge_risk", "solve",
    "Dataset", "MinMaxScaling", "split_dataset", "FpcError",
    "CenterScheme", "build_design_matrix", "feature_dim", "generate_centers", "kernel_eval",
    "EvalReport", "FpcModel", "evaluate", "predict", "s_max", "select_degree", "train",
    "load_csv", "read_model", "write_csv", "write_model",
    "hinge_scalar", "hinge_vector",
    "NoiseKind", "NoiseSpec", "bayes_h", "generate_test", "generate_toy",
]
