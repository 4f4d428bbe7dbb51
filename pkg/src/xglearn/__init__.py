"""Workbench for explanatory guided learning on a synthetic rare-class benchmark.

The package bundles a grid-clustered 2-D benchmark generator, an RBF-kernel
SVM trained by an internal SMO solver, clustering-based global explanations,
query-selection strategies (uncertainty sampling, guided learning, random,
simulated XGL annotators), a cross-validated experiment engine, and an HTTP
session service for live human-steered training.
"""

from xglearn.synthdata import Dataset, SyntheticConfig, generate_synthetic, stratified_kfold
from xglearn.learner import SvmHyperParams, SvmModel, svm_fit, predict, decision_values, f1_score
from xglearn.explainer import GlobalExplanation, build_explanation
from xglearn.engine import ExperimentConfig, LearningCurve, run_experiment, run_fold

__all__ = [
    "Dataset",
    "SyntheticConfig",
    "generate_synthetic",
    "stratified_kfold",
    "SvmHyperParams",
    "SvmModel",
    "svm_fit",
    "predict",
    "decision_values",
    "f1_score",
    "GlobalExplanation",
    "build_explanation",
    "ExperimentConfig",
    "LearningCurve",
    "run_experiment",
    "run_fold",
]

__version__ = "0.1.0"
