"""Classifiers, cross-validation and model selection."""
from .dataset import UNLABELED, LabeledDataset, Standardizer
from .model import DEFAULTS, KINDS, TrainedModel, canonical_kind, resolve_hyperparameters, train
from .validation import (CvReport, FoldResult, class_auc, cross_validate, macro_ovr_auc,
                         stratified_kfold)


def predict_scores(model: TrainedModel, x):
    return model.predict_scores(x)


__all__ = [
    "UNLABELED", "LabeledDataset", "Standardizer", "DEFAULTS", "KINDS", "TrainedModel",
    "canonical_kind", "resolve_hyperparameters", "train", "predict_scores", "CvReport",
    "FoldResult", "class_auc", "cross_validate", "macro_ovr_auc", "stratified_kfold",
]
