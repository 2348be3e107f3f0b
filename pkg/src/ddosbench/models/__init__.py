"""The four classifiers behind a common fit/predict contract.

Every fitted model exposes ``predict(rows) -> Prediction`` (hard labels and
positive-class probability), ``predict_proba(rows)``, ``hyperparameters()``
and ``state()`` for serialization.
"""

from ._common import Prediction, logistic_grad_hess, logistic_loss, sigmoid
from .gbt import GbtModel, GbtParams, fit_gbt, predict_gbt
from .gnb import GnbModel, fit_gnb, predict_gnb
from .knn import DEFAULT_K, KnnModel, fit_knn, predict_knn
from .sgd import SgdConfig, SgdLinearModel, fit_sgd, predict_sgd, sample_objective

MODEL_NAMES = ("GBT", "KNN", "SGD-Linear", "GaussianNB")
KIND_BY_NAME = {"GBT": "gbt", "KNN": "knn", "SGD-Linear": "sgd", "GaussianNB": "gnb"}
NAME_BY_KIND = {v: k for k, v in KIND_BY_NAME.items()}

__all__ = [
    "DEFAULT_K", "GbtModel", "GbtParams", "GnbModel", "KIND_BY_NAME", "KnnModel",
    "MODEL_NAMES", "NAME_BY_KIND", "Prediction", "SgdConfig", "SgdLinearModel",
    "fit_gbt", "fit_gnb", "fit_knn", "fit_sgd", "logistic_grad_hess",
    "logistic_loss", "predict_gbt", "predict_gnb", "predict_knn", "predict_sgd",
    "sample_objective", "sigmoid",
]
