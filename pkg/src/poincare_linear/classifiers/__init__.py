"""Binary and one-vs-rest linear classifiers on the Poincare ball."""

from ..dataset import LabeledDataset, MarginReport, check_margin_assumption
from .multiclass import ALGORITHMS, MultiClassModel, ovr_predict, ovr_proba, ovr_train, train_binary
from .perceptron import (
    BoundNotComputable,
    PerceptronModel,
    SecondOrderState,
    perceptron_bound,
    perceptron_train,
    scaled_tangent,
    second_order_bound,
    second_order_train,
)
from .platt import PlattParams, platt_fit
from .serialize import SavedModel, load_model, model_from_dict, model_to_dict, save_model
from .svm import SvmModel, accuracy, decision_scores, euclidean_svm_train, predict_binary, svm_objective, svm_train
