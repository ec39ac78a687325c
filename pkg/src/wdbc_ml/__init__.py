"""From-scratch classifiers and a benchmark harness for the WDBC breast-cancer data.

Estimators follow the scikit-learn API (``fit``/``predict``/``get_params``)
and are implemented directly on NumPy with hand-derived gradients.
"""

from .dataset import Dataset, load_wdbc, parse_wdbc, split, standardize, ZScoreScaler
from .linear_models import LinearRegressionClassifier, LinearSVM, SoftmaxRegression
from .metrics import ConfusionCounts, MetricReport, confusion, rates
from .neighbors import NearestNeighborClassifier
from .neural_models import GRUSVMClassifier, MLPClassifier

__version__ = "0.1.0"

__all__ = [
    "Dataset", "load_wdbc", "parse_wdbc", "split", "standardize", "ZScoreScaler",
    "LinearRegressionClassifier", "LinearSVM", "SoftmaxRegression",
    "ConfusionCounts", "MetricReport", "confusion", "rates",
    "NearestNeighborClassifier", "GRUSVMClassifier", "MLPClassifier",
]
