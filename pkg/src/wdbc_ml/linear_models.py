"""Linear classifiers: thresholded least squares, softmax regression and the L1/L2 SVM.

The free functions are the hand-derived building blocks (forward maps,
losses with their gradients, decision rules); the estimator classes wire
them into the shared mini-batch training loop.
"""

import numpy as np

from ._base import MinibatchClassifier
from .dataset import one_hot
from .exceptions import ConfigurationError, DimensionError, LabelEncodingError
from .numerics import DTYPE, InitScheme, as_matrix, init_weights

LOG_CLAMP = 1e-12


def linreg_forward(x, theta, bias):
    """Affine scores ``x @ theta + bias``."""
    x = as_matrix(x, "x")
    theta = as_matrix(theta, "theta")
    bias = as_matrix(bias, "bias")
    if x.shape[1] != theta.shape[0]:
        raise DimensionError(f"x has {x.shape[1]} columns but theta has {theta.shape[0]} rows")
    if bias.shape != (1, theta.shape[1]):
        raise DimensionError(f"bias must be 1x{theta.shape[1]}, got {bias.shape}")
    return x @ theta + bias


def threshold_05(scores):
    """1 where the score is at least 0.5, otherwise 0."""
    s = np.asarray(scores, dtype=DTYPE)
    if s.ndim == 2:
        if s.shape[1] != 1:
            raise DimensionError(f"expected one score column, got {s.shape[1]}")
        s = s[:, 0]
    return (s >= 0.5).astype(np.int64)


def mse_loss(y, scores):
    """Mean squared error and its gradient with respect to ``scores``."""
    s = np.asarray(scores, dtype=DTYPE)
    y = np.asarray(y, dtype=DTYPE).reshape(s.shape)
    n = s.shape[0]
    if n == 0:
        raise DimensionError("mse_loss needs at least one sample")
    diff = s - y
    return float(np.sum(diff * diff) / n), (2.0 / n) * diff


def softmax(logits):
    z = as_matrix(logits, "logits")
    e = np.exp(z - z.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def cross_entropy(y_onehot, y_hat):
    """Batch-mean cross entropy and the fused softmax+CE gradient w.r.t. the logits.

    ``y_hat`` must already be the softmax output; the returned gradient is
    ``(y_hat - y) / N``.
    """
    y = as_matrix(y_onehot, "targets")
    p = as_matrix(y_hat, "predictions")
    if y.shape != p.shape:
        raise DimensionError(f"targets {y.shape} and predictions {p.shape} differ in shape")
    n = y.shape[0]
    loss = -np.sum(y * np.log(np.maximum(p, LOG_CLAMP))) / n
    return float(loss), (p - y) / n


def svm_loss(y_pm1, scores, weights, c=1.0, variant="l2"):
    """Primal SVM objective ``(1/p) w'w + C * sum(hinge)`` (L1) or ``sum(hinge**2)`` (L2).

    ``scores`` may hold several columns (one-vs-rest targets in ``y_pm1``
    of the same shape); ``p`` is the number of rows of ``weights``.
    Returns ``(loss, d_scores, d_weights)`` where ``d_weights`` is the
    regulariser's gradient only; the data term reaches the weights through
    ``d_scores``. The L1 subgradient is zero at a margin of exactly 1.
    """
    s = np.asarray(scores, dtype=DTYPE)
    if s.ndim == 1:
        s = s.reshape(-1, 1)
    y = np.asarray(y_pm1, dtype=DTYPE).reshape(s.shape)
    if not np.all((y == 1.0) | (y == -1.0)):
        raise LabelEncodingError("SVM targets must be -1 or +1")
    if not c > 0:
        raise ConfigurationError(f"SVM penalty C must be positive, got {c}")
    w = as_matrix(weights, "weights")
    p = w.shape[0]
    margin = 1.0 - y * s
    hinge = np.maximum(0.0, margin)
    reg = np.sum(w * w) / p
    variant = str(variant).lower()
    if variant == "l2":
        loss = reg + c * np.sum(hinge * hinge)
        d_scores = -2.0 * c * y * hinge
    elif variant == "l1":
        loss = reg + c * np.sum(hinge)
        d_scores = -c * y * (margin > 0)
    else:
        raise ConfigurationError(f"unknown SVM variant {variant!r}")
    return float(loss), d_scores, (2.0 / p) * w


def svm_predict(scores):
    """Decision rule for SVM-style scores.

    One column: ``sign`` with ``sign(0) = +1``, giving -1/+1. Two or more
    columns: index of the highest score, lowest index on ties.
    """
    s = np.asarray(scores, dtype=DTYPE)
    if s.ndim == 1 or s.shape[1] == 1:
        return np.where(s.reshape(-1) >= 0.0, 1, -1)
    return np.argmax(s, axis=1)


def _init_linear(n_features, n_outputs, rng):
    return {
        "theta": init_weights((n_features, n_outputs), InitScheme.SCALED_NORMAL, rng),
        "bias": init_weights((1, n_outputs), InitScheme.ZEROS),
    }


def _linear_backward(x, d_scores):
    return {"theta": x.T @ d_scores, "bias": d_scores.sum(axis=0, keepdims=True)}


class LinearRegressionClassifier(MinibatchClassifier):
    """Least-squares regression on 0/1 targets, read as a classifier through a 0.5 threshold.

    Trained with plain SGD on the mean squared error.
    """

    _optimizer = "sgd"

    def __init__(self, batch_size=128, steps=3000, learning_rate=1e-3,
                 random_state=None, trace_interval=100):
        self.batch_size = batch_size
        self.steps = steps
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.trace_interval = trace_interval

    def _init_params(self, n_features, rng):
        return _init_linear(n_features, 1, rng)

    def _scores(self, params, X):
        return linreg_forward(X, params["theta"], params["bias"])

    def _loss_and_grads(self, params, X, y, rng):
        scores = self._scores(params, X)
        loss, d_scores = mse_loss(y.reshape(-1, 1), scores)
        return loss, _linear_backward(X, d_scores), threshold_05(scores)

    def _predict_index(self, params, X):
        return threshold_05(self._scores(params, X))

    def decision_function(self, X):
        return super().decision_function(X)[:, 0]


class SoftmaxRegression(MinibatchClassifier):
    """Two-output softmax regression trained with Adam on cross entropy."""

    _optimizer = "adam"

    def __init__(self, batch_size=128, steps=3000, learning_rate=1e-3,
                 random_state=None, trace_interval=100):
        self.batch_size = batch_size
        self.steps = steps
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.trace_interval = trace_interval

    def _init_params(self, n_features, rng):
        return _init_linear(n_features, 2, rng)

    def _scores(self, params, X):
        return linreg_forward(X, params["theta"], params["bias"])

    def _loss_and_grads(self, params, X, y, rng):
        logits = self._scores(params, X)
        loss, d_logits = cross_entropy(one_hot(y, 2), softmax(logits))
        return loss, _linear_backward(X, d_logits), np.argmax(logits, axis=1)

    def _predict_index(self, params, X):
        return np.argmax(self._scores(params, X), axis=1)

    def predict_proba(self, X):
        return softmax(self.decision_function(X))


class LinearSVM(MinibatchClassifier):
    """Linear SVM with one score column per class, trained with Adam.

    Column ``k`` is pushed towards +1 for samples of class ``k`` and -1
    otherwise; prediction takes the arg-max column. ``variant='l2'``
    (squared hinge) is the differentiable default.
    """

    _optimizer = "adam"

    def __init__(self, c=5.0, variant="l2", batch_size=128, steps=3000,
                 learning_rate=1e-3, random_state=None, trace_interval=100):
        self.c = c
        self.variant = variant
        self.batch_size = batch_size
        self.steps = steps
        self.learning_rate = learning_rate
        self.random_state = random_state
        self.trace_interval = trace_interval

    def _init_params(self, n_features, rng):
        return _init_linear(n_features, 2, rng)

    def _scores(self, params, X):
        return linreg_forward(X, params["theta"], params["bias"])

    def _loss_and_grads(self, params, X, y, rng):
        scores = self._scores(params, X)
        targets = 2.0 * one_hot(y, 2) - 1.0
        loss, d_scores, d_reg = svm_loss(targets, scores, params["theta"], self.c, self.variant)
        grads = _linear_backward(X, d_scores)
        grads["theta"] += d_reg
        return loss, grads, svm_predict(scores)

    def _predict_index(self, params, X):
        return svm_predict(self._scores(params, X))
