"""Shared mini-batch training loop for the gradient-trained classifiers."""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.multiclass import unique_labels
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .dataset import iter_minibatches
from .exceptions import ConfigurationError, DimensionError, LabelEncodingError
from .numerics import DTYPE, make_rng
from .optim import make_optimizer


@dataclass(frozen=True)
class TracePoint:
    step: int
    accuracy: float
    loss: float


def check_binary_target(y):
    """Return ``(classes, encoded)`` where ``encoded`` holds 0/1 indices into ``classes``."""
    classes = unique_labels(y)
    if classes.shape[0] > 2:
        raise LabelEncodingError(f"binary classification only, got classes {classes!r}")
    if classes.shape[0] == 1:
        # keep the canonical 0/1 coding when only one class is present
        other = 1 - classes[0] if classes[0] in (0, 1) else None
        if other is None:
            raise LabelEncodingError("cannot infer the second class from a single label")
        classes = np.sort(np.array([classes[0], other]))
    return classes, np.searchsorted(classes, y).astype(np.int64)


class MinibatchClassifier(ClassifierMixin, BaseEstimator):
    """Template for estimators trained by ``steps`` optimizer updates on fixed-size batches.

    Subclasses provide ``_optimizer`` and implement ``_init_params``,
    ``_loss_and_grads`` (returning loss, gradients and the batch's class
    predictions) and ``_predict_index``.
    """

    _optimizer = "sgd"

    def _validate_hyperparams(self, n_samples):
        if int(self.batch_size) < 1 or int(self.steps) < 1:
            raise ConfigurationError("batch_size and steps must be at least 1")
        if not self.learning_rate >= 0:
            raise ConfigurationError(f"learning_rate must be non-negative, got {self.learning_rate}")
        if self.batch_size > n_samples:
            raise ConfigurationError(
                f"batch_size {self.batch_size} exceeds the {n_samples} training samples"
            )

    def _rngs(self):
        seed = 0 if self.random_state is None else self.random_state
        return make_rng(seed).spawn(3)

    def init_params(self, n_features):
        """Initial parameters that ``fit`` would start from for this ``random_state``."""
        init_rng, _, _ = self._rngs()
        return self._init_params(n_features, init_rng)

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=DTYPE)
        self.classes_, y_idx = check_binary_target(y)
        self.n_features_in_ = X.shape[1]
        self._validate_hyperparams(X.shape[0])
        init_rng, batch_rng, noise_rng = self._rngs()
        params = self._init_params(X.shape[1], init_rng)
        opt = make_optimizer(self._optimizer, self.learning_rate)
        interval = int(self.trace_interval) if self.trace_interval else 0
        trace = []
        for step, (xb, yb) in enumerate(
            iter_minibatches(X, y_idx, int(self.batch_size), int(self.steps), batch_rng), 1
        ):
            loss, grads, pred = self._loss_and_grads(params, xb, yb, noise_rng)
            if interval and step % interval == 0:
                trace.append(TracePoint(step, float(np.mean(pred == yb)), float(loss)))
            params = opt.step(params, grads)
        self.params_ = params
        self.trace_ = trace
        self.n_samples_seen_ = int(self.steps) * int(self.batch_size)
        return self

    def _check_X(self, X):
        check_is_fitted(self, "params_")
        X = check_array(X, dtype=DTYPE)
        if X.shape[1] != self.n_features_in_:
            raise DimensionError(
                f"X has {X.shape[1]} features, estimator was fitted with {self.n_features_in_}"
            )
        return X

    def decision_function(self, X):
        return self._scores(self.params_, self._check_X(X))

    def predict(self, X):
        X = self._check_X(X)
        return self.classes_[self._predict_index(self.params_, X)]

    def predict_with(self, params, X):
        """Predict using an explicit parameter set, e.g. from :meth:`init_params`."""
        X = check_array(X, dtype=DTYPE)
        classes = getattr(self, "classes_", np.array([0, 1]))
        return classes[self._predict_index(params, X)]
