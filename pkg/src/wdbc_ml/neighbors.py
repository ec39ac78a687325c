"""Brute-force 1-nearest-neighbour classification under the L1 or L2 distance."""

import enum
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .exceptions import ConfigurationError, DimensionError, EmptyDatasetError
from .numerics import DTYPE


class Norm(enum.Enum):
    L1 = "l1"
    L2 = "l2"


def _pair(p, q):
    p = np.asarray(p, dtype=DTYPE).reshape(-1)
    q = np.asarray(q, dtype=DTYPE).reshape(-1)
    if p.shape != q.shape:
        raise DimensionError(f"vectors differ in length: {p.shape[0]} vs {q.shape[0]}")
    return p, q


def l1_distance(p, q):
    p, q = _pair(p, q)
    return float(np.sum(np.abs(p - q)))


def l2_distance(p, q):
    p, q = _pair(p, q)
    return float(np.sqrt(np.sum((p - q) ** 2)))


def pairwise_distances(queries, refs, norm):
    """``(n_queries, n_refs)`` distance matrix, computed from explicit differences."""
    norm = Norm(norm)
    out = np.empty((queries.shape[0], refs.shape[0]), dtype=DTYPE)
    for i, q in enumerate(queries):
        diff = refs - q
        if norm is Norm.L1:
            out[i] = np.abs(diff).sum(axis=1)
        else:
            out[i] = np.sqrt((diff * diff).sum(axis=1))
    return out


@dataclass(frozen=True, eq=False)
class NeighborIndex:
    points: np.ndarray
    labels: np.ndarray
    norm: Norm = Norm.L2

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=DTYPE)
        labels = np.asarray(self.labels)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise EmptyDatasetError("a neighbour index needs at least one reference point")
        if labels.shape[0] != pts.shape[0]:
            raise DimensionError(f"{labels.shape[0]} labels for {pts.shape[0]} reference points")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "norm", Norm(self.norm))


def nn_classify(index, queries):
    """Label of the closest reference point per query; ties go to the lowest reference index."""
    q = np.asarray(queries, dtype=DTYPE)
    if q.ndim == 1:
        q = q.reshape(1, -1)
    if q.shape[1] != index.points.shape[1]:
        raise DimensionError(
            f"queries have {q.shape[1]} columns, references have {index.points.shape[1]}"
        )
    # argmin returns the first minimum, which is the tie-break we want
    nearest = np.argmin(pairwise_distances(q, index.points, index.norm), axis=1)
    return index.labels[nearest]


class NearestNeighborClassifier(ClassifierMixin, BaseEstimator):
    """1-NN classifier; ``fit`` only stores the reference set."""

    def __init__(self, norm="l2"):
        self.norm = norm

    def fit(self, X, y):
        X, y = check_X_y(X, y, dtype=DTYPE)
        try:
            norm = Norm(str(self.norm).lower())
        except ValueError:
            raise ConfigurationError(f"norm must be 'l1' or 'l2', got {self.norm!r}") from None
        self.index_ = NeighborIndex(X, y, norm)
        self.classes_ = np.unique(y)
        self.n_features_in_ = X.shape[1]
        return self

    def predict(self, X):
        check_is_fitted(self, "index_")
        return nn_classify(self.index_, check_array(X, dtype=DTYPE))
