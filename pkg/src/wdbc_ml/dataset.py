"""Loading, standardising, splitting and batching the WDBC data.

Labels are stored as integers with ``MALIGNANT = 1`` and ``BENIGN = 0``.
:func:`to_pm1` and :func:`one_hot` produce the margin and one-hot
encodings that the SVM family and the softmax/MLP models train on.
"""

import enum
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .exceptions import (
    ConfigurationError,
    ConstantFeatureError,
    EmptyDatasetError,
    LabelEncodingError,
    ParseError,
)
from .numerics import DTYPE, make_rng

N_FEATURES = 30
BENIGN, MALIGNANT = 0, 1

BASE_FEATURES = (
    "radius", "texture", "perimeter", "area", "smoothness",
    "compactness", "concavity", "concave_points", "symmetry", "fractal_dimension",
)
FEATURE_GROUPS = ("mean", "se", "worst")
FEATURE_NAMES = tuple(f"{b}_{g}" for g in FEATURE_GROUPS for b in BASE_FEATURES)


class Diagnosis(enum.IntEnum):
    BENIGN = BENIGN
    MALIGNANT = MALIGNANT

    @classmethod
    def from_code(cls, code):
        if code == "M":
            return cls.MALIGNANT
        if code == "B":
            return cls.BENIGN
        raise LabelEncodingError(f"unknown diagnosis code {code!r}, expected 'M' or 'B'")


@dataclass(frozen=True)
class WdbcRecord:
    id: str
    diagnosis: Diagnosis
    features: tuple

    def __post_init__(self):
        if len(self.features) != N_FEATURES:
            raise ParseError(f"expected {N_FEATURES} features, got {len(self.features)}")
        if not all(np.isfinite(self.features)):
            raise ParseError(f"record {self.id} has non-finite features")


@dataclass(frozen=True, eq=False)
class Dataset:
    """Feature matrix ``x`` (n x 30), integer labels ``y`` and optional z-score stats."""

    x: np.ndarray
    y: np.ndarray
    ids: tuple = ()
    feature_names: tuple = FEATURE_NAMES
    mu: Optional[np.ndarray] = None
    sigma: Optional[np.ndarray] = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=DTYPE)
        y = np.asarray(self.y, dtype=np.int64)
        if x.ndim != 2 or x.shape[0] != y.shape[0]:
            raise ParseError(f"x shape {x.shape} does not match {y.shape[0]} labels")
        if self.sigma is not None and np.any(np.asarray(self.sigma) <= 0):
            raise ConstantFeatureError(int(np.argmin(self.sigma)))
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "ids", tuple(self.ids))

    @property
    def n(self):
        return self.x.shape[0]

    def __len__(self):
        return self.n

    def subset(self, index):
        index = np.asarray(index, dtype=np.int64)
        ids = tuple(self.ids[i] for i in index) if self.ids else ()
        return replace(self, x=self.x[index], y=self.y[index], ids=ids)

    def class_counts(self):
        """Return ``(n_malignant, n_benign)``."""
        m = int(np.sum(self.y == MALIGNANT))
        return m, self.n - m

    def records(self):
        ids = self.ids or tuple(str(i) for i in range(self.n))
        return [
            WdbcRecord(i, Diagnosis(int(lab)), tuple(row))
            for i, lab, row in zip(ids, self.y, self.x)
        ]


@dataclass(frozen=True)
class SplitPair:
    train: Dataset
    test: Dataset
    seed: int
    ratio: float
    train_index: np.ndarray = field(repr=False, default=None)
    test_index: np.ndarray = field(repr=False, default=None)


def _looks_like_header(fields):
    return len(fields) < 2 or fields[1].strip() not in ("M", "B")


def parse_wdbc(text):
    """Parse ``id,diagnosis,f1..f30`` lines into a :class:`Dataset`.

    A first line whose second field is not ``M``/``B`` is treated as a
    header and skipped. Blank lines are ignored.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("utf-8")
    ids, labels, rows = [], [], []
    first = True
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        fields = line.split(",")
        if first:
            first = False
            if _looks_like_header(fields):
                continue
        if len(fields) != N_FEATURES + 2:
            raise ParseError(
                f"expected {N_FEATURES + 2} comma-separated fields, got {len(fields)}", lineno
            )
        try:
            label = Diagnosis.from_code(fields[1].strip())
        except LabelEncodingError as exc:
            raise ParseError(str(exc), lineno) from None
        try:
            values = [float(v) for v in fields[2:]]
        except ValueError as exc:
            raise ParseError(f"non-numeric feature: {exc}", lineno) from None
        if not np.all(np.isfinite(values)):
            raise ParseError("non-finite feature value", lineno)
        ids.append(fields[0].strip())
        labels.append(int(label))
        rows.append(values)
    if not rows:
        raise EmptyDatasetError("no WDBC records in input")
    return Dataset(x=np.array(rows, dtype=DTYPE), y=np.array(labels), ids=tuple(ids))


def load_wdbc(path=None):
    """Read a WDBC file, or the copy bundled with the package when ``path`` is None."""
    if path is None:
        data = resources.files("wdbc_ml").joinpath("data/wdbc.data").read_bytes()
    else:
        data = Path(path).read_bytes()
    return parse_wdbc(data)


def standardize(data, mu=None, sigma=None):
    """Apply ``z = (x - mu) / sigma`` column-wise.

    With no statistics given they are fitted on ``data`` itself, using the
    population standard deviation. The statistics are stored on the result.
    """
    if (mu is None) != (sigma is None):
        raise ConfigurationError("provide both mu and sigma, or neither")
    if mu is None:
        mu = data.x.mean(axis=0)
        sigma = data.x.std(axis=0)
        # a constant column can leave rounding residue in the std
        sigma = np.where(sigma <= 1e-12 * np.maximum(1.0, np.abs(mu)), 0.0, sigma)
    mu = np.asarray(mu, dtype=DTYPE).reshape(-1)
    sigma = np.asarray(sigma, dtype=DTYPE).reshape(-1)
    if mu.shape[0] != data.x.shape[1] or sigma.shape[0] != data.x.shape[1]:
        raise ConfigurationError("mu/sigma length must equal the number of features")
    for j in np.flatnonzero(~(sigma > 0)):
        names = data.feature_names
        raise ConstantFeatureError(int(j), names[j] if j < len(names) else None)
    return replace(data, x=(data.x - mu) / sigma, mu=mu, sigma=sigma)


def destandardize(data):
    if data.mu is None:
        return data
    return replace(data, x=data.x * data.sigma + data.mu, mu=None, sigma=None)


def split(data, ratio=0.7, seed=42):
    """Seeded shuffle followed by a contiguous cut; train gets ``round(ratio * n)`` rows."""
    if not 0.0 < ratio < 1.0:
        raise ConfigurationError(f"split ratio must lie in (0, 1), got {ratio}")
    perm = make_rng(seed).permutation(data.n)
    n_train = int(np.floor(ratio * data.n + 0.5))
    train_idx, test_idx = perm[:n_train], perm[n_train:]
    return SplitPair(
        train=data.subset(train_idx),
        test=data.subset(test_idx),
        seed=int(seed),
        ratio=float(ratio),
        train_index=train_idx,
        test_index=test_idx,
    )


def batches(data, batch_size, steps, rng):
    """Yield ``(x, y)`` mini-batches drawn from a :class:`Dataset`."""
    return iter_minibatches(data.x, data.y, batch_size, steps, rng)


def iter_minibatches(x, y, batch_size, steps, rng):
    """Yield exactly ``steps`` mini-batches of ``batch_size`` rows.

    Rows are visited in a fresh random order on each pass; a batch that
    runs past the end of a pass is completed from the next permutation.
    """
    n = x.shape[0]
    if batch_size < 1 or steps < 1:
        raise ConfigurationError("batch_size and steps must be at least 1")
    if batch_size > n:
        raise ConfigurationError(f"batch_size {batch_size} exceeds dataset size {n}")
    order = rng.permutation(n)
    pos = 0
    for _ in range(steps):
        if pos + batch_size <= n:
            idx = order[pos:pos + batch_size]
            pos += batch_size
        else:
            head = order[pos:]
            order = rng.permutation(n)
            pos = batch_size - head.shape[0]
            idx = np.concatenate([head, order[:pos]])
        yield x[idx], y[idx]


def to_pm1(y):
    """Map {0, 1} labels to {-1, +1}."""
    y = np.asarray(y)
    if not np.all(np.isin(y, (0, 1))):
        raise LabelEncodingError("expected labels in {0, 1}")
    return 2.0 * y.astype(DTYPE) - 1.0


def one_hot(y, n_classes=2):
    y = np.asarray(y, dtype=np.int64)
    if y.size and (y.min() < 0 or y.max() >= n_classes):
        raise LabelEncodingError(f"labels must lie in [0, {n_classes})")
    out = np.zeros((y.shape[0], n_classes), dtype=DTYPE)
    out[np.arange(y.shape[0]), y] = 1.0
    return out


def feature_group(group):
    """Column indices for ``'mean'``, ``'error'`` (alias ``'se'``) or ``'worst'``."""
    key = {"mean": 0, "error": 1, "se": 1, "worst": 2}.get(str(group).lower())
    if key is None:
        raise ConfigurationError(f"unknown feature group {group!r}")
    return list(range(10 * key, 10 * key + 10))


class ZScoreScaler(TransformerMixin, BaseEstimator):
    """Column-wise z-score transformer with population standard deviation."""

    def fit(self, X, y=None):
        X = check_array(X, dtype=DTYPE)
        mu = X.mean(axis=0)
        sigma = X.std(axis=0)
        sigma = np.where(sigma <= 1e-12 * np.maximum(1.0, np.abs(mu)), 0.0, sigma)
        for j in np.flatnonzero(~(sigma > 0)):
            raise ConstantFeatureError(int(j))
        self.mean_, self.scale_ = mu, sigma
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self)
        X = check_array(X, dtype=DTYPE)
        return (X - self.mean_) / self.scale_

    def inverse_transform(self, X):
        check_is_fitted(self)
        return np.asarray(X, dtype=DTYPE) * self.scale_ + self.mean_
