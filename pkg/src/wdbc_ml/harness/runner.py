"""Train/evaluate experiments and assemble the results table."""

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .._base import TracePoint
from ..dataset import split, standardize
from ..exceptions import ConfigurationError
from ..linear_models import LinearRegressionClassifier, LinearSVM, SoftmaxRegression
from ..metrics import ConfusionCounts, MetricReport, confusion, rates
from ..neighbors import NearestNeighborClassifier
from ..neural_models import GRUSVMClassifier, MLPClassifier
from .config import ExperimentConfig, Model, coerce_fields, default_suite

log = logging.getLogger(__name__)


@dataclass
class RunReport:
    config: ExperimentConfig
    counts: Optional[ConfusionCounts] = None
    metrics: Optional[MetricReport] = None
    # same predictions scored with benign as the positive class
    metrics_alt: Optional[MetricReport] = None
    data_points_consumed: int = 0
    epochs: int = 0
    trace: List[TracePoint] = field(default_factory=list)
    error: Optional[str] = None
    wall_time: float = field(default=0.0, compare=False)

    @property
    def ok(self):
        return self.error is None

    @property
    def name(self):
        return self.config.name

    def to_dict(self):
        return {
            "config": self.config.as_dict(),
            "error": self.error,
            "counts": None if self.counts is None else vars(self.counts).copy(),
            "metrics": None if self.metrics is None else self.metrics.as_dict(),
            "metrics_alt": None if self.metrics_alt is None else self.metrics_alt.as_dict(),
            "data_points_consumed": self.data_points_consumed,
            "epochs": self.epochs,
            "trace": [[p.step, p.accuracy, p.loss] for p in self.trace],
        }

    @classmethod
    def from_dict(cls, d):
        cfg_values = dict(d["config"])
        model = Model.parse(cfg_values.pop("model"))
        cfg = ExperimentConfig(model=model, **coerce_fields(cfg_values))
        return cls(
            config=cfg,
            counts=None if d.get("counts") is None else ConfusionCounts(**d["counts"]),
            metrics=None if d.get("metrics") is None else MetricReport(**d["metrics"]),
            metrics_alt=None if d.get("metrics_alt") is None else MetricReport(**d["metrics_alt"]),
            data_points_consumed=d.get("data_points_consumed", 0),
            epochs=d.get("epochs", 0),
            trace=[TracePoint(int(s), float(a), float(l)) for s, a, l in d.get("trace", [])],
            error=d.get("error"),
        )

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def build_estimator(cfg):
    m = cfg.model
    common = dict(random_state=cfg.seed)
    trained = dict(common, batch_size=cfg.batch_size, steps=cfg.steps,
                   learning_rate=cfg.learning_rate, trace_interval=cfg.trace_interval or 0)
    if m is Model.LINREG:
        return LinearRegressionClassifier(**trained)
    if m is Model.SOFTMAX:
        return SoftmaxRegression(**trained)
    if m is Model.SVM:
        return LinearSVM(c=cfg.svm_c, variant=cfg.norm, **trained)
    if m is Model.MLP:
        return MLPClassifier(hidden_sizes=tuple(cfg.hidden_sizes), **trained)
    if m is Model.GRU_SVM:
        return GRUSVMClassifier(cell_size=cfg.cell_size, keep_prob=cfg.dropout_keep,
                                c=cfg.svm_c, variant=cfg.norm, **trained)
    return NearestNeighborClassifier(norm=cfg.norm)


def prepare_split(cfg, data):
    """Standardise and split ``data`` as ``cfg`` asks.

    ``full`` fits the z-score statistics on every record before splitting;
    ``train`` fits them on the training part only.
    """
    if cfg.standardization == "full":
        return split(standardize(data), cfg.split_ratio, cfg.seed)
    pair = split(data, cfg.split_ratio, cfg.seed)
    train = standardize(pair.train)
    test = standardize(pair.test, train.mu, train.sigma)
    return type(pair)(train, test, pair.seed, pair.ratio, pair.train_index, pair.test_index)


def run_experiment(cfg, data):
    cfg.validate(n_samples=data.n)
    start = time.perf_counter()
    pair = prepare_split(cfg, data)
    est = build_estimator(cfg)
    est.fit(pair.train.x, pair.train.y)
    predicted = est.predict(pair.test.x)
    counts = confusion(predicted, pair.test.y, cfg.positive_class)
    alt = rates(confusion(predicted, pair.test.y, 1 - cfg.positive_class))
    if cfg.model.trained:
        consumed, epochs, trace = est.n_samples_seen_, cfg.steps, list(est.trace_)
    else:
        consumed, epochs, trace = pair.test.n, 1, []
    return RunReport(
        config=cfg,
        counts=counts,
        metrics=rates(counts),
        metrics_alt=alt,
        data_points_consumed=consumed,
        epochs=epochs,
        trace=trace,
        wall_time=time.perf_counter() - start,
    )


def _guarded(cfg, data):
    try:
        report = run_experiment(cfg, data)
    except Exception as exc:  # noqa: BLE001 - one failing model must not sink the suite
        log.error("%s failed: %s", cfg.name, exc)
        return RunReport(config=cfg, error=f"{type(exc).__name__}: {exc}")
    log.info("%s: accuracy %.4f (%.1fs)", cfg.name, report.metrics.accuracy, report.wall_time)
    return report


def run_suite(configs, data, parallel=False):
    """Run every config; failures are recorded on their report instead of raised."""
    configs = list(configs)
    if parallel and len(configs) > 1:
        with ThreadPoolExecutor(max_workers=len(configs)) as pool:
            return list(pool.map(lambda c: _guarded(c, data), configs))
    return [_guarded(c, data) for c in configs]


def cross_validate(cfg, data, k=5):
    """k-fold estimate of test accuracy: the split seed shuffles once, each fold is held out in turn."""
    if k < 2:
        raise ConfigurationError("k-fold cross validation needs k >= 2")
    cfg.validate(n_samples=data.n)
    std = standardize(data) if cfg.standardization == "full" else data
    order = np.random.Generator(np.random.PCG64(cfg.seed)).permutation(data.n)
    folds = np.array_split(order, k)
    accs = []
    for i, test_idx in enumerate(folds):
        train_idx = np.concatenate([f for j, f in enumerate(folds) if j != i])
        train, test = std.subset(train_idx), std.subset(test_idx)
        if cfg.standardization == "train":
            train = standardize(train)
            test = standardize(test, train.mu, train.sigma)
        est = build_estimator(cfg).fit(train.x, train.y)
        accs.append(float(np.mean(est.predict(test.x) == test.y)))
    return accs


def run_seeds(seeds, data, configs=None, parallel=False):
    """Run one suite per seed; ``configs`` are re-seeded (defaults to the standard suite)."""
    results = {}
    for seed in seeds:
        if configs is None:
            suite = default_suite(seed)
        else:
            suite = [c.with_overrides(seed=seed) for c in configs]
        results[seed] = run_suite(suite, data, parallel=parallel)
    return results


def median_accuracies(results):
    """Median test accuracy per model name over a ``run_seeds`` result (failed runs excluded)."""
    acc = {}
    for reports in results.values():
        for r in reports:
            if r.ok:
                acc.setdefault(r.name, []).append(r.metrics.accuracy)
    return {name: float(np.median(v)) for name, v in acc.items()}
