"""Plot-data files: feature scatter groups and training traces, as plain CSV."""

import csv
from pathlib import Path

from ..dataset import feature_group
from ..exceptions import WdbcError


class EmptyTraceError(WdbcError):
    """The report has no training trace (nearest-neighbour runs are never trained)."""


def export_scatter(data, group, path):
    """Write the ten features of ``group`` plus the 0/1 label (1 = malignant), one row per record."""
    cols = feature_group(group)
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{j}" for j in cols] + ["label"])
        for row, label in zip(data.x[:, cols], data.y):
            w.writerow([repr(float(v)) for v in row] + [int(label)])
    return path


def export_trace(report, path):
    if not report.config.model.trained:
        raise EmptyTraceError(f"{report.name} has no training trace: the model is not trained")
    if not report.trace:
        raise EmptyTraceError(f"{report.name} recorded no trace points")
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "accuracy", "loss"])
        for p in report.trace:
            w.writerow([p.step, repr(p.accuracy), repr(p.loss)])
    return path
