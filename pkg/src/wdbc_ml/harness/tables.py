"""Results table (parameters as rows, one column per model) and suite output files."""

import csv
import io
from pathlib import Path

from .export import export_trace

ROWS = ("Accuracy", "Data points", "Epochs", "FPR", "FNR", "TPR", "TNR")
ALT_ROWS = ("FPR (benign positive)", "FNR (benign positive)",
            "TPR (benign positive)", "TNR (benign positive)")
RATE_KEYS = {"FPR": "fpr", "FNR": "fnr", "TPR": "tpr", "TNR": "tnr"}


def column_names(reports):
    seen, names = {}, []
    for r in reports:
        n = seen.get(r.name, 0) + 1
        seen[r.name] = n
        names.append(r.name if n == 1 else f"{r.name} #{n}")
    return names


def _raw_cell(report, row):
    if not report.ok:
        return "FAILED"
    if row == "Accuracy":
        return report.metrics.accuracy
    if row == "Data points":
        return report.data_points_consumed
    if row == "Epochs":
        return report.epochs
    if row in RATE_KEYS:
        return getattr(report.metrics, RATE_KEYS[row])
    return getattr(report.metrics_alt, RATE_KEYS[row.split()[0]])


def table_rows(reports, include_alt=True):
    rows = ROWS + (ALT_ROWS if include_alt else ())
    return [(row, [_raw_cell(r, row) for r in reports]) for row in rows]


def _fmt_machine(v):
    if v is None:
        return "undefined"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _fmt_human(v):
    if v is None:
        return "undefined"
    if isinstance(v, float):
        return "0" if v == 0 else f"{100 * v:.6f}%"
    return str(v)


def results_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["Parameter", *column_names(reports)])
    for row, cells in table_rows(reports):
        w.writerow([row, *(_fmt_machine(c) for c in cells)])
    return buf.getvalue()


def render_table(reports, include_alt=True):
    header = ["Parameter", *column_names(reports)]
    body = [[row, *(_fmt_human(c) for c in cells)] for row, cells in table_rows(reports, include_alt)]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]

    def fmt(line):
        return "  ".join(cell.ljust(w) if i == 0 else cell.rjust(w)
                         for i, (cell, w) in enumerate(zip(line, widths))).rstrip()

    rule = "-" * len(fmt(header))
    lines = [fmt(header), rule, *(fmt(b) for b in body)]
    failures = [f"{n}: {r.error}" for n, r in zip(column_names(reports), reports) if not r.ok]
    if failures:
        lines += [rule, *("FAILED " + f for f in failures)]
    return "\n".join(lines) + "\n"


def _slugs(reports):
    seen, out = {}, []
    for r in reports:
        base = r.config.model.value
        n = seen.get(base, 0) + 1
        seen[base] = n
        out.append(base if n == 1 else f"{base}-{n}")
    return out


def write_suite_outputs(reports, out_dir):
    """Write the results table and per-run reports/traces under ``out_dir``.

    Every file except ``timings.csv`` depends only on the configs and data,
    so repeated runs reproduce them byte for byte.
    """
    out = Path(out_dir)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    (out / "traces").mkdir(exist_ok=True)
    (out / "results.csv").write_text(results_csv(reports), encoding="utf-8")
    (out / "results.txt").write_text(render_table(reports), encoding="utf-8")
    timing = ["run,wall_time_s"]
    for slug, r in zip(_slugs(reports), reports):
        r.save(out / "reports" / f"{slug}.json")
        if r.ok and r.trace:
            export_trace(r, out / "traces" / f"{slug}.csv")
        timing.append(f"{slug},{r.wall_time:.3f}")
    (out / "timings.csv").write_text("\n".join(timing) + "\n", encoding="utf-8")
    return out
