"""Command-line entry point: ``wdbc-ml run|suite|scatter|trace``."""

import argparse
import logging
import sys
from pathlib import Path

from ..dataset import load_wdbc, standardize
from ..exceptions import WdbcError
from .config import default_config, default_suite, load_config_file, Model
from .export import EmptyTraceError, export_scatter, export_trace
from .runner import RunReport, cross_validate, median_accuracies, run_seeds, run_suite
from .tables import render_table, write_suite_outputs

log = logging.getLogger("wdbc_ml")


def _parse_seeds(text):
    seeds = []
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-", 1)
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part.strip():
            seeds.append(int(part))
    return seeds


def _add_training_flags(p):
    p.add_argument("--data", help="WDBC file (id,diagnosis,30 features); bundled copy if omitted")
    p.add_argument("--config", help="experiment file, one [section] per experiment")
    p.add_argument("--seed", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--batch", type=int, dest="batch_size")
    p.add_argument("--lr", type=float, dest="learning_rate")
    p.add_argument("--standardization", choices=("full", "train"),
                   help="fit z-score stats on all records (default) or on the training split only")
    p.add_argument("--trace-interval", type=int, dest="trace_interval")


def _overrides(args):
    return dict(seed=args.seed, steps=args.steps, batch_size=args.batch_size,
                learning_rate=args.learning_rate, standardization=args.standardization,
                trace_interval=args.trace_interval)


def _apply(cfg, overrides):
    # training-only flags would otherwise warn on nearest-neighbour configs
    if not cfg.model.trained:
        overrides = {k: v for k, v in overrides.items()
                     if k in ("seed", "standardization")}
    return cfg.with_overrides(**overrides)


def build_parser():
    parser = argparse.ArgumentParser(prog="wdbc-ml", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="train and evaluate one model")
    p.add_argument("--model", required=True, help=", ".join(m.value for m in Model))
    _add_training_flags(p)
    p.add_argument("--kfold", type=int, help="also report k-fold cross-validated accuracy")
    p.add_argument("--out", help="directory for results, report and trace files")

    p = sub.add_parser("suite", help="run every model and write the results table")
    _add_training_flags(p)
    p.add_argument("--seeds", help="comma list or ranges, e.g. 1-10; one sub-directory per seed")
    p.add_argument("--parallel", action="store_true", help="run models concurrently")
    p.add_argument("--out", required=True)

    p = sub.add_parser("scatter", help="export one feature group for plotting")
    p.add_argument("--group", required=True, choices=("mean", "error", "worst"))
    p.add_argument("--data")
    p.add_argument("--raw", action="store_true", help="skip standardisation")
    p.add_argument("--out", required=True)

    p = sub.add_parser("trace", help="export the training trace of a saved run report")
    p.add_argument("--report", required=True)
    p.add_argument("--out", help="CSV path (default: next to the report)")
    return parser


def _configs(args, model=None):
    if args.config:
        configs = load_config_file(args.config)
        if model is not None:
            configs = [c for c in configs if c.model is model] or [default_config(model)]
    else:
        configs = [default_config(model)] if model is not None else default_suite()
    return [_apply(c, _overrides(args)) for c in configs]


def cmd_run(args):
    model = Model.parse(args.model)
    data = load_wdbc(args.data)
    reports = run_suite(_configs(args, model)[:1], data)
    sys.stdout.write(render_table(reports))
    if args.kfold:
        accs = cross_validate(reports[0].config, data, args.kfold)
        print(f"{args.kfold}-fold accuracy: " + ", ".join(f"{a:.4f}" for a in accs)
              + f" (mean {sum(accs) / len(accs):.4f})")
    if args.out:
        write_suite_outputs(reports, args.out)
    return 0 if all(r.ok for r in reports) else 1


def cmd_suite(args):
    data = load_wdbc(args.data)
    configs = _configs(args)
    if not args.seeds:
        reports = run_suite(configs, data, parallel=args.parallel)
        write_suite_outputs(reports, args.out)
        sys.stdout.write(render_table(reports))
        return 0 if all(r.ok for r in reports) else 1
    results = run_seeds(_parse_seeds(args.seeds), data, configs, parallel=args.parallel)
    out = Path(args.out)
    for seed, reports in results.items():
        write_suite_outputs(reports, out / f"seed-{seed}")
    medians = median_accuracies(results)
    lines = ["model,median_accuracy"] + [f"{k},{v!r}" for k, v in medians.items()]
    (out / "summary.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for k, v in medians.items():
        print(f"{k:<20} median accuracy {100 * v:.4f}%")
    return 0 if all(r.ok for reps in results.values() for r in reps) else 1


def cmd_scatter(args):
    data = load_wdbc(args.data)
    if not args.raw:
        data = standardize(data)
    path = export_scatter(data, args.group, args.out)
    print(f"wrote {path} ({data.n} rows)")
    return 0


def cmd_trace(args):
    report = RunReport.load(args.report)
    out = args.out or str(Path(args.report).with_suffix(".trace.csv"))
    try:
        export_trace(report, out)
    except EmptyTraceError as exc:
        print(f"notice: {exc}; no file written", file=sys.stderr)
        return 1
    print(f"wrote {out} ({len(report.trace)} rows)")
    return 0


COMMANDS = {"run": cmd_run, "suite": cmd_suite, "scatter": cmd_scatter, "trace": cmd_trace}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (WdbcError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
