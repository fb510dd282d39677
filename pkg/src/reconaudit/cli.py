"""Command-line surface: train models, audit them, certify the counts, and
run leak-vs-accuracy sweeps.

Exit codes: 0 success, 1 verification/audit failure or any module error,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import alignment, counting, dataio, learners, metrics, modelio, plots
from .domain import DeterministicDataset, Model
from .reconstruction import reconstruct

WORKERS_ENV_VAR = "RECONAUDIT_WORKERS"
DEFAULT_GRID_CAP = 1000

RUN_FIELDS = ("model_kind", "seed", "max_depth", "min_support")
CSV_FAMILIES = {
    "size_vs_entropy.csv": RUN_FIELDS + ("model_size", "dist_g"),
    "accuracy_vs_entropy.csv": RUN_FIELDS + ("train_accuracy", "test_accuracy", "dist_g"),
    "depth_vs_size.csv": RUN_FIELDS + ("model_size",),
    "depth_vs_entropy.csv": RUN_FIELDS + ("dist_g",),
    "support_vs_entropy.csv": RUN_FIELDS + ("dist_g",),
    "leak_cdf.csv": RUN_FIELDS + ("entropy_ratio", "cumulative_proportion"),
}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text!r} must be a positive integer")
    return value


def _support_fraction(text: str) -> float:
    value = float(text)
    if not 0 < value <= 0.5:
        raise argparse.ArgumentTypeError(f"{text!r} must be in (0, 0.5]")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reconaudit",
        description="Quantify how much of its training set an interpretable model gives away.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="fit a greedy tree or rule list on a CSV")
    p_train.add_argument("--data", required=True, help="training CSV (header row required)")
    p_train.add_argument("--label", required=True, help="name of the label column")
    p_train.add_argument("--kind", required=True, choices=("tree", "rulelist"))
    p_train.add_argument("--max-depth", required=True, type=_positive_int)
    p_train.add_argument("--min-support", type=_support_fraction, default=0.05)
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--out", required=True, help="model file to write")
    p_train.add_argument(
        "--binarize", type=_positive_int, nargs="?", const=4, default=None, metavar="Q",
        help="quantile-binarize numeric columns (Q quantiles, default 4) and one-hot categoricals",
    )
    p_train.add_argument(
        "--train-fraction", type=float, default=1.0,
        help="train on this fraction and report test accuracy on the rest (default: all data)",
    )
    p_train.add_argument("--binspec-out", default=None, help="record the binarization for replay")
    p_train.set_defaults(func=cmd_train)

    p_audit = sub.add_parser("audit", help="reconstruction audit of a model file")
    p_audit.add_argument("--model", required=True)
    p_audit.add_argument("--out", required=True, help="report document to write (JSON)")
    p_audit.add_argument("--original", default=None, help="training CSV to align against")
    p_audit.add_argument("--legacy-dist", action="store_true",
                         help="also report the per-cell metric (trees only)")
    p_audit.add_argument("--binarize", type=_positive_int, nargs="?", const=4, default=None,
                         metavar="Q",
                         help="binarize the --original CSV the same way it was trained")
    p_audit.add_argument("--no-figures", action="store_true")
    p_audit.set_defaults(func=cmd_audit)

    p_oracle = sub.add_parser(
        "oracle-check", help="certify closed-form world counts by exhaustive enumeration"
    )
    p_oracle.add_argument("--model", required=True)
    p_oracle.add_argument("--oracle-ceiling", type=_positive_int,
                          default=counting.DEFAULT_ORACLE_CEILING)
    p_oracle.add_argument("--report", default=None,
                          help="also verify the world counts recorded in this report file")
    p_oracle.set_defaults(func=cmd_oracle_check)

    p_exp = sub.add_parser("experiment", help="leak-vs-accuracy sweep over a parameter grid")
    p_exp.add_argument("--data", required=True)
    p_exp.add_argument("--label", required=True)
    p_exp.add_argument("--grid", required=True, help="JSON grid file")
    p_exp.add_argument("--out-dir", required=True)
    p_exp.add_argument("--binarize", type=_positive_int, nargs="?", const=4, default=None,
                       metavar="Q")
    p_exp.add_argument("--train-fraction", type=float, default=0.8)
    p_exp.add_argument("--workers", type=_positive_int,
                       default=int(os.environ.get(WORKERS_ENV_VAR, "1")))
    p_exp.add_argument("--max-cells", type=_positive_int, default=DEFAULT_GRID_CAP)
    p_exp.add_argument("--no-figures", action="store_true")
    p_exp.set_defaults(func=cmd_experiment)

    return parser


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------

def _load_dataset(data_path, label: str, binarize_q) -> DeterministicDataset:
    table = dataio.load_csv(data_path, label)
    if binarize_q is not None:
        dataset, _ = dataio.binarize(table, q=binarize_q)
        return dataset
    return dataio.table_to_dataset(table)


def cmd_train(args) -> int:
    table = dataio.load_csv(args.data, args.label)
    if args.binarize is not None:
        dataset, spec = dataio.binarize(table, q=args.binarize)
        if args.binspec_out:
            dataio.save_binspec(spec, args.binspec_out)
    else:
        dataset = dataio.table_to_dataset(table)
        if args.binspec_out:
            print("warning: --binspec-out ignored without --binarize", file=sys.stderr)

    if not 0 < args.train_fraction <= 1:
        print("error: --train-fraction must be in (0, 1]", file=sys.stderr)
        return 2
    test_set = None
    train_set = dataset
    if args.train_fraction < 1:
        train_set, test_set = dataio.split(dataset, args.train_fraction, args.seed)

    cfg = learners.LearnerConfig(
        max_depth=args.max_depth, min_support=args.min_support, seed=args.seed
    )
    if args.kind == "tree":
        model = learners.train_greedy_tree(train_set, cfg)
    else:
        model = learners.train_greedy_rulelist(train_set, cfg)
    modelio.save_model(model, args.out)

    train_acc = learners.training_accuracy(model, train_set)
    print(f"wrote {args.out}")
    print(f"model_size: {learners.model_size(model)}")
    print(f"training accuracy: {train_acc:.4f}")
    if test_set is not None:
        print(f"test accuracy: {learners.training_accuracy(model, test_set):.4f}")
    else:
        print("test accuracy: n/a (trained on all rows)")
    return 0


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def _report_base(out_path: str) -> str:
    return out_path[:-5] if out_path.endswith(".json") else out_path


def cmd_audit(args) -> int:
    model = modelio.load_model(args.model)
    if args.legacy_dist and model.model_kind != "tree":
        print(
            "error: --legacy-dist is undefined for rule lists "
            "(per-cell entropies need independent cells)",
            file=sys.stderr,
        )
        return 2

    knowledge = reconstruct(model)
    report = metrics.dist_g(knowledge)
    modelio.write_text_atomic(args.out, metrics.report_to_text(report, model.schema))
    base = _report_base(args.out)
    modelio.write_text_atomic(base + ".groups.csv", metrics.report_groups_csv(report))
    written = [args.out, base + ".groups.csv"]
    if not args.no_figures:
        figure = plots.save_leak_cdf_figure(
            report.leak_distribution,
            base + ".leak_cdf.png",
            title=f"{model.model_kind}: per-example information leak",
        )
        written.append(figure)

    print(f"n_examples: {report.n_examples}")
    print(f"dist_g: {report.dist_g:.6f}")
    if args.legacy_dist:
        print(f"dist_legacy: {report.dist_legacy:.6f}")
    for path in written:
        print(f"wrote {path}")

    if args.original:
        original = _load_dataset(args.original, model.schema.label_domain.name, args.binarize)
        result = alignment.assign(knowledge, original)
        print(f"alignment cost: {result.total_cost:g}")
    return 0


# ---------------------------------------------------------------------------
# oracle-check
# ---------------------------------------------------------------------------

def cmd_oracle_check(args) -> int:
    model = modelio.load_model(args.model)
    knowledge = reconstruct(model)
    rows = counting.oracle_check(knowledge, ceiling=args.oracle_ceiling)

    reported: dict[int, int] = {}
    if args.report:
        with open(args.report, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        for entry in doc.get("per_group", []):
            reported[entry["path_id"]] = entry["world_count"]

    ok = True
    for path_id, closed, enumerated in rows:
        line = f"path {path_id}: closed-form={closed} enumerated={enumerated}"
        verdicts = [closed == enumerated]
        if path_id in reported:
            line += f" reported={reported[path_id]}"
            verdicts.append(reported[path_id] == enumerated)
        good = all(verdicts)
        ok = ok and good
        print(f"{line} {'ok' if good else 'MISMATCH'}")
    print("oracle check: " + ("all counts verified" if ok else "counts disagree"))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentGrid:
    """Sweep axes; the cell count is capped to keep runs bounded."""

    depths: tuple[int, ...]
    supports: tuple[float, ...]
    seeds: tuple[int, ...]
    model_kinds: tuple[str, ...]

    def __post_init__(self):
        for field_name in ("depths", "supports", "seeds", "model_kinds"):
            if not getattr(self, field_name):
                raise ValueError(f"grid field {field_name!r} must be non-empty")
        if any(d < 1 for d in self.depths):
            raise ValueError("depths must be positive")
        if any(not 0 < s <= 0.5 for s in self.supports):
            raise ValueError("supports must be in (0, 0.5]")
        bad = set(self.model_kinds) - {"tree", "rulelist"}
        if bad:
            raise ValueError(f"unknown model kinds: {sorted(bad)}")

    @property
    def n_cells(self) -> int:
        return len(self.depths) * len(self.supports) * len(self.seeds) * len(self.model_kinds)

    def cells(self):
        for kind in self.model_kinds:
            for seed in self.seeds:
                for depth in self.depths:
                    for support in self.supports:
                        yield (kind, seed, depth, support)


def load_grid(path) -> ExperimentGrid:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return ExperimentGrid(
        depths=tuple(doc["depths"]),
        supports=tuple(doc["supports"]),
        seeds=tuple(doc["seeds"]),
        model_kinds=tuple(doc["model_kinds"]),
    )


def _run_cell(task) -> dict:
    """Train + audit one grid cell. Module-level so worker processes can
    import it."""
    kind, seed, depth, support, train_set, test_set = task
    cfg = learners.LearnerConfig(max_depth=depth, min_support=support, seed=seed)
    if kind == "tree":
        model: Model = learners.train_greedy_tree(train_set, cfg)
    else:
        model = learners.train_greedy_rulelist(train_set, cfg)
    report = metrics.audit_model(model)
    return {
        "model_kind": kind,
        "seed": seed,
        "max_depth": depth,
        "min_support": support,
        "model_size": learners.model_size(model),
        "train_accuracy": learners.training_accuracy(model, train_set),
        "test_accuracy": learners.training_accuracy(model, test_set),
        "dist_g": report.dist_g,
        "leak_cdf": list(report.leak_distribution),
    }


def _write_family_csv(out_dir, name: str, fields: tuple[str, ...], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([row[f] for f in fields])
    path = os.path.join(out_dir, name)
    modelio.write_text_atomic(path, buf.getvalue())
    return path


def cmd_experiment(args) -> int:
    if not 0 < args.train_fraction < 1:
        print("error: --train-fraction must be strictly between 0 and 1", file=sys.stderr)
        return 2
    grid = load_grid(args.grid)
    if grid.n_cells > args.max_cells:
        print(
            f"error: grid has {grid.n_cells} cells, above the cap of {args.max_cells} "
            "(raise --max-cells to run anyway)",
            file=sys.stderr,
        )
        return 2

    dataset = _load_dataset(args.data, args.label, args.binarize)
    splits = {
        seed: dataio.split(dataset, args.train_fraction, seed) for seed in grid.seeds
    }
    tasks = [
        (kind, seed, depth, support, splits[seed][0], splits[seed][1])
        for kind, seed, depth, support in grid.cells()
    ]

    results = []
    failures = 0
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            futures = {pool.submit(_run_cell, task): task for task in tasks}
            for future, task in futures.items():
                try:
                    results.append(future.result())
                except Exception as exc:  # noqa: BLE001 - cell failures are logged, not fatal
                    failures += 1
                    print(f"cell {task[:4]} failed: {exc}", file=sys.stderr)
    else:
        for task in tasks:
            try:
                results.append(_run_cell(task))
            except Exception as exc:  # noqa: BLE001
                failures += 1
                print(f"cell {task[:4]} failed: {exc}", file=sys.stderr)

    results.sort(key=lambda r: (r["model_kind"], r["seed"], r["max_depth"], r["min_support"]))
    leak_rows = [
        {
            "model_kind": r["model_kind"],
            "seed": r["seed"],
            "max_depth": r["max_depth"],
            "min_support": r["min_support"],
            "entropy_ratio": ratio,
            "cumulative_proportion": proportion,
        }
        for r in results
        for ratio, proportion in r["leak_cdf"]
    ]

    os.makedirs(args.out_dir, exist_ok=True)
    for name, fields in CSV_FAMILIES.items():
        rows = leak_rows if name == "leak_cdf.csv" else results
        path = _write_family_csv(args.out_dir, name, fields, rows)
        print(f"wrote {path}")

    if not args.no_figures and results:
        figure_specs = [
            ("size_vs_entropy.png", "model_size", "dist_g", "model size", "entropy ratio"),
            ("accuracy_vs_entropy.png", "train_accuracy", "dist_g", "training accuracy", "entropy ratio"),
            ("depth_vs_size.png", "max_depth", "model_size", "maximum depth", "model size"),
            ("depth_vs_entropy.png", "max_depth", "dist_g", "maximum depth", "entropy ratio"),
            ("support_vs_entropy.png", "min_support", "dist_g", "minimum support", "entropy ratio"),
        ]
        for name, x_key, y_key, x_label, y_label in figure_specs:
            path = plots.save_xy_figure(
                results, x_key, y_key, os.path.join(args.out_dir, name), x_label, y_label
            )
            print(f"wrote {path}")
        path = plots.save_leak_cdf_family_figure(
            leak_rows, os.path.join(args.out_dir, "leak_cdf.png")
        )
        print(f"wrote {path}")

    done = len(results)
    print(f"experiment: {done}/{len(tasks)} cells succeeded, {failures} failed")
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - uniform error reporting for the CLI
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
