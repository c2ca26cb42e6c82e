"""Command-line front end: inject | filter | evaluate | benchmark.

The CLI is the composition root: it resolves the thread budget once (flag,
then NOISEFILTER_THREADS, then all cores) and passes it down. No subcommand
ever writes to its input files, and results never depend on the thread count.
"""

import dataclasses
import functools
import json
from pathlib import Path

import click
import numpy as np

from . import __version__
from .data import (
    DataFormatError,
    EmptyInputError,
    load_csv,
    load_libsvm,
    save_csv,
    save_libsvm,
    write_metadata,
)
from .evaluation import (
    ConfigError,
    ExperimentConfig,
    UndefinedMetricError,
    _fit_predict,
    _precision_from_ids,
    _recall_from_ids,
    ClassifierSpec,
    accuracy,
    run_experiment,
    write_results_csv,
    write_results_json,
)
from .filters import VoteScheme, enn_bd, hme_bd, hte_bd, load_report_dict
from .noise import NoiseLedger, inject_uniform_class_noise
from .plots import render_figures


def _fail_cleanly(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ValueError, OSError, json.JSONDecodeError, KeyError) as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper


def _parse_label_column(value: str):
    try:
        return int(value)
    except ValueError:
        return value


def _load_dataset(path, input_format, label_column):
    if input_format == "libsvm":
        return load_libsvm(path)
    return load_csv(path, _parse_label_column(label_column))


def _save_dataset(data, path, output_format):
    if output_format == "libsvm":
        save_libsvm(data, path)
    else:
        save_csv(data, path)
    write_metadata(data, f"{path}.meta.json")


def _guard_outputs(input_path, *outputs):
    """Refuse to clobber the input, and make output directories before work starts."""
    resolved_in = Path(input_path).resolve()
    for out in outputs:
        if out is None:
            continue
        if Path(out).resolve() == resolved_in:
            raise click.ClickException(f"refusing to overwrite the input file {input_path}")
        Path(out).resolve().parent.mkdir(parents=True, exist_ok=True)


_format_option = click.option(
    "--input-format",
    type=click.Choice(["csv", "libsvm"]),
    default="csv",
    show_default=True,
    help="How to parse the input dataset.",
)
_label_option = click.option(
    "--label-column",
    default="-1",
    show_default=True,
    help="CSV label column: an index (negative counts from the end) or a header name.",
)
_threads_option = click.option(
    "--threads",
    type=click.IntRange(min=1),
    default=None,
    envvar="NOISEFILTER_THREADS",
    help="Worker threads; defaults to all cores. Never changes results.",
)
_seed_option = click.option(
    "--seed",
    type=int,
    default=0,
    show_default=True,
    envvar="NOISEFILTER_SEED",
    help="Seed for every random choice made by the command.",
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(version=__version__, prog_name="noisefilter")
def main():
    """Label-noise filtering toolkit for classification datasets."""


@main.command()
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False))
@click.option("--level", type=click.FloatRange(0.0, 1.0), required=True,
              help="Fraction of rows whose label is flipped.")
@_seed_option
@click.option("--output", required=True, type=click.Path(dir_okay=False),
              help="Where the noisy dataset is written.")
@click.option("--ledger-output", type=click.Path(dir_okay=False), default=None,
              help="Ground-truth ledger JSON; defaults to OUTPUT + '.ledger.json'.")
@_format_option
@_label_option
@_fail_cleanly
def inject(input_path, level, seed, output, ledger_output, input_format, label_column):
    """Flip a fraction of labels uniformly and record the ground truth."""
    ledger_output = ledger_output or f"{output}.ledger.json"
    _guard_outputs(input_path, output, ledger_output)
    data = _load_dataset(input_path, input_format, label_column)
    noisy, ledger = inject_uniform_class_noise(data, level, seed)
    _save_dataset(noisy, output, input_format)
    ledger.save_json(ledger_output)
    click.echo(f"flipped {ledger.n_flipped} of {data.n} labels -> {output}")


@main.command(name="filter")
@click.argument("input_path", metavar="INPUT", type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["hme", "hte", "enn"]), required=True,
              help="Filter to apply.")
@click.option("--partitions", type=click.IntRange(min=2), default=4, show_default=True,
              help="Fold count for the ensemble filters.")
@click.option("--trees", type=click.IntRange(min=1), default=100, show_default=True,
              help="Trees per random forest.")
@click.option("--vote", type=click.Choice(["majority", "consensus"]), default="majority",
              show_default=True, help="Voting scheme for the heterogeneous filter.")
@click.option("--max-depth", type=click.IntRange(min=0), default=10, show_default=True)
@click.option("--max-bins", type=click.IntRange(min=2), default=32, show_default=True)
@_seed_option
@_threads_option
@click.option("--output", required=True, type=click.Path(dir_okay=False),
              help="Where the kept dataset is written.")
@click.option("--report-output", type=click.Path(dir_okay=False), default=None,
              help="Filter report JSON; defaults to OUTPUT + '.report.json'.")
@click.option("--include-removed-ids", is_flag=True, default=False,
              help="Embed the removed row ids in the report (needed by evaluate).")
@_format_option
@_label_option
@_fail_cleanly
def filter_cmd(input_path, method, partitions, trees, vote, max_depth, max_bins, seed,
               threads, output, report_output, include_removed_ids, input_format, label_column):
    """Remove suspected mislabeled rows and write the kept dataset."""
    report_output = report_output or f"{output}.report.json"
    _guard_outputs(input_path, output, report_output)
    data = _load_dataset(input_path, input_format, label_column)
    if method == "hme":
        report = hme_bd(data, partitions=partitions, n_trees=trees, max_depth=max_depth,
                        max_bins=max_bins, seed=seed, n_jobs=threads)
    elif method == "hte":
        report = hte_bd(data, partitions=partitions, n_trees=trees, vote=VoteScheme(vote),
                        seed=seed, max_depth=max_depth, max_bins=max_bins, n_jobs=threads)
    else:
        report = enn_bd(data, n_jobs=threads)
    _save_dataset(report.kept, output, input_format)
    report.save_json(report_output, include_removed_ids=include_removed_ids)
    click.echo(
        f"{report.config['filter']}: removed {report.n_removed} of {report.n_input} rows "
        f"in {report.wall_time_s:.2f}s -> {output}"
    )


@main.command()
@click.option("--train", "train_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Training dataset (typically a filter's kept output).")
@click.option("--test", "test_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Clean test dataset.")
@click.option("--classifier", type=click.Choice(["1nn", "tree"]), default="1nn", show_default=True)
@click.option("--tree-depth", type=click.IntRange(min=0), default=20, show_default=True,
              help="Depth of the evaluation decision tree.")
@click.option("--report", "report_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Filter report JSON; enables noise recall/precision with --ledger.")
@click.option("--ledger", "ledger_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Noise ledger JSON from inject.")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Write the metrics JSON here instead of stdout.")
@_seed_option
@_threads_option
@_format_option
@_label_option
@_fail_cleanly
def evaluate(train_path, test_path, classifier, tree_depth, report_path, ledger_path,
             output, seed, threads, input_format, label_column):
    """Train a classifier on TRAIN, score it on TEST, optionally score a filter."""
    train = _load_dataset(train_path, input_format, label_column)
    test = _load_dataset(test_path, input_format, label_column)
    spec = ClassifierSpec(classifier, {"max_depth": tree_depth} if classifier == "tree" else {})
    predictions = _fit_predict(spec, train, test, seed=seed, n_jobs=threads)
    metrics = {"classifier": classifier, "accuracy": accuracy(predictions, test.labels)}
    if report_path and ledger_path:
        report = load_report_dict(report_path)
        if "removed_ids" not in report:
            raise click.ClickException(
                "report lacks removed_ids; rerun filter with --include-removed-ids"
            )
        ledger = NoiseLedger.load_json(ledger_path)
        removed = np.asarray(report["removed_ids"], dtype=np.int64)
        try:
            metrics["noise_recall"] = _recall_from_ids(removed, ledger.flipped_ids)
        except UndefinedMetricError:
            metrics["noise_recall"] = None
        try:
            metrics["noise_precision"] = _precision_from_ids(removed, ledger.flipped_ids)
        except UndefinedMetricError:
            metrics["noise_precision"] = None
    text = json.dumps(metrics, indent=2)
    if output:
        Path(output).write_text(text + "\n")
    click.echo(text)


@main.command()
@click.argument("config_path", metavar="CONFIG", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", required=True, type=click.Path(dir_okay=False),
              help="Results CSV path.")
@click.option("--json-output", type=click.Path(dir_okay=False), default=None,
              help="Results JSON path; defaults to OUTPUT with a .json suffix.")
@click.option("--figures/--no-figures", default=True, show_default=True,
              help="Render the result figures next to the CSV.")
@click.option("--figures-dir", type=click.Path(file_okay=False), default=None,
              help="Figure directory; defaults to the CSV's directory.")
@click.option("--seed", type=int, default=None, envvar="NOISEFILTER_SEED",
              help="Override the config's master seed.")
@_threads_option
@_fail_cleanly
def benchmark(config_path, output, json_output, figures, figures_dir, seed, threads):
    """Run the experiment protocol described by a JSON CONFIG file."""
    _guard_outputs(config_path, output, json_output)
    config = ExperimentConfig.from_json_file(config_path)
    if seed is not None:
        config = dataclasses.replace(config, seed=int(seed))
    rows = run_experiment(config, n_jobs=threads)
    write_results_csv(rows, output)
    json_output = json_output or str(Path(output).with_suffix(".json"))
    write_results_json(rows, json_output)
    written = [output, json_output]
    if figures:
        out_dir = figures_dir or str(Path(output).resolve().parent)
        written.extend(str(p) for p in render_figures(rows, out_dir))
    click.echo(f"{len(rows)} result rows")
    for path in written:
        click.echo(f"wrote {path}")


if __name__ == "__main__":
    main()
