#!/usr/bin/env python3
import functools
import json
import os
from typing import Dict, List, Optional, Sequence, Tuple

import click
import pandas as pd
from tabulate import tabulate

from . import __version__
from .archive import MatrixArchive, build_manifest, read_matrix_archive, write_matrix_archive
from .config import load_config, load_settings
from .errors import ConfigError, DataValidationError, InputError, InvariantViolation, TradeError
from .flow_matrix import build_flow_matrix
from .ingest import edge_years, journal_totals, merge_edges, parse_category_map, parse_edges, parse_publications
from .logger import TradeLogger, configure_logging
from .records import PublicationCounts, UnmappedPolicy
from .reports import (
    band_counts_payload,
    classification_frame,
    correlation_frame,
    dynamics_frame,
    frame_records,
    histogram_frame,
    indicators_frame,
    numeric_column,
    qq_frame,
    rank_rows,
    read_table,
    skipped_frame,
    summary_frame,
    write_csv,
    write_json,
)
from .stats import KS_VARIANT, KURTOSIS_CONVENTION, SKEWNESS_CONVENTION, correlation_matrix, plot_data, summarize
from .synth import EdgeModel, build_spec, generate, write_dataset
from .taxonomy import TYPE_LABELS, band_counts, classify, resolve_splits
from .trade_metrics import (
    DynamicsRecord,
    Period,
    SurplusMode,
    acceleration_partition,
    all_field_indicators,
    all_trading_dynamics,
    dependence_counts,
    overall_increment,
    role_counts,
    role_partition,
)
from .utils import cleanup_old_logs

logger = TradeLogger()

# rank accepts this alias and resolves it through the configured surplus mode
SURPLUS_ALIAS = "knowledge_surplus"


def _fail(error: TradeError):
    logger.log_error(type(error).__name__, str(error))
    click.echo(f"Error: {error}", err=True)
    click.get_current_context().exit(error.exit_code)


def handle_errors(func):
    """Map package errors to exit codes 2/3; anything unexpected is an internal error."""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except TradeError as e:
            _fail(e)
        except (click.exceptions.Exit, click.ClickException, click.Abort):
            raise
        except Exception as e:
            logger.logger.exception("unexpected failure")
            click.echo(f"Internal error: {e}", err=True)
            click.get_current_context().exit(InvariantViolation.exit_code)
    return wrapper


def _out_path(ctx, name: str) -> str:
    out_dir = ctx.obj['OUT_DIR']
    os.makedirs(out_dir, exist_ok=True)
    return os.path.join(out_dir, name)


def _config_payload(ctx) -> Dict:
    return ctx.obj['CONFIG'].model_dump(mode="json")


def _manifest(ctx, command: str, inputs: Sequence[Optional[str]], years: Sequence[int]):
    return build_manifest(
        command,
        [p for p in inputs if p],
        years,
        ctx.obj['POLICY'].value,
        _config_payload(ctx),
    )


def _emit(ctx, stem: str, frame: pd.DataFrame, manifest, key: str, extra: Optional[Dict] = None) -> List[str]:
    """CSV body (csv format only) plus the JSON report carrying the manifest."""
    paths = []
    if ctx.obj['FORMAT'] == "csv":
        paths.append(write_csv(frame, _out_path(ctx, f"{stem}.csv")))
    payload = {"manifest": manifest.model_dump(mode="json"), **(extra or {}), key: frame_records(frame)}
    paths.append(write_json(payload, _out_path(ctx, f"{stem}.json")))
    for path in paths:
        click.echo(path)
    return paths


def _no_year(ctx, command: str):
    if ctx.obj['YEAR'] is not None:
        raise InputError(f"--year applies to build and metrics only, not {command}")


def _load_archives(paths: Sequence[str]) -> List[MatrixArchive]:
    archives = sorted((read_matrix_archive(p) for p in paths), key=lambda a: a.matrix.year)
    years = [a.matrix.year for a in archives]
    if len(set(years)) != len(years):
        raise DataValidationError(f"several archives for the same year: {years}")
    return archives


def _load_publications(path: Optional[str]) -> Optional[PublicationCounts]:
    return parse_publications(path) if path else None


def _grand_total(archive: MatrixArchive) -> int:
    if archive.totals is None:
        raise DataValidationError(
            f"{archive.path} has no journal totals; pass --total-from/--total-to"
        )
    return archive.totals.citations


def _period_dynamics(
    archives: List[MatrixArchive],
    publications: Optional[PublicationCounts],
    totals: Optional[Tuple[int, int]] = None,
) -> Tuple[Dict[Period, List[DynamicsRecord]], Dict[Period, float], List[Period]]:
    """
    Dynamics records for every consecutive period, plus the whole span when
    there are more than two archives. Returns (records, increments, consecutive periods).
    """
    consecutive = list(zip(archives, archives[1:]))
    pairs = consecutive + ([(archives[0], archives[-1])] if len(archives) > 2 else [])
    records: Dict[Period, List[DynamicsRecord]] = {}
    increments: Dict[Period, float] = {}
    for before, after in pairs:
        period = (before.matrix.year, after.matrix.year)
        total_from, total_to = totals if totals else (_grand_total(before), _grand_total(after))
        increments[period] = overall_increment(total_from, total_to)
        records[period] = all_trading_dynamics(before.matrix, after.matrix, publications, increments[period])
    return records, increments, [(a.matrix.year, b.matrix.year) for a, b in consecutive]


def _period_key(period: Period) -> str:
    return f"{period[0]}-{period[1]}"


@click.group()
@click.option('--year', type=int, default=None, help='Restrict build or metrics to one year')
@click.option('--strict/--lenient', 'strict', default=None,
              help='Unmapped journals abort the build (strict) or are skipped and reported (lenient)')
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              help='JSON analysis configuration')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
              help='Output directory (default: $SCITRADE_OUT_DIR or ./out)')
@click.option('--format', 'fmt', type=click.Choice(['csv', 'json']), default='csv',
              help='csv writes CSV bodies plus JSON reports; json writes JSON reports only')
@click.option('-v', '--verbose', is_flag=True, help='Debug logging on the console')
@click.version_option(__version__, prog_name='scitrade')
@click.pass_context
def cli(ctx, year, strict, config_path, out_dir, fmt, verbose):
    """
    Trade indicators for citation flows between scientific fields.

    Example usage:

    # Generate a synthetic dataset:
    scitrade --out data synth --seed 7 --years 2007 --years 2008 --years 2009

    # Build the field-to-field matrices:
    scitrade --out out build --edges data/edges.csv --map data/categories.csv --categories data/category_names.csv

    # Indicators, dynamics and classification:
    scitrade --out out metrics out/matrix_2009.csv --publications data/publications.csv
    scitrade --out out dynamics out/matrix_2007.csv out/matrix_2008.csv out/matrix_2009.csv
    scitrade --out out classify out/matrix_2009.csv --history out/matrix_2007.csv --history out/matrix_2008.csv

    # Distribution diagnostics and rankings:
    scitrade --out out stats out/indicators_2009.csv --column ratio --column self_dependence
    scitrade rank out/indicators_2009.csv --column ratio --top-k 10
    """
    settings = load_settings()
    log_dir = settings.log_dir or None
    cleanup_old_logs(log_dir)
    configure_logging(log_dir, verbose)

    ctx.ensure_object(dict)
    try:
        config = load_config(config_path)
    except ConfigError as e:
        _fail(e)
    if strict is None:
        policy = config.unmapped_policy
    else:
        policy = UnmappedPolicy.STRICT if strict else UnmappedPolicy.LENIENT

    ctx.obj['YEAR'] = year
    ctx.obj['POLICY'] = policy
    ctx.obj['CONFIG'] = config
    ctx.obj['OUT_DIR'] = out_dir or settings.out_dir
    ctx.obj['FORMAT'] = fmt
    logger.log_session_start(ctx.invoked_subcommand or "", {
        "year": year, "policy": policy.value, "config": config_path,
        "out": ctx.obj['OUT_DIR'], "format": fmt,
    })


@cli.command()
@click.option('--edges', 'edges_paths', multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False), help='Edges CSV (repeatable)')
@click.option('--map', 'map_path', required=True, type=click.Path(exists=True, dir_okay=False),
              help='journal,category CSV')
@click.option('--categories', 'universe_path', type=click.Path(exists=True, dir_okay=False),
              help='category,display_name CSV declaring the field universe')
@click.pass_context
@handle_errors
def build(ctx, edges_paths, map_path, universe_path):
    """Aggregate journal citations into one field matrix archive per year."""
    year = ctx.obj['YEAR']
    policy = ctx.obj['POLICY']
    edges = merge_edges(*(parse_edges(p, year=year) for p in edges_paths))
    category_map = parse_category_map(map_path, universe=universe_path)
    years = [year] if year is not None else edge_years(edges)
    if not years:
        raise DataValidationError("edge files contain no rows")

    manifest = _manifest(ctx, "build", [*edges_paths, map_path, universe_path], years)
    single = category_map.is_single_assignment()
    for y in years:
        matrix = build_flow_matrix(edges, category_map, y, policy)
        totals = journal_totals(edges, y)
        skipped_total = sum(s.count for s in matrix.skipped)
        if single and matrix.total() + skipped_total != totals.citations:
            raise InvariantViolation(
                f"year {y}: matrix holds {matrix.total()} citations, journals {totals.citations}"
            )
        csv_path, _ = write_matrix_archive(matrix, ctx.obj['OUT_DIR'], manifest, totals, category_map.display_names)
        if policy is UnmappedPolicy.LENIENT:
            write_csv(skipped_frame(matrix.skipped), _out_path(ctx, f"skipped_{y}.csv"))
        click.echo(
            f"{y}: {csv_path} ({matrix.dimension} fields, {matrix.total()} citations, "
            f"{len(matrix.skipped)} skipped edges)"
        )


@cli.command()
@click.argument('archives', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--publications', 'publications_path', type=click.Path(exists=True, dir_okay=False),
              help='category,year,publications CSV')
@click.pass_context
@handle_errors
def metrics(ctx, archives, publications_path):
    """Per-field indicator tables for each archive."""
    config = ctx.obj['CONFIG']
    publications = _load_publications(publications_path)
    loaded = _load_archives(archives)
    if ctx.obj['YEAR'] is not None:
        loaded = [a for a in loaded if a.matrix.year == ctx.obj['YEAR']]
        if not loaded:
            raise DataValidationError(f"no archive for year {ctx.obj['YEAR']}")

    for archive in loaded:
        matrix = archive.matrix
        indicators = all_field_indicators(matrix, publications)
        on_self, on_others = dependence_counts(matrix, config.dependence_rule)
        summary = {
            "grand_total": archive.totals.citations if archive.totals else None,
            "cell_sum": matrix.total(),
            "roles": role_counts(role_partition(matrix)),
            "dependence": {"rule": config.dependence_rule.value, "self": on_self, "others": on_others},
        }
        manifest = _manifest(ctx, "metrics", [archive.path, publications_path], [matrix.year])
        _emit(ctx, f"indicators_{matrix.year}", indicators_frame(indicators), manifest, "indicators",
              {"summary": summary})


@cli.command()
@click.argument('archives', nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option('--publications', 'publications_path', type=click.Path(exists=True, dir_okay=False))
@click.option('--total-from', type=int, help='Journal-level grand total of the first year')
@click.option('--total-to', type=int, help='Journal-level grand total of the second year')
@click.pass_context
@handle_errors
def dynamics(ctx, archives, publications_path, total_from, total_to):
    """Export growth against the overall increment, per period."""
    _no_year(ctx, "dynamics")
    if len(archives) < 2:
        raise InputError("dynamics needs at least two archives")
    totals = None
    if (total_from is None) != (total_to is None):
        raise InputError("--total-from and --total-to go together")
    if total_from is not None:
        if len(archives) != 2:
            raise InputError("--total-from/--total-to apply to exactly two archives")
        totals = (total_from, total_to)

    config = ctx.obj['CONFIG']
    loaded = _load_archives(archives)
    records, increments, consecutive = _period_dynamics(loaded, _load_publications(publications_path), totals)
    partition = acceleration_partition(
        {p: records[p] for p in consecutive}, increments, exclude=config.exclude_fields
    )
    excluded = set(config.exclude_fields)
    period_counts = {
        _period_key(p): {
            "overall_increment": increments[p],
            "above": sum(1 for r in rs if r.field not in excluded and r.above_overall is True),
            "below": sum(1 for r in rs if r.field not in excluded and r.above_overall is False),
        }
        for p, rs in records.items()
    }
    years = [a.matrix.year for a in loaded]
    manifest = _manifest(ctx, "dynamics", [*archives, publications_path], years)
    all_records = [r for rs in records.values() for r in rs]
    _emit(ctx, f"dynamics_{years[0]}_{years[-1]}", dynamics_frame(all_records), manifest, "records", {
        "periods": period_counts,
        "acceleration": {
            "above_all_periods": list(partition.above_all_periods),
            "below_all_periods": list(partition.below_all_periods),
            "mixed": list(partition.mixed),
            "excluded": sorted(excluded),
        },
    })


@cli.command(name='classify')
@click.argument('archive', type=click.Path(exists=True, dir_okay=False))
@click.option('--history', 'history', multiple=True, type=click.Path(exists=True, dir_okay=False),
              help='Earlier archive for the I/J dynamics types (repeatable)')
@click.pass_context
@handle_errors
def classify_cmd(ctx, archive, history):
    """Assign each field its trading type."""
    _no_year(ctx, "classify")
    config = ctx.obj['CONFIG']
    target = read_matrix_archive(archive)
    indicators = all_field_indicators(target.matrix)

    records = increments = None
    if history:
        chain = _load_archives([*history, archive])
        if chain[-1].matrix.year != target.matrix.year:
            raise InputError("history archives must predate the classified archive")
        all_records, all_increments, consecutive = _period_dynamics(chain, None)
        records = {p: all_records[p] for p in consecutive}
        increments = {p: all_increments[p] for p in consecutive}

    classifications = classify(indicators, records, config.classification, increments, config.exclude_fields)
    splits = resolve_splits(indicators, config.classification)
    manifest = _manifest(ctx, "classify", [archive, *history], [target.matrix.year])
    _emit(ctx, f"classification_{target.matrix.year}", classification_frame(classifications), manifest,
          "classifications", {
              "splits": splits.as_dict(),
              "band_counts": band_counts_payload(band_counts(classifications)),
              "type_labels": TYPE_LABELS,
          })


@cli.command()
@click.argument('indicator_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--column', 'columns', multiple=True, required=True, help='Indicator column (repeatable)')
@click.option('--bins', default=20, show_default=True, type=click.IntRange(min=1))
@click.pass_context
@handle_errors
def stats(ctx, indicator_csv, columns, bins):
    """Distribution summary, histogram and Q-Q data for indicator columns."""
    _no_year(ctx, "stats")
    frame = read_table(indicator_csv)
    values = {c: numeric_column(frame, c) for c in columns}
    manifest = _manifest(ctx, "stats", [indicator_csv], [])
    report = {
        "manifest": manifest.model_dump(mode="json"),
        "conventions": {"skewness": SKEWNESS_CONVENTION, "kurtosis": KURTOSIS_CONVENTION, "ks": KS_VARIANT},
        "columns": {},
    }
    csv_out = ctx.obj['FORMAT'] == "csv"
    for column, series in values.items():
        sample = series.dropna().to_numpy()
        summary = summary_frame(column, summarize(sample))
        plot = plot_data(sample, bins)
        frames = {"summary": summary, "histogram": histogram_frame(plot), "qq": qq_frame(plot)}
        if csv_out:
            for kind, body in frames.items():
                click.echo(write_csv(body, _out_path(ctx, f"stats_{column}_{kind}.csv")))
        report["columns"][column] = {kind: frame_records(body) for kind, body in frames.items()}

    if len(values) >= 2:
        paired = pd.DataFrame(values).dropna()
        correlations = correlation_frame(correlation_matrix({c: paired[c].to_numpy() for c in values}))
        if csv_out:
            click.echo(write_csv(correlations, _out_path(ctx, "stats_correlations.csv")))
        report["correlations"] = frame_records(correlations)
    click.echo(write_json(report, _out_path(ctx, "stats.json")))


@cli.command()
@click.argument('indicator_csv', type=click.Path(exists=True, dir_okay=False))
@click.option('--column', required=True, help='Column to rank by')
@click.option('--top-k', default=10, show_default=True, type=click.IntRange(min=0))
@click.option('--direction', type=click.Choice(['desc', 'asc']), default='desc', show_default=True)
@click.pass_context
@handle_errors
def rank(ctx, indicator_csv, column, top_k, direction):
    """Top-k table by one column; ties go to the field name, ascending."""
    _no_year(ctx, "rank")
    if column == SURPLUS_ALIAS:
        mode = ctx.obj['CONFIG'].surplus_mode
        column = "net_balance" if mode is SurplusMode.NET_BALANCE else "positive_surplus"
    frame = read_table(indicator_csv)
    ranked = rank_rows(frame, column, top_k, direction)
    print(tabulate(ranked.values.tolist(), headers=list(ranked.columns), tablefmt="grid", floatfmt=".6g"))
    manifest = _manifest(ctx, "rank", [indicator_csv], [])
    stem = f"rank_{column}_{direction}"
    if ctx.obj['FORMAT'] == "csv":
        write_csv(ranked, _out_path(ctx, f"{stem}.csv"))
    write_json({"manifest": manifest.model_dump(mode="json"), "column": column, "direction": direction,
                "top_k": top_k, "rows": frame_records(ranked)}, _out_path(ctx, f"{stem}.json"))


@cli.command()
@click.option('--spec', 'spec_path', type=click.Path(exists=True, dir_okay=False), help='JSON SynthSpec')
@click.option('--seed', type=int)
@click.option('--categories', 'n_categories', type=int, help='Number of categories')
@click.option('--journals', 'journals_per_category', type=int, help='Journals per category')
@click.option('--edges', 'total_edges', type=int, help='Citation draws in the first year')
@click.option('--years', multiple=True, type=int, help='Year (repeatable)')
@click.option('--model', 'edge_model', type=click.Choice([m.value for m in EdgeModel]))
@click.option('--exponent', type=float, help='Preferential attachment exponent')
@click.option('--multi-assign', 'multi_assign_fraction', type=float,
              help='Fraction of journals given a second category')
@click.option('--growth', 'edge_growth', type=float, help='Yearly growth of the number of draws')
@click.pass_context
@handle_errors
def synth(ctx, spec_path, **overrides):
    """Generate a seeded synthetic dataset in the ingest CSV schemas."""
    _no_year(ctx, "synth")
    data = {}
    if spec_path:
        try:
            with open(spec_path, encoding="utf-8") as handle:
                data = json.load(handle)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{spec_path}: invalid JSON at line {e.lineno}: {e.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{spec_path}: expected a JSON object")
    data.update({k: (list(v) if isinstance(v, tuple) else v)
                 for k, v in overrides.items() if v is not None and v != ()})
    dataset = generate(build_spec(data))
    for kind, path in write_dataset(dataset, ctx.obj['OUT_DIR']).items():
        click.echo(f"{kind}: {path}")


def main():
    cli(obj={})


if __name__ == '__main__':
    main()
