"""
CSV and JSON renderings of every report the CLI emits.

CSV bodies carry no timestamps so reruns are byte-identical; floats are
written with 6 significant digits.
"""
import json
import math
import os
from dataclasses import asdict
from enum import Enum
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .errors import DomainError, InputError, ParseError
from .logger import TradeLogger
from .records import SkippedEdge
from .stats import DistributionSummary, PlotData, SpearmanResult
from .taxonomy import BandCounts, TradeClassification
from .trade_metrics import DynamicsRecord, FieldIndicators
from .utils import sig6

logger = TradeLogger()

FLOAT_FORMAT = "%.6g"

INDICATOR_COLUMNS = [
    "field", "year", "exports", "imports", "self_citations", "ratio", "self_dependence",
    "net_balance", "positive_surplus", "hub_size", "export_partner_count", "publications",
]
DYNAMICS_COLUMNS = [
    "field", "year_from", "year_to", "exports_from", "exports_to", "export_growth",
    "publications_from", "publications_to", "publication_growth", "overall_increment",
    "above_overall", "reason",
]
CLASSIFICATION_COLUMNS = ["field", "dependence", "role", "impact", "dynamics", "types"]
SKIPPED_COLUMNS = ["citing_journal", "cited_journal", "year", "count", "reason"]
SUMMARY_COLUMNS = [
    "column", "n", "mean", "sd", "skewness", "kurtosis", "se_skewness", "se_kurtosis",
    "ks_statistic", "ks_p_value", "note",
]
HISTOGRAM_COLUMNS = ["bin_low", "bin_high", "count"]
QQ_COLUMNS = ["theoretical_quantile", "sample_quantile"]
CORRELATION_COLUMNS = ["column_a", "column_b", "n", "rho", "rho_squared"]

_NULLABLE_INT = ["publications", "publications_from", "publications_to"]


def _frame(rows: List[Dict[str, Any]], columns: Sequence[str]) -> pd.DataFrame:
    frame = pd.DataFrame(rows, columns=list(columns))
    for column in _NULLABLE_INT:
        if column in frame:
            frame[column] = frame[column].astype("Int64")
    return frame


def write_csv(frame: pd.DataFrame, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.log_report_written("csv", path)
    return path


def _jsonable(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return None if math.isnan(value) else sig6(value)
    if value is pd.NA:
        return None
    return value


def write_json(payload: Mapping[str, Any], path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(_jsonable(dict(payload)), handle, indent=2)
        handle.write("\n")
    logger.log_report_written("json", path)
    return path


def frame_records(frame: pd.DataFrame) -> List[Dict[str, Any]]:
    """DataFrame rows as dicts with NaN/NA turned into None."""
    records = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
    return [_jsonable(r) for r in records]


def indicator_row(ind: FieldIndicators) -> Dict[str, Any]:
    return {
        "field": ind.field,
        "year": ind.year,
        "exports": ind.exports,
        "imports": ind.imports,
        "self_citations": ind.self_citations,
        "ratio": ind.export_import_ratio,
        "self_dependence": ind.self_dependence,
        "net_balance": ind.net_balance,
        "positive_surplus": ind.positive_surplus,
        "hub_size": ind.hub_size,
        "export_partner_count": ind.export_partner_count,
        "publications": ind.publications,
    }


def indicators_frame(indicators: Iterable[FieldIndicators]) -> pd.DataFrame:
    return _frame([indicator_row(i) for i in indicators], INDICATOR_COLUMNS)


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def dynamics_frame(records: Iterable[DynamicsRecord]) -> pd.DataFrame:
    rows = [
        {
            "field": r.field,
            "year_from": r.period[0],
            "year_to": r.period[1],
            "exports_from": r.exports_from,
            "exports_to": r.exports_to,
            "export_growth": r.export_growth,
            "publications_from": r.publications_from,
            "publications_to": r.publications_to,
            "publication_growth": r.publication_growth,
            "overall_increment": r.overall_increment,
            "above_overall": _flag(r.above_overall),
            "reason": r.reason or "",
        }
        for r in records
    ]
    return _frame(rows, DYNAMICS_COLUMNS)


def classification_frame(classifications: Iterable[TradeClassification]) -> pd.DataFrame:
    rows = [
        {
            "field": c.field,
            "dependence": c.dependence.value,
            "role": c.role.value,
            "impact": c.impact.value,
            "dynamics": c.dynamics.value,
            "types": ";".join(c.types),
        }
        for c in classifications
    ]
    return _frame(rows, CLASSIFICATION_COLUMNS)


def band_counts_payload(counts: BandCounts) -> Dict[str, Any]:
    return {
        "cells": [
            {"dependence": d.value, "role": r.value, "impact": i.value, "count": n}
            for (d, r, i), n in counts.cells.items()
        ],
        "types": dict(counts.types),
        "total": counts.total,
    }


def skipped_frame(skipped: Iterable[SkippedEdge]) -> pd.DataFrame:
    return _frame([asdict(s) for s in skipped], SKIPPED_COLUMNS)


def summary_frame(column: str, summary: DistributionSummary) -> pd.DataFrame:
    row = {"column": column, **asdict(summary)}
    row["note"] = row["note"] or ""
    return _frame([row], SUMMARY_COLUMNS)


def histogram_frame(plot: PlotData) -> pd.DataFrame:
    return _frame([{"bin_low": b.low, "bin_high": b.high, "count": b.count} for b in plot.histogram], HISTOGRAM_COLUMNS)


def qq_frame(plot: PlotData) -> pd.DataFrame:
    return _frame([asdict(p) for p in plot.qq], QQ_COLUMNS)


def correlation_frame(results: Mapping[Tuple[str, str], SpearmanResult]) -> pd.DataFrame:
    rows = [
        {"column_a": a, "column_b": b, "n": r.n, "rho": r.rho, "rho_squared": r.rho_squared}
        for (a, b), r in results.items()
    ]
    return _frame(rows, CORRELATION_COLUMNS)


def read_table(path: str) -> pd.DataFrame:
    """Read a report CSV back (e.g. an indicator table for ``stats``/``rank``)."""
    try:
        return pd.read_csv(path, keep_default_na=True)
    except FileNotFoundError:
        raise ParseError("file not found", source=path) from None
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read table: {exc}", source=path) from None


def numeric_column(frame: pd.DataFrame, column: str) -> pd.Series:
    """A numeric column by name; unknown or non-numeric columns are input errors."""
    if column not in frame.columns:
        raise InputError(f"unknown column {column!r}; valid columns: {', '.join(map(str, frame.columns))}")
    values = pd.to_numeric(frame[column], errors="coerce")
    if values.isna().sum() > frame[column].isna().sum():
        raise InputError(f"column {column!r} is not numeric")
    return values


def rank_rows(frame: pd.DataFrame, column: str, top_k: int, direction: str = "desc") -> pd.DataFrame:
    """
    Top ``top_k`` rows by ``column``; ties broken by field ascending.
    Rows with no value in ``column`` are left out.
    """
    if top_k < 0:
        raise DomainError("top_k must be non-negative")
    if "field" not in frame.columns:
        raise InputError("ranking needs a 'field' column")
    values = numeric_column(frame, column)
    ranked = frame.assign(**{column: values}).loc[values.notna()]
    ranked = ranked.sort_values(
        [column, "field"],
        ascending=[direction == "asc", True],
        kind="mergesort",
    ).head(top_k)
    ranked.insert(0, "rank", range(1, len(ranked) + 1))
    return ranked.reset_index(drop=True)
