"""
CSV ingestion for journal-level citation data.

Schemas (UTF-8, header row required):

    edges          citing_journal,cited_journal,year,count
    category map   journal,category
    universe       category,display_name
    publications   category,year,publications
"""
import os
import re
from typing import Dict, Iterable, List, Optional, Sequence, TextIO, Union

import pandas as pd

from .errors import DataValidationError, ParseError
from .logger import TradeLogger
from .records import CategoryMap, CitationEdge, JournalTotals, PublicationCounts

logger = TradeLogger()

Source = Union[str, os.PathLike, TextIO]

EDGE_COLUMNS = ("citing_journal", "cited_journal", "year", "count")
MAP_COLUMNS = ("journal", "category")
UNIVERSE_COLUMNS = ("category", "display_name")
PUBLICATION_COLUMNS = ("category", "year", "publications")

_LINE_RE = re.compile(r"line (\d+)")
_INT_RE = r"[+-]?\d+"


def _source_name(source) -> str:
    if isinstance(source, (str, os.PathLike)):
        return os.fspath(source)
    return getattr(source, "name", "<stream>")


def _read_table(source, columns: Sequence[str], required: Sequence[str]) -> pd.DataFrame:
    """
    Read a CSV with the given header into string columns.

    Adds a ``_line`` column holding the 1-based physical line of each row.
    Blank lines are dropped; rows with an empty required column raise.
    """
    name = _source_name(source)
    try:
        frame = pd.read_csv(
            source,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
            index_col=False,
            encoding="utf-8",
        )
    except FileNotFoundError:
        raise ParseError("file not found", source=name) from None
    except pd.errors.EmptyDataError:
        return pd.DataFrame({c: pd.Series(dtype=str) for c in (*columns, "_line")})
    except UnicodeDecodeError as exc:
        raise ParseError(f"not valid UTF-8 (byte offset {exc.start})", source=name) from None
    except pd.errors.ParserError as exc:
        match = _LINE_RE.search(str(exc))
        raise ParseError(
            f"malformed row, expected {len(columns)} fields",
            line=int(match.group(1)) if match else None,
            source=name,
        ) from None

    header = [str(c).strip() for c in frame.columns]
    if header != list(columns):
        raise ParseError(f"expected header {','.join(columns)!r}, got {','.join(header)!r}", line=1, source=name)
    frame.columns = header

    frame = frame.fillna("")
    for column in columns:
        frame[column] = frame[column].astype(str).str.strip()
    frame["_line"] = frame.index + 2

    blank = (frame[list(columns)] == "").all(axis=1)
    frame = frame.loc[~blank]
    missing = (frame[list(required)] == "").any(axis=1)
    if missing.any():
        first = frame.loc[missing].iloc[0]
        raise ParseError("missing value", line=int(first["_line"]), source=name)
    return frame.reset_index(drop=True)


def _integer_column(frame: pd.DataFrame, column: str, source: str, allow_negative: bool = False) -> pd.Series:
    ok = frame[column].str.fullmatch(_INT_RE)
    if not ok.all():
        first = frame.loc[~ok].iloc[0]
        raise ParseError(f"{column} must be an integer, got {first[column]!r}", line=int(first["_line"]), source=source)
    values = frame[column].astype("int64")
    if not allow_negative and (values < 0).any():
        first = frame.loc[values < 0].iloc[0]
        raise DataValidationError(f"{source}: line {int(first['_line'])}: negative {column} {first[column]}")
    return values


def parse_edges(source: Source, year: Optional[int] = None) -> List[CitationEdge]:
    """
    Parse an edges CSV into CitationEdge records.

    Duplicate (citing, cited, year) rows are summed. When ``year`` is given,
    rows of other years are dropped after validation.
    """
    name = _source_name(source)
    frame = _read_table(source, EDGE_COLUMNS, EDGE_COLUMNS)
    frame["year"] = _integer_column(frame, "year", name)
    frame["count"] = _integer_column(frame, "count", name)
    if year is not None:
        frame = frame.loc[frame["year"] == year]

    grouped = frame.groupby(["citing_journal", "cited_journal", "year"], sort=False, as_index=False)["count"].sum()
    edges = [
        CitationEdge(citing, cited, int(y), int(c))
        for citing, cited, y, c in zip(grouped["citing_journal"], grouped["cited_journal"], grouped["year"], grouped["count"])
    ]
    logger.log_parsed("edges", name, len(frame), len(edges))
    return edges


def merge_edges(*edge_lists: Iterable[CitationEdge]) -> List[CitationEdge]:
    """Concatenate edge lists, summing duplicate (citing, cited, year) keys in first-seen order."""
    merged: Dict[tuple, int] = {}
    for edges in edge_lists:
        for edge in edges:
            key = (edge.citing_journal, edge.cited_journal, edge.year)
            merged[key] = merged.get(key, 0) + edge.count
    return [CitationEdge(citing, cited, year, count) for (citing, cited, year), count in merged.items()]


def parse_category_universe(source: Source) -> Dict[str, str]:
    """Parse the ``category,display_name`` companion file, preserving order."""
    name = _source_name(source)
    frame = _read_table(source, UNIVERSE_COLUMNS, ("category",))
    duplicated = frame["category"].duplicated()
    if duplicated.any():
        first = frame.loc[duplicated].iloc[0]
        raise DataValidationError(f"{name}: line {int(first['_line'])}: duplicate category {first['category']!r}")
    return {
        category: (display or category)
        for category, display in zip(frame["category"], frame["display_name"])
    }


def parse_category_map(source: Source, universe: Optional[Source] = None) -> CategoryMap:
    """
    Parse ``journal,category`` rows into a CategoryMap.

    Repeated rows for a journal give multi-assignment (deduplicated, first
    occurrence order). The universe is the declared categories, in declared
    order, followed by any undeclared categories in first-seen order.
    """
    name = _source_name(source)
    frame = _read_table(source, MAP_COLUMNS, ("journal",))
    if frame.empty:
        raise DataValidationError(f"{name}: no assignments")

    assignments: Dict[str, List[str]] = {}
    for journal, category in zip(frame["journal"], frame["category"]):
        cats = assignments.setdefault(journal, [])
        if category and category not in cats:
            cats.append(category)
    empty = [journal for journal, cats in assignments.items() if not cats]
    if empty:
        raise DataValidationError(f"{name}: journal {empty[0]!r} has no category")

    display_names = parse_category_universe(universe) if universe is not None else {}
    categories = list(display_names)
    declared = set(categories)
    for category in frame["category"]:
        if category and category not in declared:
            declared.add(category)
            categories.append(category)

    category_map = CategoryMap(
        assignments={journal: tuple(cats) for journal, cats in assignments.items()},
        categories=tuple(categories),
        display_names=display_names,
    )
    logger.log_parsed("category map", name, len(frame), len(category_map.assignments))
    return category_map


def parse_publications(source: Source) -> PublicationCounts:
    """Parse ``category,year,publications`` rows; a repeated (category, year) is an error."""
    name = _source_name(source)
    frame = _read_table(source, PUBLICATION_COLUMNS, PUBLICATION_COLUMNS)
    frame["year"] = _integer_column(frame, "year", name)
    frame["publications"] = _integer_column(frame, "publications", name)
    duplicated = frame.duplicated(["category", "year"])
    if duplicated.any():
        first = frame.loc[duplicated].iloc[0]
        raise DataValidationError(
            f"{name}: line {int(first['_line'])}: duplicate publications for "
            f"({first['category']}, {first['year']})"
        )
    counts = {
        (category, int(year)): int(p)
        for category, year, p in zip(frame["category"], frame["year"], frame["publications"])
    }
    logger.log_parsed("publications", name, len(frame), len(counts))
    return PublicationCounts(counts)


def edge_years(edges: Iterable[CitationEdge]) -> List[int]:
    return sorted({edge.year for edge in edges})


def grand_total_citations(edges: Iterable[CitationEdge], year: int) -> int:
    """Journal-level citation total for ``year``; categories are not consulted."""
    return sum(edge.count for edge in edges if edge.year == year)


def journal_totals(edges: Iterable[CitationEdge], year: int) -> JournalTotals:
    """Journals, non-zero citation links and total citations for ``year``."""
    journals = set()
    links: set = set()
    citations = 0
    for edge in edges:
        if edge.year != year:
            continue
        journals.add(edge.citing_journal)
        journals.add(edge.cited_journal)
        if edge.count > 0:
            links.add((edge.citing_journal, edge.cited_journal))
        citations += edge.count
    return JournalTotals(year=year, journals=len(journals), citation_links=len(links), citations=citations)
