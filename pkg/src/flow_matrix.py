from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DataValidationError, UnknownFieldError, UnmappedJournalError
from .logger import TradeLogger
from .records import CategoryMap, CitationEdge, SkippedEdge, UnmappedPolicy

logger = TradeLogger()


@dataclass(frozen=True, eq=False)
class FieldFlowMatrix:
    """
    Field-to-field citation flow for one year.

    ``cells[i][j]`` counts citations from field i (citing) to field j (cited).
    Row sums are imports, column sums are exports. Knowledge flows j -> i.
    """
    year: int
    fields: Tuple[str, ...]
    cells: np.ndarray
    skipped: Tuple[SkippedEdge, ...] = ()
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int64, copy=True)
        n = len(self.fields)
        if cells.shape != (n, n):
            raise DataValidationError(
                f"flow matrix for {n} fields must be {n}x{n}, got {cells.shape}"
            )
        if (cells < 0).any():
            raise DataValidationError("flow matrix cells must be non-negative")
        if len(set(self.fields)) != n:
            raise DataValidationError("flow matrix fields must be unique")
        cells.flags.writeable = False
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "fields", tuple(self.fields))
        object.__setattr__(self, "_index", {f: i for i, f in enumerate(self.fields)})

    @classmethod
    def from_rows(cls, year: int, fields: Sequence[str], rows: Sequence[Sequence[int]]) -> "FieldFlowMatrix":
        return cls(year=year, fields=tuple(fields), cells=np.array(rows, dtype=np.int64).reshape(len(fields), len(fields)))

    @classmethod
    def zeros(cls, year: int, fields: Sequence[str]) -> "FieldFlowMatrix":
        n = len(fields)
        return cls(year=year, fields=tuple(fields), cells=np.zeros((n, n), dtype=np.int64))

    @property
    def dimension(self) -> int:
        return len(self.fields)

    def index(self, field_id: str) -> int:
        try:
            return self._index[field_id]
        except KeyError:
            raise UnknownFieldError(field_id) from None

    def __contains__(self, field_id: str) -> bool:
        return field_id in self._index

    def cell(self, citing: str, cited: str) -> int:
        return int(self.cells[self.index(citing), self.index(cited)])

    def exports(self) -> np.ndarray:
        """Column sums: citations received."""
        return self.cells.sum(axis=0)

    def imports(self) -> np.ndarray:
        """Row sums: citations given."""
        return self.cells.sum(axis=1)

    def self_citations(self) -> np.ndarray:
        return np.diagonal(self.cells).copy()

    def total(self) -> int:
        return int(self.cells.sum())

    def __add__(self, other: "FieldFlowMatrix") -> "FieldFlowMatrix":
        """Cellwise merge of two partial matrices over the same universe and year."""
        if not isinstance(other, FieldFlowMatrix):
            return NotImplemented
        if other.fields != self.fields or other.year != self.year:
            raise DataValidationError("can only merge matrices with identical year and fields")
        return FieldFlowMatrix(
            year=self.year,
            fields=self.fields,
            cells=self.cells + other.cells,
            skipped=self.skipped + other.skipped,
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldFlowMatrix):
            return NotImplemented
        return (
            self.year == other.year
            and self.fields == other.fields
            and np.array_equal(self.cells, other.cells)
        )

    __hash__ = None


def _skip_reason(citing_cats, cited_cats) -> str:
    if citing_cats is None and cited_cats is None:
        return "unmapped citing and cited journals"
    if citing_cats is None:
        return "unmapped citing journal"
    return "unmapped cited journal"


def build_flow_matrix(
    edges: Iterable[CitationEdge],
    category_map: CategoryMap,
    year: int,
    policy: UnmappedPolicy = UnmappedPolicy.STRICT,
) -> FieldFlowMatrix:
    """
    Aggregate journal edges of ``year`` into a field flow matrix.

    Multiple counting: an edge whose citing journal is in categories S and
    cited journal in categories T adds its count to every cell in S x T.
    Edges from other years are ignored. Unmapped journals raise in strict
    mode; in lenient mode the edge is dropped and recorded in ``skipped``.
    """
    policy = UnmappedPolicy(policy)
    fields = category_map.categories
    position = {c: i for i, c in enumerate(fields)}
    cells = np.zeros((len(fields), len(fields)), dtype=np.int64)
    skipped: List[SkippedEdge] = []
    # journal -> index array, computed once per journal
    lookup: Dict[str, Optional[np.ndarray]] = {}

    def indices(journal: str) -> Optional[np.ndarray]:
        if journal not in lookup:
            cats = category_map.categories_of(journal)
            lookup[journal] = None if cats is None else np.array([position[c] for c in cats], dtype=np.intp)
        return lookup[journal]

    for edge in edges:
        if edge.year != year:
            continue
        rows = indices(edge.citing_journal)
        cols = indices(edge.cited_journal)
        if rows is None or cols is None:
            if policy is UnmappedPolicy.STRICT:
                missing = edge.citing_journal if rows is None else edge.cited_journal
                raise UnmappedJournalError(missing, edge.year)
            reason = _skip_reason(rows, cols)
            skipped.append(SkippedEdge(edge.citing_journal, edge.cited_journal, edge.year, edge.count, reason))
            logger.log_skipped_edge(edge.citing_journal, edge.cited_journal, edge.year, edge.count, reason)
            continue
        # category tuples are duplicate-free, so the fancy-index add is exact
        cells[np.ix_(rows, cols)] += edge.count

    matrix = FieldFlowMatrix(year=year, fields=fields, cells=cells, skipped=tuple(skipped))
    logger.log_matrix_built(year, matrix.dimension, matrix.total(), len(skipped))
    return matrix
