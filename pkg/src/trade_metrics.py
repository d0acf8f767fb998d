"""
Per-field and pairwise trading indicators over FieldFlowMatrix instances.

Orientation: cells[i][j] is citation flow i -> j, so field j *exports*
knowledge to field i. Self-citations sit inside both exports and imports.
"""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import DataValidationError, DomainError
from .flow_matrix import FieldFlowMatrix
from .logger import TradeLogger
from .records import PublicationCounts

logger = TradeLogger()

Period = Tuple[int, int]


class SurplusMode(str, Enum):
    NET_BALANCE = "net_balance"
    POSITIVE_ONLY = "positive_only"


class DependenceRule(str, Enum):
    ARGMAX = "argmax"      # self wins when the diagonal is the row maximum
    MAJORITY = "majority"  # self wins when the diagonal is over half the row


@dataclass(frozen=True)
class FieldIndicators:
    field: str
    year: int
    exports: int
    imports: int
    self_citations: int
    export_import_ratio: Optional[float]
    self_dependence: Optional[float]
    net_balance: int
    positive_surplus: int
    hub_size: int
    export_partner_count: int
    publications: Optional[int] = None
    per_publication_exports: Optional[float] = None


@dataclass(frozen=True)
class PrimaryDependence:
    """Which field a field cites most. ``source`` is the field itself for Self."""
    field: str
    source: str
    share: float

    @property
    def is_self(self) -> bool:
        return self.source == self.field


@dataclass(frozen=True)
class DynamicsRecord:
    field: str
    period: Period
    exports_from: int
    exports_to: int
    export_growth: Optional[float]
    publications_from: Optional[int] = None
    publications_to: Optional[int] = None
    publication_growth: Optional[float] = None
    overall_increment: Optional[float] = None
    above_overall: Optional[bool] = None
    reason: Optional[str] = None


@dataclass(frozen=True)
class RolePartition:
    exporters: Tuple[str, ...]
    importers: Tuple[str, ...]
    balanced: Tuple[str, ...]


@dataclass(frozen=True)
class AccelerationPartition:
    above_all_periods: Tuple[str, ...]
    below_all_periods: Tuple[str, ...]
    mixed: Tuple[str, ...]


def export_import_ratio(exports: int, imports: int) -> Optional[float]:
    """Exports / imports, or None when there are no imports."""
    if imports == 0:
        return None
    return exports / imports


def growth(value_from: int, value_to: int) -> Optional[float]:
    """Fractional change, or None for a zero base."""
    if value_from == 0:
        return None
    return (value_to - value_from) / value_from


def self_dependence_ratio(matrix: FieldFlowMatrix, field: str) -> Optional[float]:
    """Self-citations / exports; None when the field has no exports."""
    i = matrix.index(field)
    exports = int(matrix.cells[:, i].sum())
    if exports == 0:
        return None
    return int(matrix.cells[i, i]) / exports


def net_flow(matrix: FieldFlowMatrix, a: str, b: str) -> int:
    """cells[b][a] - cells[a][b]; positive means knowledge flows a -> b."""
    if a == b:
        raise DomainError(f"net flow needs two distinct fields, got {a!r} twice")
    i, j = matrix.index(a), matrix.index(b)
    return int(matrix.cells[j, i]) - int(matrix.cells[i, j])


def _net_flow_row(matrix: FieldFlowMatrix, i: int) -> np.ndarray:
    # entry b: net_flow(field_i, b); the diagonal is zero
    return matrix.cells[:, i] - matrix.cells[i, :]


def knowledge_surplus(
    matrix: FieldFlowMatrix,
    field: str,
    mode: SurplusMode = SurplusMode.POSITIVE_ONLY,
) -> int:
    """Exports minus imports, or the sum of positive pairwise net flows."""
    i = matrix.index(field)
    mode = SurplusMode(mode)
    if mode is SurplusMode.NET_BALANCE:
        return int(matrix.cells[:, i].sum()) - int(matrix.cells[i, :].sum())
    flows = _net_flow_row(matrix, i)
    return int(np.clip(flows, 0, None).sum())


def export_partner_count(matrix: FieldFlowMatrix, field: str) -> int:
    """Number of other fields this field has a strictly positive net flow to."""
    i = matrix.index(field)
    return int((_net_flow_row(matrix, i) > 0).sum())


def primary_dependence(
    matrix: FieldFlowMatrix,
    field: str,
    rule: DependenceRule = DependenceRule.ARGMAX,
) -> Optional[PrimaryDependence]:
    """
    The field this field cites most.

    ARGMAX: Self when the diagonal is at least every other cell of the row,
    otherwise the largest other cell, first in category order on ties.
    MAJORITY: Self when the diagonal exceeds half of all imports.
    None when the field cites nothing.
    """
    i = matrix.index(field)
    row = matrix.cells[i, :]
    imports = int(row.sum())
    if imports == 0:
        logger.log_absent_value(field, "primary dependence", "no imports")
        return None
    own = int(row[i])
    others = row.copy()
    others[i] = -1
    j = int(np.argmax(others))  # first maximum in category order

    rule = DependenceRule(rule)
    if rule is DependenceRule.ARGMAX:
        depends_on_self = own >= int(row[j]) if matrix.dimension > 1 else True
    else:
        depends_on_self = 2 * own > imports
    if depends_on_self:
        return PrimaryDependence(field=field, source=field, share=own / imports)
    return PrimaryDependence(field=field, source=matrix.fields[j], share=int(row[j]) / imports)


def dependence_counts(matrix: FieldFlowMatrix, rule: DependenceRule = DependenceRule.ARGMAX) -> Tuple[int, int]:
    """(fields depending primarily on themselves, fields depending on others)."""
    on_self = on_others = 0
    for field in matrix.fields:
        result = primary_dependence(matrix, field, rule)
        if result is None:
            continue
        if result.is_self:
            on_self += 1
        else:
            on_others += 1
    return on_self, on_others


def field_indicators(
    matrix: FieldFlowMatrix,
    field: str,
    publications: Optional[PublicationCounts] = None,
) -> FieldIndicators:
    i = matrix.index(field)
    exports = int(matrix.cells[:, i].sum())
    imports = int(matrix.cells[i, :].sum())
    self_citations = int(matrix.cells[i, i])
    flows = _net_flow_row(matrix, i)

    p = publications.get(field, matrix.year) if publications is not None else None
    return FieldIndicators(
        field=field,
        year=matrix.year,
        exports=exports,
        imports=imports,
        self_citations=self_citations,
        export_import_ratio=export_import_ratio(exports, imports),
        self_dependence=self_citations / exports if exports > 0 else None,
        net_balance=exports - imports,
        positive_surplus=int(np.clip(flows, 0, None).sum()),
        hub_size=exports + imports,
        export_partner_count=int((flows > 0).sum()),
        publications=p,
        per_publication_exports=exports / p if p else None,
    )


def all_field_indicators(
    matrix: FieldFlowMatrix,
    publications: Optional[PublicationCounts] = None,
) -> List[FieldIndicators]:
    """Indicators for every field, in universe order."""
    return [field_indicators(matrix, field, publications) for field in matrix.fields]


def role_partition(matrix: FieldFlowMatrix) -> RolePartition:
    exports = matrix.exports()
    imports = matrix.imports()
    exporters, importers, balanced = [], [], []
    for k, field in enumerate(matrix.fields):
        if exports[k] > imports[k]:
            exporters.append(field)
        elif imports[k] > exports[k]:
            importers.append(field)
        else:
            balanced.append(field)
    return RolePartition(tuple(exporters), tuple(importers), tuple(balanced))


def role_counts(partition: RolePartition) -> Dict[str, int]:
    return {
        "exporters": len(partition.exporters),
        "importers": len(partition.importers),
        "balanced": len(partition.balanced),
    }


def overall_increment(total_from: int, total_to: int) -> float:
    """Growth of the journal-level grand total between two years."""
    if total_from <= 0:
        raise DomainError("overall increment needs a positive base total")
    return (total_to - total_from) / total_from


def trading_dynamics(
    matrix_from: FieldFlowMatrix,
    matrix_to: FieldFlowMatrix,
    field: str,
    publications: Optional[PublicationCounts] = None,
    increment: Optional[float] = None,
) -> DynamicsRecord:
    """
    Export growth of ``field`` between two matrices.

    Growth is None (with a reason) for a zero export base. ``above_overall``
    is filled when the overall increment for the period is known.
    """
    exports_from = int(matrix_from.cells[:, matrix_from.index(field)].sum())
    exports_to = int(matrix_to.cells[:, matrix_to.index(field)].sum())
    export_growth = growth(exports_from, exports_to)
    reason = None
    if export_growth is None:
        reason = "zero exports in base year"
        logger.log_absent_value(field, "export growth", reason)

    p_from = p_to = p_growth = None
    if publications is not None:
        p_from = publications.get(field, matrix_from.year)
        p_to = publications.get(field, matrix_to.year)
        if p_from is not None and p_to is not None:
            p_growth = growth(p_from, p_to)

    above = None
    if export_growth is not None and increment is not None:
        above = export_growth > increment

    return DynamicsRecord(
        field=field,
        period=(matrix_from.year, matrix_to.year),
        exports_from=exports_from,
        exports_to=exports_to,
        export_growth=export_growth,
        publications_from=p_from,
        publications_to=p_to,
        publication_growth=p_growth,
        overall_increment=increment,
        above_overall=above,
        reason=reason,
    )


def all_trading_dynamics(
    matrix_from: FieldFlowMatrix,
    matrix_to: FieldFlowMatrix,
    publications: Optional[PublicationCounts] = None,
    increment: Optional[float] = None,
) -> List[DynamicsRecord]:
    """Dynamics for every field present in both matrices, in ``matrix_to`` order."""
    return [
        trading_dynamics(matrix_from, matrix_to, field, publications, increment)
        for field in matrix_to.fields
        if field in matrix_from
    ]


def acceleration_partition(
    dynamics: Mapping[Period, Sequence[DynamicsRecord]],
    increments: Mapping[Period, float],
    exclude: Iterable[str] = (),
) -> AccelerationPartition:
    """
    Split fields by export growth against the overall increment of each period.

    A field is above (below) only when it is strictly above (below) in every
    period; everything else, including absent growth, is mixed. Excluded
    fields are removed first.
    """
    excluded = set(exclude)
    periods = list(dynamics)
    missing_increment = [p for p in periods if p not in increments]
    if missing_increment:
        raise DataValidationError(f"no overall increment for period {missing_increment[0]}")

    by_period: Dict[Period, Dict[str, DynamicsRecord]] = {
        period: {r.field: r for r in records} for period, records in dynamics.items()
    }
    fields: List[str] = []
    for records in dynamics.values():
        for record in records:
            if record.field not in excluded and record.field not in fields:
                fields.append(record.field)

    above, below, mixed = [], [], []
    for field in fields:
        states = []
        for period in periods:
            record = by_period[period].get(field)
            if record is None:
                raise DataValidationError(f"no dynamics record for {field!r} in period {period[0]}-{period[1]}")
            g = record.export_growth
            if g is None:
                states.append(None)
            elif g > increments[period]:
                states.append(True)
            elif g < increments[period]:
                states.append(False)
            else:
                states.append(None)
        if states and all(s is True for s in states):
            above.append(field)
        elif states and all(s is False for s in states):
            below.append(field)
        else:
            mixed.append(field)
    return AccelerationPartition(tuple(above), tuple(below), tuple(mixed))


def _subgroup_indices(matrix: FieldFlowMatrix, subgroup: Iterable[str]) -> List[int]:
    members = list(dict.fromkeys(subgroup))
    if not members:
        raise DomainError("subgroup must not be empty")
    return [matrix.index(f) for f in members]


def subgroup_share(matrix: FieldFlowMatrix, subgroup: Iterable[str]) -> float:
    """Share of all (multiple-counted) field exports that go to the subgroup."""
    idx = _subgroup_indices(matrix, subgroup)
    exports = matrix.exports()
    total = int(exports.sum())
    if total == 0:
        raise DomainError("matrix has no citations")
    return int(exports[idx].sum()) / total


def subgroup_increment(matrix_from: FieldFlowMatrix, matrix_to: FieldFlowMatrix, subgroup: Iterable[str]) -> float:
    """Growth of the subgroup's summed exports between two matrices."""
    members = list(subgroup)
    before = int(matrix_from.exports()[_subgroup_indices(matrix_from, members)].sum())
    after = int(matrix_to.exports()[_subgroup_indices(matrix_to, members)].sum())
    if before == 0:
        raise DomainError("subgroup has no exports in the base year")
    return (after - before) / before
