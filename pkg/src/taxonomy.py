from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Any, Dict, Iterable, List, Literal, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from .errors import ConfigError, DataValidationError
from .logger import TradeLogger
from .trade_metrics import (
    AccelerationPartition,
    DynamicsRecord,
    FieldIndicators,
    Period,
    acceleration_partition,
)

logger = TradeLogger()

MEDIAN = "median"


class Dependence(str, Enum):
    INDEPENDENT = "Independent"
    DEPENDENT = "Dependent"


class Role(str, Enum):
    EXPORTER = "Exporter"
    IMPORTER = "Importer"
    BALANCED = "Balanced"


class Impact(str, Enum):
    HIGHER = "Higher"
    LOWER = "Lower"


class Dynamics(str, Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    MIXED = "Mixed"
    UNKNOWN = "Unknown"


# (dependence, role, impact) -> characteristic type; the other four cells have none
TYPE_GRID: Dict[Tuple[Dependence, Role, Impact], str] = {
    (Dependence.DEPENDENT, Role.EXPORTER, Impact.HIGHER): "A",
    (Dependence.INDEPENDENT, Role.IMPORTER, Impact.LOWER): "B",
    (Dependence.DEPENDENT, Role.BALANCED, Impact.HIGHER): "C",
    (Dependence.INDEPENDENT, Role.EXPORTER, Impact.LOWER): "D",
    (Dependence.INDEPENDENT, Role.BALANCED, Impact.HIGHER): "E",
    (Dependence.DEPENDENT, Role.IMPORTER, Impact.LOWER): "F",
    (Dependence.INDEPENDENT, Role.EXPORTER, Impact.HIGHER): "G",
    (Dependence.DEPENDENT, Role.EXPORTER, Impact.LOWER): "H",
}

TYPE_LABELS = {
    "A": "Dependent, Exporter, & Higher Impact",
    "B": "Independent, Importer, & Lower Impact",
    "C": "Dependent, Importer/Exporter, & Higher Impact",
    "D": "Independent, Exporter, & Lower Impact",
    "E": "Independent, Importer/Exporter, & Higher Impact",
    "F": "Dependent, Importer, & Lower Impact",
    "G": "Independent, Exporter, & Higher Impact",
    "H": "Dependent, Exporter, & Lower Impact",
    "I": "Increasing in Impact",
    "J": "Decreasing in Impact",
}


class ClassificationConfig(BaseModel):
    """Thresholds for the dependence, role and impact axes."""
    model_config = ConfigDict(extra="forbid", frozen=True)

    importer_ratio_max: float = 0.77
    exporter_ratio_min: float = 1.13
    dependence_split: Union[Literal["median"], float] = MEDIAN
    impact_split: Union[Literal["median"], float] = MEDIAN

    @model_validator(mode="after")
    def _check_bands(self) -> "ClassificationConfig":
        if not self.importer_ratio_max < self.exporter_ratio_min:
            raise ValueError("importer_ratio_max must be below exporter_ratio_min")
        if self.importer_ratio_max <= 0:
            raise ValueError("importer_ratio_max must be positive")
        if self.dependence_split != MEDIAN and not 0 < self.dependence_split < 1:
            raise ValueError("dependence_split must lie in (0, 1)")
        if self.impact_split != MEDIAN and self.impact_split < 0:
            raise ValueError("impact_split must be non-negative")
        return self


def load_classification_config(data: Optional[Mapping[str, Any]] = None) -> ClassificationConfig:
    try:
        return ClassificationConfig.model_validate(dict(data or {}))
    except ValidationError as exc:
        raise ConfigError(f"invalid classification config: {exc}") from None


@dataclass(frozen=True)
class ResolvedSplits:
    dependence_split: Optional[float]
    impact_split: Optional[float]
    dependence_source: str
    impact_source: str

    def as_dict(self) -> Dict[str, Any]:
        return {
            "dependence_split": self.dependence_split,
            "dependence_source": self.dependence_source,
            "impact_split": self.impact_split,
            "impact_source": self.impact_source,
        }


@dataclass(frozen=True)
class TradeClassification:
    field: str
    year: int
    dependence: Dependence
    role: Role
    impact: Impact
    dynamics: Dynamics
    types: Tuple[str, ...]

    @property
    def cell(self) -> Tuple[Dependence, Role, Impact]:
        return (self.dependence, self.role, self.impact)


@dataclass(frozen=True)
class BandCounts:
    cells: Dict[Tuple[Dependence, Role, Impact], int]
    types: Dict[str, int]

    @property
    def total(self) -> int:
        return sum(self.cells.values())


def resolve_splits(indicators: Sequence[FieldIndicators], cfg: ClassificationConfig) -> ResolvedSplits:
    """Turn median markers into numbers for this year's indicators."""
    if cfg.dependence_split == MEDIAN:
        values = [i.self_dependence for i in indicators if i.self_dependence is not None]
        dependence = float(np.median(values)) if values else None
        dependence_source = MEDIAN
    else:
        dependence, dependence_source = float(cfg.dependence_split), "explicit"
    if cfg.impact_split == MEDIAN:
        impact = float(np.median([i.exports for i in indicators])) if indicators else None
        impact_source = MEDIAN
    else:
        impact, impact_source = float(cfg.impact_split), "explicit"
    return ResolvedSplits(dependence, impact, dependence_source, impact_source)


def _role(ind: FieldIndicators, cfg: ClassificationConfig) -> Role:
    ratio = ind.export_import_ratio
    if ratio is None:
        # no imports: any export at all is an exporter
        return Role.EXPORTER if ind.exports > 0 else Role.BALANCED
    if ratio < cfg.importer_ratio_max:
        return Role.IMPORTER
    if ratio > cfg.exporter_ratio_min:
        return Role.EXPORTER
    return Role.BALANCED


def _dependence(ind: FieldIndicators, split: Optional[float]) -> Dependence:
    if ind.self_dependence is None or split is None:
        return Dependence.DEPENDENT
    return Dependence.INDEPENDENT if ind.self_dependence >= split else Dependence.DEPENDENT


def _impact(ind: FieldIndicators, split: Optional[float]) -> Impact:
    if split is None:
        return Impact.LOWER
    return Impact.HIGHER if ind.exports >= split else Impact.LOWER


def _increments_from(dynamics: Mapping[Period, Sequence[DynamicsRecord]]) -> Dict[Period, float]:
    increments: Dict[Period, float] = {}
    for period, records in dynamics.items():
        values = {r.overall_increment for r in records}
        if None in values or len(values) != 1:
            raise DataValidationError(
                f"dynamics records for {period[0]}-{period[1]} must share one overall increment"
            )
        increments[period] = values.pop()
    return increments


def _dynamics_labels(
    dynamics: Optional[Mapping[Period, Sequence[DynamicsRecord]]],
    increments: Optional[Mapping[Period, float]],
    exclude: Iterable[str],
) -> Dict[str, Dynamics]:
    if not dynamics:
        return {}
    if increments is None:
        increments = _increments_from(dynamics)
    partition: AccelerationPartition = acceleration_partition(dynamics, increments, exclude)
    labels = {f: Dynamics.INCREASING for f in partition.above_all_periods}
    labels.update({f: Dynamics.DECREASING for f in partition.below_all_periods})
    labels.update({f: Dynamics.MIXED for f in partition.mixed})
    return labels


def classify(
    indicators: Sequence[FieldIndicators],
    dynamics: Optional[Mapping[Period, Sequence[DynamicsRecord]]] = None,
    cfg: Optional[ClassificationConfig] = None,
    increments: Optional[Mapping[Period, float]] = None,
    exclude: Iterable[str] = (),
) -> List[TradeClassification]:
    """
    Assign each field its (dependence, role, impact) cell, type A-H where the
    cell has one, and I/J from the acceleration partition of ``dynamics``.

    Boundaries: self_dependence >= split is Independent, exports >= split is
    Higher, ratios inside the closed band are Balanced.
    """
    if not indicators:
        raise DataValidationError("classify needs at least one field")
    cfg = load_classification_config((cfg or ClassificationConfig()).model_dump())
    years = {i.year for i in indicators}
    if len(years) != 1:
        raise DataValidationError(f"indicators span several years: {sorted(years)}")

    splits = resolve_splits(indicators, cfg)
    labels = _dynamics_labels(dynamics, increments, exclude)
    logger.log_classification(len(indicators), splits.as_dict())

    results = []
    for ind in indicators:
        dependence = _dependence(ind, splits.dependence_split)
        role = _role(ind, cfg)
        impact = _impact(ind, splits.impact_split)
        trend = labels.get(ind.field, Dynamics.UNKNOWN)
        types = []
        cell_type = TYPE_GRID.get((dependence, role, impact))
        if cell_type:
            types.append(cell_type)
        if trend is Dynamics.INCREASING:
            types.append("I")
        elif trend is Dynamics.DECREASING:
            types.append("J")
        results.append(TradeClassification(ind.field, ind.year, dependence, role, impact, trend, tuple(types)))
    return results


def band_counts(classifications: Iterable[TradeClassification]) -> BandCounts:
    """Counts per (dependence, role, impact) cell and per type; every key is present."""
    cells = {cell: 0 for cell in product(Dependence, Role, Impact)}
    types = {t: 0 for t in TYPE_LABELS}
    for c in classifications:
        cells[c.cell] += 1
        for t in c.types:
            types[t] += 1
    return BandCounts(cells=cells, types=types)
