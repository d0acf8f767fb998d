"""
Synthetic journal-level citation datasets with known structure.

Randomness comes from numpy's PCG64 bit generator seeded through a
SeedSequence; each year draws from its own spawned child sequence, so a
year's edges depend only on the seed and the year's position.
"""
import json
import os
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from .errors import ConfigError
from .logger import TradeLogger
from .records import CategoryMap, CitationEdge, PublicationCounts
from .reports import write_csv

logger = TradeLogger()

RNG_NAME = "numpy.random.PCG64 (SeedSequence)"
PUBLICATIONS_PER_JOURNAL = (20, 201)  # half-open range for integers()


class EdgeModel(str, Enum):
    UNIFORM = "uniform"
    PREFERENTIAL = "preferential"


class SynthSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    n_categories: int = Field(4, ge=2)
    journals_per_category: int = Field(25, ge=1)
    multi_assign_fraction: float = Field(0.0, ge=0.0, le=1.0)
    edge_model: EdgeModel = EdgeModel.UNIFORM
    exponent: float = Field(1.0, gt=0.0)
    years: List[int] = Field(default_factory=lambda: [2007, 2008, 2009], min_length=1)
    seed: int = Field(0, ge=0)
    total_edges: int = Field(10_000, ge=0)
    citations_per_edge: int = Field(1, ge=1)
    # per-year growth of total_edges, e.g. 0.1 for +10% a year
    edge_growth: float = Field(0.0, gt=-1.0)

    @field_validator("years")
    @classmethod
    def _distinct_years(cls, years: List[int]) -> List[int]:
        if len(set(years)) != len(years):
            raise ValueError("years must be distinct")
        return sorted(years)

    @property
    def n_journals(self) -> int:
        return self.n_categories * self.journals_per_category

    def edges_in_year(self, position: int) -> int:
        return int(round(self.total_edges * (1.0 + self.edge_growth) ** position))


def build_spec(data: Optional[Mapping[str, Any]] = None) -> SynthSpec:
    try:
        return SynthSpec.model_validate(dict(data or {}))
    except ValidationError as exc:
        raise ConfigError(f"invalid synthetic spec: {exc}") from None


@dataclass(frozen=True)
class SynthDataset:
    spec: SynthSpec
    edges: List[CitationEdge]
    category_map: CategoryMap
    publications: PublicationCounts
    journals: List[str]


def _category_ids(n: int) -> List[str]:
    width = max(3, len(str(n)))
    return [f"C{i + 1:0{width}d}" for i in range(n)]


def _draw_cited_preferential(rng: np.random.Generator, n_journals: int, draws: int, exponent: float) -> np.ndarray:
    """Sequential draws with weight (in-degree + 1) ** exponent."""
    in_degree = np.zeros(n_journals, dtype=np.int64)
    weights = np.ones(n_journals, dtype=float)
    uniforms = rng.random(draws)
    cited = np.empty(draws, dtype=np.int64)
    for t in range(draws):
        cumulative = np.cumsum(weights)
        k = int(np.searchsorted(cumulative, uniforms[t] * cumulative[-1], side="right"))
        k = min(k, n_journals - 1)
        cited[t] = k
        in_degree[k] += 1
        weights[k] = (in_degree[k] + 1.0) ** exponent
    return cited


def _draw_year(spec: SynthSpec, rng: np.random.Generator, year: int, draws: int, journals: List[str]) -> List[CitationEdge]:
    n = len(journals)
    citing = rng.integers(0, n, size=draws)
    if spec.edge_model is EdgeModel.PREFERENTIAL:
        cited = _draw_cited_preferential(rng, n, draws, spec.exponent)
    else:
        cited = rng.integers(0, n, size=draws)
    # collapse repeated journal pairs into one weighted edge, in pair order
    codes, counts = np.unique(citing * n + cited, return_counts=True)
    return [
        CitationEdge(journals[int(code // n)], journals[int(code % n)], year, int(k) * spec.citations_per_edge)
        for code, k in zip(codes, counts)
    ]


def _assign_categories(spec: SynthSpec, rng: np.random.Generator, categories: List[str]) -> Dict[str, tuple]:
    assignments: Dict[str, tuple] = {}
    journals = []
    for c, category in enumerate(categories):
        for k in range(spec.journals_per_category):
            journal = f"J{c + 1:03d}_{k + 1:04d}"
            journals.append(journal)
            assignments[journal] = (category,)

    n_multi = int(round(spec.multi_assign_fraction * len(journals)))
    if n_multi:
        chosen = np.sort(rng.choice(len(journals), size=n_multi, replace=False))
        offsets = rng.integers(1, spec.n_categories, size=n_multi)
        for idx, offset in zip(chosen, offsets):
            journal = journals[int(idx)]
            primary = categories.index(assignments[journal][0])
            second = categories[(primary + int(offset)) % spec.n_categories]
            assignments[journal] = (assignments[journal][0], second)
    return assignments


def generate(spec: SynthSpec) -> SynthDataset:
    """Edges, category map and publication counts for every year of ``spec``."""
    spec = build_spec(spec.model_dump())
    children = np.random.SeedSequence(spec.seed).spawn(1 + len(spec.years))
    map_rng = np.random.Generator(np.random.PCG64(children[0]))

    categories = _category_ids(spec.n_categories)
    assignments = _assign_categories(spec, map_rng, categories)
    journals = list(assignments)
    category_map = CategoryMap(
        assignments=assignments,
        categories=tuple(categories),
        display_names={c: f"Category {i + 1}" for i, c in enumerate(categories)},
    )

    edges: List[CitationEdge] = []
    publications: Dict[tuple, int] = {}
    for position, year in enumerate(spec.years):
        rng = np.random.Generator(np.random.PCG64(children[1 + position]))
        edges.extend(_draw_year(spec, rng, year, spec.edges_in_year(position), journals))
        per_journal = rng.integers(*PUBLICATIONS_PER_JOURNAL, size=len(journals))
        for journal, p in zip(journals, per_journal):
            for category in assignments[journal]:
                publications[(category, year)] = publications.get((category, year), 0) + int(p)

    logger.logger.info(
        f"SYNTH: seed {spec.seed}, {spec.edge_model.value}, {len(journals)} journals, "
        f"{len(edges)} edges over {len(spec.years)} years"
    )
    return SynthDataset(
        spec=spec,
        edges=edges,
        category_map=category_map,
        publications=PublicationCounts(publications),
        journals=journals,
    )


def write_dataset(dataset: SynthDataset, out_dir: str) -> Dict[str, str]:
    """Write the dataset in the ingest CSV schemas plus a JSON manifest holding the seed."""
    os.makedirs(out_dir, exist_ok=True)
    cmap = dataset.category_map
    paths = {
        "edges": os.path.join(out_dir, "edges.csv"),
        "categories": os.path.join(out_dir, "categories.csv"),
        "category_names": os.path.join(out_dir, "category_names.csv"),
        "publications": os.path.join(out_dir, "publications.csv"),
        "manifest": os.path.join(out_dir, "synth_manifest.json"),
    }
    write_csv(
        pd.DataFrame(
            [(e.citing_journal, e.cited_journal, e.year, e.count) for e in dataset.edges],
            columns=["citing_journal", "cited_journal", "year", "count"],
        ),
        paths["edges"],
    )
    write_csv(
        pd.DataFrame(
            [(j, c) for j, cats in cmap.assignments.items() for c in cats],
            columns=["journal", "category"],
        ),
        paths["categories"],
    )
    write_csv(
        pd.DataFrame(
            [(c, cmap.display_name(c)) for c in cmap.categories],
            columns=["category", "display_name"],
        ),
        paths["category_names"],
    )
    write_csv(
        pd.DataFrame(
            [(c, y, p) for (c, y), p in sorted(dataset.publications.counts.items())],
            columns=["category", "year", "publications"],
        ),
        paths["publications"],
    )
    with open(paths["manifest"], "w", encoding="utf-8") as handle:
        json.dump(
            {"rng": RNG_NAME, "seed": dataset.spec.seed, "spec": dataset.spec.model_dump(mode="json")},
            handle,
            indent=2,
        )
        handle.write("\n")
    return paths
