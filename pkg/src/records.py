from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Mapping, Optional, Tuple

from .errors import DataValidationError


class UnmappedPolicy(str, Enum):
    """What to do with edges whose journals have no category."""
    STRICT = "strict"    # raise
    LENIENT = "lenient"  # drop and report


@dataclass(frozen=True)
class CitationEdge:
    """
    One journal-to-journal citation count for a year.
    Self-loops are legitimate (journal self-citations).
    """
    citing_journal: str
    cited_journal: str
    year: int
    count: int

    def __post_init__(self):
        if not self.citing_journal or not self.cited_journal:
            raise DataValidationError("journal identifiers must be non-empty")
        if self.count < 0:
            raise DataValidationError(
                f"negative count {self.count} for {self.citing_journal}->{self.cited_journal}"
            )


@dataclass(frozen=True)
class SkippedEdge:
    """An edge dropped in lenient mode, with the reason it was dropped."""
    citing_journal: str
    cited_journal: str
    year: int
    count: int
    reason: str


@dataclass(frozen=True)
class JournalTotals:
    """Journal-level totals for one year; multiple counting does not apply here."""
    year: int
    journals: int
    citation_links: int
    citations: int


@dataclass(frozen=True)
class CategoryMap:
    """
    Journal to subject-category assignments.

    ``assignments`` maps each journal to an ordered, duplicate-free tuple of
    categories. ``categories`` is the ordered universe, which may include
    declared categories no journal uses.
    """
    assignments: Mapping[str, Tuple[str, ...]]
    categories: Tuple[str, ...]
    display_names: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        universe = set(self.categories)
        if len(universe) != len(self.categories):
            raise DataValidationError("category universe contains duplicates")
        for journal, cats in self.assignments.items():
            if not cats:
                raise DataValidationError(f"journal {journal!r} has no category")
            missing = [c for c in cats if c not in universe]
            if missing:
                raise DataValidationError(
                    f"journal {journal!r} references undeclared categories {missing}"
                )

    def categories_of(self, journal: str) -> Optional[Tuple[str, ...]]:
        return self.assignments.get(journal)

    def display_name(self, category: str) -> str:
        return self.display_names.get(category, category)

    def is_single_assignment(self) -> bool:
        return all(len(cats) == 1 for cats in self.assignments.values())


@dataclass(frozen=True)
class PublicationCounts:
    """Publications P per (category, year)."""
    counts: Dict[Tuple[str, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for key, value in self.counts.items():
            if value < 0:
                raise DataValidationError(f"negative publication count for {key}")

    def get(self, category: str, year: int) -> Optional[int]:
        return self.counts.get((category, year))
