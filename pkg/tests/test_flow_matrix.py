import numpy as np
import pytest

from src.errors import DataValidationError, UnknownFieldError, UnmappedJournalError
from src.flow_matrix import FieldFlowMatrix, build_flow_matrix
from src.ingest import grand_total_citations, parse_category_map, parse_edges
from src.records import CategoryMap, CitationEdge, UnmappedPolicy


@pytest.fixture
def two_category_map():
    return CategoryMap(
        assignments={"J1": ("C1", "C2"), "J2": ("C1",), "J3": ("C2",)},
        categories=("C1", "C2"),
    )


def test_multiple_counting_on_citing_side(two_category_map):
    matrix = build_flow_matrix([CitationEdge("J1", "J2", 2009, 3)], two_category_map, 2009)
    assert matrix.cell("C1", "C1") == 3
    assert matrix.cell("C2", "C1") == 3
    assert matrix.total() == 6
    # the journal-level total is not multiplied
    assert grand_total_citations([CitationEdge("J1", "J2", 2009, 3)], 2009) == 3


def test_self_citation_expands_over_both_sides(two_category_map):
    matrix = build_flow_matrix([CitationEdge("J1", "J1", 2009, 1)], two_category_map, 2009)
    assert matrix.cells.tolist() == [[1, 1], [1, 1]]


def test_no_edges_for_year_gives_zero_matrix(two_category_map):
    matrix = build_flow_matrix([CitationEdge("J1", "J2", 2008, 3)], two_category_map, 2009)
    assert matrix.dimension == 2
    assert matrix.total() == 0


def test_single_assignment_matches_grand_total():
    cmap = CategoryMap(assignments={"J1": ("C1",), "J2": ("C2",), "J3": ("C1",)}, categories=("C1", "C2"))
    edges = [
        CitationEdge("J1", "J2", 2009, 10),
        CitationEdge("J2", "J3", 2009, 2),
        CitationEdge("J3", "J1", 2009, 4),
        CitationEdge("J2", "J2", 2009, 5),
    ]
    assert build_flow_matrix(edges, cmap, 2009).total() == grand_total_citations(edges, 2009) == 21


def test_splitting_an_edge_is_additive(two_category_map):
    whole = build_flow_matrix([CitationEdge("J1", "J3", 2009, 5)], two_category_map, 2009)
    split = build_flow_matrix(
        [CitationEdge("J1", "J3", 2009, 2), CitationEdge("J1", "J3", 2009, 3)], two_category_map, 2009
    )
    assert whole == split


def test_relabeling_permutes_rows_and_columns():
    edges = [CitationEdge("J1", "J2", 2009, 3), CitationEdge("J2", "J3", 2009, 1), CitationEdge("J3", "J3", 2009, 2)]
    assignments = {"J1": ("X",), "J2": ("Y", "Z"), "J3": ("Z",)}
    forward = build_flow_matrix(edges, CategoryMap(assignments, ("X", "Y", "Z")), 2009)
    backward = build_flow_matrix(edges, CategoryMap(assignments, ("Z", "Y", "X")), 2009)
    perm = [2, 1, 0]
    assert np.array_equal(backward.cells, forward.cells[np.ix_(perm, perm)])


def test_strict_mode_names_unmapped_journal(two_category_map):
    with pytest.raises(UnmappedJournalError) as exc_info:
        build_flow_matrix([CitationEdge("J1", "J9", 2009, 1)], two_category_map, 2009)
    assert exc_info.value.journal == "J9"
    assert "J9" in str(exc_info.value)


def test_lenient_mode_reports_skipped_edges(two_category_map):
    edges = [
        CitationEdge("J1", "J9", 2009, 1),
        CitationEdge("J8", "J2", 2009, 2),
        CitationEdge("J8", "J9", 2009, 4),
        CitationEdge("J2", "J3", 2009, 7),
    ]
    matrix = build_flow_matrix(edges, two_category_map, 2009, UnmappedPolicy.LENIENT)
    assert matrix.total() == 7
    reasons = [s.reason for s in matrix.skipped]
    assert reasons == [
        "unmapped cited journal",
        "unmapped citing journal",
        "unmapped citing and cited journals",
    ]


def test_toy_fixture_matrix(toy_files):
    edges = parse_edges(toy_files["edges"])
    cmap = parse_category_map(toy_files["categories"], universe=toy_files["names"])
    matrix = build_flow_matrix(edges, cmap, 2009)
    assert matrix.fields == ("A", "B", "Z")
    assert matrix.cells.tolist() == [[7, 5, 0], [5, 0, 0], [0, 0, 0]]
    assert grand_total_citations(edges, 2009) == 14


def test_orientation(matrix_t):
    assert matrix_t.exports().tolist() == [20, 25, 6]
    assert matrix_t.imports().tolist() == [13, 24, 14]
    assert matrix_t.self_citations().tolist() == [10, 20, 5]


def test_cells_are_read_only(matrix_t):
    with pytest.raises(ValueError):
        matrix_t.cells[0, 0] = 99


def test_partial_matrices_merge_by_addition(matrix_t):
    doubled = matrix_t + matrix_t
    assert doubled.total() == 2 * matrix_t.total()
    with pytest.raises(DataValidationError):
        matrix_t + FieldFlowMatrix.zeros(2008, ["A", "B", "C"])


def test_invalid_matrices():
    with pytest.raises(DataValidationError):
        FieldFlowMatrix.from_rows(2009, ["A", "B"], [[1, -1], [0, 0]])
    with pytest.raises(DataValidationError):
        FieldFlowMatrix(2009, ("A", "B"), np.zeros((3, 3)))


def test_unknown_field(matrix_t):
    with pytest.raises(UnknownFieldError):
        matrix_t.index("Q")
    assert "A" in matrix_t
    assert "Q" not in matrix_t
