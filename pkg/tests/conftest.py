import pytest

from src.flow_matrix import FieldFlowMatrix


@pytest.fixture
def matrix_t():
    # rows are the citing fields A, B, C
    return FieldFlowMatrix.from_rows(2009, ["A", "B", "C"], [
        [10, 2, 1],
        [4, 20, 0],
        [6, 3, 5],
    ])


@pytest.fixture
def write_file(tmp_path):
    """Write text under tmp_path and return the path as a string."""
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def toy_files(write_file):
    """
    Four journals in two categories; J4 belongs to both.

    2009 matrix over (A, B, Z) with multiple counting:
    [[7, 5, 0], [5, 0, 0], [0, 0, 0]], journal-level total 14.
    """
    edges = write_file("edges.csv", (
        "citing_journal,cited_journal,year,count\n"
        "J1,J3,2009,5\n"
        "J3,J1,2009,2\n"
        "J4,J1,2009,3\n"
        "J2,J2,2009,4\n"
        "J1,J3,2008,1\n"
    ))
    categories = write_file("categories.csv", (
        "journal,category\n"
        "J1,A\n"
        "J2,A\n"
        "J3,B\n"
        "J4,A\n"
        "J4,B\n"
    ))
    names = write_file("category_names.csv", (
        "category,display_name\n"
        "A,Alpha\n"
        "B,Beta\n"
        "Z,Unused\n"
    ))
    return {"edges": edges, "categories": categories, "names": names}
