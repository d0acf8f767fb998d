import json
import os

import pandas as pd
import pytest
from click.testing import CliRunner

from src.archive import read_matrix_archive
from src.cli import cli

from .test_published_arithmetic import EXPORTERS, IMPORTERS


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def run(runner, tmp_path):
    """Invoke the CLI with logs kept under tmp_path."""
    env = {"SCITRADE_LOG_DIR": str(tmp_path / "logs")}

    def _run(*args):
        return runner.invoke(cli, list(args), env=env, obj={})
    return _run


def _body(path):
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def test_build_toy_dataset(run, tmp_path, toy_files):
    out = str(tmp_path / "out")
    result = run("--out", out, "build", "--edges", toy_files["edges"], "--map", toy_files["categories"],
                 "--categories", toy_files["names"])
    assert result.exit_code == 0, result.output
    archive = read_matrix_archive(os.path.join(out, "matrix_2009.csv"))
    assert archive.matrix.fields == ("A", "B", "Z")
    assert archive.matrix.cells.tolist() == [[7, 5, 0], [5, 0, 0], [0, 0, 0]]
    assert archive.matrix.total() == 17
    assert archive.totals.citations == 14
    assert archive.display_names["Z"] == "Unused"
    assert os.path.exists(os.path.join(out, "matrix_2008.csv"))


def test_build_single_year(run, tmp_path, toy_files):
    out = str(tmp_path / "out")
    result = run("--out", out, "--year", "2008", "build", "--edges", toy_files["edges"],
                 "--map", toy_files["categories"])
    assert result.exit_code == 0, result.output
    assert sorted(os.listdir(out)) == ["matrix_2008.csv", "matrix_2008.json"]


def test_missing_input_file(run, tmp_path, toy_files):
    missing = str(tmp_path / "nope.csv")
    result = run("--out", str(tmp_path / "out"), "build", "--edges", missing, "--map", toy_files["categories"])
    assert result.exit_code == 2
    assert "nope.csv" in result.output


def test_unmapped_journal_strict_and_lenient(run, tmp_path, toy_files, write_file):
    edges = write_file("extra.csv", "citing_journal,cited_journal,year,count\nJ1,J9,2009,4\n")
    args = ["build", "--edges", toy_files["edges"], "--edges", edges, "--map", toy_files["categories"]]

    strict = run("--out", str(tmp_path / "strict"), *args)
    assert strict.exit_code == 2
    assert "J9" in strict.output

    out = str(tmp_path / "lenient")
    lenient = run("--out", out, "--lenient", *args)
    assert lenient.exit_code == 0, lenient.output
    skipped = pd.read_csv(os.path.join(out, "skipped_2009.csv"))
    assert skipped["cited_journal"].tolist() == ["J9"]
    assert skipped["count"].tolist() == [4]
    assert read_matrix_archive(os.path.join(out, "matrix_2009.csv")).matrix.total() == 17


def test_metrics_writes_csv_and_json(run, tmp_path, toy_files):
    out = str(tmp_path / "out")
    run("--out", out, "build", "--edges", toy_files["edges"], "--map", toy_files["categories"])
    result = run("--out", out, "metrics", os.path.join(out, "matrix_2009.csv"))
    assert result.exit_code == 0, result.output

    table = pd.read_csv(os.path.join(out, "indicators_2009.csv"))
    assert table["field"].tolist() == ["A", "B"]
    assert table["exports"].tolist() == [12, 5]
    assert table["imports"].tolist() == [12, 5]

    with open(os.path.join(out, "indicators_2009.json"), encoding="utf-8") as handle:
        report = json.load(handle)
    assert report["manifest"]["command"] == "metrics"
    assert report["manifest"]["counting_mode"] == "multiple"
    assert report["summary"] == {
        "grand_total": 14,
        "cell_sum": 17,
        "roles": {"exporters": 0, "importers": 0, "balanced": 2},
        "dependence": {"rule": "argmax", "self": 1, "others": 1},
    }


def test_json_format_skips_csv(run, tmp_path, toy_files):
    out = str(tmp_path / "out")
    run("--out", out, "build", "--edges", toy_files["edges"], "--map", toy_files["categories"])
    result = run("--out", out, "--format", "json", "metrics", os.path.join(out, "matrix_2009.csv"))
    assert result.exit_code == 0, result.output
    assert os.path.exists(os.path.join(out, "indicators_2009.json"))
    assert not os.path.exists(os.path.join(out, "indicators_2009.csv"))


@pytest.fixture
def ratio_table(tmp_path):
    rows = [
        {"field": name, "year": 2009, "exports": exports, "imports": imports, "ratio": exports / imports}
        for name, imports, exports, _ in EXPORTERS + IMPORTERS
    ]
    path = str(tmp_path / "ratios.csv")
    pd.DataFrame(rows).to_csv(path, index=False)
    return path


def test_rank_by_ratio(run, tmp_path, ratio_table):
    out = str(tmp_path / "out")
    result = run("--out", out, "rank", ratio_table, "--column", "ratio", "--top-k", "3")
    assert result.exit_code == 0, result.output
    assert "MEDICINE, GENERAL & INTERNAL" in result.output
    ranked = pd.read_csv(os.path.join(out, "rank_ratio_desc.csv"))
    assert ranked["field"].iloc[0] == "MEDICINE, GENERAL & INTERNAL"
    assert round(ranked["ratio"].iloc[0], 2) == 1.73
    assert ranked["rank"].tolist() == [1, 2, 3]

    lowest = run("--out", out, "rank", ratio_table, "--column", "ratio", "--top-k", "1", "--direction", "asc")
    assert lowest.exit_code == 0
    assert pd.read_csv(os.path.join(out, "rank_ratio_asc.csv"))["field"].tolist() == ["ETHICS"]


def test_rank_top_zero_and_unknown_column(run, tmp_path, ratio_table):
    out = str(tmp_path / "out")
    assert run("--out", out, "rank", ratio_table, "--column", "ratio", "--top-k", "0").exit_code == 0

    result = run("--out", out, "rank", ratio_table, "--column", "hub", "--top-k", "5")
    assert result.exit_code == 2
    assert "valid columns" in result.output
    assert "ratio" in result.output


def test_stats_outputs(run, tmp_path, ratio_table):
    out = str(tmp_path / "out")
    result = run("--out", out, "stats", ratio_table, "--column", "ratio", "--column", "exports", "--bins", "5")
    assert result.exit_code == 0, result.output
    for kind in ("summary", "histogram", "qq"):
        assert os.path.exists(os.path.join(out, f"stats_ratio_{kind}.csv"))
    summary = pd.read_csv(os.path.join(out, "stats_ratio_summary.csv"))
    assert summary["n"].tolist() == [20]
    assert pd.read_csv(os.path.join(out, "stats_ratio_histogram.csv"))["count"].sum() == 20
    correlations = pd.read_csv(os.path.join(out, "stats_correlations.csv"))
    assert correlations[["column_a", "column_b"]].values.tolist() == [["ratio", "exports"]]


def test_invalid_config(run, tmp_path, toy_files, write_file):
    bad = write_file("bad.json", '{"surplus_mode": "sometimes"}')
    result = run("--config", bad, "--out", str(tmp_path / "out"), "build",
                 "--edges", toy_files["edges"], "--map", toy_files["categories"])
    assert result.exit_code == 2
    assert "invalid config" in result.output


def _pipeline(run, root):
    data = os.path.join(root, "data")
    out = os.path.join(root, "out")
    steps = [
        ("--out", data, "synth", "--seed", "11", "--categories", "6", "--journals", "8", "--edges", "3000",
         "--years", "2007", "--years", "2008", "--years", "2009", "--growth", "0.1", "--multi-assign", "0.1"),
        ("--out", out, "build", "--edges", os.path.join(data, "edges.csv"),
         "--map", os.path.join(data, "categories.csv"), "--categories", os.path.join(data, "category_names.csv")),
        ("--out", out, "metrics", os.path.join(out, "matrix_2009.csv"),
         "--publications", os.path.join(data, "publications.csv")),
        ("--out", out, "dynamics", *(os.path.join(out, f"matrix_{y}.csv") for y in (2007, 2008, 2009)),
         "--publications", os.path.join(data, "publications.csv")),
        ("--out", out, "classify", os.path.join(out, "matrix_2009.csv"),
         "--history", os.path.join(out, "matrix_2007.csv"), "--history", os.path.join(out, "matrix_2008.csv")),
        ("--out", out, "stats", os.path.join(out, "indicators_2009.csv"),
         "--column", "ratio", "--column", "self_dependence"),
        ("--out", out, "rank", os.path.join(out, "indicators_2009.csv"), "--column", "knowledge_surplus"),
    ]
    for args in steps:
        result = run(*args)
        assert result.exit_code == 0, (args, result.output)
    return out


def test_synthetic_pipeline_is_reproducible(run, tmp_path):
    first = _pipeline(run, str(tmp_path / "first"))
    second = _pipeline(run, str(tmp_path / "second"))

    csv_files = sorted(f for f in os.listdir(first) if f.endswith(".csv"))
    assert "classification_2009.csv" in csv_files
    assert "dynamics_2007_2009.csv" in csv_files
    assert "rank_positive_surplus_desc.csv" in csv_files
    for kind in ("summary", "histogram", "qq"):
        assert f"stats_ratio_{kind}.csv" in csv_files
    assert sorted(f for f in os.listdir(second) if f.endswith(".csv")) == csv_files
    for name in csv_files:
        assert _body(os.path.join(first, name)) == _body(os.path.join(second, name)), name

    with open(os.path.join(first, "dynamics_2007_2009.json"), encoding="utf-8") as handle:
        report = json.load(handle)
    assert set(report["periods"]) == {"2007-2008", "2008-2009", "2007-2009"}
    partition = report["acceleration"]
    assert len(partition["above_all_periods"] + partition["below_all_periods"] + partition["mixed"]) == 6


def test_build_rejects_invalid_utf8(run, tmp_path, toy_files):
    edges = tmp_path / "latin1.csv"
    edges.write_bytes(b"citing_journal,cited_journal,year,count\nJ\xff,J1,2009,3\n")
    result = run("--out", str(tmp_path / "out"), "build", "--edges", str(edges), "--map", toy_files["categories"])
    assert result.exit_code == 2
    assert "UTF-8" in result.output


@pytest.mark.parametrize("command", [["rank", "--column", "ratio"], ["stats", "--column", "ratio"]])
def test_year_rejected_outside_build_and_metrics(run, tmp_path, ratio_table, command):
    result = run("--out", str(tmp_path / "out"), "--year", "2009", command[0], ratio_table, *command[1:])
    assert result.exit_code == 2
    assert "--year applies to build and metrics only" in result.output
