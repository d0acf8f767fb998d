import pytest

from src.errors import DataValidationError, DomainError, UnknownFieldError
from src.flow_matrix import FieldFlowMatrix
from src.records import PublicationCounts
from src.trade_metrics import (
    DependenceRule,
    DynamicsRecord,
    SurplusMode,
    acceleration_partition,
    all_field_indicators,
    dependence_counts,
    export_partner_count,
    field_indicators,
    knowledge_surplus,
    net_flow,
    overall_increment,
    primary_dependence,
    role_counts,
    role_partition,
    self_dependence_ratio,
    subgroup_increment,
    subgroup_share,
    trading_dynamics,
)


def test_field_indicators_for_a(matrix_t):
    ind = field_indicators(matrix_t, "A")
    assert ind.exports == 20
    assert ind.imports == 13
    assert ind.self_citations == 10
    assert ind.export_import_ratio == pytest.approx(20 / 13)
    assert round(ind.export_import_ratio, 3) == 1.538
    assert ind.self_dependence == pytest.approx(0.5)
    assert ind.net_balance == 7
    assert ind.hub_size == 33
    assert ind.export_partner_count == 2


def test_absent_ratio_and_self_dependence():
    matrix = FieldFlowMatrix.from_rows(2009, ["A", "B"], [[0, 0], [3, 0]])
    a = field_indicators(matrix, "A")
    b = field_indicators(matrix, "B")
    assert a.export_import_ratio is None  # A cites nothing
    assert b.self_dependence is None  # nobody cites B


def test_unknown_field_is_lookup_error(matrix_t):
    with pytest.raises(LookupError):
        field_indicators(matrix_t, "Z")
    with pytest.raises(UnknownFieldError):
        net_flow(matrix_t, "A", "Z")


def test_self_dependence(matrix_t):
    assert self_dependence_ratio(matrix_t, "B") == pytest.approx(0.8)
    empty = FieldFlowMatrix.zeros(2009, ["A"])
    assert self_dependence_ratio(empty, "A") is None


def test_primary_dependence(matrix_t):
    c = primary_dependence(matrix_t, "C")
    assert c.source == "A"
    assert not c.is_self
    assert primary_dependence(matrix_t, "A").is_self
    assert primary_dependence(FieldFlowMatrix.zeros(2009, ["A", "B"]), "A") is None


def test_primary_dependence_ties_favor_self_then_category_order():
    matrix = FieldFlowMatrix.from_rows(2009, ["A", "B", "C"], [[4, 4, 0], [0, 1, 5], [0, 5, 5]])
    assert primary_dependence(matrix, "A").is_self
    assert primary_dependence(matrix, "C").is_self
    tied_others = FieldFlowMatrix.from_rows(2009, ["A", "B", "C"], [[0, 0, 0], [3, 1, 3], [0, 0, 0]])
    assert primary_dependence(tied_others, "B").source == "A"


def test_majority_rule():
    matrix = FieldFlowMatrix.from_rows(2009, ["A", "B", "C"], [[4, 3, 3], [0, 1, 0], [0, 0, 1]])
    assert primary_dependence(matrix, "A", DependenceRule.ARGMAX).is_self
    assert primary_dependence(matrix, "A", DependenceRule.MAJORITY).source == "B"
    assert dependence_counts(matrix, DependenceRule.ARGMAX) == (3, 0)
    assert dependence_counts(matrix, DependenceRule.MAJORITY) == (2, 1)


def test_net_flow(matrix_t):
    assert net_flow(matrix_t, "A", "B") == 2
    assert net_flow(matrix_t, "A", "C") == 5
    assert net_flow(matrix_t, "C", "A") == -5
    with pytest.raises(DomainError):
        net_flow(matrix_t, "A", "A")


def test_symmetric_matrix_has_no_net_flow():
    matrix = FieldFlowMatrix.from_rows(2009, ["A", "B", "C"], [[1, 2, 3], [2, 5, 4], [3, 4, 0]])
    for a in matrix.fields:
        assert export_partner_count(matrix, a) == 0
        for b in matrix.fields:
            if a != b:
                assert net_flow(matrix, a, b) == 0


def test_knowledge_surplus_modes(matrix_t):
    assert knowledge_surplus(matrix_t, "A", SurplusMode.NET_BALANCE) == 7
    assert knowledge_surplus(matrix_t, "A", SurplusMode.POSITIVE_ONLY) == 7
    assert knowledge_surplus(matrix_t, "B", SurplusMode.NET_BALANCE) == 1
    assert knowledge_surplus(matrix_t, "B", SurplusMode.POSITIVE_ONLY) == 3
    zero = FieldFlowMatrix.zeros(2009, ["A", "B"])
    assert knowledge_surplus(zero, "A", SurplusMode.NET_BALANCE) == 0
    assert knowledge_surplus(zero, "A") == 0


def test_export_partner_counts(matrix_t):
    assert [export_partner_count(matrix_t, f) for f in "ABC"] == [2, 1, 0]


def test_role_partition(matrix_t):
    partition = role_partition(matrix_t)
    assert set(partition.exporters) == {"A", "B"}
    assert partition.importers == ("C",)
    assert role_counts(partition) == {"exporters": 2, "importers": 1, "balanced": 0}


def test_diagonal_only_matrix_is_balanced():
    matrix = FieldFlowMatrix.from_rows(2009, ["A", "B"], [[3, 0], [0, 7]])
    assert role_partition(matrix).balanced == ("A", "B")


def test_all_field_indicators_with_publications(matrix_t):
    pubs = PublicationCounts({("A", 2009): 40, ("B", 2009): 0})
    rows = all_field_indicators(matrix_t, pubs)
    assert [r.field for r in rows] == ["A", "B", "C"]
    assert rows[0].publications == 40
    assert rows[0].per_publication_exports == pytest.approx(0.5)
    assert rows[1].per_publication_exports is None
    assert rows[2].publications is None


def test_overall_increment():
    assert overall_increment(24_979_391, 30_150_625) == pytest.approx(0.20702, abs=1e-5)
    assert overall_increment(24_979_391, 26_809_415) == pytest.approx(0.07326, abs=1e-5)
    assert overall_increment(100, 100) == 0
    with pytest.raises(DomainError):
        overall_increment(0, 10)


def test_trading_dynamics():
    before = FieldFlowMatrix.from_rows(2007, ["A", "B"], [[0, 10], [20, 0]])
    after = FieldFlowMatrix.from_rows(2009, ["A", "B"], [[0, 5], [50, 0]])
    pubs = PublicationCounts({("A", 2007): 100, ("A", 2009): 150})
    record = trading_dynamics(before, after, "A", pubs, increment=0.2)
    assert record.period == (2007, 2009)
    assert record.export_growth == pytest.approx(1.5)
    assert record.publication_growth == pytest.approx(0.5)
    assert record.above_overall is True
    b = trading_dynamics(before, after, "B", pubs, increment=0.2)
    assert b.export_growth == pytest.approx(-0.5)
    assert b.publication_growth is None
    assert b.above_overall is False


def test_identical_matrices_have_zero_growth(matrix_t):
    later = FieldFlowMatrix(2010, matrix_t.fields, matrix_t.cells)
    assert trading_dynamics(matrix_t, later, "A").export_growth == 0


def test_zero_base_growth_is_absent():
    before = FieldFlowMatrix.from_rows(2007, ["A", "B"], [[0, 0], [0, 0]])
    after = FieldFlowMatrix.from_rows(2008, ["A", "B"], [[0, 0], [4, 0]])
    record = trading_dynamics(before, after, "A", increment=0.1)
    assert record.export_growth is None
    assert record.above_overall is None
    assert record.reason == "zero exports in base year"


def _record(field, period, growth):
    return DynamicsRecord(field=field, period=period, exports_from=100, exports_to=100, export_growth=growth)


def test_acceleration_partition_two_periods():
    periods = [(2007, 2008), (2008, 2009)]
    dynamics = {p: [_record("FAST", p, 0.5), _record("SLOW", p, 0.01)] for p in periods}
    partition = acceleration_partition(dynamics, {p: 0.1 for p in periods})
    assert partition.above_all_periods == ("FAST",)
    assert partition.below_all_periods == ("SLOW",)
    assert partition.mixed == ()


def test_equal_growth_is_mixed():
    p = (2008, 2009)
    partition = acceleration_partition({p: [_record("A", p, 0.1), _record("B", p, 0.1)]}, {p: 0.1})
    assert partition.mixed == ("A", "B")


def test_partition_exclusion_and_missing_records():
    p1, p2 = (2007, 2008), (2008, 2009)
    dynamics = {
        p1: [_record("A", p1, 0.5), _record("MULTIDISCIPLINARY SCIENCES", p1, 0.5)],
        p2: [_record("A", p2, 0.5), _record("MULTIDISCIPLINARY SCIENCES", p2, 0.5)],
    }
    partition = acceleration_partition(dynamics, {p1: 0.1, p2: 0.1}, exclude=["MULTIDISCIPLINARY SCIENCES"])
    assert partition.above_all_periods == ("A",)

    dynamics[p2] = [_record("MULTIDISCIPLINARY SCIENCES", p2, 0.5)]
    with pytest.raises(DataValidationError, match="'A'"):
        acceleration_partition(dynamics, {p1: 0.1, p2: 0.1})


def test_subgroup_share_and_increment(matrix_t):
    assert subgroup_share(matrix_t, ["A", "B", "C"]) == pytest.approx(1.0)
    assert subgroup_share(matrix_t, ["C"]) == pytest.approx(6 / 51)
    later = FieldFlowMatrix.from_rows(2010, ["A", "B", "C"], [[10, 2, 1], [4, 20, 0], [6, 3, 11]])
    assert subgroup_increment(matrix_t, later, ["C"]) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        subgroup_share(matrix_t, [])
