import pytest

from lifemoments.gompertz import GompertzParams
from lifemoments.tables import ANNUAL_ROWS, MTHLY_ROWS, build_table


def test_table2_shape():
    t = build_table("table2")
    assert t.columns == ["UDD", "C", "B"]
    assert [r[0] for r in t.rows] == [r[0] for r in ANNUAL_ROWS]


def test_table5_columns():
    t = build_table("table5")
    assert t.columns == ["UDD", "C", "B", "G"]
    assert t.value("A", "G") == pytest.approx(0.2627712781, rel=1e-9)


def test_table6_rows():
    t = build_table("table6", assumptions=["C"])
    assert [r[0] for r in t.rows] == [r[0] for r in MTHLY_ROWS]
    assert t.columns == ["C"]


def test_other_gompertz_params():
    t = build_table("table5", params=GompertzParams(0.1, 0.0005), assumptions=["C", "G"])
    assert t.value("A", "C") != build_table("table5", assumptions=["C"]).value("A", "C")


def test_unknown_table():
    with pytest.raises(ValueError):
        build_table("table4")
    with pytest.raises(KeyError):
        build_table("table2").value("nope", "C")
