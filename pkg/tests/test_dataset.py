import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvhac.dataset import PanelError, parse_panel, synthetic_fixture, validate_input
from mvhac.output import render_panel

BASIC = "region,S1,S2\nA,10,10\nProv,100,300\n"


def test_parse_basic():
    p = parse_panel(BASIC, "Prov")
    assert len(p.records) == 2
    assert p.sector_names == ("S1", "S2")
    assert [s.ordinal for s in p.sectors] == [0, 1]
    assert p.district_ids == ("A",)
    assert p.reference_record.values == (100.0, 300.0)


def test_crlf_and_exponent_accepted():
    p = parse_panel("region,S1,S2\r\nA,1e1,10.5\r\nProv,1.0E2,300\r\n", "Prov")
    assert p.record("A").values == (10.0, 10.5)
    assert p.reference_record.values == (100.0, 300.0)


@pytest.mark.parametrize(
    "text, kind, row, column",
    [
        ("region,S1,S2\nA,10,10\nA,1,1\nProv,100,300\n", "duplicate-region", 3, "region"),
        ("region,S1,S2\nA,-5,10\nProv,100,300\n", "negative-value", 2, "S1"),
        ("region,S1,S2\nA,abc,10\nProv,100,300\n", "non-numeric", 2, "S1"),
        ("region,S1,S2\nA,\"1,000\",10\nProv,100,300\n", "non-numeric", 2, "S1"),
        ("region,S1,S2\nA,nan,10\nProv,100,300\n", "non-numeric", 2, "S1"),
        ("region,S1,S1\nA,1,10\nProv,100,300\n", "duplicate-column", 1, "S1"),
        ("district,S1,S2\nA,1,10\nProv,100,300\n", "missing-column", 1, None),
        ("region\nA\nProv\n", "missing-column", 1, None),
        ("region,S1,S2\n", "empty-body", None, None),
        ("", "empty-body", None, None),
        ("region,S1,S2\nA,1\nProv,100,300\n", "row-width", 2, None),
        ("region,S1,S2\nA,0,0\nProv,100,300\n", "zero-total", 2, None),
        ("region,S1,S2\nA,1,2\nB,3,4\n", "missing-reference", None, None),
        ("region,S1,S2\nProv,100,300\n", "empty-body", None, None),
    ],
)
def test_parse_errors(text, kind, row, column):
    with pytest.raises(PanelError) as exc:
        parse_panel(text, "Prov")
    assert exc.value.kind == kind
    assert exc.value.row == row
    assert exc.value.column == column


def test_negative_value_message_names_cell():
    with pytest.raises(PanelError, match=r"row 2, column 'S1'.*-5"):
        parse_panel("region,S1,S2\nA,-5,10\nProv,100,300\n", "Prov")


def test_zero_sector_value_allowed():
    p = parse_panel("region,S1,S2\nA,0,10\nProv,100,300\n", "Prov")
    assert p.record("A").values == (0.0, 10.0)


def test_validate_input_reorders_previous():
    cur = parse_panel("region,S1,S2\nA,1,2\nB,3,4\nProv,10,10\n", "Prov", "2012")
    prev = parse_panel("region,S1,S2\nProv,9,9\nB,3,3\nA,1,1\n", "Prov", "2011")
    data = validate_input(cur, prev)
    assert [r.region for r in data.previous.records] == ["A", "B", "Prov"]
    assert data.previous.year == "2011"


def test_validate_input_region_mismatch():
    cur = parse_panel("region,S1,S2\nA,1,2\nB,3,4\nProv,10,10\n", "Prov")
    prev = parse_panel("region,S1,S2\nB,3,4\nProv,10,10\n", "Prov")
    with pytest.raises(PanelError) as exc:
        validate_input(cur, prev)
    assert exc.value.kind == "region-mismatch"
    assert "'A'" in str(exc.value)


def test_validate_input_sector_mismatch():
    cur = parse_panel("region,S1,S2\nA,1,2\nProv,10,10\n", "Prov")
    prev = parse_panel("region,S1,S3\nA,1,2\nProv,10,10\n", "Prov")
    with pytest.raises(PanelError) as exc:
        validate_input(cur, prev)
    assert exc.value.kind == "sector-mismatch"


def test_validate_input_reference_mismatch():
    cur = parse_panel("region,S1\nA,1\nP,10\nQ,5\n", "P")
    prev = parse_panel("region,S1\nA,1\nP,10\nQ,5\n", "Q")
    with pytest.raises(PanelError) as exc:
        validate_input(cur, prev)
    assert exc.value.kind == "reference-mismatch"


def test_fixture_deterministic():
    a = synthetic_fixture(1, 8, 9)
    assert a == synthetic_fixture(1, 8, 9)
    assert render_panel(a.current) == render_panel(synthetic_fixture(1, 8, 9).current)
    assert a.current != synthetic_fixture(2, 8, 9).current


def test_fixture_reference_exceeds_district_sum():
    data = synthetic_fixture(3, 5, 4)
    for panel in (data.current, data.previous):
        ref = panel.reference_record.values
        for j in range(4):
            assert ref[j] > math.fsum(r.values[j] for r in panel.districts)


def test_fixture_validates_over_100_seeds():
    for seed in range(100):
        data = synthetic_fixture(seed, 1 + seed % 10, 1 + seed % 9)
        again = validate_input(data.current, data.previous)
        assert again == data


def test_fixture_rejects_bad_sizes():
    with pytest.raises(ValueError):
        synthetic_fixture(1, 0, 3)


finite = st.floats(min_value=0, max_value=1e12, allow_nan=False, allow_infinity=False)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_render_parse_round_trip(n_districts, n_sectors, data):
    rows = []
    for i in range(n_districts + 1):
        vals = data.draw(st.lists(finite, min_size=n_sectors, max_size=n_sectors).filter(lambda v: math.fsum(v) > 0))
        rows.append((f"R{i}" if i < n_districts else "Prov", vals))
    text = "region," + ",".join(f"S{j}" for j in range(n_sectors)) + "\n"
    text += "".join(name + "," + ",".join(repr(v) for v in vals) + "\n" for name, vals in rows)
    panel = parse_panel(text, "Prov")
    assert parse_panel(render_panel(panel), "Prov") == panel
    assert render_panel(panel) == render_panel(parse_panel(render_panel(panel), "Prov"))
