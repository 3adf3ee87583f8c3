import numpy as np
import pytest

from mvhac.dataset import AnalysisInput, Panel, RegionRecord, SectorId

_criteria: dict[int, dict] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "ran": False})
    if report.failed:
        entry["ok"] = False
    if report.when == "call":
        entry["ran"] = True


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] and entry["ran"] else "FAIL"
        terminalreporter.write_line(f"{status}  AC{number:<2} {entry['title']}")


def make_panel(year, sectors, rows, reference="Prov"):
    """Panel from ``{region: values}``; the reference row must be included."""
    sector_ids = tuple(SectorId(s, i) for i, s in enumerate(sectors))
    records = tuple(RegionRecord(r, tuple(float(v) for v in vals)) for r, vals in rows.items())
    return Panel(year=year, sectors=sector_ids, records=records, reference=reference)


def random_input(rng: np.random.Generator, districts: int, sectors: int, zero_prob: float = 0.0) -> AnalysisInput:
    """Random valid panel pair with a province row that exceeds the district sum."""
    names = [f"R{i:02d}" for i in range(districts)]
    sector_names = [f"S{j + 1}" for j in range(sectors)]

    def block():
        vals = rng.lognormal(mean=4.0, sigma=1.0, size=(districts, sectors))
        if zero_prob:
            vals[rng.random(vals.shape) < zero_prob] = 0.0
            # keep every district total positive
            for i in range(districts):
                if vals[i].sum() == 0:
                    vals[i, rng.integers(sectors)] = 1.0
        return vals

    prev = block()
    cur = prev * rng.uniform(0.9, 1.2, size=prev.shape)

    def panel(year, vals):
        ref = vals.sum(axis=0) + rng.uniform(1.0, 50.0, size=sectors)
        rows = {n: v for n, v in zip(names, vals)}
        rows["Prov"] = ref
        return make_panel(year, sector_names, rows)

    return AnalysisInput(current=panel("t", cur), previous=panel("t-1", prev))
