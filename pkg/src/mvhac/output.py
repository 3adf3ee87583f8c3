"""Serialization: canonical JSON report, Newick, DOT, ASCII trees and tables.

Every float goes through :func:`format_number` (at most 12 significant
digits, shortest form that reads back to the same value), so identical
results always produce identical bytes.
"""

from __future__ import annotations

import csv
import io
import json

from mvhac.dataset import Panel
from mvhac.hac import Dendrogram, Linkage, Merge
from mvhac.klassen import KlassenEntry, KlassenResult, Quadrant
from mvhac.lq import LqLabel, LqProfile
from mvhac.multiview import MultiviewResult, MvhacConfig, QuadrantView

SCHEMA = "mvhac-report/1"

_NEWICK_SPECIAL = set(" \t\n\r()[]':;,_")


def round12(x: float) -> float:
    # +0.0 folds negative zero into zero.
    return float("%.12g" % x) + 0.0


def format_number(x: float) -> str:
    return repr(round12(x))


def _short(x: float) -> str:
    s = format_number(x)
    return s[:-2] if s.endswith(".0") else s


def render_panel(panel: Panel) -> str:
    """CSV text of a panel that :func:`mvhac.dataset.parse_panel` reads back exactly."""
    return panel.to_csv()


# -- dendrograms -------------------------------------------------------------


def _newick_label(label: str) -> str:
    if label and not (_NEWICK_SPECIAL & set(label)):
        return label
    return "'" + label.replace("'", "''") + "'"


def to_newick(dendrogram: Dendrogram) -> str:
    """Rooted Newick string; a child's branch length is parent height minus its own.

    Negative lengths (centroid inversions) are written as they are.
    """
    d = dendrogram

    def walk(cid: int, parent_height: float | None) -> str:
        if cid < d.n:
            body = _newick_label(d.labels[cid])
        else:
            a, b = d.children(cid)
            h = d.height(cid)
            body = f"({walk(a, h)},{walk(b, h)})"
        if parent_height is None:
            return body
        return f"{body}:{_short(parent_height - d.height(cid))}"

    return walk(d.root, None) + ";"


def parse_newick(text: str) -> tuple:
    """Parse Newick into nested ``(label, length, children)`` tuples.

    Only the subset emitted by :func:`to_newick` is supported.
    """
    text = text.strip()
    if not text.endswith(";"):
        raise ValueError("Newick string must end with ';'")
    pos = 0

    def label() -> str:
        nonlocal pos
        if pos < len(text) and text[pos] == "'":
            pos += 1
            out = []
            while True:
                if text[pos] == "'":
                    if text[pos + 1 : pos + 2] == "'":
                        out.append("'")
                        pos += 2
                        continue
                    pos += 1
                    return "".join(out)
                out.append(text[pos])
                pos += 1
        start = pos
        while pos < len(text) and text[pos] not in "(),:;":
            pos += 1
        return text[start:pos]

    def node() -> tuple:
        nonlocal pos
        children = []
        if text[pos] == "(":
            pos += 1
            children.append(node())
            while text[pos] == ",":
                pos += 1
                children.append(node())
            if text[pos] != ")":
                raise ValueError(f"expected ')' at {pos}")
            pos += 1
        name = label()
        length = None
        if text[pos] == ":":
            pos += 1
            start = pos
            while text[pos] not in ",);":
                pos += 1
            length = float(text[start:pos])
        return (name, length, tuple(children))

    tree = node()
    if text[pos:] != ";":
        raise ValueError(f"trailing text at {pos}")
    return tree


def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(dendrogram: Dendrogram, name: str = "dendrogram") -> str:
    d = dendrogram
    lines = [f'digraph "{_dot_escape(name)}" {{', "  node [fontname=monospace];"]
    for i, lbl in enumerate(d.labels):
        lines.append(f'  n{i} [shape=box, label="{_dot_escape(lbl)}"];')
    for m in d.merges:
        lines.append(f'  n{m.id} [shape=ellipse, label="{format_number(m.height)}"];')
    for m in d.merges:
        for child in d.children(m.id):
            lines.append(f"  n{m.id} -> n{child};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(dendrogram: Dendrogram) -> str:
    """ASCII tree: merges show ``[height] (size)``, every leaf on its own line."""
    d = dendrogram
    out = []

    def walk(cid: int, prefix: str, connector: str, child_prefix: str):
        if cid < d.n:
            out.append(f"{prefix}{connector}{d.labels[cid]}")
            return
        m = d.merge(cid)
        out.append(f"{prefix}{connector}[{format_number(m.height)}] ({m.size})")
        a, b = d.children(cid)
        walk(a, prefix + child_prefix, "+-- ", "|   ")
        walk(b, prefix + child_prefix, "`-- ", "    ")

    walk(d.root, "", "", "")
    return "\n".join(out) + "\n"


# -- tables ------------------------------------------------------------------


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _aligned(rows, right_from: int = 1) -> list[str]:
    widths = [max(len(str(r[j])) for r in rows) for j in range(len(rows[0]))]
    lines = []
    for r in rows:
        cells = [str(c).ljust(w) if j < right_from else str(c).rjust(w) for j, (c, w) in enumerate(zip(r, widths))]
        lines.append("  ".join(cells).rstrip())
    return lines


def klassen_csv(klassen: KlassenResult) -> str:
    rows = [["district", "growth", "contribution", "quadrant"]]
    rows += [[e.district, format_number(e.growth), format_number(e.contribution), e.quadrant.table_code] for e in klassen.entries]
    return _csv(rows)


def klassen_text(klassen: KlassenResult) -> str:
    lines = [
        "Klassen typology",
        f"reference growth: {format_number(klassen.reference_growth)}",
        f"contribution benchmark: {format_number(klassen.contribution_benchmark)}",
    ]
    header = ["district", "growth", "contribution"]
    for q in Quadrant:
        entries = [e for e in klassen.entries if e.quadrant is q]
        lines.append("")
        lines.append(f"{q.table_code}  {q.label}  ({len(entries)} districts)")
        rows = [header] + [[e.district, format_number(e.growth), format_number(e.contribution)] for e in entries]
        lines += ["  " + ln for ln in _aligned(rows)]
    return "\n".join(lines) + "\n"


def klassen_sectors_csv(klassen: KlassenResult, sectors) -> str:
    if klassen.sector_quadrants is None:
        raise ValueError("result carries no sector-level quadrants")
    rows = [["district", *sectors]]
    rows += [[d, *(q.table_code for q in qs)] for d, qs in zip(klassen.districts, klassen.sector_quadrants)]
    return _csv(rows)


def indicator_rows(profile: LqProfile) -> list[list]:
    rows = [["district", *profile.sectors]]
    rows += [[d, *row] for d, row in zip(profile.districts, profile.indicators())]
    return rows


def indicator_csv(profile: LqProfile) -> str:
    return _csv(indicator_rows(profile))


def lq_values_csv(profile: LqProfile) -> str:
    rows = [["district", *profile.sectors]]
    rows += [[d, *(format_number(v) for v in row)] for d, row in zip(profile.districts, profile.values)]
    return _csv(rows)


def lq_text(profile: LqProfile) -> str:
    counts = profile.label_counts()
    lines = ["Location quotients"]
    values = [["district", *profile.sectors]]
    values += [[d, *(format_number(v) for v in row)] for d, row in zip(profile.districts, profile.values)]
    lines += _aligned(values)
    lines += ["", "Basis indicators (1 = basis, -1 = non-basis)"]
    lines += _aligned(indicator_rows(profile))
    lines.append("")
    lines.append("  ".join(f"{lbl.value}: {counts[lbl]}" for lbl in LqLabel))
    flagged = [
        f"{d}/{s}"
        for d, row in zip(profile.districts, profile.degenerate)
        for s, flag in zip(profile.sectors, row)
        if flag
    ]
    if flagged:
        lines.append("degenerate (0/0) cells: " + ", ".join(flagged))
    return "\n".join(lines) + "\n"


def render_tables(result: MultiviewResult, fmt: str = "text") -> str:
    """Klassen table and basis indicator table, as aligned text or as two CSV blocks."""
    if fmt == "csv":
        return klassen_csv(result.klassen) + "\n" + indicator_csv(result.lq)
    if fmt != "text":
        raise ValueError(f"unknown table format {fmt!r}")
    lines = [klassen_text(result.klassen), "Basis indicators (1 = basis, -1 = non-basis)"]
    lines += _aligned(indicator_rows(result.lq))
    return "\n".join(lines) + "\n"


# -- JSON report -------------------------------------------------------------


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def config_section(config: MvhacConfig) -> dict:
    return {
        "linkage": config.linkage.value,
        "features": config.features.value,
        "standardize": config.standardize,
        "epsilon": round12(config.epsilon),
    }


def klassen_section(klassen: KlassenResult, sectors=None) -> dict:
    out = {
        "reference_growth": round12(klassen.reference_growth),
        "contribution_benchmark": round12(klassen.contribution_benchmark),
        "districts": [
            {
                "district": e.district,
                "growth": round12(e.growth),
                "contribution": round12(e.contribution),
                "quadrant": e.quadrant.code,
            }
            for e in klassen.entries
        ],
    }
    if klassen.sector_quadrants is not None:
        out["sectors"] = list(sectors) if sectors is not None else None
        out["sector_quadrants"] = [[q.code for q in row] for row in klassen.sector_quadrants]
    return out


def lq_section(profile: LqProfile) -> dict:
    return {
        "epsilon": round12(profile.epsilon),
        "sectors": list(profile.sectors),
        "districts": [
            {
                "district": d,
                "values": [round12(v) for v in values],
                "labels": [lbl.value for lbl in labels],
                "indicators": [lbl.indicator for lbl in labels],
                "degenerate": [s for s, flag in zip(profile.sectors, degenerate) if flag],
            }
            for d, values, labels, degenerate in zip(profile.districts, profile.values, profile.labels, profile.degenerate)
        ],
        "counts": {lbl.value: n for lbl, n in profile.label_counts().items()},
    }


def dendrogram_section(d: Dendrogram) -> dict:
    return {
        "linkage": d.linkage.value,
        "leaves": list(d.labels),
        "inverted": d.inverted,
        "merges": [
            {"id": m.id, "left": m.left, "right": m.right, "height": round12(m.height), "size": m.size}
            for m in d.merges
        ],
    }


def view_section(view: QuadrantView) -> dict:
    return {
        "quadrant": view.quadrant.code,
        "label": view.quadrant.label,
        "members": list(view.members),
        "features": [[round12(v) for v in row] for row in view.features],
        "dendrogram": dendrogram_section(view.dendrogram) if view.dendrogram is not None else None,
    }


def report_dict(result: MultiviewResult) -> dict:
    return {
        "schema": SCHEMA,
        "config": config_section(result.config),
        "provenance": dict(result.provenance),
        "klassen": klassen_section(result.klassen),
        "lq": lq_section(result.lq),
        "views": [view_section(v) for v in result.views],
    }


def report_json(result: MultiviewResult) -> str:
    return dumps(report_dict(result))


def read_dendrogram(obj: dict) -> Dendrogram:
    merges = tuple(Merge(left=m["left"], right=m["right"], height=float(m["height"]), id=m["id"], size=m["size"]) for m in obj["merges"])
    labels = tuple(obj["leaves"])
    return Dendrogram(n=len(labels), labels=labels, merges=merges, linkage=Linkage(obj["linkage"]))


def read_report(text: str) -> MultiviewResult:
    """Rebuild a :class:`MultiviewResult` from :func:`report_json` output.

    Floats come back at the report's 12-digit precision, so
    ``report_json(read_report(t)) == t`` for any report ``t``.
    """
    obj = json.loads(text)
    if obj.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {obj.get('schema')!r}")
    cfg = obj["config"]
    config = MvhacConfig(
        linkage=Linkage(cfg["linkage"]),
        epsilon=float(cfg["epsilon"]),
        features=cfg["features"],
        standardize=bool(cfg["standardize"]),
    )
    k = obj["klassen"]
    klassen = KlassenResult(
        entries=tuple(
            KlassenEntry(e["district"], float(e["growth"]), float(e["contribution"]), Quadrant[e["quadrant"]])
            for e in k["districts"]
        ),
        reference_growth=float(k["reference_growth"]),
        contribution_benchmark=float(k["contribution_benchmark"]),
        sector_quadrants=(
            tuple(tuple(Quadrant[q] for q in row) for row in k["sector_quadrants"]) if "sector_quadrants" in k else None
        ),
    )
    lq = obj["lq"]
    sectors = tuple(lq["sectors"])
    profile = LqProfile(
        districts=tuple(e["district"] for e in lq["districts"]),
        sectors=sectors,
        values=tuple(tuple(float(v) for v in e["values"]) for e in lq["districts"]),
        labels=tuple(tuple(LqLabel(lbl) for lbl in e["labels"]) for e in lq["districts"]),
        degenerate=tuple(tuple(s in e["degenerate"] for s in sectors) for e in lq["districts"]),
        epsilon=float(lq["epsilon"]),
    )
    views = tuple(
        QuadrantView(
            quadrant=Quadrant[v["quadrant"]],
            members=tuple(v["members"]),
            features=tuple(tuple(float(x) for x in row) for row in v["features"]),
            dendrogram=read_dendrogram(v["dendrogram"]) if v["dendrogram"] is not None else None,
        )
        for v in obj["views"]
    )
    return MultiviewResult(klassen=klassen, lq=profile, views=views, config=config, provenance=dict(obj["provenance"]))
