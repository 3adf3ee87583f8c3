"""Column-at-a-time evaluation of the Klassen and LQ formulas, written like a spreadsheet.

Deliberately independent of the package's own arithmetic: it works on whole
numpy arrays and never calls into ``mvhac``.
"""

import numpy as np


def frame(panel):
    regions = [r.region for r in panel.records]
    values = np.array([r.values for r in panel.records], dtype=float)
    return regions, values


def klassen_sheet(data):
    regions, cur = frame(data.current)
    _, prev = frame(data.previous)
    ref = regions.index(data.reference)
    keep = [i for i in range(len(regions)) if i != ref]
    tc, tp = cur.sum(axis=1), prev.sum(axis=1)
    growth = (tc - tp) / tp * 100
    share = (tc + tp) / (tc[ref] + tp[ref]) * 100
    bench = share[keep].mean()
    quad = []
    for i in keep:
        fast = growth[i] >= growth[ref]
        big = share[i] >= bench
        quad.append({(True, True): "Q1", (False, True): "Q2", (True, False): "Q3", (False, False): "Q4"}[(fast, big)])
    return {
        "districts": [regions[i] for i in keep],
        "growth": growth[keep],
        "contribution": share[keep],
        "reference_growth": growth[ref],
        "benchmark": bench,
        "quadrants": quad,
    }


def lq_sheet(panel, epsilon=1e-9):
    regions, vals = frame(panel)
    ref = regions.index(panel.reference)
    keep = [i for i in range(len(regions)) if i != ref]
    district_share = vals[keep] / vals[keep].sum(axis=1, keepdims=True)
    ref_share = vals[ref] / vals[ref].sum()
    lq = district_share / ref_share
    labels = np.where(lq > 1 + epsilon, "Basis", np.where(np.abs(lq - 1) <= epsilon, "NonBasisUnit", "NonBasisBelow"))
    return {"districts": [regions[i] for i in keep], "lq": lq, "labels": labels}
