"""Full-instance reports, delimited output, and figure rendering."""

from __future__ import annotations

import json
import os

from .criticality import (
    DegenerateInstance,
    ell_splitting_pairs,
    maximal_splitting_pair,
    mixed_elements,
    pair_criticality,
    sharp_critical_pairs,
)
from .extremal import characterize, stanley, trivial_witness
from .geometry import certified_directions, is_extreme
from .linext import VARIANTS, a_sequence, decompose, iter_extensions


def full_report(inst, auto_closure=True):
    """The combined analysis document for one instance: counts, verdicts,
    class, characterization, extreme directions, maximal pair, mixing."""
    p, c = inst.poset, inst.config
    verdict = stanley(p, c)
    doc = {
        "n": p.n,
        "k": c.k,
        "ell": c.ell,
        "counts": dict(zip(VARIANTS, verdict.counts)),
        "relation": verdict.relation,
        "trivial_witness": trivial_witness(p, c),
    }
    try:
        report = characterize(p, c, auto_closure=auto_closure)
    except DegenerateInstance:
        doc["characterization"] = None
        return doc
    doc["characterization"] = report.as_json()
    doc["decomposition"] = decompose(p, c).as_json()

    maximal = maximal_splitting_pair(p, c)
    doc["sharp_critical_pairs"] = [list(pair) for pair in sharp_critical_pairs(p, c)]
    doc["maximal_pair"] = list(maximal) if maximal else None

    mixing = []
    for pair in ell_splitting_pairs(c):
        entry = {"pair": list(pair), "criticality": pair_criticality(p, c, pair)}
        census = {}
        for v in VARIANTS:
            sizes = sorted(
                {len(mixed_elements(p, c, place, pair, v)) for place in iter_extensions(p, c, v)}
            )
            census[v] = sizes
        entry["mixed_counts"] = census
        mixing.append(entry)
    doc["mixing"] = mixing

    dirs = certified_directions(p, c, maximal_pair=maximal)
    doc["extreme_directions"] = [
        {
            "direction": list(d),
            "clauses": clauses,
            "passes_rank_test": is_extreme(p, c, d),
        }
        for d, clauses in sorted(dirs.items(), key=lambda kv: str(kv[0]))
    ]
    if c.k == 1:
        doc["a_sequence"] = a_sequence(p, c.chain[0])
    return doc


def flatten(doc, prefix=""):
    """Depth-first (key, value) rows for tsv output."""
    rows = []
    if isinstance(doc, dict):
        for key, value in doc.items():
            rows.extend(flatten(value, f"{prefix}{key}." if prefix else f"{key}."))
    elif isinstance(doc, (list, tuple)):
        rows.append((prefix.rstrip("."), json.dumps(doc)))
    else:
        rows.append((prefix.rstrip("."), doc))
    return rows


def emit(doc, fmt="json", out=None):
    import sys

    out = out or sys.stdout
    if fmt == "json":
        json.dump(doc, out, indent=2, default=str)
        out.write("\n")
    else:
        for key, value in flatten(doc):
            out.write(f"{key}\t{value}\n")


# ---------------------------------------------------------------------------
# Figures.  Rendering is optional; matplotlib is only imported on demand.


def _axes(figsize=(6.0, 3.6)):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=figsize)
    return fig, ax


def render_a_sequence(seq, path):
    """Bar chart of the position counts of the single chain element."""
    fig, ax = _axes()
    xs = list(range(1, len(seq) + 1))
    ax.bar(xs, seq, color="#4878b0")
    ax.set_xlabel("pinned position")
    ax.set_ylabel("extensions")
    ax.set_xticks(xs)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    import matplotlib.pyplot as plt

    plt.close(fig)


def render_decomposition(table, path):
    """Heat grid of the 3x4 companion-comparability cells."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [("inc", "inc"), ("inc", "cmp"), ("cmp", "inc"), ("cmp", "cmp")]
    grid = [
        [table[f"{v}({a},{b})"] for a, b in labels]
        for v in VARIANTS
    ]
    fig, ax = plt.subplots(figsize=(5.2, 3.0))
    im = ax.imshow(grid, cmap="Blues")
    ax.set_xticks(range(4), [f"({a},{b})" for a, b in labels])
    ax.set_yticks(range(3), list(VARIANTS))
    for r in range(3):
        for t in range(4):
            ax.text(t, r, str(grid[r][t]), ha="center", va="center", fontsize=9)
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_summary(summary, path):
    """Instance counts by criticality class plus the headline tallies."""
    fig, ax = _axes(figsize=(6.4, 3.6))
    classes = sorted(summary["by_class"])
    values = [summary["by_class"][cls] for cls in classes]
    ax.bar(classes, values, color="#4878b0")
    ax.set_ylabel("instances")
    ax.set_title(
        f"{summary['instances']} instances, "
        f"{summary['equality_instances']} equality, "
        f"{summary['anomalies']} anomalies"
    )
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    import matplotlib.pyplot as plt

    plt.close(fig)


def render_report_figures(inst, doc, outdir):
    """Write the figures accompanying one analysis report; returns the paths."""
    os.makedirs(outdir, exist_ok=True)
    written = []
    if doc.get("a_sequence"):
        path = os.path.join(outdir, "a_sequence.png")
        render_a_sequence(doc["a_sequence"], path)
        written.append(path)
    if doc.get("decomposition"):
        path = os.path.join(outdir, "decomposition.png")
        render_decomposition(doc["decomposition"], path)
        written.append(path)
    return written
