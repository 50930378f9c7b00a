"""Batch reporting: delimited summaries plus rendered figures.

Figures are written next to the CSV so a batch directory is self-contained;
matplotlib is imported lazily and drawn on the Agg backend.
"""

from __future__ import annotations

import csv
import os

FIELDS = [
    "seed",
    "f",
    "vertices",
    "result",
    "connectors",
    "descents",
    "spent_connectors",
    "spent_descents",
    "max_path_len",
    "seconds",
]


def write_csv(rows: list[dict], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDS, extrasaction="ignore")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def format_table(rows: list[dict]) -> str:
    headers = FIELDS
    table = [headers] + [[str(r.get(h, "")) for h in headers] for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(headers))]
    out = []
    for line in table:
        out.append("  ".join(cell.rjust(w) for cell, w in zip(line, widths)))
    return "\n".join(out)


def render_figures(rows: list[dict], outdir: str) -> list[str]:
    """Render path-length and supernode-budget figures; returns file paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    written = []
    lengths = [n for row in rows for n in row.get("path_lengths", [])]
    if lengths:
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.hist(lengths, bins=range(min(lengths), max(lengths) + 2), edgecolor="black")
        ax.set_xlabel("subdivision path length (edges)")
        ax.set_ylabel("count")
        ax.set_title("Subdivision path lengths across the batch")
        path = os.path.join(outdir, "path_lengths.png")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)

    ok_rows = [r for r in rows if r.get("result") == "ok"]
    if ok_rows:
        fig, ax = plt.subplots(figsize=(6, 4))
        seeds = [r["seed"] for r in ok_rows]
        spent = [r["spent_connectors"] + r["spent_descents"] for r in ok_rows]
        ax.bar(seeds, spent, label="supernodes spent (connectors + descents)")
        budget = ok_rows[0].get("budget")
        if budget:
            ax.axhline(budget, color="red", linestyle="--", label=f"budget {budget}")
        ax.set_xlabel("seed")
        ax.set_ylabel("supernodes")
        ax.set_title("Supernode spend per seed")
        ax.legend()
        path = os.path.join(outdir, "supernode_spend.png")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path)
    return written
