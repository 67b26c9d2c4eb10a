"""Render threshold sweeps and slice maps from pseudoprob CSV exports.

The renderer does no physics of its own: every line, marker, and legend
count comes straight out of the input file. Raster bytes differ across
platforms, so the checkable content of each figure (legend category
counts, threshold marker positions) is also written next to the image as
a JSON sidecar named ``<output>.legend.json``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import ListedColormap
from matplotlib.patches import Patch


class SchemaMismatch(Exception):
    """Input CSV header differs from the pseudoprob export schema."""


SWEEP_HEADER = ("alpha", "physical", "W0", "W1", "W2", "W3", "W4",
                "W0_detected", "W1_detected", "W2_detected", "W3_detected",
                "W4_detected", "ppt_entangled")
SCAN_HEADER = ("t1", "t2", "t3", "physical", "W1", "W2", "W3", "W4")

WITNESSES = ("W0", "W1", "W2", "W3", "W4")
KINDS = ("werner_sweep", "slice_map")

SCAN_CATEGORIES = ("only W2", "only W3", "both", "none", "unphysical")
SCAN_COLORS = {
    "only W2": "#d95f02",
    "only W3": "#1b9e77",
    "both": "#7570b3",
    "none": "#e8e8e8",
    "unphysical": "#ffffff",
}


@dataclass(frozen=True)
class FigureJob:
    """One rendering request: which CSV, which figure, where to write it."""

    input_csv: Path
    kind: str
    output: Path

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind: {self.kind!r}")


def _read_csv(path: Path, expected: tuple[str, ...]) -> list[dict[str, str]]:
    # header must match the CLI schema exactly, order included
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = tuple(reader.fieldnames or ())
        if names != expected:
            missing = [c for c in expected if c not in names]
            extra = [c for c in names if c not in expected]
            parts = []
            if missing:
                parts.append("missing: " + ", ".join(missing))
            if extra:
                parts.append("unexpected: " + ", ".join(extra))
            if not parts:
                parts.append("column order differs")
            raise SchemaMismatch(f"{path}: header is not the CLI schema "
                                 f"({'; '.join(parts)})")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def _write_sidecar(output: Path, payload: dict) -> Path:
    sidecar = Path(str(output) + ".legend.json")
    with open(sidecar, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


def render_werner_sweep(job: FigureJob) -> Path:
    """Line plot of the five witness values along the sweep, one vertical
    marker per witness at the largest alpha its detected flag is set."""
    rows = _read_csv(job.input_csv, SWEEP_HEADER)
    alpha = np.array([float(r["alpha"]) for r in rows])
    values = {k: np.array([float(r[k]) for r in rows]) for k in WITNESSES}
    flags = {k: np.array([r[k + "_detected"] == "1" for r in rows])
             for k in WITNESSES}

    counts = {k: int(flags[k].sum()) for k in WITNESSES}
    markers = []
    for i, k in enumerate(WITNESSES):
        if flags[k].any():
            markers.append({"label": f"L{i}", "witness": k,
                            "alpha": float(alpha[flags[k]].max())})

    fig, ax = plt.subplots(figsize=(7.2, 4.6))
    for k in WITNESSES:
        # nan rows (unphysical alphas) break the line, which is wanted
        ax.plot(alpha, values[k], linewidth=1.4,
                label=f"{k} ({counts[k]} detected)")
    top = ax.get_ylim()[1]
    for m in markers:
        ax.axvline(m["alpha"], color="0.45", linestyle=":", linewidth=1.0)
        ax.text(m["alpha"], top, m["label"], ha="center", va="bottom",
                fontsize=8, color="0.25")
    ax.set_xlabel("alpha")
    ax.set_ylabel("witness value")
    ax.set_title(job.input_csv.name)
    ax.grid(True, alpha=0.25)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(job.output, dpi=150)
    plt.close(fig)

    _write_sidecar(job.output, {
        "kind": "werner_sweep",
        "input": job.input_csv.name,
        "rows": len(rows),
        "legend": counts,
        "markers": markers,
    })
    return job.output


def _scan_category(row: dict[str, str]) -> str:
    # same buckets the scan CSV encodes; flags are read, never recomputed
    if row["physical"] != "1":
        return "unphysical"
    w2 = row["W2"] == "1"
    w3 = row["W3"] == "1"
    if w2 and w3:
        return "both"
    if w2:
        return "only W2"
    if w3:
        return "only W3"
    return "none"


def render_slice_map(job: FigureJob) -> Path:
    """Categorical map of the (t1, t2) grid colored by which of W2/W3
    fire, with per-category cell counts in the legend."""
    rows = _read_csv(job.input_csv, SCAN_HEADER)
    counts = {c: 0 for c in SCAN_CATEGORIES}
    cells = []
    for r in rows:
        cat = _scan_category(r)
        counts[cat] += 1
        cells.append((float(r["t1"]), float(r["t2"]), cat))

    t1s = sorted({c[0] for c in cells})
    t2s = sorted({c[1] for c in cells})
    pos1 = {v: i for i, v in enumerate(t1s)}
    pos2 = {v: i for i, v in enumerate(t2s)}
    index = {c: i for i, c in enumerate(SCAN_CATEGORIES)}
    grid = np.full((len(t2s), len(t1s)), index["unphysical"], dtype=int)
    for t1, t2, cat in cells:
        grid[pos2[t2], pos1[t1]] = index[cat]

    fig, ax = plt.subplots(figsize=(6.4, 5.4))
    cmap = ListedColormap([SCAN_COLORS[c] for c in SCAN_CATEGORIES])
    ax.imshow(grid, origin="lower", cmap=cmap, vmin=0,
              vmax=len(SCAN_CATEGORIES) - 1, interpolation="nearest",
              aspect="equal",
              extent=(t1s[0], t1s[-1], t2s[0], t2s[-1]))
    handles = [Patch(facecolor=SCAN_COLORS[c], edgecolor="0.3",
                     label=f"{c} ({counts[c]})") for c in SCAN_CATEGORIES]
    ax.legend(handles=handles, loc="center left", bbox_to_anchor=(1.02, 0.5),
              fontsize=8, frameon=False)
    ax.set_xlabel("t1")
    ax.set_ylabel("t2")
    ax.set_title(f"{job.input_csv.name}  (t3 = {rows[0]['t3']})")
    fig.tight_layout()
    fig.savefig(job.output, dpi=150)
    plt.close(fig)

    _write_sidecar(job.output, {
        "kind": "slice_map",
        "input": job.input_csv.name,
        "rows": len(rows),
        "t3": float(rows[0]["t3"]),
        "legend": counts,
    })
    return job.output


RENDERERS = {"werner_sweep": render_werner_sweep, "slice_map": render_slice_map}


def render(job: FigureJob) -> Path:
    return RENDERERS[job.kind](job)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="witness-figures",
        description="render a figure from a pseudoprob CSV export")
    parser.add_argument("--input", required=True,
                        help="CSV file produced by the pseudoprob CLI")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--output", required=True, help="image file to write")
    args = parser.parse_args(argv)
    job = FigureJob(Path(args.input), args.kind, Path(args.output))
    try:
        out = render(job)
    except (SchemaMismatch, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out} and {out.name}.legend.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
