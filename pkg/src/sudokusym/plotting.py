"""Figures and delimited tables for an audit report.

All output goes to files; the Agg backend is forced so this works headless.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .audit import AuditReport  # noqa: E402
from .group import SymmetryClass  # noqa: E402

CLASSES = [str(c) for c in SymmetryClass]


def _style(ax):
    ax.spines["top"].set_visible(False)
    ax.spines["right"].set_visible(False)
    ax.tick_params(direction="out", length=3)


def plot_order_spectrum(report: AuditReport, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))
    panels = [
        (axes[0], report.band_order_spectrum, "band permutations"),
        (axes[1], report.order_spectrum, "full group"),
    ]
    for ax, spectrum, title in panels:
        orders = list(spectrum)
        ax.bar(range(len(orders)), [spectrum[k] for k in orders], color="0.35", width=0.7)
        ax.set_xticks(range(len(orders)), [str(k) for k in orders])
        ax.set_yscale("log")
        ax.set_xlabel("element order")
        ax.set_title(title, fontsize=10)
        _style(ax)
    axes[0].set_ylabel("number of elements")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_class_cardinalities(report: AuditReport, path):
    fig, ax = plt.subplots(figsize=(5, 3.2))
    values = [report.class_cardinalities[c] for c in CLASSES]
    bars = ax.bar(CLASSES, values, color="0.35", width=0.7)
    ax.set_yscale("log")
    ax.set_ylabel("elements")
    ax.bar_label(bars, labels=[f"{v:,}" for v in values], fontsize=7, padding=2)
    ax.set_title(f"|S| = {sum(values):,}", fontsize=10)
    _style(ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_product_table(report: AuditReport, path):
    size = [[len(report.product_table[f"{a},{b}"]) for b in CLASSES] for a in CLASSES]
    fig, ax = plt.subplots(figsize=(6.2, 5.6))
    ax.imshow(size, cmap="Greys", vmin=0, vmax=6)
    for i, a in enumerate(CLASSES):
        for j, b in enumerate(CLASSES):
            label = "\n".join(report.product_table[f"{a},{b}"])
            ax.text(j, i, label, ha="center", va="center", fontsize=6,
                    color="white" if size[i][j] >= 4 else "black")
    ax.set_xticks(range(8), CLASSES)
    ax.set_yticks(range(8), CLASSES)
    ax.set_xlabel("right factor (acts first)")
    ax.set_ylabel("left factor")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_tables(report: AuditReport, outdir: Path) -> list[Path]:
    paths = []
    p = outdir / "order_spectrum.csv"
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["scope", "order", "count"])
        for k, v in report.band_order_spectrum.items():
            w.writerow(["band", k, v])
        for k, v in report.order_spectrum.items():
            w.writerow(["group", k, v])
    paths.append(p)
    p = outdir / "class_cardinalities.csv"
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["class", "count"])
        for c in CLASSES:
            w.writerow([c, report.class_cardinalities[c]])
    paths.append(p)
    if not report.product_table:
        return paths
    p = outdir / "product_table.csv"
    with p.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["left", "right", "products"])
        for a in CLASSES:
            for b in CLASSES:
                w.writerow([a, b, " ".join(report.product_table[f"{a},{b}"])])
    paths.append(p)
    return paths


def write_report_files(report: AuditReport, outdir) -> list[Path]:
    """Write CSV tables and PNG figures into ``outdir``; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = write_tables(report, outdir)
    figures = [
        ("order_spectrum.png", plot_order_spectrum),
        ("class_cardinalities.png", plot_class_cardinalities),
    ]
    if report.product_table:
        figures.append(("product_table.png", plot_product_table))
    for name, fn in figures:
        fn(report, outdir / name)
        paths.append(outdir / name)
    return paths
