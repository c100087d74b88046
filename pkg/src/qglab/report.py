"""Deterministic result emission: delimited tables, JSON lines, and figures.

Identical inputs must produce byte-identical CSV/JSON output, so all floats
are formatted to 15 significant digits and row order follows the caller.
Figures are rendered to PNG next to the tables with fixed metadata.
"""

from __future__ import annotations

import dataclasses
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_PNG_METADATA = {"Software": "qglab"}


def fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.15g}"
    if value is None:
        return ""
    return str(value)


def round15(value):
    if isinstance(value, float):
        return float(f"{value:.15g}")
    return value


def rows_from(records: Iterable) -> list[dict]:
    """Dataclass instances (or dicts) to plain dict rows."""
    out = []
    for r in records:
        if dataclasses.is_dataclass(r):
            d = dataclasses.asdict(r)
        else:
            d = dict(r)
        out.append(d)
    return out


def write_csv(path: Path, rows: Sequence[Mapping]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if not rows:
        path.write_text("")
        return
    header: list[str] = []
    for row in rows:  # union of keys, first-seen order
        for key in row:
            if key not in header:
                header.append(key)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(row.get(col)) for col in header))
    path.write_text("\n".join(lines) + "\n")


def write_jsonl(path: Path, rows: Sequence[Mapping]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for row in rows:
        clean = {k: round15(v) for k, v in row.items()}
        lines.append(json.dumps(clean, sort_keys=True, allow_nan=True))
    path.write_text("\n".join(lines) + ("\n" if lines else ""))


def write_rows(path_stem: Path, rows: Sequence[Mapping], output_format: str) -> Path:
    if output_format == "json":
        path = path_stem.with_suffix(".jsonl")
        write_jsonl(path, rows)
    else:
        path = path_stem.with_suffix(".csv")
        write_csv(path, rows)
    return path


def bound_rows(reports: Sequence, output_format: str) -> list[dict]:
    """Rows for a batch of bound reports: full records for CSV, the compact
    {id, params, value, bound, verdict, margin} schema for JSON lines."""
    if output_format != "json":
        return rows_from(reports)
    out = []
    for r in reports:
        params = (
            f"graph={r.graph};L={fmt(r.L)};D={fmt(r.D)};beta={r.beta};k={r.k}"
        )
        if r.note:
            params += f";note={r.note}"
        out.append(
            {
                "id": r.id,
                "params": params,
                "value": r.mu,
                "bound": r.bound,
                "verdict": r.verdict,
                "margin": r.margin,
            }
        )
    return out


def save_line_figure(
    path: Path,
    x: Sequence[float],
    series: Mapping[str, Sequence[float]],
    xlabel: str,
    ylabel: str,
    title: str,
    hline: float | None = None,
    hline_label: str | None = None,
) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for label, ys in series.items():
        ax.plot(x, ys, marker="o", markersize=3, linewidth=1.2, label=label)
    if hline is not None:
        ax.axhline(hline, color="black", linestyle="--", linewidth=1.0, label=hline_label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_PNG_METADATA)
    plt.close(fig)
    return path


def save_margin_histogram(path: Path, margins: Sequence[float], title: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.hist(list(margins), bins=40, color="#4878d0", edgecolor="black", linewidth=0.4)
    ax.axvline(0.0, color="red", linestyle="--", linewidth=1.0)
    ax.set_xlabel("margin")
    ax.set_ylabel("count")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=130, metadata=_PNG_METADATA)
    plt.close(fig)
    return path
