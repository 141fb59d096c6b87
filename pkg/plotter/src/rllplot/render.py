"""Render figures from rllsim CSV files.

A plot spec is one JSON object:

    {
      "kind": "ber" | "de" | "exit",
      "curves": [{"csv": "file.csv", "label": "Code 2 flipped"}, ...],
      "title": "...",                # optional
      "xlim": [lo, hi],              # optional
      "ylim": [lo, hi],              # optional
      "output": "figure"             # writes figure.svg and figure.png
    }

Column conventions follow the rllsim CSV formats: BER curves read
(snr_db, ber), DE curves read (snr_db, iteration, pe) and plot the final
P_e per SNR, EXIT curves read (iteration, i_in, i_out) and draw the
decoder trajectory as a staircase plus the transfer points mirrored across
the diagonal.  Rendering never mutates inputs, and timestamps are disabled
so equal inputs produce equal bytes.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "rllplot"

import matplotlib.pyplot as plt
import numpy as np

KINDS = ("ber", "de", "exit")

REQUIRED_COLUMNS = {
    "ber": ("snr_db", "ber"),
    "de": ("snr_db", "iteration", "pe"),
    "exit": ("iteration", "i_in", "i_out"),
}


class SpecError(ValueError):
    """Bad plot spec or unusable input CSV."""


@dataclass
class Curve:
    csv: str
    label: str


@dataclass
class PlotSpec:
    kind: str
    curves: list
    output: str
    title: str = ""
    xlim: tuple | None = None
    ylim: tuple | None = None

    @classmethod
    def from_file(cls, path):
        try:
            with open(path) as f:
                raw = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"{path}: {exc}") from exc
        kind = raw.get("kind")
        if kind not in KINDS:
            raise SpecError(f"spec.kind: expected one of {KINDS}, got {kind!r}")
        curves = raw.get("curves") or []
        if not curves:
            raise SpecError("spec.curves: at least one curve required")
        base = Path(path).parent
        parsed = [
            Curve(csv=str(base / c["csv"]) if not Path(c["csv"]).is_absolute() else c["csv"],
                  label=c.get("label", Path(c["csv"]).stem))
            for c in curves
        ]
        if "output" not in raw:
            raise SpecError("spec.output: missing")
        out = raw["output"]
        out = str(base / out) if not Path(out).is_absolute() else out
        return cls(
            kind=kind,
            curves=parsed,
            output=out,
            title=raw.get("title", ""),
            xlim=tuple(raw["xlim"]) if "xlim" in raw else None,
            ylim=tuple(raw["ylim"]) if "ylim" in raw else None,
        )


def read_columns(path, columns):
    """Numeric columns from a CSV with '#' comment headers."""
    try:
        with open(path) as f:
            rows = [r for r in csv.reader(l for l in f if not l.startswith("#")) if r]
    except OSError as exc:
        raise SpecError(f"{path}: {exc}") from exc
    if not rows:
        raise SpecError(f"{path}: empty CSV")
    header = rows[0]
    for col in columns:
        if col not in header:
            raise SpecError(f"{path}: missing column {col!r} (has {header})")
    idx = [header.index(c) for c in columns]
    data = []
    for r in rows[1:]:
        try:
            data.append([float(r[i]) for i in idx])
        except ValueError:
            continue  # non-numeric rows (e.g. the noiseless label) are skipped
    if not data:
        raise SpecError(f"{path}: no numeric data rows")
    out = np.array(data)
    return {c: out[:, j] for j, c in enumerate(columns)}


def _staircase(i_in, i_out):
    # vertical rise to each iteration's output MI, then across to the next
    # iteration's input MI
    sx, sy = [], []
    prev_y = 0.0
    for x, y in zip(i_in, i_out):
        sx += [x, x]
        sy += [prev_y, y]
        prev_y = y
    return sx, sy


def render(spec: PlotSpec):
    """Draw the figure and write <output>.svg and <output>.png."""
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if spec.kind == "ber":
        for curve in spec.curves:
            data = read_columns(curve.csv, REQUIRED_COLUMNS["ber"])
            order = np.argsort(data["snr_db"])
            ax.semilogy(data["snr_db"][order], np.maximum(data["ber"][order], 1e-12),
                        marker="o", label=curve.label)
        ax.set_xlabel("Eb/N0 (dB)")
        ax.set_ylabel("BER")
        ax.grid(True, which="both", alpha=0.3)
    elif spec.kind == "de":
        for curve in spec.curves:
            data = read_columns(curve.csv, REQUIRED_COLUMNS["de"])
            snrs = np.unique(data["snr_db"])
            finals = [
                data["pe"][data["snr_db"] == s][-1] for s in snrs
            ]
            ax.semilogy(snrs, np.maximum(finals, 1e-12), marker="s", label=curve.label)
        ax.set_xlabel("Eb/N0 (dB)")
        ax.set_ylabel("message error probability")
        ax.grid(True, which="both", alpha=0.3)
    else:  # exit
        for curve in spec.curves:
            data = read_columns(curve.csv, REQUIRED_COLUMNS["exit"])
            order = np.argsort(data["iteration"])
            i_in = data["i_in"][order]
            i_out = data["i_out"][order]
            # detector-to-decoder transfer points, and the decoder transfer
            # mirrored across the diagonal per EXIT convention
            ax.plot(i_in, i_out, marker="o", label=f"{curve.label} (T_Z)")
            ax.plot(i_out, i_in, marker="^", linestyle="--",
                    label=f"{curve.label} (T_D, axes swapped)")
            sx, sy = _staircase(i_in, i_out)
            ax.plot(sx, sy, color="gray", linewidth=0.8, alpha=0.7)
        ax.plot([0, 1], [0, 1], color="black", linewidth=0.5, alpha=0.4)
        ax.set_xlabel("mutual information in")
        ax.set_ylabel("mutual information out")
        ax.set_xlim(0, 1.02)
        ax.set_ylim(0, 1.02)
        ax.grid(True, alpha=0.3)
    if spec.title:
        ax.set_title(spec.title)
    if spec.xlim:
        ax.set_xlim(*spec.xlim)
    if spec.ylim:
        ax.set_ylim(*spec.ylim)
    ax.legend(fontsize=8)
    fig.tight_layout()
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    svg = out.with_suffix(".svg")
    png = out.with_suffix(".png")
    fig.savefig(svg, metadata={"Date": None})
    fig.savefig(png, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return svg, png
