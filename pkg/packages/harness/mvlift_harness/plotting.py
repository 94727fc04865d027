from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from mvlift_contracts import ResultTable  # noqa: E402

SVG_HASH_SALT = "mvlift"


def plot_payload(table: ResultTable, *, title: str, x_label: str) -> dict:
    """Median MPJPE and PA-MPJPE over seeds per cell, in table order."""
    ordered = table.ordered().rows
    cells: list[str] = []
    for row in ordered:
        if row.cell_id not in cells:
            cells.append(row.cell_id)
    series = []
    for label, attribute in (("MPJPE", "mpjpe_mm"), ("PA-MPJPE", "pa_mpjpe_mm")):
        values = [
            float(np.median([getattr(row, attribute) for row in ordered if row.cell_id == cell]))
            for cell in cells
        ]
        series.append({"label": label, "values": values})
    return {
        "title": title,
        "xLabel": x_label,
        "yLabel": "error (mm, median over seeds)",
        "categories": cells,
        "series": series,
    }


def write_plot_svg(payload: dict, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    positions = np.arange(len(payload["categories"]))
    with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "none"}):
        figure, axes = plt.subplots(figsize=(6.4, 4.0))
        for series in payload["series"]:
            axes.plot(positions, series["values"], marker="o", label=series["label"])
        axes.set_xticks(positions, payload["categories"], rotation=30, ha="right")
        axes.set_xlabel(payload["xLabel"])
        axes.set_ylabel(payload["yLabel"])
        axes.set_title(payload["title"])
        axes.grid(True, alpha=0.3)
        axes.legend()
        figure.tight_layout()
        figure.savefig(path, format="svg", metadata={"Date": None})
        plt.close(figure)
    return path
