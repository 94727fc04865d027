"""CSV and JSON renderings of result tables.

``results.csv`` holds only reproducible columns; wall-clock time goes to ``timings.csv``.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from mvlift_contracts import ResultTable

RESULT_FIELDS = [
    "experiment",
    "cellId",
    "objective",
    "views",
    "viewCount",
    "evalView",
    "seed",
    "lambdaCon",
    "mpjpeMm",
    "paMpjpeMm",
    "frameCount",
]
TIMING_FIELDS = ["experiment", "cellId", "seed", "wallClockSeconds"]


def _activities(table: ResultTable) -> list[str]:
    return sorted({activity for row in table.rows for activity in row.per_activity})


def results_csv(table: ResultTable) -> str:
    table = table.ordered()
    activities = _activities(table)
    activity_fields = [
        f"{metric}:{activity}" for activity in activities for metric in ("mpjpeMm", "paMpjpeMm")
    ]
    buffer = io.StringIO()
    writer = csv.DictWriter(
        buffer, fieldnames=[*RESULT_FIELDS, *activity_fields], lineterminator="\n"
    )
    writer.writeheader()
    for row in table.rows:
        record = {
            "experiment": row.experiment,
            "cellId": row.cell_id,
            "objective": row.objective,
            "views": "+".join(row.views),
            "viewCount": row.view_count,
            "evalView": row.eval_view,
            "seed": row.seed,
            "lambdaCon": repr(row.lambda_con),
            "mpjpeMm": repr(row.mpjpe_mm),
            "paMpjpeMm": repr(row.pa_mpjpe_mm),
            "frameCount": row.frame_count,
        }
        for activity in activities:
            metrics = row.per_activity.get(activity)
            record[f"mpjpeMm:{activity}"] = "" if metrics is None else repr(metrics.mpjpe_mm)
            record[f"paMpjpeMm:{activity}"] = "" if metrics is None else repr(metrics.pa_mpjpe_mm)
        writer.writerow(record)
    return buffer.getvalue()


def timings_csv(table: ResultTable) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=TIMING_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in table.ordered().rows:
        writer.writerow(
            {
                "experiment": row.experiment,
                "cellId": row.cell_id,
                "seed": row.seed,
                "wallClockSeconds": f"{row.wall_clock_seconds:.3f}",
            }
        )
    return buffer.getvalue()


def write_table(table: ResultTable, out_dir: Path) -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {
        "results": out_dir / "results.csv",
        "timings": out_dir / "timings.csv",
        "table": out_dir / "results.json",
    }
    paths["results"].write_text(results_csv(table))
    paths["timings"].write_text(timings_csv(table))
    reproducible = table.ordered().model_dump(
        mode="json", by_alias=True, exclude={"rows": {"__all__": {"wall_clock_seconds"}}}
    )
    paths["table"].write_text(json.dumps(reproducible, indent=2) + "\n")
    return paths
