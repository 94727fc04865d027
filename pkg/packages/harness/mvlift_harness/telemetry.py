from __future__ import annotations

from pathlib import Path

from prometheus_client import CollectorRegistry, Counter, Histogram, write_to_textfile


class RunMetrics:
    """Counters for one CLI run, kept in a private registry and written as a textfile."""

    def __init__(self) -> None:
        self.registry = CollectorRegistry()
        self.cells = Counter(
            "mvlift_experiment_cells_total",
            "Experiment cells by final status",
            ["experiment", "status"],
            registry=self.registry,
        )
        self.cell_duration = Histogram(
            "mvlift_experiment_cell_duration_seconds",
            "Wall-clock duration of one trained and evaluated cell",
            buckets=(0.5, 1, 2, 5, 10, 30, 60, 120, 300, 600),
            registry=self.registry,
        )
        self.epochs = Counter(
            "mvlift_training_epochs_total",
            "Completed training epochs",
            registry=self.registry,
        )

    def write(self, path: Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        write_to_textfile(str(path), self.registry)
        return path
