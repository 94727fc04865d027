from __future__ import annotations

from collections.abc import Sequence
from pathlib import Path
from typing import Literal

from mvlift_contracts import SubjectSplit
from mvlift_core import MultiviewSample

from .paths import data_directory

SplitPart = Literal["train", "validation", "test"]


def load_split(name: str, directory: Path | None = None) -> SubjectSplit:
    path = data_directory("splits", directory) / f"{name}.json"
    return SubjectSplit.model_validate_json(path.read_text())


def apply_split(
    samples: Sequence[MultiviewSample],
    split: SubjectSplit,
    part: SplitPart,
) -> list[MultiviewSample]:
    """Samples whose subject belongs to ``part``.

    An empty training list means every subject not held out for validation or test.
    """
    if part == "train" and not split.train:
        held_out = set(split.validation) | set(split.test)
        return [sample for sample in samples if sample.subject not in held_out]
    subjects = set(getattr(split, part))
    return [sample for sample in samples if sample.subject in subjects]
