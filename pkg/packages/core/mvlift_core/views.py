from __future__ import annotations

from itertools import combinations

from .errors import InapplicableConsistencyError
from .poses import MultiviewSample


def canonical_pairs(view_count: int) -> list[tuple[int, int]]:
    """All unordered index pairs, lexicographic, lower index first."""
    if view_count < 2:
        raise InapplicableConsistencyError(
            f"consistency needs at least two views, got {view_count}"
        )
    return list(combinations(range(view_count), 2))


def enumerate_view_pairs(sample: MultiviewSample) -> list[tuple[str, str]]:
    view_ids = sample.view_ids
    return [(view_ids[a], view_ids[b]) for a, b in canonical_pairs(len(view_ids))]


def select_views(sample: MultiviewSample, view_ids: list[str]) -> MultiviewSample:
    """Restrict a sample to ``view_ids`` in the given order."""
    return sample.with_views(tuple(sample.view(view_id) for view_id in view_ids))
