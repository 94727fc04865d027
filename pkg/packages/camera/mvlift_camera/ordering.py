from __future__ import annotations

from mvlift_contracts import RigSpec


def azimuth_offset(a_deg: float, b_deg: float) -> float:
    """Smallest absolute angle between two azimuths, in [0, 180]."""
    difference = abs(a_deg - b_deg) % 360.0
    return min(difference, 360.0 - difference)


def order_views_for_ablation(rig: RigSpec, reference_view: str) -> list[str]:
    """Reference first, then the view closest to a 90 degree offset, then rig order."""
    view_ids = rig.view_ids
    reference_azimuth = rig.azimuth_of(reference_view)
    others = [view_id for view_id in view_ids if view_id != reference_view]
    if not others:
        return [reference_view]
    second = min(
        others,
        key=lambda view_id: (
            abs(azimuth_offset(rig.azimuth_of(view_id), reference_azimuth) - 90.0),
            view_ids.index(view_id),
        ),
    )
    return [reference_view, second, *(view_id for view_id in others if view_id != second)]
