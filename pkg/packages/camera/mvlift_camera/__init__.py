from .ordering import azimuth_offset, order_views_for_ablation
from .pinhole import (
    BehindCameraError,
    camera_to_world,
    look_at_camera,
    project_points,
    project_sequence,
    project_to_normalized,
    projection_jacobian,
    projection_jacobians,
    unproject_normalized,
    world_to_camera,
)

__all__ = [
    "BehindCameraError",
    "azimuth_offset",
    "camera_to_world",
    "look_at_camera",
    "order_views_for_ablation",
    "project_points",
    "project_sequence",
    "project_to_normalized",
    "projection_jacobian",
    "projection_jacobians",
    "unproject_normalized",
    "world_to_camera",
]
