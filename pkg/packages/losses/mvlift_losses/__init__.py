from .combined import combined_2d_loss, combined_3d_loss
from .consistency import (
    Alignments,
    PairAlignment,
    consistency_loss,
    consistency_loss_sum,
    consistency_pair_loss,
    fit_pair_alignment,
    fitted_alignments,
)
from .reprojection import reprojection_loss
from .smpl import (
    SmplParams,
    smpl_multiview_consistency,
    smpl_pose_consistency,
    smpl_shape_consistency,
)
from .supervised import (
    fitted_scales,
    optimal_scales,
    positional_loss,
    scale_loss,
    velocity_loss,
)
from .values import LossValue

__all__ = [
    "Alignments",
    "LossValue",
    "PairAlignment",
    "SmplParams",
    "combined_2d_loss",
    "combined_3d_loss",
    "consistency_loss",
    "consistency_loss_sum",
    "consistency_pair_loss",
    "fit_pair_alignment",
    "fitted_alignments",
    "fitted_scales",
    "optimal_scales",
    "positional_loss",
    "reprojection_loss",
    "scale_loss",
    "smpl_multiview_consistency",
    "smpl_pose_consistency",
    "smpl_shape_consistency",
    "velocity_loss",
]
