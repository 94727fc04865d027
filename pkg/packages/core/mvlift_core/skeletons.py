"""Fixed joint layouts.

The H36M-style layout used throughout the project is ordered pelvis (root), then the spine
chain up to the head, then legs, then arms, left before right:

    0 pelvis  1 spine  2 thorax  3 neck  4 head
    5 left_hip  6 left_knee  7 left_ankle
    8 right_hip  9 right_knee  10 right_ankle
    11 left_shoulder  12 left_elbow  13 left_wrist
    14 right_shoulder  15 right_elbow  16 right_wrist

Dataset files store joints in exactly this order.
"""

from __future__ import annotations

from mvlift_contracts import Skeleton

H36M_JOINT_NAMES = [
    "pelvis",
    "spine",
    "thorax",
    "neck",
    "head",
    "left_hip",
    "left_knee",
    "left_ankle",
    "right_hip",
    "right_knee",
    "right_ankle",
    "left_shoulder",
    "left_elbow",
    "left_wrist",
    "right_shoulder",
    "right_elbow",
    "right_wrist",
]

H36M_SKELETON = Skeleton(
    name="h36m17",
    joint_names=H36M_JOINT_NAMES,
    parent_index=[None, 0, 1, 2, 3, 0, 5, 6, 0, 8, 9, 2, 11, 12, 2, 14, 15],
    root_index=0,
)

COCO_JOINT_NAMES = [
    "nose",
    "left_eye",
    "right_eye",
    "left_ear",
    "right_ear",
    "left_shoulder",
    "right_shoulder",
    "left_elbow",
    "right_elbow",
    "left_wrist",
    "right_wrist",
    "left_hip",
    "right_hip",
    "left_knee",
    "right_knee",
    "left_ankle",
    "right_ankle",
]

# COCO has no pelvis; the nose is the root of this tree.
COCO_SKELETON = Skeleton(
    name="coco17",
    joint_names=COCO_JOINT_NAMES,
    parent_index=[None, 0, 0, 1, 2, 0, 0, 5, 6, 7, 8, 5, 6, 11, 12, 13, 14],
    root_index=0,
)

SKELETONS = {skeleton.name: skeleton for skeleton in (H36M_SKELETON, COCO_SKELETON)}
