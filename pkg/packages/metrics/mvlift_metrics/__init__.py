from .pose_error import frame_mpjpe, frame_pa_mpjpe, mpjpe, pa_mpjpe
from .report import ALL_ACTIVITIES, REPORT_CSV_FIELDS, evaluate, report_to_csv, report_to_json

__all__ = [
    "ALL_ACTIVITIES",
    "REPORT_CSV_FIELDS",
    "evaluate",
    "frame_mpjpe",
    "frame_pa_mpjpe",
    "mpjpe",
    "pa_mpjpe",
    "report_to_csv",
    "report_to_json",
]
