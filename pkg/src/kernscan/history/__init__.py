"""Cross-version report tracking and triage."""

from .correlate import AUTO_SAME, DEAD, UNKNOWN, Correlation, correlate
from .diff import CHANGED, UNCHANGED, Hunk, LineMap, diff_files, identity_hunks
from .groups import (
    FAULT,
    FP,
    STATUSES,
    Annotation,
    AnnotationConflict,
    FaultHistory,
    Group,
    WorksheetError,
    apply_worksheet,
    build_histories,
    check_conflicts,
    dump_groups,
    dump_store,
    effective,
    export_worksheet,
    group_id,
    load_groups,
    parse_store,
    parse_worksheet,
    reset_relinked,
    track_groups,
)

__all__ = [
    "AUTO_SAME", "CHANGED", "DEAD", "FAULT", "FP", "STATUSES", "UNCHANGED", "UNKNOWN",
    "Annotation", "AnnotationConflict", "Correlation", "FaultHistory", "Group", "Hunk",
    "LineMap", "WorksheetError", "apply_worksheet", "build_histories", "check_conflicts",
    "correlate", "diff_files", "dump_groups", "dump_store", "effective", "export_worksheet",
    "group_id", "identity_hunks", "load_groups", "parse_store", "parse_worksheet",
    "reset_relinked", "track_groups",
]
