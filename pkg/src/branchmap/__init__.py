"""Generalized Collatz-style residue branch maps.

Define maps by residue-class rules, iterate them with overflow-safe
arithmetic, detect cycles, scan ranges for stopping-time and peak records,
and evaluate the log-drift heuristic that predicts convergence.
"""

from branchmap.core import (
    AcceleratedBranch,
    BranchRule,
    PRESETS,
    ResidueBranchMap,
    RuleSpec,
    accelerated_decomposition,
    canonicalize,
    preset_3x1,
    preset_7xpm1,
)
from branchmap.dsl import MapDocument, load_map_file, parse_map, render_map
from branchmap.heuristics import (
    DriftReport,
    UniformityReport,
    drift,
    empirical_log_growth,
    residue_uniformity_check,
)
from branchmap.kernel import backend_name, have_compiled
from branchmap.scanner import (
    ScanRecord,
    StoppingProfile,
    VerificationReport,
    scan_records,
    stopping_time_profile,
    verify_range,
)
from branchmap.trajectory import (
    CycleRecord,
    Trajectory,
    TrajectorySummary,
    detect_cycle,
    find_cycles,
    step_sequence,
    summarize,
)

__version__ = "0.1.0"

__all__ = [
    "AcceleratedBranch",
    "BranchRule",
    "CycleRecord",
    "DriftReport",
    "MapDocument",
    "PRESETS",
    "ResidueBranchMap",
    "RuleSpec",
    "ScanRecord",
    "StoppingProfile",
    "Trajectory",
    "TrajectorySummary",
    "UniformityReport",
    "VerificationReport",
    "accelerated_decomposition",
    "backend_name",
    "canonicalize",
    "detect_cycle",
    "drift",
    "empirical_log_growth",
    "find_cycles",
    "have_compiled",
    "load_map_file",
    "parse_map",
    "preset_3x1",
    "preset_7xpm1",
    "render_map",
    "residue_uniformity_check",
    "scan_records",
    "step_sequence",
    "stopping_time_profile",
    "summarize",
    "verify_range",
]
