"""Extended formulations, exact optimization and SCI separation for orbitopes."""

from .core import (
    KINDS,
    PACKING,
    PARTITIONING,
    Cell,
    InvalidInput,
    OrbiMatrix,
    OrbikitError,
    Params,
    ParamsError,
    SizeCapExceeded,
    index_set,
    is_vertex,
)
from .digraph import Arc, Digraph, Flow, bar, build, column_segment, cut_sets, path_node_sets
from .formulations import (
    CompactPoint,
    ExtendedPoint,
    compact_system,
    extended_system,
    from_compact,
    to_compact,
)
from .lifting import lift, lift_vertex, project
from .linsys import LinearSystem, Stats, stats
from .lp_oracle import enumerate_vertices, simplex_max
from .lpfiles import emit, read_lp
from .optimizer import OptResult, arc_costs, longest_path, optimize, optimize_packing, optimize_partitioning
from .sci import SCInequality, ShiftedColumn, enumerate_scis, sci_system, separate

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "PACKING",
    "PARTITIONING",
    "Arc",
    "Cell",
    "CompactPoint",
    "Digraph",
    "ExtendedPoint",
    "Flow",
    "InvalidInput",
    "LinearSystem",
    "OptResult",
    "OrbiMatrix",
    "OrbikitError",
    "Params",
    "ParamsError",
    "SCInequality",
    "ShiftedColumn",
    "SizeCapExceeded",
    "Stats",
    "arc_costs",
    "bar",
    "build",
    "column_segment",
    "compact_system",
    "cut_sets",
    "emit",
    "enumerate_scis",
    "enumerate_vertices",
    "extended_system",
    "from_compact",
    "index_set",
    "is_vertex",
    "lift",
    "lift_vertex",
    "longest_path",
    "optimize",
    "optimize_packing",
    "optimize_partitioning",
    "path_node_sets",
    "project",
    "read_lp",
    "sci_system",
    "separate",
    "simplex_max",
    "stats",
    "to_compact",
]
