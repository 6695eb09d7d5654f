"""Exact first passage percolation on finite lattice windows."""
from .errors import FPPError, PreconditionError
from .values import INF, Interval, ValueSet, format_rational, to_rational
from .lattice import (
    Configuration,
    CylinderConstraint,
    DefaultRule,
    Edge,
    EpsilonSchedule,
    Window,
    constant_configuration,
    floor_lattice_point,
    l1_norm,
    random_configuration,
    sample_configuration,
    window_edges,
)
from .engine import (
    Certificate,
    GeodesicDag,
    LatticeSet,
    PathRecord,
    VerificationReport,
    locality_radius,
    path_time,
    reach_set,
    shortest_path_dag,
    t_distance,
    verify_forced_segments,
)

__version__ = "0.1.0"
