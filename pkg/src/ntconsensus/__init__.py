"""Nonzero consensus on signed matrix-weighted networks.

Tools to check network decompositions, synthesize external-signal coupling
designs with provable spectral margins, and simulate the resulting fixed and
switching closed loops.
"""

from .errors import ConsensusError, FileFormatError
from .fileio import (
    load_graph,
    load_schedule,
    read_trajectory_csv,
    save_graph,
    write_trajectory_csv,
)
from .graph import (
    AssumptionReport,
    Decomposition,
    Definiteness,
    MatrixWeight,
    SignedGraph,
    StructuralSets,
    classify_weight,
    in_degree_dominated,
    pn_reachable,
    structural_sets,
    suggest_decomposition,
    verify_assumption,
)
from .networks import (
    BUNDLED_V1,
    SWITCHING_DELTAS,
    SWITCHING_DWELL,
    SWITCHING_PATTERN,
    bundled_decomposition,
    bundled_graph,
    bundled_path,
)
from .protocol import (
    ContractionReport,
    DesignReport,
    ProtocolDesign,
    SwitchingDesign,
    contraction_factor,
    coupling_bound,
    design_fixed,
    design_laplacians,
    design_switching,
    necessary_condition_check,
    verify_design,
)
from .simulate import (
    ConvergenceReport,
    SwitchingSchedule,
    Trajectory,
    convergence_report,
    integrate_fixed,
    integrate_switching,
)
from .spectral import (
    Basis,
    Laplacian,
    LaplacianKind,
    SpectralReport,
    augmented_laplacian,
    consensus_space,
    eigenvalues_sorted,
    expand_system,
    grounded_laplacian,
    intersect_null_spaces,
    quadratic_form_gap,
    log_norm2,
    matrix_exp,
    min_real_part,
    null_space,
    principal_angle,
    signed_laplacian,
)

__version__ = "0.1.0"
