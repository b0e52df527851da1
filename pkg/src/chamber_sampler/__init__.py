"""Near-uniform sampling of the labelings a linear-threshold network can produce."""
from .chamber import ChamberCache, ChamberWitness, chamber_faces, cross_face, sign_vector
from .config import Tolerances, tolerances
from .errors import (
    AdjacencyViolation,
    ChamberSamplerError,
    LPIterationLimit,
    LPNumericalError,
    OnBoundaryError,
    OracleBudgetExceeded,
    WalkConfigError,
)
from .estimators import ChamberSampler, ThresholdNetworkSampler
from .geometry import hyperplane_basis, lift, project_to_span, rank_and_span_basis
from .lp import MarginSolution, face_feasible, solve_margin
from .network import (
    NetworkArchitecture,
    NetworkSampler,
    WeightAssignment,
    coverage_experiment,
    forward,
    sample_network_labeling,
)
from .rs import ArrangementSpec, ChamberPoint, RecursiveSampler, rs_sample, rs_sample_reduced
from .walk import WalkConfig, WalkTrace, nrw, nrw_many, stationary_ratio_audit

__version__ = "0.1.0"
