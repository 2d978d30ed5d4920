"""Numerical checks of Turan-type derivative lower bounds for polynomials with constrained zeros."""
from .constants import A, A_inf, A_p, BP2, C_pq, K_HALFDISK, K_SEGMENT, beta, c_q, eval_constant, log_beta
from .errors import (
    ClassMismatch,
    DegenerateInput,
    DomainError,
    EmptyRoots,
    ObjectiveFailure,
    ParamOutOfRange,
    QuadratureNoConvergence,
    RootOutOfClass,
    TuranLabError,
)
from .extremal import SearchConfig, SearchResult, empirical_constant_table, minimize_ratio
from .families import FamilySpec, Kind, generate, qn_closed_norms
from .inequalities import IDS, PROVEN_IDS, SweepResult, check, sweep
from .measure import (
    DistributionFunction,
    layer_cake_check,
    lemma9_check,
    sublevel_measure_halfdisk,
    sublevel_measure_segment,
)
from .norms import NormCache, NormSpec, NormValue, Weight, lp_norm, norm, sup_norm
from .polycore import PolyClass, RootPoly, evaluate, make_root_poly
from .reports import InequalityReport, MeasureEstimate

__version__ = "0.1.0"
