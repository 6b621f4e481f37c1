"""Spectral gaps of delta-coupled lattice graphs and the number theory behind them."""

from .contfrac import (
    ContinuedFraction,
    Convergent,
    ErrorBounds,
    cf_compare,
    convergent_error_bounds,
    convergent_offset,
    convergents,
    expand,
    format_cf,
    intermediate_error_bound,
    lower_error_bound,
    parse_cf,
    value,
)
from .designer import (
    DesignResult,
    DesignSpec,
    Verification,
    alpha_window,
    design_by_target_energies,
    predict_gaps,
    verify_design,
)
from .diophantine import (
    Branch,
    LevelClass,
    UpsilonEstimate,
    check_level_class,
    classify_level,
    is_badly_approximable,
    level,
    markov,
    upsilon_lower_quadratic,
    upsilon_upper,
)
from .errors import *  # noqa: F401,F403
from .exactreal import (
    ExactReal,
    Ordering,
    QuadraticSurd,
    ceil,
    compare,
    exact,
    floor,
    format_exact,
    frac,
    invert,
    parse_exact,
    scale_add,
    surd,
    to_float,
)
from .spectrum import (
    F,
    G,
    Finiteness,
    FinitenessCertificate,
    Gap,
    GapReport,
    Lattice,
    Which,
    discontinuities,
    finiteness_certificate,
    gap_condition,
    is_in_spectrum,
    scan_gaps,
    solve_band_edge,
    theta_extrema,
    trace_sum,
)

__version__ = "0.1.0"
