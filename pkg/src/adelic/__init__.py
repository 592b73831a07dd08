"""Analysis on the finite adeles and the full adele ring.

Exact prime-power combinatorics (phi, successor/predecessor), truncated
adele points with Haar-measure sampling, exact radial Fourier transforms,
certified heat kernels, jump-process simulation and parabolic solvers.
"""
from .errors import AdelicError, IndeterminateCancellation, ToleranceError
from .primepow import (
    PrimePower,
    bracket_log,
    double_bracket,
    is_prime,
    is_prime_power,
    log_phi,
    next_pp,
    phi,
    pp_range,
    prev_pp,
)
from .adele import (
    AdelePoint,
    Region,
    add,
    ball,
    ball_exponents,
    distance,
    format_point,
    haar_volume,
    negate,
    norm,
    parse_point,
    sample_uniform,
    sphere,
    sub,
)
from .radial import RadialStep, ft_ball_eval, integrate_radial
from .heatkernel import (
    KernelParams,
    SphereMasses,
    ball_mass,
    ln_z_finite,
    moment_integral,
    normalization,
    sphere_masses,
    tail_mass_bound,
    upper_tail_mass,
    z_adelic,
    z_finite,
    z_real,
)
from .markov import (
    PathSample,
    RadiusDistribution,
    Truncation,
    radius_distribution,
    radius_law_chisquare,
    sample_path,
    transition_prob_ball,
)
from .cauchy import (
    EvaluableRadial,
    ForcingGrid,
    InnerPiece,
    RealGridFunction,
    SymbolSpec,
    apply_adelic_operator,
    apply_operator,
    real_fractional_operator,
    solve_adelic,
    solve_homogeneous,
    solve_nonhomogeneous,
)

__version__ = "0.1.0"

__all__ = [
    "AdelicError",
    "IndeterminateCancellation",
    "ToleranceError",
    "PrimePower",
    "bracket_log",
    "double_bracket",
    "is_prime",
    "is_prime_power",
    "log_phi",
    "next_pp",
    "phi",
    "pp_range",
    "prev_pp",
    "AdelePoint",
    "Region",
    "add",
    "ball",
    "ball_exponents",
    "distance",
    "format_point",
    "haar_volume",
    "negate",
    "norm",
    "parse_point",
    "sample_uniform",
    "sphere",
    "sub",
    "RadialStep",
    "ft_ball_eval",
    "integrate_radial",
    "KernelParams",
    "SphereMasses",
    "ball_mass",
    "ln_z_finite",
    "moment_integral",
    "normalization",
    "sphere_masses",
    "tail_mass_bound",
    "upper_tail_mass",
    "z_adelic",
    "z_finite",
    "z_real",
    "PathSample",
    "RadiusDistribution",
    "Truncation",
    "radius_distribution",
    "radius_law_chisquare",
    "sample_path",
    "transition_prob_ball",
    "EvaluableRadial",
    "ForcingGrid",
    "InnerPiece",
    "RealGridFunction",
    "SymbolSpec",
    "apply_adelic_operator",
    "apply_operator",
    "real_fractional_operator",
    "solve_adelic",
    "solve_homogeneous",
    "solve_nonhomogeneous",
    "__version__",
]
