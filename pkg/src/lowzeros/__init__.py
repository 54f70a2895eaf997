"""Low-lying zeros of Dirichlet L-functions modulo a prime: numerics and bounds."""

from .analysis import (
    EnsembleStats,
    ExplicitFormulaReport,
    ensemble_stats,
    explicit_formula_check,
    prime_sum_mean,
    prime_sum_mean_square,
    shifted_ensemble_stats,
)
from .bounds import (
    BoundReport,
    cor2_lower_bound,
    crossing_finder,
    hr_bound,
    min_lambda_ratio,
    rough_integral_estimate,
    shifted_cor_bound,
    thm1_bound,
    thm2_bound,
    zhao_bound,
)
from .characters import DirichletCharacter, enumerate_characters, make_character, root_number
from .extremal import ExtremalParams, TransformValue, beurling_b, fourier_r, selberg_r, transform_square_integral
from .lfunc import (
    MissingZeroError,
    NumericalConsistencyError,
    TrackingError,
    ZeroRecord,
    count_zeros,
    find_zeros,
    hardy_z,
    l_value,
    s_arg,
)
from .specialfn import digamma, hurwitz_zeta, log_gamma
from .zerocache import ZeroStore

__version__ = "0.1.0"
