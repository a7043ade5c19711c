"""charmax: computational tools for maximal character sums and pretentious distances.

Dirichlet characters with exact root-of-unity values, maximal partial sums
and their Gauss/Polya machinery, the pretentious metric with twisted
minima, truncated L-values and Mertens constants in progressions, extremal
character construction, Halasz-type mean value checks, and a deterministic
sweep/battery CLI.
"""

__version__ = "0.1.0"

from .charsum import (
    ArcApprox,
    MaxSumResult,
    arc_identity_check,
    dirichlet_arc,
    gauss_sum,
    max_char_sum,
    polya_defect_max,
    polya_expansion,
    twisted_log_sum,
)
from .dirichlet import (
    DirichletCharacter,
    DirichletGroup,
    build_group,
    count_induced_solutions,
    count_primitive_with_order,
    enumerate_characters,
    induce,
    lift_character,
    multiply,
    primitive_inducer,
)
from .errors import (
    BaselineError,
    CapacityError,
    ConfigError,
    DomainError,
    RegimeWarning,
)
from .extremal import (
    ExtremalProfile,
    IntegralResult,
    PrescribedTargets,
    RootAverage,
    RootChoice,
    extremal_profile,
    oscillation,
    oscillation_log_integral,
    prescribed_count_shape,
    root_average,
    root_maximizer,
    search_prescribed,
    weighted_prime_sum,
)
from .halasz import (
    BandEnergy,
    band_energy,
    band_energy_integral,
    euler_max_check,
    euler_product,
    friable_log_mean,
    halasz_bound_check,
    unimodular_corpus,
)
from .lvalues import (
    MertensProgression,
    euler_l1,
    max_sum_lvalue_check,
    mertens_constant,
    mertens_constant_oracle,
    mertens_constants_all,
    mertens_kernel,
    mertens_progression,
    partial_l1,
)
from .pretentious import (
    CMFunction,
    DistanceResult,
    TwistBoundParams,
    TwistMinimum,
    UpperBoundMain,
    distance_sq,
    distance_sq_lower_bound,
    min_twisted_distance,
    saving_constant,
    twist_min_lower_bound,
)
from .reports import BoundReport, HalaszReport
from .sweep import SweepConfig, SweepRecord, export_records, load_records, run_sweep
from .batteries import BatteryResult, run_battery
