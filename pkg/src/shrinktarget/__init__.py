"""Entropy and Hausdorff-dimension bounds for shrinking target sets.

Library layout:

* :mod:`shrinktarget.rates` - shrinking rates phi, time sets S, targets Z and
  the decay exponents (tau_upper, tau_lower);
* :mod:`shrinktarget.systems` - integer-matrix torus maps, spectra and
  hyperbolicity profiles;
* :mod:`shrinktarget.symbolic` - shifts of finite type, sofic presentations,
  entropy, mixing gaps, cyclic decompositions and index sets;
* :mod:`shrinktarget.bounds` - every closed-form bound and exact-value
  formula, with case dispatch and hypothesis checking;
* :mod:`shrinktarget.oracle` - desk-scale independent verification: covering
  sums, Moran estimates and explicit witness points for one-sided SFTs;
* :mod:`shrinktarget.cli` - batch front end over JSON configs.
"""

__version__ = "0.1.0"

from .rates import (  # noqa: F401
    AllTimes,
    Arithmetic,
    ConstantPoint,
    EventuallyPeriodic,
    Explicit,
    Exponential,
    PiecewiseExponential,
    PowerLaw,
    RateExponents,
    RateFunction,
    ShiftTarget,
    SymbolSequence,
    Tabulated,
    family_tau,
    restrict_rate,
    tau_exponents,
)
from .systems import (  # noqa: F401
    HyperbolicityProfile,
    IntegerMatrixSystem,
    SpectralProfile,
    analyze_matrix,
    crude_profile_from_matrix,
    entropy_toral,
    sharp_profile_from_matrix,
)
from .symbolic import (  # noqa: F401
    IndexSet,
    PeriodDecomposition,
    ShiftOfFiniteType,
    SoficPresentation,
    count_words,
    full_shift,
    golden_mean_shift,
    index_set,
    indices_intersect,
    mixing_gap,
    period_decomposition,
    sft_entropy,
    sofic_entropy,
)
from .bounds import (  # noqa: F401
    BoundInput,
    BoundReport,
    CaseTag,
    bounds_expanding,
    bounds_hyperbolic_set,
    bounds_one_sided_shift,
    bounds_two_sided_shift,
    covering_bounds,
    dim_upper_ambient,
    exact_expanding_torus,
    exact_toral_automorphism,
    lower_entropy_general,
    upper_bounds,
)
from .oracle import (  # noqa: F401
    LimsupCylinderScheme,
    WitnessCertificate,
    WitnessPlan,
    bracket_critical_exponent,
    construct_witness,
    count_separated,
    covering_sum,
    moran_dimension,
    plan_witness,
    verify_witness,
)
