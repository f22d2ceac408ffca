"""Realignment criterion on random induced states.

Reshufflings of bipartite operators, Wishart and induced-state sampling,
quarter-circle spectra, exact permutation-sum moment oracles and Monte Carlo
threshold experiments.
"""

__version__ = "0.1.0"

from .tensor_ops import (
    BipartiteShape,
    DensityMatrix,
    bipartite_index,
    max_entangled,
    max_mixed,
    partial_transpose,
    product_state,
    realign,
    realign_inverse,
)
from .random_states import (
    RngSeed,
    WishartSample,
    induced_state,
    q_matrix,
    sample_gaussian,
    sample_wishart,
    trace_deviation,
)
from .spectra import (
    QUARTER_CIRCLE,
    EmpiricalSpectrum,
    QuarterCircleLaw,
    ks_distance,
    qc_density,
    qc_mean,
    qc_moment,
    schatten_norm,
    singular_values,
    spectrum_moment,
    trace_norm,
)
from .criteria import (
    CriterionReport,
    evaluate,
    gauge_norm,
    is_ppt,
    predicted_regime,
    realignment_value,
    threshold_gamma,
)
from .perm_comb import (
    Permutation,
    SetPartition,
    catalan,
    dominant_term_unbalanced,
    enumerate_noncrossing,
    exact_moment_qq,
    exact_moment_rr,
    exact_second_moment_qq,
    fat,
    signed_sum_check,
)
from .harness import (
    ExperimentConfig,
    run,
    run_criteria_compare,
    run_moments,
    run_oracle_check,
    run_spectrum,
    run_threshold_balanced,
    run_threshold_unbalanced,
)
