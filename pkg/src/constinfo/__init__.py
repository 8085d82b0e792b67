"""Information rates, estimation error, and error probabilities of scalar
constellations on the Gaussian channel, with their high-snr tail limits."""

__version__ = "0.1.0"

from .constellation import (
    Constellation,
    InputDistribution,
    a_constant,
    avg_energy,
    awgn_capacity,
    b_constant,
    db_to_snr,
    entropy,
    g_function,
    log_q_function,
    med,
    med_pairs,
    mpam,
    normalize_energy,
    q_function,
    snr_to_db,
    uniform_distribution,
)
from .labeling import (
    BitProbabilities,
    Labeling,
    SubconstellationIndex,
    agc,
    bit_marginal,
    bit_of,
    brgc,
    c_constant,
    c_constant_from_partition,
    c_upper_bound,
    class_count_bound,
    class_representatives,
    conditional_distribution,
    d_constant,
    enumerate_classes,
    hamming,
    induced_distribution,
    is_gray,
    nbc,
    r_upper_bound,
    r_value,
    sample_classes,
    subconstellation,
    subconstellation_a,
)
from .exact import (
    DEFAULT_NODES,
    DecisionRegions,
    QuadratureSpec,
    adjacent_thresholds,
    bep_exact,
    bicm_gmi,
    bicm_mmse,
    bicm_mmse_exact,
    conditional_entropy_exact,
    conditional_mean,
    decision_regions,
    gmi_exact,
    gmi_gap_exact,
    k_mi,
    k_mmse,
    llr,
    log_bep_exact,
    log_bicm_mmse_exact,
    log_conditional_entropy_exact,
    log_gmi_gap_exact,
    log_mmse_exact,
    log_sep_exact,
    mi_exact,
    mmse_exact,
    sep_exact,
)
from .asymptotic import (
    METRICS,
    AsymptoticReport,
    asym_bep,
    asym_bicm_gmi_gap,
    asym_bicm_mmse,
    asym_conditional_entropy,
    asym_mmse,
    asym_sep,
    limit_constant,
    mpam_gap_constant,
    mpam_mmse_constant,
    mpam_sep_constant,
    verify_limit,
)
from .montecarlo import (
    EstimateWithError,
    SimConfig,
    simulate_bep,
    simulate_mi,
    simulate_mmse,
    simulate_sep,
)
