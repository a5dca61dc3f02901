"""Symbolic dynamics of beta-shifts: expansions, admissible words, the
random-walk cylinder measure, Markov measures and level-set dimensions."""

from .beta_core import (
    BetaSpec,
    DigitTail,
    beta_expand,
    beta_from_expansion,
    beta_from_value,
    expansion_of_one,
    family_10m1,
    family_ones,
    golden_ratio,
    is_simple,
    make_beta,
    quasi_expansion,
)
from .dimension import (
    DimReport,
    MarkovMeasure,
    auxiliary_q,
    dim_level_set,
    dim_tail_bounds,
    dim_upper_bound,
    entropy_gap_counter,
    frequency_simulation,
    local_dim_estimate,
    markov_entropy,
    markov_from_mu,
)
from .errors import (
    BetaShiftError,
    DomainError,
    GuardError,
    InadmissibleWordError,
    InvalidExpansionError,
    PrecisionError,
    UndecidedError,
)
from .measures import (
    CesaroEstimate,
    CylWalkMeasure,
    cesaro_mp,
    cesaro_mp_shifted,
    mp_pseudo_golden,
    mp_zero_interval,
    mu_cylinder,
    quasi_bernoulli_report,
    shifted_mu,
    strong_quasi_invariance_report,
    walk_sample,
)
from .simulation import SimStream
from .words import (
    CylinderInterval,
    Word,
    count_admissible,
    cylinder_interval,
    enumerate_admissible,
    is_admissible,
    is_full,
    m_index,
    n0,
    n1,
    parry_state,
    tau,
    tau_prime,
    zero_run_lengths,
)

__all__ = [
    "BetaShiftError",
    "BetaSpec",
    "CesaroEstimate",
    "CylWalkMeasure",
    "CylinderInterval",
    "DigitTail",
    "DimReport",
    "DomainError",
    "GuardError",
    "InadmissibleWordError",
    "InvalidExpansionError",
    "MarkovMeasure",
    "PrecisionError",
    "SimStream",
    "UndecidedError",
    "Word",
    "auxiliary_q",
    "beta_expand",
    "beta_from_expansion",
    "beta_from_value",
    "cesaro_mp",
    "cesaro_mp_shifted",
    "count_admissible",
    "cylinder_interval",
    "dim_level_set",
    "dim_tail_bounds",
    "dim_upper_bound",
    "entropy_gap_counter",
    "enumerate_admissible",
    "expansion_of_one",
    "family_10m1",
    "family_ones",
    "frequency_simulation",
    "golden_ratio",
    "is_admissible",
    "is_full",
    "is_simple",
    "local_dim_estimate",
    "m_index",
    "make_beta",
    "markov_entropy",
    "markov_from_mu",
    "mp_pseudo_golden",
    "mp_zero_interval",
    "mu_cylinder",
    "n0",
    "n1",
    "parry_state",
    "quasi_bernoulli_report",
    "quasi_expansion",
    "shifted_mu",
    "strong_quasi_invariance_report",
    "tau",
    "tau_prime",
    "walk_sample",
    "zero_run_lengths",
]


__version__ = "0.1.0"
