"""Transfer operators on finite dynamical systems: spectral potential,
t-entropy and their Legendre duality."""
from .core import (
    FiniteSystem,
    Measure,
    PartitionOfUnity,
    birkhoff_sum,
    delta_map,
    empirical_measure,
    invariant_measures,
    is_invariant,
    point_partition,
    pushforward,
    random_partition,
)
from .duality import DualityReport, duality_check, lambda_from_tau
from .est import EstConfig, EstReport, build_neighborhood, est_rate_table, indicator_set
from .spectral import SpectralResult, gibbs_gradient, lam, spectral_potential
from .tentropy import (
    InnerSupResult,
    TauResult,
    divergence_direction,
    inner_sup,
    phi_eps_witness,
    tau_direct,
    tau_legendre,
)
from .transfer import TransferOperator, apply, iterate_apply, make_operator, twist

__version__ = "0.1.0"
