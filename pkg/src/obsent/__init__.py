"""Alpha-observational entropy over POVM coarse-grainings.

Core objects: validated operators (operators), entropy and divergence
functionals (divergences), coarse-grainings with the alpha-observational
entropy and its refinement and composition laws (coarse_graining),
post-measurement analysis (state_analysis), and thermodynamic runs
(thermo). The obsent CLI wraps the randomized verification suites and the
simulation drivers.
"""

from .coarse_graining import (
    CoarseGraining,
    OutcomeDistribution,
    RefinementMap,
    alpha_derivative,
    alpha_oe,
    alpha_oe_divergence_form,
    alpha_oe_gap,
    check_refinement,
    identity_cg,
    measurement_channel,
    merge_outcomes,
    observational_entropy,
    outcomes,
    projective_cg,
    refinement_divergence_bound,
    sequential,
    tensor_cg,
)
from .divergences import (
    INFINITE,
    classical_petz_renyi,
    kl_divergence,
    petz_renyi,
    renyi_entropy,
    renyi_mutual_info,
    renyi_mutual_info_divergence_form,
    umegaki,
    von_neumann,
)
from .operators import (
    DensityOperator,
    EigenSystem,
    HermitianOperator,
    op_power,
    partial_trace,
    propagate,
    spectral,
    tensor,
    validate_operator,
)
from .state_analysis import (
    ConditionalEnsemble,
    coarse_grained_state,
    conditional_ensemble,
    decompose_alpha_oe,
    is_coarse_grained,
    post_measurement_state,
    renyi_post_measurement,
)
from .thermo import (
    DrivingProtocol,
    EnergyWindowing,
    LevelSystem,
    closed_run,
    effective_beta,
    energy_cg,
    free_energy,
    gibbs_state,
    jackson_check,
    open_run,
)

__version__ = "0.1.0"
