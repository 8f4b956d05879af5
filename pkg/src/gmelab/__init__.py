"""Entanglement measures for multipartite quantum states.

Core capabilities: the geometric measure of entanglement for pure and mixed
states, negativity and concurrence, relative-entropy-of-entanglement bounds,
bound-entanglement diagnostics, Bell-operator maxima, distillation and
compression protocols, and ground-state entanglement of the anisotropic XY
chain up to the thermodynamic limit.
"""

__version__ = "0.1.0"

from .bipartite import (
    concurrence,
    eof,
    gme_two_qubit,
    isotropic_gme,
    isotropic_state,
    negativity,
    pure_concurrence,
    schmidt,
    thermal_werner,
    werner_gme,
    werner_state,
    wootters_decomposition,
)
from .boundent import (
    BellSettings,
    DepolarizedForm,
    chsh_max,
    dur_gme,
    dur_negativity_one_vs_rest,
    dur_negativity_two_vs_rest,
    dur_state,
    mermin_klyshko,
    mk_max,
    mk_operator_norm,
    nondistill_consistency,
    smolin_gme,
    smolin_ree,
    smolin_state,
    upb_state,
    upb_unextendibility_sweep,
)
from .errors import NonconvergenceError, PreconditionError, QstFormatError
from .geomopt import (
    EntanglementReport,
    HartreeConfig,
    correlation_lambda_sq,
    det_state,
    dicke,
    entanglement_eigenvalue,
    ghz_w_lambda,
    lambda_det,
    lambda_symmetric,
    optimal_witness_value,
    schmidt_lambda,
    symmetric_state,
    two_term_symmetric_lambda,
)
from .mixedhull import (
    Curve1D,
    convex_hull_1d,
    ghz_w_surface,
    ghz_w_wtilde_mixed_gme,
    mixed_symmetric_gme,
)
from .protocols import (
    pure_yield,
    pure_yield_limit,
    schumacher_demo,
    werner_step,
    werner_step_simulated,
    werner_trace,
)
from .qstate import (
    DensityMatrix,
    PartitionSpec,
    ProductState,
    PureState,
    fidelity,
    load_qst,
    partial_trace,
    partial_transpose,
    relative_entropy,
    save_qst,
    tensor_product,
    von_neumann_entropy,
)
from .ree import (
    F_function,
    ReeConfig,
    conjectured_ree,
    numeric_ree,
    plenio_vedral_bound,
    ree_lower_bound,
)
from .xychain import (
    ChainParams,
    dE_dh,
    disorder_line_ground,
    ed_oracle,
    energies,
    entanglement_density_N,
    finite_density_curve,
    hartree_lambda_check,
    overlap,
    scaling_fit,
    thermo_density,
    thermo_density_curve,
)
