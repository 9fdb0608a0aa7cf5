"""Entangling capacity of quantum channels under log-negativity.

The package computes how much entanglement (measured in ebits of
log-negativity) one use of a gate or channel can create between two parties
holding local ancillas: exact closed forms where the operator Schmidt
structure allows them, certified upper/lower bounds otherwise, and seeded
Monte Carlo searches that close the gap numerically.
"""

from .core import (
    BipartiteOperator,
    LayoutError,
    PureState,
    SubsystemLayout,
    hs_inner,
    is_density_matrix,
    is_hermitian,
    is_positive_semidefinite,
    is_unitary,
    operator_norm,
    partial_trace,
    partial_transpose,
    permute_subsystems,
    tensor_product,
    trace_norm,
)
from .schmidt import (
    BasicStatus,
    BasicVerdict,
    OperatorSchmidtDecomposition,
    TwoQubitCanonical,
    check_basic,
    operator_schmidt,
    pure_schmidt,
    two_qubit_basic,
    two_qubit_canonical,
)
from .channels import (
    ChoiState,
    KrausChannel,
    apply_channel,
    choi_state,
    embedded_kraus,
    gate_family,
    haar_unitary,
    lambda1_channel,
    max_entangled_pair,
    random_kraus_channel,
    unitary_channel,
)
from .monotones import (
    EntanglementValue,
    entanglement_delta,
    log_negativity,
    log_ppt_monotone,
    log_robustness,
    negativity,
    pure_log_negativity,
    von_neumann,
)
from .bounds import (
    BoundCertificate,
    CnotFamilyRow,
    PerKrausBound,
    basic_closed_form,
    bound_certificate,
    choi_lower_bound,
    cnot_family_table,
    thm2_upper_bound,
)
from .capacity import (
    BracketInversionError,
    BracketReport,
    CapacityEstimate,
    ProductStateParam,
    SearchConfig,
    assisted_capacity_lower,
    capacity_bracket,
    dual_capacity_bound,
    unassisted_capacity,
)
from .verify import GroupResult, run_invariant_groups

__version__ = "0.1.0"

__all__ = [
    "BipartiteOperator",
    "LayoutError",
    "PureState",
    "SubsystemLayout",
    "hs_inner",
    "is_density_matrix",
    "is_hermitian",
    "is_positive_semidefinite",
    "is_unitary",
    "operator_norm",
    "partial_trace",
    "partial_transpose",
    "permute_subsystems",
    "tensor_product",
    "trace_norm",
    "BasicStatus",
    "BasicVerdict",
    "OperatorSchmidtDecomposition",
    "TwoQubitCanonical",
    "check_basic",
    "operator_schmidt",
    "pure_schmidt",
    "two_qubit_basic",
    "two_qubit_canonical",
    "ChoiState",
    "KrausChannel",
    "apply_channel",
    "choi_state",
    "embedded_kraus",
    "gate_family",
    "haar_unitary",
    "lambda1_channel",
    "max_entangled_pair",
    "random_kraus_channel",
    "unitary_channel",
    "EntanglementValue",
    "entanglement_delta",
    "log_negativity",
    "log_ppt_monotone",
    "log_robustness",
    "negativity",
    "pure_log_negativity",
    "von_neumann",
    "BoundCertificate",
    "CnotFamilyRow",
    "PerKrausBound",
    "basic_closed_form",
    "bound_certificate",
    "choi_lower_bound",
    "cnot_family_table",
    "thm2_upper_bound",
    "BracketInversionError",
    "BracketReport",
    "CapacityEstimate",
    "ProductStateParam",
    "SearchConfig",
    "assisted_capacity_lower",
    "capacity_bracket",
    "dual_capacity_bound",
    "unassisted_capacity",
    "GroupResult",
    "run_invariant_groups",
    "__version__",
]
