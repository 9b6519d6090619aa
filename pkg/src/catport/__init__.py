"""Teleportation simulator for multi-particle d-level cat-like states."""

from .analysis import CostRow, cost_of, cost_table
from .bases import (
    BasisFamily,
    BasisReport,
    BellLabel,
    ComplementLabel,
    GhzLabel,
    JointLabel,
    MeasurementBasis,
    PiLabel,
    barred_bell_basis_state,
    bell_basis_state,
    build_basis,
    ghz_basis_state,
    pi_basis_state,
    verify_orthonormal_complete,
)
from .core import (
    DEFAULT_MAX_DIM,
    CatState,
    DensityMatrix,
    PureState,
    RangeError,
    RegisterShape,
    ShapeMismatchError,
    SizeCapError,
    basis_ket,
    cat_to_pure_state,
    digits_to_index,
    index_to_digits,
    inner,
    partial_trace_keep,
    random_cat_state,
    tensor,
    unit_phase,
)
from .protocols import (
    EquivalenceReport,
    MonomialOperator,
    OutcomeRecord,
    ProtocolKind,
    ProtocolSpec,
    apply_correction,
    barred_equivalence_check,
    clock_operator,
    compose_joint_state,
    correction_for,
    enumerate_outcomes,
    measurement_family,
    monomial_tensor,
    run_protocol,
    shift_operator,
)

__version__ = "0.1.0"

__all__ = [
    "BasisFamily",
    "BasisReport",
    "BellLabel",
    "CatState",
    "ComplementLabel",
    "CostRow",
    "DEFAULT_MAX_DIM",
    "DensityMatrix",
    "EquivalenceReport",
    "GhzLabel",
    "JointLabel",
    "MeasurementBasis",
    "MonomialOperator",
    "OutcomeRecord",
    "PiLabel",
    "ProtocolKind",
    "ProtocolSpec",
    "PureState",
    "RangeError",
    "RegisterShape",
    "ShapeMismatchError",
    "SizeCapError",
    "apply_correction",
    "barred_bell_basis_state",
    "barred_equivalence_check",
    "basis_ket",
    "bell_basis_state",
    "build_basis",
    "cat_to_pure_state",
    "clock_operator",
    "compose_joint_state",
    "correction_for",
    "cost_of",
    "cost_table",
    "digits_to_index",
    "enumerate_outcomes",
    "ghz_basis_state",
    "index_to_digits",
    "inner",
    "measurement_family",
    "monomial_tensor",
    "partial_trace_keep",
    "pi_basis_state",
    "random_cat_state",
    "run_protocol",
    "shift_operator",
    "tensor",
    "unit_phase",
    "verify_orthonormal_complete",
]
