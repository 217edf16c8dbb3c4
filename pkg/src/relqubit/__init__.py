"""Lorentz transformations of spin-1/2 qubits and partition-dependent entanglement."""

from .density import (
    DensityMatrix,
    EntropyReport,
    Factor,
    PartitionSpec,
    exact_linear_entropies,
    from_state,
    linear_entropy,
    partial_trace,
    partition_entropy_sum,
    project_momentum,
    purity,
)
from .errors import InvalidArgumentError, LittleGroupViolationError, NumericalDegradationError
from .lorentz import (
    FourVector,
    LorentzTransform,
    MomentumLabel,
    SpinHalfOperator,
    WignerRotation,
    apply,
    boost_along_axis,
    compose,
    inverse,
    rotation_about_axis,
    standard_boost,
    spin_matrices,
    spin_matrix,
    su2_lift,
    wigner_rotation,
)
from .state import StateVector, boost_state, friis_state, inner_product, make_state

__version__ = "0.1.0"
