"""Dissipative spin-1/2 XYZ dimer with an Ising neighborhood.

Closed-form and numerically integrated Lindblad dynamics of a two-qubit
X state under independent zero-temperature amplitude damping, with
entanglement, coherence, and local quantum Fisher information measures
plus a small CLI (``spinchain``).
"""

from .dynamics import (
    IntegratorConfig,
    NoDissipation,
    SingularScale,
    StepUnstable,
    TimeSeriesRecord,
    analytic_state,
    evolve,
    lindblad_rhs,
    record_from_state,
    steady_state_limit,
    validate_density,
    x_components,
    x_leakage,
)
from .linalg import (
    DimensionMismatch,
    EigenSystem,
    NoConvergence,
    NotHermitian,
    hermitian_eig,
)
from .measures import (
    BasisRotation,
    MeasureSet,
    NotXForm,
    XConcurrence,
    concurrence_generic,
    concurrence_x,
    evaluate_measures,
    l1_coherence,
    lqfi,
    lqfi_bruteforce,
    lqfi_paper_variant,
    qfi,
    rotation_unitary,
    two_qubit_rotation,
)
from .model import (
    DerivedScales,
    ModelParams,
    SpectrumClosedForm,
    derived_scales,
    hamiltonian_block,
    initial_state,
    jump_operators,
    spectrum_closed_form,
)

__version__ = "0.1.0"

__all__ = [
    "BasisRotation",
    "DerivedScales",
    "DimensionMismatch",
    "EigenSystem",
    "IntegratorConfig",
    "MeasureSet",
    "ModelParams",
    "NoConvergence",
    "NoDissipation",
    "NotHermitian",
    "NotXForm",
    "SingularScale",
    "SpectrumClosedForm",
    "StepUnstable",
    "TimeSeriesRecord",
    "XConcurrence",
    "analytic_state",
    "concurrence_generic",
    "concurrence_x",
    "derived_scales",
    "evaluate_measures",
    "evolve",
    "hamiltonian_block",
    "hermitian_eig",
    "initial_state",
    "jump_operators",
    "l1_coherence",
    "lindblad_rhs",
    "lqfi",
    "lqfi_bruteforce",
    "lqfi_paper_variant",
    "qfi",
    "record_from_state",
    "rotation_unitary",
    "spectrum_closed_form",
    "steady_state_limit",
    "two_qubit_rotation",
    "validate_density",
    "x_components",
    "x_leakage",
]
