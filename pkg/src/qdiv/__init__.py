"""Optimized quantum f-divergences: operators, channels, divergences,
entropic measures, and a seeded verification harness.

The numeric ascent runs on a compiled extension when it was built, with a
pure-python twin selected automatically otherwise (or when QDIV_PURE_PYTHON
is set). Everything else is backend-independent.
"""

from ._backend import backend_name, compiled_available
from .channels import (
    Isometry,
    QuantumChannel,
    apply,
    depolarizing_to_max_mixed,
    embedding_isometry,
    extended_petz_isometry,
    extended_petz_recovery,
    identity_channel,
    isometry_channel,
    petz_recovery,
    pinching,
    random_channel,
    random_density,
    random_psd,
    random_pure,
    random_unitary,
    replacer_channel,
    stinespring_isometry,
)
from .divergences import (
    DivergenceResult,
    OptimizerOptions,
    classical_f_divergence,
    cq_f_divergence,
    divergence_value,
    holder_optimal_tau,
    optimized_alpha_divergence_at,
    optimized_f_at,
    optimized_f_at_tensor,
    optimized_f_divergence,
    petz_dpi_direction,
    petz_f_divergence,
    petz_renyi,
    quantum_relative_entropy,
    rel_modular_eval,
    sandwiched_quasi_entropy,
    sandwiched_renyi,
    sandwiched_vs_petz_gap,
)
from .extreal import NEG_INF, POS_INF, ExtendedReal
from .fkernel import (
    FDescriptor,
    convex_pow,
    custom_f,
    dual_k,
    inv_pow,
    make_builtin,
    neg_log,
    neg_pow,
    parse_f_spec,
    renyi_alpha_of,
    renyi_f,
)
from .harness import (
    ALL_CHECKS,
    CheckConfig,
    CheckReport,
    TrialRecord,
    derive_seed,
    run_all,
    write_reports,
)
from .linops import (
    DomainError,
    HermitianOperator,
    PureStateVector,
    Spectrum,
    SystemLayout,
    as_operator,
    canonical_purification,
    eig_hermitian,
    identity_operator,
    kernel_projector,
    kron,
    kron_operator,
    matrix_function,
    max_entangled_vector,
    partial_trace,
    psd_power,
    psd_sqrt,
    schatten_norm,
    support_contained,
    support_projector,
    transpose_in_basis,
)
from .measures import (
    FreeStateSet,
    MeasureOptions,
    MeasureResult,
    channel_f_mutual_information,
    coherent_f_information,
    conditional_f_entropy,
    duality_pair,
    f_entropy,
    f_mutual_information,
    resource_measure,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_CHECKS",
    "CheckConfig",
    "CheckReport",
    "DivergenceResult",
    "DomainError",
    "ExtendedReal",
    "FDescriptor",
    "FreeStateSet",
    "HermitianOperator",
    "Isometry",
    "MeasureOptions",
    "MeasureResult",
    "NEG_INF",
    "OptimizerOptions",
    "POS_INF",
    "PureStateVector",
    "QuantumChannel",
    "Spectrum",
    "SystemLayout",
    "TrialRecord",
    "apply",
    "as_operator",
    "backend_name",
    "canonical_purification",
    "channel_f_mutual_information",
    "classical_f_divergence",
    "coherent_f_information",
    "compiled_available",
    "conditional_f_entropy",
    "convex_pow",
    "cq_f_divergence",
    "custom_f",
    "depolarizing_to_max_mixed",
    "derive_seed",
    "divergence_value",
    "dual_k",
    "duality_pair",
    "eig_hermitian",
    "embedding_isometry",
    "extended_petz_isometry",
    "extended_petz_recovery",
    "f_entropy",
    "f_mutual_information",
    "holder_optimal_tau",
    "identity_channel",
    "identity_operator",
    "inv_pow",
    "isometry_channel",
    "kernel_projector",
    "kron",
    "kron_operator",
    "make_builtin",
    "matrix_function",
    "max_entangled_vector",
    "neg_log",
    "neg_pow",
    "optimized_alpha_divergence_at",
    "optimized_f_at",
    "optimized_f_at_tensor",
    "optimized_f_divergence",
    "parse_f_spec",
    "partial_trace",
    "petz_dpi_direction",
    "petz_f_divergence",
    "petz_recovery",
    "petz_renyi",
    "pinching",
    "psd_power",
    "psd_sqrt",
    "quantum_relative_entropy",
    "random_channel",
    "random_density",
    "random_psd",
    "random_pure",
    "random_unitary",
    "rel_modular_eval",
    "renyi_alpha_of",
    "renyi_f",
    "replacer_channel",
    "resource_measure",
    "run_all",
    "sandwiched_quasi_entropy",
    "sandwiched_renyi",
    "sandwiched_vs_petz_gap",
    "schatten_norm",
    "stinespring_isometry",
    "support_contained",
    "support_projector",
    "transpose_in_basis",
    "write_reports",
]
