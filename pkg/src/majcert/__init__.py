"""Self-testing certification of Majorana parity measurements."""

__version__ = "0.1.0"

from .certify import (  # noqa: E402
    CertificationReport,
    ContextDeviations,
    IdealModel,
    ParityScenario,
    context_deviations,
    lemma_diagnostics,
    rigidity_construct,
    robustness_certify,
    theorem_constants,
)
from .dilation import Povm2, check_commutant_preservation, dilate, sqrt_psd  # noqa: E402
from .exceptions import MajcertError  # noqa: E402
from .jordan import jordan_pair, jordan_quad, state_weights, y_basis_coeffs  # noqa: E402
from .majorana import (  # noqa: E402
    enumerate_contexts,
    gamma,
    logical_encoding,
    parity,
    protocol_table,
    total_parity,
)
from .stats import (  # noqa: E402
    CountsTable,
    classical_bound_oracle,
    estimate_expectations,
    ideal_distribution,
    sample_counts,
    witness,
)

__all__ = [
    "CertificationReport", "ContextDeviations", "CountsTable", "IdealModel",
    "MajcertError", "ParityScenario", "Povm2", "check_commutant_preservation",
    "classical_bound_oracle", "context_deviations", "dilate", "enumerate_contexts",
    "estimate_expectations", "gamma", "ideal_distribution", "jordan_pair",
    "jordan_quad", "lemma_diagnostics", "logical_encoding", "parity",
    "protocol_table", "rigidity_construct", "robustness_certify", "sample_counts",
    "sqrt_psd", "state_weights", "theorem_constants", "total_parity", "witness",
    "y_basis_coeffs",
]
