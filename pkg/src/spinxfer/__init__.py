"""Quantum-state transfer through an open XXZ chain with three-spin chiral exchange."""

__version__ = "0.1.0"

from .entanglement import (  # noqa: E402
    concurrence_at_tc_closed,
    concurrence_pure,
    concurrence_wootters,
    residual_ab_state,
)
from .errors import (  # noqa: E402
    InvalidArgumentError,
    InvalidSpecError,
    NoRealRootsError,
    NotFoundError,
    PreconditionError,
    SpinxferError,
    UnsupportedError,
)
from .spectral import (  # noqa: E402
    AnalyticEigensystemN3,
    Spectrum,
    TauElements,
    analytic_eigensystem_n3,
    chain_spectrum,
    cubic_eta_roots,
    eigendecompose,
    expm_oracle,
    propagator_at,
    tau_elements,
)
from .spin import (  # noqa: E402
    ChainSpec,
    build_hamiltonian,
    partial_trace,
    sector_index,
    state_fidelity,
)
from .transfer import (  # noqa: E402
    CharacteristicTime,
    TransferReport,
    average_fidelity_closed,
    average_fidelity_reference,
    characteristic_time_analytic,
    characteristic_time_numeric,
    evolve_state,
    tc_argmax,
    transfer_amplitude,
    transfer_report,
)
