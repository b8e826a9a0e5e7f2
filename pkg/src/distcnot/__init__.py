"""Heralded distributed CNOT gates between dual-species stationary qubits.

A dense state-vector simulator of the photon-mediated gate pipelines,
closed-form heralded branch efficiencies and fidelities with their
quadrature averages, and a CLI for benchmark reproduction and parameter
sweeps.
"""

from .hilbert import (
    LabeledState,
    LinearOperator,
    SubsystemLabel,
    apply,
    overlap2,
    project,
    reduced_density,
    tensor,
)
from .metrics import (
    BranchCoefficients,
    BranchMetrics,
    MixedBranch,
    QuadratureSpec,
    average_parallel,
    average_single,
    branch_coefficients,
    branch_metrics,
    mixed_source_branches,
    purified_fidelity,
    sweep_surface,
)
from .protocol import (
    HeraldRecord,
    NodeConfig,
    ProtocolOutcome,
    QubitInit,
    herald_correction,
    ideal_pair_output,
    parallel_state_after_reset,
    run_parallel_cnot,
    run_sc_parallel_cnot,
    run_single_cnot,
    spin_hadamard,
)
from .routing import (
    hwp_hadamard,
    hwp_hadamard_like,
    mw_timebin_hadamard,
    time_shift,
    um_gate,
    us_gate,
)
from .scattering import (
    IDEAL_REFLECTION,
    CavityEmitterParams,
    ReflectionPair,
    cpf_apply,
    cphase_apply,
    reflection,
)

__version__ = "0.1.0"
