"""Executable pipelines for the heralded distributed CNOT gates.

Three variants are provided:

* ``run_single_cnot`` -- one control/target pair linked by a
  polarization-entangled photon pair, 4 herald outcomes.
* ``run_parallel_cnot`` -- two pairs gated by one photon pair carrying an
  extra time-bin Bell state; the exchange gate resets the polarization
  between stages, 16 herald outcomes.
* ``run_sc_parallel_cnot`` -- hybrid variant with superconducting
  controls behind an ideal controlled-phase microwave interface and
  color-center targets behind the optical scattering interface.

Spatial paths and optical switches are control flow, not Hilbert
factors.  Detectors are ideal and time-resolved; all inefficiency comes
from |r| < 1 scattering loss, so branch squared norms are the branch
success probabilities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hilbert import (
    LabeledState,
    LinearOperator,
    SubsystemLabel,
    apply,
    project,
    tensor,
)
from .routing import hwp_hadamard, hwp_hadamard_like, um_gate, us_gate, mw_timebin_hadamard
from .scattering import (
    CavityEmitterParams,
    IDEAL_REFLECTION,
    ReflectionPair,
    cpf_apply,
    cphase_apply,
)

__all__ = [
    "QubitInit",
    "NodeConfig",
    "HeraldRecord",
    "ProtocolOutcome",
    "spin_hadamard",
    "herald_correction",
    "run_single_cnot",
    "run_parallel_cnot",
    "run_sc_parallel_cnot",
    "parallel_state_after_reset",
    "ideal_pair_output",
]

_SQRT2 = math.sqrt(2)


@dataclass(frozen=True)
class QubitInit:
    """Real amplitude pair (alpha, beta) with alpha^2 + beta^2 = 1."""

    alpha: float
    beta: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.beta is None:
            if not 0.0 <= self.alpha <= 1.0:
                raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
            object.__setattr__(self, "beta", math.sqrt(1.0 - self.alpha**2))
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise ValueError("alpha^2 + beta^2 must equal 1")

    def state(self, label: str) -> LabeledState:
        return LabeledState.single(label, [self.alpha, self.beta])


@dataclass(frozen=True)
class NodeConfig:
    """Scattering parameters for the two nodes, or the ideal-gate limit."""

    params_a: CavityEmitterParams | None = None
    params_b: CavityEmitterParams | None = None
    ideal: bool = False

    def reflections(self) -> tuple[ReflectionPair, ReflectionPair]:
        if self.ideal:
            return IDEAL_REFLECTION, IDEAL_REFLECTION
        if self.params_a is None or self.params_b is None:
            raise ValueError("non-ideal NodeConfig needs params for both nodes")
        return self.params_a.reflection_pair(), self.params_b.reflection_pair()

    @classmethod
    def benchmark(cls, coop_a: float = 150.0, coop_b: float = 50.0) -> "NodeConfig":
        """Resonant-up / far-detuned-down working point used throughout."""
        return cls(
            params_a=CavityEmitterParams(0.0, 100.0, 1.5, coop_a),
            params_b=CavityEmitterParams(0.0, 100.0, 0.5, coop_b),
        )


@dataclass(frozen=True)
class HeraldRecord:
    """Detector outcome and the implied local spin correction.

    ``photon_a`` / ``photon_b`` hold (polarization index, time-bin index)
    with None for registers the variant does not measure.  ``branch_m``
    indexes the first-pair herald, ``branch_n`` the second-pair herald
    (None for the single-gate variant).
    """

    photon_a: tuple[int | None, int | None]
    photon_b: tuple[int | None, int | None]
    branch_m: int
    branch_n: int | None
    correction: LinearOperator


@dataclass(frozen=True)
class ProtocolOutcome:
    herald: HeraldRecord
    branch_state: LabeledState
    branch_probability: float
    corrected_state: LabeledState


def spin_hadamard(s: LabeledState, spin_label: str) -> LabeledState:
    """Hadamard on a stationary qubit: |up> -> (|up> + |down>)/sqrt2."""
    return apply(LinearOperator.hadamard(spin_label), s)


def herald_correction(branch: int, ctrl: str = "s1", tgt: str = "s2") -> LinearOperator:
    """Local spin operator undoing the herald-dependent byproduct.

    Branch 1 needs nothing; branch 2 a phase flip on the control; branch 3
    a bit flip on the target; branch 4 both, with an extra overall sign.
    """
    if branch not in (1, 2, 3, 4):
        raise ValueError(f"branch index must be 1..4, got {branch}")
    eye = np.eye(2, dtype=complex)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    mats = {
        1: np.kron(eye, eye),
        2: np.kron(z, eye),
        3: np.kron(eye, x),
        4: -np.kron(z, x),
    }
    return LinearOperator((ctrl, tgt), mats[branch], unitary=True)


def ideal_pair_output(q_ctrl: QubitInit, q_tgt: QubitInit, ctrl: str, tgt: str) -> LabeledState:
    """Exact CNOT output for one pair: control |up> flips the target."""
    a, b = q_ctrl.alpha, q_ctrl.beta
    c, d = q_tgt.alpha, q_tgt.beta
    amps = np.array([a * d, a * c, b * c, b * d], dtype=complex)
    return LabeledState(
        (SubsystemLabel(ctrl, 2), SubsystemLabel(tgt, 2)), amps
    )


def _pair_stage(
    s: LabeledState,
    ctrl: str,
    tgt: str,
    r_a: ReflectionPair,
    r_b: ReflectionPair,
    pol_a: str = "pol_a",
    pol_b: str = "pol_b",
) -> LabeledState:
    """One optical gate stage: plates, scattering, and closing plates."""
    s = hwp_hadamard_like(s, pol_b)
    s = cpf_apply(s, pol_a, ctrl, r_a)
    s = spin_hadamard(s, tgt)
    s = cpf_apply(s, pol_b, tgt, r_b)
    s = spin_hadamard(s, tgt)
    s = hwp_hadamard(s, pol_a)
    s = hwp_hadamard(s, pol_b)
    return s


def _polarization_bell(pol_a: str = "pol_a", pol_b: str = "pol_b") -> LabeledState:
    labels = (SubsystemLabel(pol_a, 2), SubsystemLabel(pol_b, 2))
    return LabeledState(labels, np.array([1, 0, 0, 1], dtype=complex) / _SQRT2)


def _timebin_bell(tb_a: str = "tb_a", tb_b: str = "tb_b") -> LabeledState:
    labels = (SubsystemLabel(tb_a, 2), SubsystemLabel(tb_b, 2))
    return LabeledState(labels, np.array([1, 0, 0, 1], dtype=complex) / _SQRT2)


def run_single_cnot(
    q1: QubitInit, q2: QubitInit, cfg: NodeConfig
) -> list[ProtocolOutcome]:
    """Distributed CNOT on one pair; returns the 4 heralded outcomes.

    Each outcome carries the unnormalized branch state (its squared norm
    is the branch probability), and the corrected state obtained by
    undoing the herald byproduct, to be compared against the plain CNOT
    output.
    """
    r_a, r_b = cfg.reflections()
    s = tensor(_polarization_bell(), tensor(q1.state("s1"), q2.state("s2")))
    s = _pair_stage(s, "s1", "s2", r_a, r_b)

    outcomes = []
    for k in range(2):
        p_a, after_a = project(s, "pol_a", k)
        for l in range(2):
            _, branch = project(after_a, "pol_b", l)
            prob = branch.norm2()
            m = 2 * k + l + 1
            corr = herald_correction(m, "s1", "s2")
            corrected = apply(corr, branch.normalized())
            herald = HeraldRecord(
                photon_a=(k, None), photon_b=(l, None),
                branch_m=m, branch_n=None, correction=corr,
            )
            outcomes.append(ProtocolOutcome(herald, branch, prob, corrected))
    return outcomes


def _parallel_initial(q: tuple[QubitInit, ...]) -> LabeledState:
    spins = tensor(
        tensor(q[0].state("s1"), q[1].state("s2")),
        tensor(q[2].state("s3"), q[3].state("s4")),
    )
    photons = tensor(_timebin_bell(), _polarization_bell())
    return tensor(photons, spins)


def parallel_state_after_reset(
    q1: QubitInit, q2: QubitInit, q3: QubitInit, q4: QubitInit, cfg: NodeConfig
) -> LabeledState:
    """State after stage one and the exchange gates, before stage two.

    At this point the photon polarization has been reset to the initial
    Bell state and the first-pair herald lives in the time bins.
    """
    r_a, r_b = cfg.reflections()
    s = _parallel_initial((q1, q2, q3, q4))
    s = _pair_stage(s, "s1", "s2", r_a, r_b)
    s = us_gate(s, "pol_a", "tb_a")
    s = us_gate(s, "pol_b", "tb_b")
    return s


def run_parallel_cnot(
    q1: QubitInit, q2: QubitInit, q3: QubitInit, q4: QubitInit, cfg: NodeConfig
) -> list[ProtocolOutcome]:
    """Two distributed CNOTs from one photon pair; 16 heralded outcomes.

    The first-pair herald is read from the time bins (index m), the
    second-pair herald from the polarizations (index n).  The compound
    correction acts on all four spins.
    """
    r_a, r_b = cfg.reflections()
    s = parallel_state_after_reset(q1, q2, q3, q4, cfg)
    s = _pair_stage(s, "s3", "s4", r_a, r_b)

    outcomes = []
    for i in range(2):
        p_i, s_i = project(s, "tb_a", i)
        for j in range(2):
            _, s_ij = project(s_i, "tb_b", j)
            for k in range(2):
                _, s_ijk = project(s_ij, "pol_a", k)
                for l in range(2):
                    _, branch = project(s_ijk, "pol_b", l)
                    prob = branch.norm2()
                    m = 2 * i + j + 1
                    n = 2 * k + l + 1
                    corr_m = herald_correction(m, "s1", "s2")
                    corr_n = herald_correction(n, "s3", "s4")
                    corr = LinearOperator(
                        ("s1", "s2", "s3", "s4"),
                        np.kron(corr_m.matrix, corr_n.matrix),
                        unitary=True,
                    )
                    corrected = apply(corr, branch.normalized())
                    herald = HeraldRecord(
                        photon_a=(k, i), photon_b=(l, j),
                        branch_m=m, branch_n=n, correction=corr,
                    )
                    outcomes.append(ProtocolOutcome(herald, branch, prob, corrected))
    return outcomes


def _sc_initial(q: tuple[QubitInit, ...]) -> LabeledState:
    """Hybrid source: 4-bin microwave photon entangled with an optical photon.

    Occupied components (tb_a, tb_b, pol_b) with amplitude 1/2 each:
    (0,0,H), (1,1,H), (2,0,V), (3,1,V).
    """
    labels = (
        SubsystemLabel("tb_a", 4),
        SubsystemLabel("tb_b", 2),
        SubsystemLabel("pol_b", 2),
    )
    amps = np.zeros((4, 2, 2), dtype=complex)
    amps[0, 0, 0] = amps[1, 1, 0] = amps[2, 0, 1] = amps[3, 1, 1] = 0.5
    photons = LabeledState(labels, amps.reshape(-1))
    spins = tensor(
        tensor(q[0].state("s1"), q[1].state("s2")),
        tensor(q[2].state("s3"), q[3].state("s4")),
    )
    return tensor(photons, spins)


def _sc_pair_stage(
    s: LabeledState, ctrl: str, tgt: str, r_b: ReflectionPair
) -> LabeledState:
    """Hybrid gate stage: microwave phase interface plus optical scattering.

    The switch routes bins 0 and 1 through the resonator of the
    superconducting control; the optical photon runs through the same
    plate/cavity block as in the all-optical variant.
    """
    s = cphase_apply(s, "tb_a", ctrl, active_indices=(0, 1))
    s = hwp_hadamard_like(s, "pol_b")
    s = spin_hadamard(s, tgt)
    s = cpf_apply(s, "pol_b", tgt, r_b)
    s = spin_hadamard(s, tgt)
    s = mw_timebin_hadamard(s, "tb_a")
    s = hwp_hadamard(s, "pol_b")
    return s


def run_sc_parallel_cnot(
    q1: QubitInit, q2: QubitInit, q3: QubitInit, q4: QubitInit, cfg: NodeConfig
) -> list[ProtocolOutcome]:
    """Hybrid parallel variant: superconducting controls, color-center targets.

    The microwave interface is the exact controlled-phase map, so loss
    enters only through the optical scattering at the target node.  The
    herald is read from the 4-bin microwave register (both pair indices),
    the optical time bin, and the optical polarization.
    """
    if cfg.ideal:
        r_b = IDEAL_REFLECTION
    else:
        if cfg.params_b is None:
            raise ValueError("SC variant needs params_b for the color-center node")
        r_b = cfg.params_b.reflection_pair()

    s = _sc_initial((q1, q2, q3, q4))
    s = _sc_pair_stage(s, "s1", "s2", r_b)
    s = um_gate(s, "tb_a")
    s = us_gate(s, "pol_b", "tb_b")
    s = _sc_pair_stage(s, "s3", "s4", r_b)

    outcomes = []
    for t in range(4):
        p_t, s_t = project(s, "tb_a", t)
        i, k = t % 2, t // 2
        for j in range(2):
            _, s_tj = project(s_t, "tb_b", j)
            for l in range(2):
                _, branch = project(s_tj, "pol_b", l)
                prob = branch.norm2()
                m = 2 * i + j + 1
                n = 2 * k + l + 1
                corr_m = herald_correction(m, "s1", "s2")
                corr_n = herald_correction(n, "s3", "s4")
                corr = LinearOperator(
                    ("s1", "s2", "s3", "s4"),
                    np.kron(corr_m.matrix, corr_n.matrix),
                    unitary=True,
                )
                corrected = apply(corr, branch.normalized())
                herald = HeraldRecord(
                    photon_a=(None, t), photon_b=(l, j),
                    branch_m=m, branch_n=n, correction=corr,
                )
                outcomes.append(ProtocolOutcome(herald, branch, prob, corrected))
    return outcomes
