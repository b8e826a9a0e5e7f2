"""Cavity-emitter reflection coefficients and photon-qubit interfaces.

A single-sided cavity coupled to a two-branch emitter reflects an
H-polarized photon with a spin-dependent complex coefficient

    r = 1 - 2(i*d_spin + 1) / [(i*d_spin + 1)(i*d_cavity + 1) + C],

where the detunings are pre-normalized to the emitter and cavity
linewidths and C is the cooperativity.  The ideal limits are r -> +1
(resonant branch, strong coupling) and r -> -1 (far-detuned branch,
bare mirror), which together realize a controlled polarization flip in
the diagonal basis.  The microwave interface is the ideal two-line
controlled-phase map (-1 on photon-present x excited).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import LabeledState, LinearOperator, apply

__all__ = [
    "CavityEmitterParams",
    "ReflectionPair",
    "IDEAL_REFLECTION",
    "reflection",
    "cpf_apply",
    "cphase_apply",
]


@dataclass(frozen=True)
class CavityEmitterParams:
    """Normalized detunings and cooperativity for one emitter-cavity node.

    delta_up / delta_down are the spin-branch detunings 2(w_spin - w)/gamma,
    delta_cavity is 2(w_cav - w)/kappa, cooperativity is 4 g^2 / (kappa gamma).
    Raw rates never enter: the reflection depends only on these combinations.
    """

    delta_up: float
    delta_down: float
    delta_cavity: float
    cooperativity: float

    def __post_init__(self):
        if self.cooperativity < 0:
            raise ValueError(f"cooperativity must be >= 0, got {self.cooperativity}")

    def reflection_pair(self) -> "ReflectionPair":
        return ReflectionPair(
            spin_up=reflection(self, "up"), spin_down=reflection(self, "down")
        )


@dataclass(frozen=True)
class ReflectionPair:
    """Reflection coefficients for the two spin branches of one node."""

    spin_up: complex
    spin_down: complex

    def __post_init__(self):
        for r in (self.spin_up, self.spin_down):
            if abs(r) > 1 + 1e-12:
                raise ValueError(f"|reflection| = {abs(r)} exceeds 1 (non-passive)")

    @property
    def is_ideal(self) -> bool:
        return self.spin_up == 1 and self.spin_down == -1


IDEAL_REFLECTION = ReflectionPair(spin_up=1.0 + 0j, spin_down=-1.0 + 0j)


def reflection(params: CavityEmitterParams, branch: str) -> complex:
    """Complex reflection coefficient for one spin branch ('up' or 'down')."""
    if branch == "up":
        ds = params.delta_up
    elif branch == "down":
        ds = params.delta_down
    else:
        raise ValueError(f"branch must be 'up' or 'down', got {branch!r}")
    num = 2 * (1j * ds + 1)
    den = (1j * ds + 1) * (1j * params.delta_cavity + 1) + params.cooperativity
    return complex(1 - num / den)


def cpf_apply(
    s: LabeledState, pol_label: str, spin_label: str, r: ReflectionPair
) -> LabeledState:
    """Scatter the H-polarized component off a spin-loaded cavity.

    The |H,up> amplitude is multiplied by r.spin_up and |H,down> by
    r.spin_down; V-polarized components bypass the cavity unchanged.
    With unit-modulus coefficients this is unitary; with |r| < 1 it is a
    passive contraction and the lost norm is the scattering loss.
    """
    mat = np.diag([r.spin_up, r.spin_down, 1.0, 1.0]).astype(complex)
    op = LinearOperator((pol_label, spin_label), mat)
    return apply(op, s)


def cphase_apply(
    s: LabeledState,
    presence_label: str,
    spin_label: str,
    active_indices: tuple[int, ...] = (1,),
) -> LabeledState:
    """Controlled-phase interface: -1 on (photon present) x (excited qubit).

    ``active_indices`` selects which basis indices of the photon register
    count as "present and interacting".  The default (1,) matches a
    two-level presence register |0>,|1>; a time-bin register passes the
    bins routed through the resonator instead.
    """
    pd = s.dims[s.axis(presence_label)]
    diag = np.ones((pd, 2), dtype=complex)
    for idx in active_indices:
        if not 0 <= idx < pd:
            raise ValueError(f"active index {idx} out of range for {presence_label!r}")
        diag[idx, 1] = -1.0
    op = LinearOperator((presence_label, spin_label), np.diag(diag.reshape(-1)), unitary=True)
    return apply(op, s)
