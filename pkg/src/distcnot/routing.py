"""Linear-optical routing elements on polarization and time-bin registers.

Polarization basis order is (H, V).  Optical time-bin registers have two
bins, microwave registers four.  The exchange gates are implemented as
their net permutations; the interferometer internals (PBS paths, switches,
the global one-bin delay they leave behind) add no observable behavior
beyond these maps.
"""

from __future__ import annotations

import numpy as np

from .hilbert import LabeledState, LinearOperator, apply

__all__ = [
    "hwp_hadamard",
    "hwp_hadamard_like",
    "time_shift",
    "us_gate",
    "um_gate",
    "mw_timebin_hadamard",
]

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
# Hadamard-like plate: |H> -> (|H> - |V>)/sqrt2, |V> -> (|H> + |V>)/sqrt2
_H_LIKE = np.array([[1, 1], [-1, 1]], dtype=complex) / np.sqrt(2)


def hwp_hadamard(s: LabeledState, pol_label: str) -> LabeledState:
    """Half-wave plate Hadamard: |H> -> |D>, |V> -> -|A>."""
    return apply(LinearOperator((pol_label,), _H, unitary=True), s)


def hwp_hadamard_like(s: LabeledState, pol_label: str) -> LabeledState:
    """Rotated half-wave plate: |H> -> -|A>, |V> -> |D>."""
    return apply(LinearOperator((pol_label,), _H_LIKE, unitary=True), s)


def time_shift(s: LabeledState, timebin_label: str, k: int) -> LabeledState:
    """Delay every occupied bin by k slots: bin i -> bin i + k.

    The shifted indices must stay inside the register; any amplitude that
    would overflow raises instead of wrapping around.
    """
    dim = s.dims[s.axis(timebin_label)]
    if k == 0:
        return s
    if k < 0 or k >= dim:
        raise ValueError(f"shift k={k} invalid for a {dim}-bin register")
    tens = s.amplitudes.reshape(s.dims)
    ax = s.axis(timebin_label)
    moved = np.moveaxis(tens, ax, 0)
    if np.any(np.abs(moved[dim - k :]) > 0):
        raise ValueError(f"time_shift by {k} overflows the {dim}-bin register")
    mat = np.zeros((dim, dim), dtype=complex)
    for i in range(dim - k):
        mat[i + k, i] = 1.0
    for i in range(dim - k, dim):  # unreachable bins, kept unitary
        mat[i + k - dim, i] = 1.0
    return apply(LinearOperator((timebin_label,), mat, unitary=True), s)


def us_gate(s: LabeledState, pol_label: str, timebin_label: str) -> LabeledState:
    """Polarization/time-bin exchange: bin0|V> <-> bin1|H>, rest fixed."""
    if s.dims[s.axis(timebin_label)] != 2:
        raise ValueError("us_gate needs a 2-bin optical time-bin register")
    # joint basis (pol, bin): (H,0), (H,1), (V,0), (V,1)
    mat = np.eye(4, dtype=complex)
    mat[[1, 2]] = mat[[2, 1]]
    return apply(LinearOperator((pol_label, timebin_label), mat, unitary=True), s)


def um_gate(s: LabeledState, timebin_label: str) -> LabeledState:
    """Microwave time-bin exchange: bin1 <-> bin2, bins 0 and 3 fixed."""
    if s.dims[s.axis(timebin_label)] != 4:
        raise ValueError("um_gate needs a 4-bin microwave register")
    mat = np.eye(4, dtype=complex)
    mat[[1, 2]] = mat[[2, 1]]
    return apply(LinearOperator((timebin_label,), mat, unitary=True), s)


def mw_timebin_hadamard(s: LabeledState, timebin_label: str) -> LabeledState:
    """Block Hadamard on bin pairs (0,2) and (1,3) of a 4-bin register."""
    if s.dims[s.axis(timebin_label)] != 4:
        raise ValueError("mw_timebin_hadamard needs a 4-bin register")
    r = 1 / np.sqrt(2)
    mat = np.zeros((4, 4), dtype=complex)
    for i in (0, 1):
        mat[i, i] = r
        mat[i, i + 2] = r
        mat[i + 2, i] = r
        mat[i + 2, i + 2] = -r
    return apply(LinearOperator((timebin_label,), mat, unitary=True), s)
