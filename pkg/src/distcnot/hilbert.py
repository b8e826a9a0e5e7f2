"""Dense state-vector engine over labeled tensor-product subsystems.

States live on an ordered list of named subsystems (spins, photon
polarization, time-bin registers).  Amplitude vectors may be unnormalized:
after lossy scattering the squared norm of a heralded branch is its
survival probability, so nothing here silently renormalizes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SubsystemLabel",
    "LabeledState",
    "LinearOperator",
    "tensor",
    "apply",
    "project",
    "overlap2",
    "reduced_density",
]

_ATOL = 1e-10


@dataclass(frozen=True)
class SubsystemLabel:
    """A named tensor factor with a fixed dimension."""

    name: str
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"subsystem {self.name!r} needs dim >= 1, got {self.dim}")


@dataclass(frozen=True)
class LabeledState:
    """Complex amplitude vector over an ordered tuple of subsystems.

    The vector length must equal the product of the subsystem dimensions.
    Amplitudes are stored in row-major order with the first label varying
    slowest.  Instances are immutable; every operation returns a new state.
    """

    labels: tuple[SubsystemLabel, ...]
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        names = [lab.name for lab in self.labels]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate subsystem names in {names}")
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        expected = int(np.prod([lab.dim for lab in self.labels], dtype=np.int64))
        if amps.size != expected:
            raise ValueError(
                f"amplitude vector has length {amps.size}, expected {expected}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, labels, indices) -> "LabeledState":
        """Computational basis state |i0 i1 ...> over the given labels."""
        labels = tuple(labels)
        dims = [lab.dim for lab in labels]
        amps = np.zeros(int(np.prod(dims, dtype=np.int64)), dtype=complex)
        amps[int(np.ravel_multi_index(tuple(indices), dims))] = 1.0
        return cls(labels, amps)

    @classmethod
    def single(cls, name: str, amplitudes) -> "LabeledState":
        """One-subsystem state from a plain amplitude sequence."""
        amps = np.asarray(amplitudes, dtype=complex)
        return cls((SubsystemLabel(name, amps.size),), amps)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(lab.dim for lab in self.labels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(lab.name for lab in self.labels)

    def norm2(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "LabeledState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize a zero state")
        return LabeledState(self.labels, self.amplitudes / n)

    def scaled(self, factor: complex) -> "LabeledState":
        return LabeledState(self.labels, self.amplitudes * factor)

    def axis(self, name: str) -> int:
        for i, lab in enumerate(self.labels):
            if lab.name == name:
                return i
        raise KeyError(f"no subsystem named {name!r} in {self.names}")

    def reordered(self, names) -> "LabeledState":
        """Permute subsystems into the given name order (an isometry)."""
        names = tuple(names)
        if set(names) != set(self.names) or len(names) != len(self.labels):
            raise ValueError(f"cannot reorder {self.names} as {names}")
        perm = [self.axis(n) for n in names]
        tens = self.amplitudes.reshape(self.dims).transpose(perm)
        return LabeledState(tuple(self.labels[p] for p in perm), tens.reshape(-1))


@dataclass(frozen=True)
class LinearOperator:
    """Matrix acting on a subset of named subsystems, identity elsewhere.

    The matrix dimension must equal the product of the target dimensions,
    with the first target varying slowest (matching LabeledState layout).
    """

    targets: tuple[str, ...]
    matrix: np.ndarray = field(repr=False)
    unitary: bool = False

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator matrix must be square, got {mat.shape}")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate target names {self.targets}")
        if self.unitary:
            dev = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
            if dev > _ATOL:
                raise ValueError(f"unitary-flagged matrix fails M^H M = I by {dev:.2e}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)
        object.__setattr__(self, "targets", tuple(self.targets))

    @classmethod
    def identity(cls, name: str, dim: int = 2) -> "LinearOperator":
        return cls((name,), np.eye(dim), unitary=True)

    @classmethod
    def pauli_x(cls, name: str) -> "LinearOperator":
        return cls((name,), np.array([[0, 1], [1, 0]], dtype=complex), unitary=True)

    @classmethod
    def pauli_z(cls, name: str) -> "LinearOperator":
        return cls((name,), np.array([[1, 0], [0, -1]], dtype=complex), unitary=True)

    @classmethod
    def hadamard(cls, name: str) -> "LinearOperator":
        h = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        return cls((name,), h, unitary=True)

    def compose(self, other: "LinearOperator") -> "LinearOperator":
        """self applied after other; targets must coincide."""
        if self.targets != other.targets:
            raise ValueError("compose requires identical target tuples")
        return LinearOperator(
            self.targets, self.matrix @ other.matrix, unitary=self.unitary and other.unitary
        )


def tensor(a: LabeledState, b: LabeledState) -> LabeledState:
    """Tensor product of two states on disjoint subsystem sets."""
    shared = set(a.names) & set(b.names)
    if shared:
        raise ValueError(f"tensor factors share subsystem names {sorted(shared)}")
    return LabeledState(a.labels + b.labels, np.kron(a.amplitudes, b.amplitudes))


def apply(op: LinearOperator, s: LabeledState) -> LabeledState:
    """Apply an operator on its target subsystems, identity on the rest."""
    axes = [s.axis(name) for name in op.targets]
    tdim = int(np.prod([s.dims[ax] for ax in axes], dtype=np.int64))
    if op.matrix.shape[0] != tdim:
        raise ValueError(
            f"operator dim {op.matrix.shape[0]} != joint target dim {tdim}"
        )
    tens = s.amplitudes.reshape(s.dims)
    tens = np.moveaxis(tens, axes, range(len(axes)))
    folded = tens.reshape(tdim, -1)
    folded = op.matrix @ folded
    tens = np.moveaxis(folded.reshape(tens.shape), range(len(axes)), axes)
    return LabeledState(s.labels, tens.reshape(-1))


def project(
    s: LabeledState, name: str, index: int, relative: bool = False
) -> tuple[float, LabeledState]:
    """Project one subsystem onto a basis index and drop it.

    Returns ``(probability, post_state)``.  With ``relative=False`` the
    probability is the raw squared norm of the projected component, which
    for an unnormalized branch is its absolute success probability; with
    ``relative=True`` it is divided by the input's squared norm.
    The post state keeps the projected component's amplitudes (still
    unnormalized) with the measured subsystem removed.
    """
    n2 = s.norm2()
    if n2 == 0.0:
        raise ValueError("cannot project a zero-norm state")
    ax = s.axis(name)
    if not 0 <= index < s.dims[ax]:
        raise ValueError(f"basis index {index} out of range for {name!r}")
    tens = s.amplitudes.reshape(s.dims)
    component = np.take(tens, index, axis=ax)
    prob = float(np.vdot(component, component).real)
    if relative:
        prob /= n2
    post_labels = s.labels[:ax] + s.labels[ax + 1 :]
    if not post_labels:
        post_labels = ()
    return prob, LabeledState(post_labels, component.reshape(-1))


def overlap2(a: LabeledState, b: LabeledState) -> float:
    """|<a|b>|^2 after normalizing both; invariant under global phases."""
    if set(a.names) != set(b.names):
        raise ValueError(f"label sets differ: {a.names} vs {b.names}")
    b = b.reordered(a.names)
    if a.dims != b.dims:
        raise ValueError(f"subsystem dimensions differ: {a.dims} vs {b.dims}")
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise ValueError("overlap2 undefined for zero-norm states")
    ip = np.vdot(a.amplitudes, b.amplitudes) / (na * nb)
    return float(abs(ip) ** 2)


def reduced_density(s: LabeledState, names) -> np.ndarray:
    """Reduced density matrix of the named subsystems (normalized input)."""
    names = tuple(names)
    keep = [s.axis(n) for n in names]
    rest = [i for i in range(len(s.labels)) if i not in keep]
    tens = s.normalized().amplitudes.reshape(s.dims)
    tens = tens.transpose(keep + rest)
    d = int(np.prod([s.dims[i] for i in keep], dtype=np.int64))
    flat = tens.reshape(d, -1)
    return flat @ flat.conj().T
