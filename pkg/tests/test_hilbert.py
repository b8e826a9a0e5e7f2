import numpy as np
import pytest

from distcnot.hilbert import (
    LabeledState,
    LinearOperator,
    SubsystemLabel,
    apply,
    overlap2,
    project,
    reduced_density,
    tensor,
)


def rand_state(rng, names_dims):
    labels = tuple(SubsystemLabel(n, d) for n, d in names_dims)
    size = int(np.prod([d for _, d in names_dims]))
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    return LabeledState(labels, amps / np.linalg.norm(amps))


class TestTensor:
    def test_basis_case(self):
        a = LabeledState.single("a", [1, 0])
        b = LabeledState.single("b", [0, 1])
        assert np.allclose(tensor(a, b).amplitudes, [0, 1, 0, 0])

    def test_superposition_case(self):
        a = LabeledState.single("a", np.array([1, 1]) / np.sqrt(2))
        b = LabeledState.single("b", [1, 0])
        assert np.allclose(tensor(a, b).amplitudes, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0])

    def test_norm_multiplicative(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            a = rand_state(rng, [("a", 2), ("b", 3)]).scaled(rng.uniform(0.1, 2))
            b = rand_state(rng, [("c", 2)]).scaled(rng.uniform(0.1, 2))
            assert tensor(a, b).norm() == pytest.approx(a.norm() * b.norm(), abs=1e-12)

    def test_duplicate_label_rejected(self):
        a = LabeledState.single("a", [1, 0])
        with pytest.raises(ValueError, match="share"):
            tensor(a, a)


class TestApply:
    def test_pauli_x_on_diagonal_basis(self):
        # in the (D, A) basis the polarization flip exchanges the components
        d = LabeledState.single("p", np.array([1, 1]) / np.sqrt(2))
        a = LabeledState.single("p", np.array([1, -1]) / np.sqrt(2))
        out = apply(LinearOperator.pauli_x("p"), d)
        assert overlap2(out, d) == pytest.approx(1.0, abs=1e-12)
        out_a = apply(LinearOperator.pauli_x("p"), a)
        assert np.allclose(out_a.amplitudes, -a.amplitudes)

    def test_identity(self):
        rng = np.random.default_rng(1)
        s = rand_state(rng, [("a", 2), ("b", 2)])
        out = apply(LinearOperator.identity("b"), s)
        assert np.allclose(out.amplitudes, s.amplitudes)

    def test_pauli_z(self):
        s = LabeledState.single("s", np.array([1, 1]) / np.sqrt(2))
        out = apply(LinearOperator.pauli_z("s"), s)
        assert np.allclose(out.amplitudes, np.array([1, -1]) / np.sqrt(2))

    def test_missing_label(self):
        s = LabeledState.single("a", [1, 0])
        with pytest.raises(KeyError):
            apply(LinearOperator.pauli_x("zz"), s)

    def test_dimension_mismatch(self):
        s = LabeledState.single("a", [1, 0, 0])
        with pytest.raises(ValueError, match="dim"):
            apply(LinearOperator.pauli_x("a"), s)

    def test_unitary_preserves_norm(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            s = rand_state(rng, [("a", 2), ("b", 2), ("c", 3)])
            out = apply(LinearOperator.hadamard("b"), s)
            assert out.norm() == pytest.approx(s.norm(), abs=1e-10)

    def test_commutes_with_tensor_on_disjoint_targets(self):
        rng = np.random.default_rng(3)
        a = rand_state(rng, [("a", 2)])
        b = rand_state(rng, [("b", 2)])
        op = LinearOperator.hadamard("a")
        left = apply(op, tensor(a, b))
        right = tensor(apply(op, a), b)
        assert np.max(np.abs(left.amplitudes - right.amplitudes)) < 1e-12


class TestProject:
    def test_deterministic_outcome(self):
        h = LabeledState.single("p", [1, 0])
        prob, post = project(h, "p", 0)
        assert prob == pytest.approx(1.0)
        assert post.labels == ()

    def test_balanced_superposition(self):
        d = LabeledState.single("p", np.array([1, 1]) / np.sqrt(2))
        prob, _ = project(d, "p", 1)
        assert prob == pytest.approx(0.5, abs=1e-12)

    def test_completeness(self):
        rng = np.random.default_rng(4)
        s = rand_state(rng, [("a", 2), ("b", 3)])
        total = sum(project(s, "b", i)[0] for i in range(3))
        assert total == pytest.approx(s.norm2(), abs=1e-10)

    def test_relative_mode(self):
        rng = np.random.default_rng(5)
        s = rand_state(rng, [("a", 2)]).scaled(0.5)
        raw, _ = project(s, "a", 0)
        rel, _ = project(s, "a", 0, relative=True)
        assert rel == pytest.approx(raw / 0.25, abs=1e-12)

    def test_zero_norm_rejected(self):
        s = LabeledState.single("a", [0, 0])
        with pytest.raises(ValueError, match="zero-norm"):
            project(s, "a", 0)


class TestOverlap2:
    def test_self_overlap(self):
        rng = np.random.default_rng(6)
        s = rand_state(rng, [("a", 2), ("b", 2)])
        assert overlap2(s, s) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        a = LabeledState.single("a", [1, 0])
        b = LabeledState.single("a", [0, 1])
        assert overlap2(a, b) == 0.0

    def test_global_phase_invariance(self):
        rng = np.random.default_rng(7)
        s = rand_state(rng, [("a", 2), ("b", 3)])
        assert overlap2(s, s.scaled(np.exp(0.77j))) == pytest.approx(1.0, abs=1e-12)

    def test_reordering_isometry(self):
        rng = np.random.default_rng(8)
        a = rand_state(rng, [("a", 2), ("b", 3), ("c", 2)])
        b = rand_state(rng, [("c", 2), ("a", 2), ("b", 3)])
        assert overlap2(a, b) == pytest.approx(overlap2(b, a), abs=1e-12)

    def test_label_mismatch(self):
        a = LabeledState.single("a", [1, 0])
        b = LabeledState.single("b", [1, 0])
        with pytest.raises(ValueError, match="label"):
            overlap2(a, b)


def test_state_invariants():
    with pytest.raises(ValueError, match="length"):
        LabeledState((SubsystemLabel("a", 2),), [1, 0, 0])
    with pytest.raises(ValueError, match="duplicate"):
        LabeledState((SubsystemLabel("a", 2), SubsystemLabel("a", 2)), np.zeros(4))
    with pytest.raises(ValueError, match="dim"):
        SubsystemLabel("a", 0)


def test_unitary_flag_checked():
    with pytest.raises(ValueError, match="unitary"):
        LinearOperator(("a",), np.array([[1, 0], [0, 0.5]]), unitary=True)


def test_reduced_density_trace():
    rng = np.random.default_rng(9)
    s = rand_state(rng, [("a", 2), ("b", 2), ("c", 3)])
    rho = reduced_density(s, ("a", "b"))
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(rho, rho.conj().T)
