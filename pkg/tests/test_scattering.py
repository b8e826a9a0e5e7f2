import numpy as np
import pytest

from distcnot.hilbert import LabeledState, SubsystemLabel, tensor
from distcnot.scattering import (
    IDEAL_REFLECTION,
    CavityEmitterParams,
    ReflectionPair,
    cpf_apply,
    cphase_apply,
    reflection,
)

# frozen high-precision references (50-digit arithmetic), benchmark corners
FROZEN = [
    # (delta_spin, delta_cavity, C, expected r)
    (100.0, 1.5, 150.0, -0.9704462184262247 + 0.0002911702618105938j),
    (0.0, 1.5, 150.0, 0.9867562737767642 + 0.00013156019427055355j),
    (0.0, 0.5, 50.0, 0.9607880826525709 + 0.00038443056222969726j),
    (100.0, 0.5, 50.0, -0.990050736295013 + 9.899764880584087e-05j),
]


class TestReflection:
    @pytest.mark.parametrize("ds,dc,c,expected", FROZEN)
    def test_frozen_values(self, ds, dc, c, expected):
        p = CavityEmitterParams(ds, ds, dc, c)
        assert reflection(p, "up") == pytest.approx(expected, abs=1e-14)

    def test_bare_mirror_limit(self):
        # C = 0, everything resonant: the photon enters and exits, r = -1
        p = CavityEmitterParams(0.0, 0.0, 0.0, 0.0)
        assert reflection(p, "up") == pytest.approx(-1.0, abs=1e-14)

    def test_strong_coupling_limit(self):
        p = CavityEmitterParams(0.0, 0.0, 0.0, 1e8)
        assert reflection(p, "up") == pytest.approx(1.0, abs=1e-7)

    def test_passivity_random(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            p = CavityEmitterParams(
                rng.uniform(-200, 200), rng.uniform(-200, 200),
                rng.uniform(-10, 10), rng.uniform(0, 500),
            )
            for branch in ("up", "down"):
                assert abs(reflection(p, branch)) <= 1 + 1e-12

    def test_branch_selection(self):
        p = CavityEmitterParams(0.0, 100.0, 1.5, 150.0)
        assert reflection(p, "up") != reflection(p, "down")
        with pytest.raises(ValueError, match="branch"):
            reflection(p, "sideways")

    def test_continuity(self):
        # finite-difference smoothness in each parameter
        rng = np.random.default_rng(12)
        for _ in range(10):
            ds, dc, c = rng.uniform(-50, 50), rng.uniform(-5, 5), rng.uniform(1, 300)
            h = 1e-6

            def r(ds_, dc_, c_):
                return reflection(CavityEmitterParams(ds_, ds_, dc_, c_), "up")

            for f0, f1 in [
                (r(ds, dc, c), r(ds * (1 + h) + h, dc, c)),
                (r(ds, dc, c), r(ds, dc * (1 + h) + h, c)),
                (r(ds, dc, c), r(ds, dc, c * (1 + h) + h)),
            ]:
                assert abs(f1 - f0) < 1e-4

    def test_negative_cooperativity_rejected(self):
        with pytest.raises(ValueError, match="cooperativity"):
            CavityEmitterParams(0.0, 0.0, 0.0, -1.0)

    def test_reflection_pair(self):
        p = CavityEmitterParams(0.0, 100.0, 1.5, 150.0)
        pair = p.reflection_pair()
        assert pair.spin_up == reflection(p, "up")
        assert pair.spin_down == reflection(p, "down")
        assert not pair.is_ideal
        assert IDEAL_REFLECTION.is_ideal

    def test_non_passive_pair_rejected(self):
        with pytest.raises(ValueError, match="passive"):
            ReflectionPair(spin_up=1.5, spin_down=-1.0)


class TestCpf:
    @staticmethod
    def _pol_spin(pol_amps, spin_amps):
        pol = LabeledState.single("pol", pol_amps)
        spin = LabeledState.single("spin", spin_amps)
        return tensor(pol, spin)

    def test_ideal_controlled_flip_in_diagonal_basis(self):
        # |D, up> -> |D, up> and |D, down> -> |A, down>
        inv = 1 / np.sqrt(2)
        s = self._pol_spin([inv, inv], [1, 0])
        out = cpf_apply(s, "pol", "spin", IDEAL_REFLECTION)
        assert np.allclose(out.amplitudes, s.amplitudes)
        s = self._pol_spin([inv, inv], [0, 1])
        out = cpf_apply(s, "pol", "spin", IDEAL_REFLECTION)
        assert np.allclose(out.amplitudes, self._pol_spin([-inv, inv], [0, 1]).amplitudes)

    def test_v_component_untouched(self):
        s = self._pol_spin([0, 1], [0.6, 0.8])
        r = CavityEmitterParams(0.0, 100.0, 1.5, 150.0).reflection_pair()
        out = cpf_apply(s, "pol", "spin", r)
        assert np.allclose(out.amplitudes, s.amplitudes)

    def test_h_component_scaled(self):
        r = CavityEmitterParams(0.0, 100.0, 1.5, 150.0).reflection_pair()
        s = self._pol_spin([1, 0], [0.6, 0.8])
        out = cpf_apply(s, "pol", "spin", r)
        expected = self._pol_spin([1, 0], [0.6 * r.spin_up, 0.8 * r.spin_down])
        assert np.allclose(out.amplitudes, expected.amplitudes)

    def test_contraction(self):
        rng = np.random.default_rng(13)
        r = CavityEmitterParams(5.0, 80.0, 1.0, 20.0).reflection_pair()
        for _ in range(20):
            amps = rng.normal(size=4) + 1j * rng.normal(size=4)
            s = LabeledState(
                (SubsystemLabel("pol", 2), SubsystemLabel("spin", 2)),
                amps / np.linalg.norm(amps),
            )
            assert cpf_apply(s, "pol", "spin", r).norm() <= 1 + 1e-12


class TestCphase:
    def test_two_level_presence(self):
        labels = (SubsystemLabel("ph", 2), SubsystemLabel("q", 2))
        s = LabeledState(labels, np.full(4, 0.5))
        out = cphase_apply(s, "ph", "q")
        assert np.allclose(out.amplitudes, [0.5, 0.5, 0.5, -0.5])

    def test_four_bin_register(self):
        labels = (SubsystemLabel("tb", 4), SubsystemLabel("q", 2))
        s = LabeledState(labels, np.full(8, 1 / np.sqrt(8)))
        out = cphase_apply(s, "tb", "q", active_indices=(0, 1))
        signs = np.array([1, -1, 1, -1, 1, 1, 1, 1])
        assert np.allclose(out.amplitudes, signs / np.sqrt(8))

    def test_bad_active_index(self):
        labels = (SubsystemLabel("ph", 2), SubsystemLabel("q", 2))
        s = LabeledState(labels, np.full(4, 0.5))
        with pytest.raises(ValueError, match="active index"):
            cphase_apply(s, "ph", "q", active_indices=(5,))

    def test_unitary(self):
        rng = np.random.default_rng(14)
        labels = (SubsystemLabel("tb", 4), SubsystemLabel("q", 2))
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        s = LabeledState(labels, amps / np.linalg.norm(amps))
        out = cphase_apply(s, "tb", "q", active_indices=(0, 1))
        assert out.norm() == pytest.approx(1.0, abs=1e-12)
        again = cphase_apply(out, "tb", "q", active_indices=(0, 1))
        assert np.allclose(again.amplitudes, s.amplitudes)
