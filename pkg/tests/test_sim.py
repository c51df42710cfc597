import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsim import sim
from qsim._kernels_py import apply_cswap_pair as py_cswap
from qsim._kernels_py import apply_ctrl_1q as py_ctrl
from qsim.errors import ZeroBranchError
from qsim.kernels import apply_cswap_pair, apply_ctrl_1q, backend
from qsim.sim import Circuit, RngStream, Statevector


def random_state(n, seed=0):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return Statevector(n, amps)


def random_unitary(seed=0):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, _ = np.linalg.qr(m)
    return q


class TestKernels:
    def test_backend_selected(self):
        assert backend in ("cython", "python")

    @pytest.mark.parametrize("seed", range(5))
    def test_ctrl_1q_matches_python(self, seed):
        n = 5
        st_a = random_state(n, seed).amplitudes
        st_b = st_a.copy()
        u = random_unitary(seed)
        apply_ctrl_1q(st_a, n, 0b101, 0b001, 1, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        py_ctrl(st_b, n, 0b101, 0b001, 1, u[0, 0], u[0, 1], u[1, 0], u[1, 1])
        np.testing.assert_allclose(st_a, st_b, atol=1e-14)

    @pytest.mark.parametrize("seed", range(5))
    def test_cswap_matches_python(self, seed):
        n = 5
        st_a = random_state(n, seed + 10).amplitudes
        st_b = st_a.copy()
        apply_cswap_pair(st_a, n, 1 << 4, 1 << 4, 0, 2)
        py_cswap(st_b, n, 1 << 4, 1 << 4, 0, 2)
        np.testing.assert_allclose(st_a, st_b, atol=1e-14)


class TestGates:
    def test_non_unitary_rejected(self):
        state = Statevector.zero(1)
        with pytest.raises(ValueError):
            sim.apply_single_qubit(state, 0, np.array([[1.0, 0.0], [0.0, 2.0]]))

    def test_bad_norm_rejected(self):
        with pytest.raises(ValueError):
            Statevector(1, np.array([1.0, 1.0], dtype=complex))

    def test_hadamard(self):
        state = Statevector.zero(1)
        sim.apply_single_qubit(state, 0, sim.HADAMARD)
        np.testing.assert_allclose(state.amplitudes,
                                   [1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-14)

    def test_qubit0_is_lsb(self):
        state = Statevector.zero(2)
        sim.apply_single_qubit(state, 0, sim.PAULI_X)
        assert abs(state.amplitudes[0b01]) == pytest.approx(1.0)

    def test_mcx_polarity(self):
        # open control on qubit 0 flips the target from |00>
        state = Statevector.zero(2)
        sim.apply_multi_controlled_x(state, [(0, 0)], 1)
        assert abs(state.amplitudes[0b10]) == pytest.approx(1.0)

    def test_cnot_layer_entangles(self):
        state = Statevector.zero(2)
        sim.apply_single_qubit(state, 0, sim.HADAMARD)
        sim.apply_cnot_layer(state, (0,), (1,))
        probs = state.probabilities()
        np.testing.assert_allclose(probs[[0b00, 0b11]], [0.5, 0.5], atol=1e-14)

    def test_controlled_swap(self):
        state = Statevector.zero(3)
        sim.apply_single_qubit(state, 0, sim.PAULI_X)
        sim.apply_single_qubit(state, 2, sim.PAULI_X)
        sim.controlled_swap(state, 2, (0,), (1,))
        assert abs(state.amplitudes[0b110]) == pytest.approx(1.0)


class TestMeasurement:
    def test_marginal_probabilities_sum(self):
        state = random_state(4, 3)
        probs = sim.marginal_probabilities(state, [1, 3])
        assert probs.sum() == pytest.approx(1.0)

    def test_project_bits_zero_branch(self):
        state = Statevector.zero(2)
        sim.apply_single_qubit(state, 0, sim.PAULI_X)
        with pytest.raises(ZeroBranchError):
            sim.project_bits(state, (0,), 0)

    def test_project_bits_renormalizes(self):
        state = random_state(3, 7)
        p, cond = sim.project_bits(state, (1,), 0)
        assert 0 < p < 1
        assert cond.norm_sq() == pytest.approx(1.0, abs=1e-12)

    def test_postselect_reduces_width(self):
        state = random_state(3, 8)
        p, reduced = sim.postselect(state, sim.QubitRange(1, 2), 0)
        assert reduced.n_qubits == 1
        assert p == pytest.approx(
            sim.probability_of_bits(state, (1, 2), 0), abs=1e-12)

    def test_measure_statistics(self):
        state = Statevector.zero(1)
        sim.apply_single_qubit(state, 0, sim.HADAMARD)
        rng = RngStream(11)
        outcomes = [sim.measure(state.copy(), (0,), rng)[0] for _ in range(400)]
        assert 0.4 < np.mean(outcomes) < 0.6

    def test_reset(self):
        state = Statevector.zero(1)
        sim.apply_single_qubit(state, 0, sim.PAULI_X)
        state = sim.reset(state, (0,), RngStream(0))
        assert abs(state.amplitudes[0]) == pytest.approx(1.0)


class TestRngStream:
    def test_reproducible(self):
        a = RngStream(5).uniform(size=4)
        b = RngStream(5).uniform(size=4)
        np.testing.assert_array_equal(a, b)

    def test_split_streams_differ(self):
        s1, s2 = RngStream(5).split(2)
        assert not np.array_equal(s1.uniform(size=4), s2.uniform(size=4))

    def test_split_independent_of_consumption(self):
        r1 = RngStream(5)
        r1.uniform(size=10)
        # split identity depends only on the seed path, not on draws
        a = RngStream(5).split(3)[2].uniform(size=4)
        b = r1.split(3)[2].uniform(size=4)
        np.testing.assert_array_equal(a, b)


class TestCircuit:
    def test_inverse_is_identity(self):
        circ = Circuit(3)
        circ.h(0)
        circ.ry(1, 0.7)
        circ.ucry([2], 1, [0.3, 1.1])
        circ.mcx([(0, 1), (2, 0)], 1)
        circ.cswap(2, (0,), (1,))
        circ.extend(circ.inverse())
        state = random_state(3, 1)
        ref = state.amplitudes.copy()
        circ.apply_unitary(state)
        np.testing.assert_allclose(state.amplitudes, ref, atol=1e-12)

    def test_remapped(self):
        circ = Circuit(1)
        circ.x(0)
        wide = circ.remapped([2], 3)
        state = Statevector.zero(3)
        wide.apply_unitary(state)
        assert abs(state.amplitudes[0b100]) == pytest.approx(1.0)

    def test_run_records_measurements(self):
        circ = Circuit(1)
        circ.x(0)
        circ.measure_reg((0,), "m")
        record = {}
        circ.run(Statevector.zero(1), RngStream(0), record)
        outcome, prob = record["m"]
        assert outcome == 1
        assert prob == pytest.approx(1.0)

    @given(st.integers(0, 2), st.floats(-3.0, 3.0))
    @settings(max_examples=25, deadline=None)
    def test_ry_preserves_norm(self, qubit, angle):
        state = random_state(3, 42)
        sim.apply_ry(state, qubit, angle)
        assert state.norm_sq() == pytest.approx(1.0, abs=1e-10)

    @given(st.integers(0, 60))
    @settings(max_examples=25, deadline=None)
    def test_ucry_pattern_indexing(self, seed):
        # controls select the angle by their MSB-first bit pattern
        rng = np.random.default_rng(seed)
        angles = rng.uniform(0, np.pi, size=4)
        circ = Circuit(3)
        circ.ucry([2, 1], 0, angles)
        for pattern in range(4):
            state = Statevector.zero(3)
            if pattern & 0b10:
                sim.apply_single_qubit(state, 2, sim.PAULI_X)
            if pattern & 0b01:
                sim.apply_single_qubit(state, 1, sim.PAULI_X)
            circ.apply_unitary(state)
            p1 = sim.marginal_probabilities(state, [0])[1]
            assert p1 == pytest.approx(np.sin(angles[pattern] / 2.0) ** 2,
                                       abs=1e-12)
