"""Dense statevector simulator.

Qubit 0 is the least-significant bit of the basis index, everywhere.
A register described by a qubit sequence (q_0, q_1, ...) stores its value
with q_0 as the least-significant bit.

Gates mutate the amplitude array in place and return the same Statevector
object, so chained calls do not copy; callers that need the original state
must copy() first.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ZeroBranchError

NORM_TOL = 1e-10
UNITARY_TOL = 1e-8
ZERO_BRANCH_CUTOFF = 1e-14

SQRT1_2 = 1.0 / np.sqrt(2.0)
HADAMARD = np.array([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]], dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)


@dataclass(frozen=True)
class QubitRange:
    """A contiguous block of qubits [start, start+len)."""

    start: int
    len: int

    def qubits(self):
        return tuple(range(self.start, self.start + self.len))


class RngStream:
    """Seeded counter-based random stream (Philox) with explicit splitting.

    Identical seeds give bit-identical sample sequences.  split() derives
    independent child streams deterministically, so parallel shots can each
    own a stream without coordination.
    """

    def __init__(self, seed=None, _seq=None):
        self._seq = _seq if _seq is not None else np.random.SeedSequence(seed)
        self.generator = np.random.Generator(np.random.Philox(self._seq))

    def split(self, n):
        return [RngStream(_seq=s) for s in self._seq.spawn(n)]

    def child(self):
        return self.split(1)[0]

    # convenience passthroughs
    def uniform(self, *args, **kwargs):
        return self.generator.uniform(*args, **kwargs)

    def binomial(self, n, p):
        return self.generator.binomial(n, p)

    def multinomial(self, n, pvals):
        return self.generator.multinomial(n, pvals)


class Statevector:
    """Dense complex amplitude vector over n_qubits."""

    def __init__(self, n_qubits, amplitudes=None, check=True):
        self.n_qubits = int(n_qubits)
        dim = 1 << self.n_qubits
        if amplitudes is None:
            amps = np.zeros(dim, dtype=np.complex128)
            amps[0] = 1.0
        else:
            amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1).copy()
            if amps.size != dim:
                raise ValueError(f"expected {dim} amplitudes, got {amps.size}")
            if check:
                norm = np.sum(np.abs(amps) ** 2)
                if abs(norm - 1.0) > NORM_TOL:
                    raise ValueError(f"state not normalized: |amps|^2 = {norm}")
        self.amplitudes = amps

    @classmethod
    def zero(cls, n_qubits):
        return cls(n_qubits)

    def copy(self):
        out = Statevector.__new__(Statevector)
        out.n_qubits = self.n_qubits
        out.amplitudes = self.amplitudes.copy()
        return out

    def norm_sq(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def inner(self, other):
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2


def _as_qubits(reg):
    if isinstance(reg, QubitRange):
        return reg.qubits()
    return tuple(int(q) for q in reg)


def _check_qubits(state, qubits):
    for q in qubits:
        if not 0 <= q < state.n_qubits:
            raise ValueError(f"qubit {q} out of range for {state.n_qubits} qubits")


def _register_values(n_qubits, qubits):
    """For every basis index, the value held by the given register."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    val = np.zeros_like(idx)
    for pos, q in enumerate(qubits):
        val |= ((idx >> q) & 1) << pos
    return val


def apply_single_qubit(state, qubit, u):
    """Apply a 2x2 unitary to one qubit."""
    _check_qubits(state, (qubit,))
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (2, 2):
        raise ValueError("u must be 2x2")
    dev = np.linalg.norm(u.conj().T @ u - np.eye(2))
    if dev > UNITARY_TOL:
        raise ValueError(f"matrix is not unitary (Frobenius deviation {dev:.2e})")
    kernels.apply_ctrl_1q(state.amplitudes, state.n_qubits, 0, 0, qubit,
                          u[0, 0], u[0, 1], u[1, 0], u[1, 1])
    return state


def apply_ry(state, qubit, angle):
    c = np.cos(angle / 2.0)
    s = np.sin(angle / 2.0)
    kernels.apply_ctrl_1q(state.amplitudes, state.n_qubits, 0, 0, qubit,
                          c, -s, s, c)
    return state


def apply_cnot_layer(state, controls, targets):
    """Pairwise CNOTs control_i -> target_i; one depth layer."""
    controls = _as_qubits(controls)
    targets = _as_qubits(targets)
    if len(controls) != len(targets):
        raise ValueError("controls and targets must have equal length")
    if set(controls) & set(targets):
        raise ValueError("controls and targets overlap")
    _check_qubits(state, controls + targets)
    for c, t in zip(controls, targets):
        kernels.apply_ctrl_1q(state.amplitudes, state.n_qubits,
                              1 << c, 1 << c, t, 0.0, 1.0, 1.0, 0.0)
    return state


def apply_multi_controlled_x(state, controls, target):
    """X on target conditioned on every (qubit, polarity) control matching."""
    qubits = [q for q, _pol in controls]
    if len(set(qubits)) != len(qubits) or target in qubits:
        raise ValueError("duplicate qubit indices in multi-controlled X")
    _check_qubits(state, qubits + [target])
    mask = 0
    val = 0
    for q, pol in controls:
        mask |= 1 << q
        if pol:
            val |= 1 << q
    kernels.apply_ctrl_1q(state.amplitudes, state.n_qubits,
                          mask, val, target, 0.0, 1.0, 1.0, 0.0)
    return state


def controlled_swap(state, control, a, b):
    """Exchange registers a and b on the control=1 branch."""
    a = _as_qubits(a)
    b = _as_qubits(b)
    if len(a) != len(b):
        raise ValueError("register sizes differ")
    touched = set(a) | set(b)
    if len(a) + len(b) != len(touched) or control in touched:
        raise ValueError("overlapping registers in controlled swap")
    _check_qubits(state, list(touched) + [control])
    for qa, qb in zip(a, b):
        kernels.apply_cswap_pair(state.amplitudes, state.n_qubits,
                                 1 << control, 1 << control, qa, qb)
    return state


def marginal_probabilities(state, qubits):
    """Born probabilities of the register's 2^len outcomes."""
    qubits = _as_qubits(qubits)
    _check_qubits(state, qubits)
    vals = _register_values(state.n_qubits, qubits)
    probs = np.zeros(1 << len(qubits))
    np.add.at(probs, vals, np.abs(state.amplitudes) ** 2)
    return probs


def probability_of_bits(state, qubits, value):
    qubits = _as_qubits(qubits)
    _check_qubits(state, qubits)
    vals = _register_values(state.n_qubits, qubits)
    sel = vals == value
    return float(np.sum(np.abs(state.amplitudes[sel]) ** 2))


def project_bits(state, qubits, value):
    """Keep-width projection onto register == value, renormalized.

    Returns (probability, state); the input state is mutated.
    """
    qubits = _as_qubits(qubits)
    vals = _register_values(state.n_qubits, qubits)
    sel = vals == value
    prob = float(np.sum(np.abs(state.amplitudes[sel]) ** 2))
    if prob < ZERO_BRANCH_CUTOFF:
        raise ZeroBranchError(
            f"branch value={value} has probability {prob:.3e}")
    state.amplitudes[~sel] = 0.0
    state.amplitudes /= np.sqrt(prob)
    return prob, state


def measure(state, reg, rng):
    """Mid-circuit measurement of a register.

    Returns (outcome, collapsed, probability); the collapsed state keeps its
    full width, with the measured register left in the outcome basis state.
    """
    qubits = _as_qubits(reg)
    probs = marginal_probabilities(state, qubits)
    cum = np.cumsum(probs)
    u = rng.generator.random() * cum[-1]
    outcome = min(int(np.searchsorted(cum, u, side="right")), len(probs) - 1)
    prob, state = project_bits(state, qubits, outcome)
    return outcome, state, prob


def postselect(state, reg, value):
    """Condition on a contiguous register reading `value` and drop it.

    Returns (probability, renormalized) where the renormalized state spans
    the remaining qubits.
    """
    if not isinstance(reg, QubitRange):
        reg = QubitRange(int(reg[0]), len(tuple(reg)))
        if reg.qubits() != tuple(range(reg.start, reg.start + reg.len)):
            raise ValueError("postselect requires a contiguous register")
    if value >= (1 << reg.len):
        raise ValueError("value out of range for register")
    low = 1 << reg.start
    mid = 1 << reg.len
    high = 1 << (state.n_qubits - reg.start - reg.len)
    block = state.amplitudes.reshape(high, mid, low)[:, value, :]
    prob = float(np.sum(np.abs(block) ** 2))
    if prob < ZERO_BRANCH_CUTOFF:
        raise ZeroBranchError(f"branch value={value} has probability {prob:.3e}")
    reduced = Statevector.__new__(Statevector)
    reduced.n_qubits = state.n_qubits - reg.len
    reduced.amplitudes = (block / np.sqrt(prob)).reshape(-1).copy()
    return prob, reduced


def reset(state, reg, rng):
    """Measure the register and flip any 1s back to 0."""
    qubits = _as_qubits(reg)
    outcome, state, _prob = measure(state, qubits, rng)
    for pos, q in enumerate(qubits):
        if (outcome >> pos) & 1:
            apply_single_qubit(state, q, PAULI_X)
    return state


def sample_counts(state, shots, rng):
    """Seeded histogram over full basis outcomes."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = state.probabilities()
    draws = rng.multinomial(shots, probs / probs.sum())
    return {int(i): int(c) for i, c in enumerate(draws) if c > 0}


def sample_register_counts(state, qubits, shots, rng):
    probs = marginal_probabilities(state, qubits)
    draws = rng.multinomial(shots, probs / probs.sum())
    return {int(i): int(c) for i, c in enumerate(draws) if c > 0}


# ---------------------------------------------------------------------------
# Circuit representation
# ---------------------------------------------------------------------------

class Circuit:
    """A flat gate list over n_qubits.

    Gate tuples:
      ("u", qubit, (u00, u01, u10, u11))
      ("ry", qubit, angle)
      ("ucry", controls, target, angles)   -- uniformly controlled Ry;
          controls[0] carries the most-significant bit of the pattern index
      ("layer", controls, targets)         -- CNOT layer
      ("mcx", ((qubit, polarity), ...), target)
      ("cswap", control, regA, regB)
      ("measure", qubits, tag)
    """

    def __init__(self, n_qubits, gates=None):
        self.n_qubits = n_qubits
        self.gates = list(gates) if gates else []

    def u(self, qubit, mat):
        m = np.asarray(mat, dtype=complex)
        self.gates.append(("u", qubit, (m[0, 0], m[0, 1], m[1, 0], m[1, 1])))
        return self

    def ry(self, qubit, angle):
        self.gates.append(("ry", qubit, float(angle)))
        return self

    def h(self, qubit):
        return self.u(qubit, HADAMARD)

    def x(self, qubit):
        return self.u(qubit, PAULI_X)

    def ucry(self, controls, target, angles):
        self.gates.append(("ucry", tuple(controls), target,
                           tuple(float(a) for a in angles)))
        return self

    def cnot_layer(self, controls, targets):
        self.gates.append(("layer", _as_qubits(controls), _as_qubits(targets)))
        return self

    def mcx(self, controls, target):
        self.gates.append(("mcx", tuple((int(q), int(p)) for q, p in controls),
                           int(target)))
        return self

    def cswap(self, control, a, b):
        self.gates.append(("cswap", int(control), _as_qubits(a), _as_qubits(b)))
        return self

    def measure_reg(self, qubits, tag):
        self.gates.append(("measure", _as_qubits(qubits), tag))
        return self

    def extend(self, other):
        if other.n_qubits > self.n_qubits:
            raise ValueError("sub-circuit wider than target")
        self.gates.extend(other.gates)
        return self

    def is_unitary(self):
        return all(g[0] != "measure" for g in self.gates)

    def inverse(self):
        """Inverse of a measurement-free circuit."""
        inv = Circuit(self.n_qubits)
        for g in reversed(self.gates):
            kind = g[0]
            if kind == "u":
                u00, u01, u10, u11 = g[2]
                inv.gates.append(("u", g[1], (np.conj(u00), np.conj(u10),
                                              np.conj(u01), np.conj(u11))))
            elif kind == "ry":
                inv.gates.append(("ry", g[1], -g[2]))
            elif kind == "ucry":
                inv.gates.append(("ucry", g[1], g[2], tuple(-a for a in g[3])))
            elif kind in ("layer", "mcx", "cswap"):
                inv.gates.append(g)
            else:
                raise ValueError("cannot invert a circuit with measurements")
        return inv

    def remapped(self, qubit_map, n_qubits):
        """Copy with local qubit i renamed to qubit_map[i]."""
        m = list(qubit_map)
        out = Circuit(n_qubits)
        for g in self.gates:
            kind = g[0]
            if kind in ("u", "ry"):
                out.gates.append((kind, m[g[1]], g[2]))
            elif kind == "ucry":
                out.gates.append((kind, tuple(m[q] for q in g[1]), m[g[2]], g[3]))
            elif kind == "layer":
                out.gates.append((kind, tuple(m[q] for q in g[1]),
                                  tuple(m[q] for q in g[2])))
            elif kind == "mcx":
                out.gates.append((kind, tuple((m[q], p) for q, p in g[1]), m[g[2]]))
            elif kind == "cswap":
                out.gates.append((kind, m[g[1]], tuple(m[q] for q in g[2]),
                                  tuple(m[q] for q in g[3])))
            else:
                out.gates.append((kind, tuple(m[q] for q in g[1]), g[2]))
        return out

    def _apply_gate(self, state, gate):
        kind = gate[0]
        amps = state.amplitudes
        n = state.n_qubits
        if kind == "u":
            u00, u01, u10, u11 = gate[2]
            kernels.apply_ctrl_1q(amps, n, 0, 0, gate[1], u00, u01, u10, u11)
        elif kind == "ry":
            c = np.cos(gate[2] / 2.0)
            s = np.sin(gate[2] / 2.0)
            kernels.apply_ctrl_1q(amps, n, 0, 0, gate[1], c, -s, s, c)
        elif kind == "ucry":
            controls, target, angles = gate[1], gate[2], gate[3]
            nc = len(controls)
            mask = 0
            for q in controls:
                mask |= 1 << q
            for pattern, angle in enumerate(angles):
                val = 0
                for j, q in enumerate(controls):
                    if (pattern >> (nc - 1 - j)) & 1:
                        val |= 1 << q
                c = np.cos(angle / 2.0)
                s = np.sin(angle / 2.0)
                kernels.apply_ctrl_1q(amps, n, mask, val, target, c, -s, s, c)
        elif kind == "layer":
            for c, t in zip(gate[1], gate[2]):
                kernels.apply_ctrl_1q(amps, n, 1 << c, 1 << c, t,
                                      0.0, 1.0, 1.0, 0.0)
        elif kind == "mcx":
            mask = 0
            val = 0
            for q, pol in gate[1]:
                mask |= 1 << q
                if pol:
                    val |= 1 << q
            kernels.apply_ctrl_1q(amps, n, mask, val, gate[2],
                                  0.0, 1.0, 1.0, 0.0)
        elif kind == "cswap":
            control = gate[1]
            for qa, qb in zip(gate[2], gate[3]):
                kernels.apply_cswap_pair(amps, n, 1 << control, 1 << control,
                                         qa, qb)
        else:
            raise ValueError(f"unexpected gate in unitary application: {kind}")

    def apply_unitary(self, state):
        """Apply all gates; raises if the circuit contains measurements."""
        for g in self.gates:
            if g[0] == "measure":
                raise ValueError("circuit contains measurements")
            self._apply_gate(state, g)
        return state

    def run(self, state, rng, record=None):
        """Apply gates, sampling measurement outcomes into `record`."""
        for g in self.gates:
            if g[0] == "measure":
                outcome, state, prob = measure(state, g[1], rng)
                if record is not None:
                    record[g[2]] = (outcome, prob)
            else:
                self._apply_gate(state, g)
        return state
