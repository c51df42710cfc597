"""Quantum Hadamard Product circuits for k-th powers.

Two execution styles:

* no_mid_reset: k loaded registers combined by a balanced (left-heavy)
  pairing tree, ceil(lg k) CNOT rounds, all measurements deferred;
* mid_reset: a sequential chain of k-1 rounds.  Executed with real
  mid-circuit measurements (and dynamic stopping) the hardware picture
  needs only 2 registers for amplitude encoding; the deferred-measurement
  circuit built here keeps one register per load, which is unitarily
  equivalent because consumed registers are post-selected to |0>.

Conditional on every tagged register measuring 0, the surviving primary
register holds the normalized power state a_k * T_j^k.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import sim
from .encoding import build_tree, load_amplitude, load_boe
from .sim import Circuit, Statevector


@dataclass(frozen=True)
class PowerPlan:
    k: int
    style: str = "no_mid_reset"     # or "mid_reset"
    encoding: str = "amplitude"     # or "boe"
    s: int = 1                      # BOE split level

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1 (k=0 is the classical constant term)")
        if self.style not in ("mid_reset", "no_mid_reset"):
            raise ValueError(f"unknown style {self.style!r}")
        if self.encoding not in ("amplitude", "boe"):
            raise ValueError(f"unknown encoding {self.encoding!r}")


@dataclass
class QhpOutcome:
    success: bool
    rounds_executed: int   # QHP measurements actually performed
    loads: int             # serial loads m: t at the first failed round, k on success
    state: object = None   # surviving conditional state when requested


@dataclass
class PowerCircuit:
    plan: PowerPlan
    n: int                      # lg N
    block_width: int
    width: int
    circuit: Circuit
    survivor_primary: tuple     # global qubits, LSB first
    measured: list              # (round, global primary tuple) per consumed block
    rounds: int
    loader: object


def norm_constant_ak(series, k):
    """a_k = (sum_j values_j^{2k})^{-1/2}; a_1 = 1 for normalized input."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return float(np.sum(series.values ** (2 * k)) ** -0.5)


def success_probability(series, k):
    """Joint probability that every QHP measurement reads 0."""
    return norm_constant_ak(series, k) ** -2


def expected_loads(series, k):
    """Expected serial loads m(k) under dynamic stopping.

    Exact chain expectation: the first t rounds all succeed with
    probability a_{t+1}^{-2}, a shot failing at round t counts t loads,
    full success counts k.
    """
    if k == 1:
        return 1.0
    succ = [norm_constant_ak(series, t) ** -2 for t in range(1, k + 1)]
    # succ[t] = P(first t rounds succeed) = a_{t+1}^{-2}
    total = k * succ[k - 1]
    for t in range(1, k):
        total += t * (succ[t - 1] - succ[t])
    return total


def make_loader(series, encoding="amplitude", s=1):
    tree = build_tree(series)
    if encoding == "amplitude":
        return load_amplitude(tree)
    return load_boe(tree, s)


def build_power_circuit(plan, loader):
    """Assemble the deferred-measurement power circuit.

    The circuit is unitary; consumed primaries are listed in `measured`
    and are post-selected (or measured) by the caller.
    """
    k = plan.k
    bw = loader.width
    width = k * bw
    circ = Circuit(width)

    def block_map(b):
        return [b * bw + q for q in range(bw)]

    def primary(b):
        return tuple(b * bw + q for q in loader.primary)

    for b in range(k):
        circ.extend(loader.circuit.remapped(block_map(b), width))

    measured = []
    rounds = 0
    if plan.style == "mid_reset":
        for t in range(1, k):
            circ.cnot_layer(primary(0), primary(t))
            measured.append((t, primary(t)))
        rounds = k - 1
        survivor = 0
    else:
        active = list(range(k))
        while len(active) > 1:
            rounds += 1
            nxt = []
            for i in range(0, len(active) - 1, 2):
                c, t = active[i], active[i + 1]
                circ.cnot_layer(primary(c), primary(t))
                measured.append((rounds, primary(t)))
                nxt.append(c)
            if len(active) % 2 == 1:
                nxt.append(active[-1])
            active = nxt
        survivor = active[0]

    return PowerCircuit(plan=plan, n=loader.primary.__len__(),
                        block_width=bw, width=width, circuit=circ,
                        survivor_primary=primary(survivor),
                        measured=measured, rounds=rounds, loader=loader)


def postselected_power_state(pc):
    """(joint success probability, conditional state with full width)."""
    st = Statevector.zero(pc.width)
    pc.circuit.apply_unitary(st)
    prob = 1.0
    for _round, reg in pc.measured:
        p, st = sim.project_bits(st, reg, 0)
        prob *= p
    return prob, st


def survivor_amplitudes(pc, state):
    """Amplitudes of the surviving primary register (real part).

    Valid after post-selection, when the rest of an amplitude-encoded
    state is |0>.  For BOE use marginal probabilities instead.
    """
    vals = sim._register_values(state.n_qubits, pc.survivor_primary)
    out = np.zeros(1 << len(pc.survivor_primary), dtype=complex)
    np.add.at(out, vals, state.amplitudes)
    return out


def run_with_dynamic_stopping(plan, loader, shots, rng, keep_states=False):
    """Execute mid-reset QHP shots with per-shot abort on failure.

    Amplitude encoding runs on 2 registers, reloading the consumed one
    after each successful round.  Each shot draws from its own split
    random stream.
    """
    if plan.style != "mid_reset":
        raise ValueError("dynamic stopping requires the mid_reset style")
    k = plan.k
    bw = loader.width

    if plan.encoding == "amplitude":
        width = 2 * bw
        load_a = loader.circuit.remapped(list(range(bw)), width)
        load_b = loader.circuit.remapped(list(range(bw, 2 * bw)), width)
        prim_a = tuple(loader.primary)
        prim_b = tuple(q + bw for q in loader.primary)
        base = Statevector.zero(width)
        load_a.apply_unitary(base)
        streams = rng.split(shots)
        outcomes = []
        for stream in streams:
            st = base.copy()
            success = True
            rounds = 0
            loads = 1
            for t in range(1, k):
                load_b.apply_unitary(st)
                loads += 1
                sim.apply_cnot_layer(st, prim_a, prim_b)
                outcome, st, _p = sim.measure(st, prim_b, stream)
                rounds += 1
                if outcome != 0:
                    success = False
                    loads = t
                    break
                # consumed register is back to |0>, ready for the next load
            outcomes.append(QhpOutcome(success=success, rounds_executed=rounds,
                                       loads=loads,
                                       state=st if (keep_states and success) else None))
        return outcomes

    # BOE: sequential chain over k blocks; consumed side registers stay
    # (they are orthonormal junk), only primaries are measured.
    pc = build_power_circuit(plan, loader)
    streams = rng.split(shots)
    base = Statevector.zero(pc.width)
    for b in range(k):
        loader.circuit.remapped([b * bw + q for q in range(bw)], pc.width).apply_unitary(base)
    outcomes = []
    prim = [tuple(b * bw + q for q in loader.primary) for b in range(k)]
    for stream in streams:
        st = base.copy()
        success = True
        rounds = 0
        loads = 1
        for t in range(1, k):
            sim.apply_cnot_layer(st, prim[0], prim[t])
            outcome, st, _p = sim.measure(st, prim[t], stream)
            rounds += 1
            loads += 1
            if outcome != 0:
                success = False
                loads = t
                break
        outcomes.append(QhpOutcome(success=success, rounds_executed=rounds,
                                   loads=loads,
                                   state=st if (keep_states and success) else None))
    return outcomes


def width_formula(k, style, swap, n):
    """Register count r(k) lg N plus the swap ancilla when present."""
    delta = 1 if swap else 0
    r = 2 if style == "mid_reset" else k + delta
    return r * n + delta


def depth_bound(k, style, swap, n, c_load):
    """Upper bound m(k) C_load + k + (3 lg N + 1) delta."""
    delta = 1 if swap else 0
    m = (k + (1 - delta)) if style == "mid_reset" else (1 + (1 - delta))
    return m * c_load + k + (3 * n + 1) * delta
