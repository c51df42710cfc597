"""Amplitude estimation: Grover oracles, canonical (phase-estimation) QAE
and iterative QAE, plus the variant (c)/(d) per-power estimators.

The Grover iterate is Q = (2|chi><chi| - I)(I - 2 P_good) with
|chi> = F|0>, realized as -F Z F^dag S_good.  Its eigenphases are +-2theta
with sin^2(theta) = z, so an m-qubit phase readout x maps to
z = sin^2(pi x / 2^m).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import beta as beta_dist

from . import qhp, sim
from .encoding import build_tree, load_amplitude
from .inner import InnerEstimate, phi_inverse
from .sim import Circuit, Statevector


class GroverOracle:
    """State preparation F = R(A x I) plus the derived reflections."""

    def __init__(self, prepare, good_qubit):
        if not prepare.is_unitary():
            raise ValueError("oracle preparation must be measurement-free")
        self.prepare = prepare
        self.good_qubit = good_qubit
        self.n_qubits = prepare.n_qubits
        self._inverse = prepare.inverse()
        self._last_power = None  # cache: (k, state) for monotone schedules

    def chi(self):
        st = Statevector.zero(self.n_qubits)
        self.prepare.apply_unitary(st)
        return st

    def z_exact(self):
        return self.flag_probability(self.chi())

    def flag_probability(self, state):
        return sim.probability_of_bits(state, (self.good_qubit,), 1)

    def _flip_good(self, state):
        q = self.good_qubit
        low = 1 << q
        high = 1 << (self.n_qubits - q - 1)
        state.amplitudes.reshape(high, 2, low)[:, 1, :] *= -1.0

    def grover(self, state):
        """Apply Q in place."""
        self._flip_good(state)
        self._inverse.apply_unitary(state)
        state.amplitudes[0] *= -1.0
        self.prepare.apply_unitary(state)
        state.amplitudes *= -1.0
        return state

    def state_after(self, k):
        """Q^k F|0>, advancing from the previous power when possible."""
        if self._last_power is None or self._last_power[0] > k:
            self._last_power = (0, self.chi())
        j, st = self._last_power
        while j < k:
            self.grover(st)
            j += 1
        self._last_power = (j, st)
        return st

    def flag_probability_after(self, k):
        return self.flag_probability(self.state_after(k))


@dataclass(frozen=True)
class QaeConfig:
    engine: str = "iqae"       # or "canonical"
    m: int = 6                 # eval qubits (canonical)
    medians: int = 1           # odd number of independent runs
    shots: int = 100           # shots per IQAE round / per canonical run

    def __post_init__(self):
        if self.medians < 1 or self.medians % 2 == 0:
            raise ValueError("medians must be odd and >= 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")


# ---------------------------------------------------------------------------
# Oracle builders
# ---------------------------------------------------------------------------

def build_oracle_variant_c(series_T, series_E, k):
    """QHP + ancilla-free oracle: flag on the all-zero state, z = y_k^2."""
    loader = qhp.make_loader(series_T)
    pc = qhp.build_power_circuit(qhp.PowerPlan(k=k), loader)
    e_loader = load_amplitude(build_tree(series_E))
    width = pc.width + 1
    flag = width - 1
    circ = Circuit(width)
    circ.extend(pc.circuit.remapped(list(range(pc.width)), width))
    circ.extend(e_loader.inverse().remapped(list(pc.survivor_primary), width))
    circ.mcx([(q, 0) for q in range(pc.width)], flag)
    return GroverOracle(circ, flag)


def build_oracles_variant_d(series_Tsqrt, series_Esqrt, k, s):
    """BOE + QHP + swap-test oracles.

    U flags QHP success and a good swap ancilla, z = (ytilde_k + atilde_k^-2)/2;
    U' flags QHP success alone, z' = atilde_k^-2.
    """
    loader = qhp.make_loader(series_Tsqrt, "boe", s)
    pc = qhp.build_power_circuit(qhp.PowerPlan(k=k, encoding="boe", s=s), loader)
    e_loader = qhp.make_loader(series_Esqrt, "boe", s)
    bw, ew = pc.width, e_loader.width
    width = bw + ew + 2
    anc = width - 2
    flag = width - 1

    def base_circuit():
        circ = Circuit(width)
        circ.extend(pc.circuit.remapped(list(range(bw)), width))
        circ.extend(e_loader.circuit.remapped(list(range(bw, bw + ew)), width))
        e_primary = tuple(q + bw for q in e_loader.primary)
        circ.h(anc)
        circ.cswap(anc, pc.survivor_primary, e_primary)
        circ.h(anc)
        return circ

    z_controls = [(q, 0) for _r, reg in pc.measured for q in reg]

    circ_u = base_circuit()
    circ_u.mcx(z_controls + [(anc, 0)], flag)
    oracle_u = GroverOracle(circ_u, flag)

    circ_up = base_circuit()
    if z_controls:
        circ_up.mcx(z_controls, flag)
    else:
        circ_up.x(flag)
    oracle_uprime = GroverOracle(circ_up, flag)
    return oracle_u, oracle_uprime


# ---------------------------------------------------------------------------
# Canonical QAE (phase estimation readout)
# ---------------------------------------------------------------------------

def _qpe_distribution(oracle, m):
    """Exact outcome distribution of an m-qubit phase estimation on Q."""
    dim = 1 << m
    states = np.empty((dim, 1 << oracle.n_qubits), dtype=complex)
    st = oracle.chi()
    states[0] = st.amplitudes
    for y in range(1, dim):
        oracle.grover(st)
        states[y] = st.amplitudes
    # amplitude(x, .) = 2^-m sum_y exp(-2 pi i x y / 2^m) Q^y |chi>
    amps = np.fft.fft(states, axis=0) / dim
    return np.sum(np.abs(amps) ** 2, axis=1)


def canonical_qae(oracle, m, medians, rng, shots_per_run=30):
    """Median over runs of the modal phase readout, mapped through
    z = sin^2(pi x / 2^m)."""
    probs = _qpe_distribution(oracle, m)
    probs = probs / probs.sum()
    estimates = []
    for _ in range(medians):
        counts = rng.multinomial(shots_per_run, probs)
        x = int(np.argmax(counts))
        estimates.append(math.sin(math.pi * x / (1 << m)) ** 2)
    z_hat = float(np.median(estimates))
    return z_hat, estimates


# ---------------------------------------------------------------------------
# Iterative QAE (Grinko et al. schedule, Clopper-Pearson intervals)
# ---------------------------------------------------------------------------

@dataclass
class IqaeResult:
    z_hat: float
    z_lo: float
    z_hi: float
    oracle_calls: int
    rounds: list = field(default_factory=list)


def _clopper_pearson(ones, total, alpha_fail):
    if total == 0:
        return 0.0, 1.0
    lo = 0.0 if ones == 0 else float(beta_dist.ppf(alpha_fail / 2, ones, total - ones + 1))
    hi = 1.0 if ones == total else float(beta_dist.ppf(1 - alpha_fail / 2, ones + 1, total - ones))
    return lo, hi


def _find_next_k(k, up, theta_l, theta_u, r=2):
    k_cur = 4 * k + 2
    theta_span = theta_u - theta_l
    if theta_span <= 0:
        return k, up
    k_max = int(math.floor(math.pi / theta_span))
    k_try = k_max - (k_max - 2) % 4
    while k_try >= r * k_cur:
        theta_min = (k_try * theta_l) % (2 * math.pi)
        theta_max = (k_try * theta_u) % (2 * math.pi)
        if theta_max <= math.pi and theta_min <= theta_max:
            return (k_try - 2) // 4, True
        if theta_min >= math.pi and theta_max >= theta_min:
            return (k_try - 2) // 4, False
        k_try -= 4
    return k, up


def iqae(oracle, epsilon, alpha, rng, shots_per_round=100, max_rounds=10000):
    """Iterative amplitude estimation.

    Returns an IqaeResult whose interval [z_lo, z_hi] contains z with
    confidence >= alpha; z_hat is the midpoint, |z_hat - z| <= epsilon.
    """
    if not 0 < epsilon < 0.5:
        raise ValueError("epsilon must be in (0, 0.5)")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    theta_l, theta_u = 0.0, math.pi / 2
    k = 0
    up = True
    t_rounds = max(1, math.ceil(math.log2(math.pi / (8 * epsilon))))
    alpha_fail = (1.0 - alpha) / t_rounds
    oracle_calls = 0
    rounds = []
    tallies = {}  # k -> [ones, total]

    def a_bounds():
        return math.sin(theta_l) ** 2, math.sin(theta_u) ** 2

    for _ in range(max_rounds):
        a_l, a_u = a_bounds()
        if a_u - a_l <= 2 * epsilon:
            break
        k, up = _find_next_k(k, up, theta_l, theta_u)
        big_k = 4 * k + 2
        p_exact = oracle.flag_probability_after(k)
        ones = int(rng.binomial(shots_per_round, min(max(p_exact, 0.0), 1.0)))
        tally = tallies.setdefault(k, [0, 0])
        tally[0] += ones
        tally[1] += shots_per_round
        oracle_calls += shots_per_round * (2 * k + 1)
        p_lo, p_hi = _clopper_pearson(tally[0], tally[1], alpha_fail)
        # invert p = (1 - cos(omega)) / 2 with omega = big_k * theta mod 2pi
        if up:
            omega_min = math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * p_lo)))
            omega_max = math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * p_hi)))
            omega_min, omega_max = min(omega_min, omega_max), max(omega_min, omega_max)
        else:
            omega_min = 2 * math.pi - math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * p_hi)))
            omega_max = 2 * math.pi - math.acos(max(-1.0, min(1.0, 1.0 - 2.0 * p_lo)))
        winding = math.floor(big_k * theta_l / (2 * math.pi))
        new_l = (2 * math.pi * winding + omega_min) / big_k
        new_u = (2 * math.pi * winding + omega_max) / big_k
        if new_u >= new_l:
            theta_l = max(theta_l, new_l)
            theta_u = min(theta_u, max(new_u, theta_l))
        rounds.append({"k": k, "shots": shots_per_round, "ones": ones,
                       "theta_l": theta_l, "theta_u": theta_u})

    a_l, a_u = a_bounds()
    return IqaeResult(z_hat=(a_l + a_u) / 2.0, z_lo=a_l, z_hi=a_u,
                      oracle_calls=oracle_calls, rounds=rounds)


def _iqae_median(oracle, epsilon, alpha, medians, rng, shots_per_round):
    zs = []
    calls = 0
    for _ in range(medians):
        res = iqae(oracle, epsilon, alpha, rng, shots_per_round=shots_per_round)
        zs.append(res.z_hat)
        calls += res.oracle_calls
    return float(np.median(zs)), calls


# ---------------------------------------------------------------------------
# Variant estimators
# ---------------------------------------------------------------------------

PILOT_EPSILON = 0.05
PILOT_ALPHA = 0.7
PILOT_SHOTS = 32


def estimate_yk_variant_c(series_T, series_E, k, epsilon, alpha, config, rng):
    """Variant (c): y_k = sqrt(z) with z from amplitude estimation.

    The requested accuracy on y is converted to an amplitude accuracy
    eps_z = epsilon * max(y_pilot, epsilon), where y_pilot comes from a
    short warm-up IQAE run.
    """
    oracle = build_oracle_variant_c(series_T, series_E, k)
    calls = 0
    if config.engine == "canonical":
        z_hat, _runs = canonical_qae(oracle, config.m, config.medians, rng,
                                     shots_per_run=config.shots)
        calls = config.medians * ((1 << config.m) - 1)
    else:
        pilot = iqae(oracle, max(PILOT_EPSILON, epsilon / 2), PILOT_ALPHA, rng,
                     shots_per_round=PILOT_SHOTS)
        calls += pilot.oracle_calls
        y_pilot = math.sqrt(max(pilot.z_hat, 0.0))
        eps_z = min(0.45, epsilon * max(y_pilot, epsilon))
        z_hat, c = _iqae_median(oracle, eps_z, alpha, config.medians, rng,
                                config.shots)
        calls += c
    y = math.sqrt(max(z_hat, 0.0))
    scale = series_T.rho ** -k * series_E.rho ** -1
    return InnerEstimate(y_hat=y, y_prime_hat=scale * y, shots_used=calls,
                         tallies={"z_hat": z_hat, "oracle_calls": calls,
                                  "z_exact": oracle.z_exact()},
                         method="variant_c", epsilon=epsilon, alpha=alpha)


def estimate_ytilde_variant_d(series_Tsqrt, series_Esqrt, k, s, epsilon, alpha,
                              config, rng):
    """Variant (d): ytilde_k = 2z - z', each amplitude estimated at eps/2."""
    oracle_u, oracle_up = build_oracles_variant_d(series_Tsqrt, series_Esqrt, k, s)
    eps_half = min(0.45, epsilon / 2.0)
    if config.engine == "canonical":
        z_hat, _ = canonical_qae(oracle_u, config.m, config.medians, rng,
                                 shots_per_run=config.shots)
        zp_hat, _ = canonical_qae(oracle_up, config.m, config.medians, rng,
                                  shots_per_run=config.shots)
        calls = 2 * config.medians * ((1 << config.m) - 1)
    else:
        z_hat, c1 = _iqae_median(oracle_u, eps_half, alpha, config.medians, rng,
                                 config.shots)
        zp_hat, c2 = _iqae_median(oracle_up, eps_half, alpha, config.medians, rng,
                                  config.shots)
        calls = c1 + c2
    y_tilde = 2.0 * z_hat - zp_hat
    scale = series_Tsqrt.rho ** (-2 * k) * series_Esqrt.rho ** -2
    return InnerEstimate(y_hat=float(y_tilde), y_prime_hat=float(scale * y_tilde),
                         shots_used=calls,
                         tallies={"z_hat": z_hat, "z_prime_hat": zp_hat,
                                  "z_exact": oracle_u.z_exact(),
                                  "z_prime_exact": oracle_up.z_exact()},
                         method="variant_d", epsilon=epsilon, alpha=alpha)
