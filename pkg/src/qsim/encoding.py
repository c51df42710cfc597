"""Classical normalization, binary-tree representations and state loaders.

Two loaders are provided:

* amplitude encoding: a vector of N positive values stored as amplitudes
  over lg N qubits, prepared by a top-down ladder of uniformly controlled
  Ry rotations driven by the angle tree;
* BOE: a bidirectional encoding with a split level s that trades depth for
  width.  The primary register carries the data amplitudes, every other
  qubit belongs to the side state, and a CNOT-copied register makes the
  side states orthonormal by construction.
"""

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AssumptionError
from .sim import Circuit

NORM_TOL = 1e-12


def validate_raw(values):
    """Check a raw series: finite entries, length a power of two >= 2."""
    arr = np.asarray(values, dtype=float).reshape(-1)
    n = arr.size
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"series length must be a power of two >= 2, got {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("series contains non-finite entries")
    return arr


@dataclass
class NormalizedSeries:
    values: np.ndarray
    rho: float
    eta: float
    mode: str  # "affine" or "sqrt"

    @property
    def n_qubits(self):
        return int(math.log2(self.values.size))

    def raw(self):
        """Invert the normalization."""
        if self.mode == "affine":
            return self.values / self.rho + self.eta
        return (self.values / self.rho) ** 2 + self.eta


def normalize_affine(raw, eta, require_positive=True):
    """values_j = rho * (raw_j - eta) with rho = (sum (raw-eta)^2)^(-1/2)."""
    arr = validate_raw(raw)
    shifted = arr - eta
    sq = float(np.sum(shifted**2))
    if sq <= 0.0:
        raise ValueError("all entries equal eta: zero norm")
    if require_positive and np.any(shifted <= 0.0):
        raise AssumptionError("normalized entries must be positive (shift eta below the data)")
    rho = 1.0 / math.sqrt(sq)
    return NormalizedSeries(values=rho * shifted, rho=rho, eta=float(eta), mode="affine")


def normalize_sqrt(raw, eta):
    """values_j = rho * sqrt(raw_j - eta) with rho = (sum (raw-eta))^(-1/2)."""
    arr = validate_raw(raw)
    shifted = arr - eta
    if np.any(shifted <= 0.0):
        raise AssumptionError("sqrt normalization requires raw_j - eta > 0")
    rho = 1.0 / math.sqrt(float(np.sum(shifted)))
    return NormalizedSeries(values=rho * np.sqrt(shifted), rho=rho,
                            eta=float(eta), mode="sqrt")


@dataclass
class StateDecompositionTree:
    """Bottom-up tree of subtree 2-norms; leaves are |values|.

    levels[0] is the root (length 1), levels[n] the leaves (length N).
    The derived angle at node (l, pos) is 2*atan2(right, left), so that
    Ry(angle)|0> splits the weight between the two children.
    """

    levels: list = field(default_factory=list)

    @property
    def n(self):
        return len(self.levels) - 1

    @property
    def leaves(self):
        return self.levels[-1]

    @property
    def root(self):
        return float(self.levels[0][0])

    def angles(self, level):
        child = self.levels[level + 1]
        return 2.0 * np.arctan2(child[1::2], child[0::2])

    def leaf_probabilities(self):
        root = self.root
        if root == 0.0:
            raise ValueError("zero tree")
        return (self.leaves / root) ** 2

    def to_dict(self):
        return {
            "levels": [list(map(float, lev)) for lev in self.levels],
            "angles": [list(map(float, self.angles(l))) for l in range(self.n)],
        }

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)


def build_tree(series_or_values):
    """Build the norm tree bottom-up from a NormalizedSeries or raw vector."""
    if isinstance(series_or_values, NormalizedSeries):
        vals = series_or_values.values
    else:
        vals = np.asarray(series_or_values, dtype=float).reshape(-1)
    level = np.abs(vals)
    levels = [level]
    while level.size > 1:
        level = np.hypot(level[0::2], level[1::2])
        levels.append(level)
    return StateDecompositionTree(levels=list(reversed(levels)))


class AmplitudeLoader:
    """Uniformly controlled Ry ladder preparing sum_j D_j |j>.

    Local qubit n-1 holds the most-significant bit of j.  The handle
    exposes both the loading circuit and its inverse for the ancilla-free
    inner-product method.
    """

    def __init__(self, tree):
        self.tree = tree
        self.n = tree.n
        self.width = self.n
        self.primary = tuple(range(self.n))  # LSB first
        circ = Circuit(self.n)
        for level in range(self.n):
            target = self.n - 1 - level
            controls = tuple(range(self.n - 1, target, -1))  # MSB first
            angles = tree.angles(level)
            if controls:
                circ.ucry(controls, target, angles)
            else:
                circ.ry(target, angles[0])
        self.circuit = circ

    def inverse(self):
        return self.circuit.inverse()

    def gate_count(self):
        return sum(len(g[3]) if g[0] == "ucry" else 1 for g in self.circuit.gates)

    def depth_layers(self):
        return self.n


@dataclass(frozen=True)
class BoeLayout:
    """Qubit bookkeeping for a BOE block (all indices local to the block).

    primary/copy are LSB-first: primary[i] carries bit i of the data index.
    """

    s: int
    n: int
    width: int
    primary: tuple
    copy: tuple
    amp_regs: tuple      # tuple of per-block amplitude register tuples
    node_qubits: tuple   # heap order: node (l, pos) -> 2^l - 1 + pos

    @property
    def side(self):
        prim = set(self.primary)
        return tuple(q for q in range(self.width) if q not in prim)


def boe_width(n_leaves, s):
    """(s+1) N 2^{-s} - 1 + lg N"""
    n = int(math.log2(n_leaves))
    return (s + 1) * n_leaves // (1 << s) - 1 + n


class BoeLoader:
    """BOE state-preparation circuit for split level s.

    Layout: M = N/2^s amplitude registers of s qubits each, M-1 tree-node
    qubits (one per internal node of the top tree over the blocks), and a
    lg N copy register.  The primary register is the leftmost spine of node
    qubits plus amplitude register 0; a CSWAP network routes the selected
    block onto it, and the copy register receives the primary via CNOTs so
    the side states are orthonormal.
    """

    def __init__(self, tree, s):
        n = tree.n
        if not 1 <= s <= n:
            raise ValueError(f"split level must be in [1, {n}], got {s}")
        self.tree = tree
        self.n = n
        self.s = s
        m = n - s                     # depth of the top tree
        M = 1 << m                    # number of blocks
        self.m = m
        self.M = M

        amp_regs = tuple(tuple(range(r * s, (r + 1) * s)) for r in range(M))
        node_base = M * s

        def node_q(level, pos):
            return node_base + ((1 << level) - 1) + pos

        node_qubits = tuple(node_q(l, p) for l in range(m) for p in range(1 << l))
        copy_base = node_base + (M - 1)
        copy = tuple(range(copy_base, copy_base + n))

        # primary bits: low s bits from amplitude register 0, then the
        # leftmost spine node of each level, bottom level first
        primary = list(amp_regs[0])
        for b in range(s, n):
            level = n - 1 - b
            primary.append(node_q(level, 0))
        primary = tuple(primary)

        width = boe_width(1 << n, s)
        assert width == copy_base + n

        circ = Circuit(width)
        # 1. unconditional rotations on every top-tree node qubit
        for level in range(m):
            angles = tree.angles(level)
            for pos in range(1 << level):
                circ.ry(node_q(level, pos), angles[pos])
        # 2. each block loads its (implicitly normalized) sub-vector
        for r in range(M):
            reg = amp_regs[r]
            for level in range(s):
                target = reg[s - 1 - level]
                controls = tuple(reg[s - 1 - j] for j in range(level))
                angles = tree.angles(m + level)[r * (1 << level):(r + 1) * (1 << level)]
                if controls:
                    circ.ucry(controls, target, angles)
                else:
                    circ.ry(target, angles[0])

        # 3. bottom-up CSWAP combine: route each selected branch onto the
        # left spine of its parent
        def spine(level, pos):
            if level == m:
                return list(amp_regs[pos])
            return [node_q(level, pos)] + spine(level + 1, 2 * pos)

        for level in range(m - 1, -1, -1):
            for pos in range(1 << level):
                a = spine(level + 1, 2 * pos)
                b = spine(level + 1, 2 * pos + 1)
                circ.cswap(node_q(level, pos), a, b)

        # 4. orthonormality: copy the primary register
        circ.cnot_layer(primary, copy)

        self.circuit = circ
        self.width = width
        self.primary = primary
        self.layout = BoeLayout(s=s, n=n, width=width, primary=primary,
                                copy=copy, amp_regs=amp_regs,
                                node_qubits=node_qubits)

    def inverse(self):
        return self.circuit.inverse()

    def depth_formula(self):
        """Closed-form depth of the construction (parallel schedule)."""
        n, s = self.n, self.s
        return (1 << s) + (n * n - n - s * s + s) // 2 + 1


def load_amplitude(tree):
    return AmplitudeLoader(tree)


def load_boe(tree, s):
    return BoeLoader(tree, s)


def side_state_matrix(state, layout, offset=0):
    """Matrix V with V[side_value, j] = amplitude of |j>_primary |side>.

    Columns, normalized, are the side states; their Gram matrix should be
    the identity for a proper BOE.  `offset` shifts the block within a
    wider state.
    """
    from .sim import _register_values

    prim = tuple(q + offset for q in layout.primary)
    side = tuple(q + offset for q in layout.side)
    pv = _register_values(state.n_qubits, prim)
    sv = _register_values(state.n_qubits, side)
    out = np.zeros((1 << len(side), 1 << len(prim)), dtype=complex)
    np.add.at(out, (sv, pv), state.amplitudes)
    return out


def read_series(path):
    """Load a raw series from CSV (one value per row) or a JSON array."""
    text_path = str(path)
    if text_path.endswith(".json"):
        with open(path) as fh:
            data = json.load(fh)
        return validate_raw(data)
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    return validate_raw([float(row[0]) for row in rows])
