"""Pure NumPy gate kernels.

Fallback implementation used when the compiled extension is unavailable
(or when QSIM_KERNELS=python is set).  Both backends expose the same two
primitives; everything else in the simulator is built on top of them.

Convention: qubit 0 is the least-significant bit of the basis index.
"""

import numpy as np


def _free_indices(n_qubits, fixed_mask, fixed_val):
    """Indices i in [0, 2^n) with i & fixed_mask == fixed_val."""
    idx = np.array([fixed_val], dtype=np.int64)
    for b in range(n_qubits):
        bit = 1 << b
        if fixed_mask & bit:
            continue
        idx = np.concatenate([idx, idx | bit])
    return idx


def apply_ctrl_1q(amps, n_qubits, ctrl_mask, ctrl_val, target, u00, u01, u10, u11):
    """Apply a 2x2 matrix to `target` on the subspace where the control
    bits (ctrl_mask) equal ctrl_val.  ctrl_mask == 0 gives a plain
    single-qubit gate.  Operates in place.
    """
    tbit = 1 << target
    i0 = _free_indices(n_qubits, ctrl_mask | tbit, ctrl_val)
    i1 = i0 | tbit
    a0 = amps[i0]
    a1 = amps[i1]
    amps[i0] = u00 * a0 + u01 * a1
    amps[i1] = u10 * a0 + u11 * a1


def apply_cswap_pair(amps, n_qubits, ctrl_mask, ctrl_val, qa, qb):
    """Swap qubits qa and qb on the subspace selected by the control bits.

    A controlled register swap is a product of these pairwise swaps.
    """
    abit = 1 << qa
    bbit = 1 << qb
    i0 = _free_indices(n_qubits, ctrl_mask | abit | bbit, ctrl_val | abit)
    i1 = (i0 ^ abit) | bbit
    tmp = amps[i0].copy()
    amps[i0] = amps[i1]
    amps[i1] = tmp
