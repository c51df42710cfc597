# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled gate kernels.

Same contract as _kernels_py: in-place updates of a complex128 amplitude
array, qubit 0 = least-significant bit of the basis index.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()


def apply_ctrl_1q(cnp.ndarray[cnp.complex128_t, ndim=1] amps,
                  int n_qubits,
                  long long ctrl_mask, long long ctrl_val, int target,
                  double complex u00, double complex u01,
                  double complex u10, double complex u11):
    cdef long long dim = amps.shape[0]
    cdef long long tbit = 1LL << target
    cdef long long mask = ctrl_mask | tbit
    cdef long long want = ctrl_val  # target bit 0 in the selected rows
    cdef long long i
    cdef double complex a0, a1
    for i in range(dim):
        if (i & mask) == want:
            a0 = amps[i]
            a1 = amps[i | tbit]
            amps[i] = u00 * a0 + u01 * a1
            amps[i | tbit] = u10 * a0 + u11 * a1


def apply_cswap_pair(cnp.ndarray[cnp.complex128_t, ndim=1] amps,
                     int n_qubits,
                     long long ctrl_mask, long long ctrl_val,
                     int qa, int qb):
    cdef long long dim = amps.shape[0]
    cdef long long abit = 1LL << qa
    cdef long long bbit = 1LL << qb
    cdef long long mask = ctrl_mask | abit | bbit
    cdef long long want = ctrl_val | abit  # qa=1, qb=0 rows; partner has qa=0, qb=1
    cdef long long i, j
    cdef double complex tmp
    for i in range(dim):
        if (i & mask) == want:
            j = (i ^ abit) | bbit
            tmp = amps[i]
            amps[i] = amps[j]
            amps[j] = tmp
