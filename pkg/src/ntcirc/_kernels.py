"""Numba kernels for in-place statevector gate application.

Each kernel enumerates only the amplitude pairs a gate touches: a compact
index is expanded around the sorted bit positions of the target and control
qubits, then the control-value bits are OR-ed in. Every amplitude is written
exactly once per gate, so parallel execution is bit-identical to sequential.
"""
from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(parallel=True, cache=True)
def apply_x(psi, tbit, fixed_pos, cval):
    k = len(fixed_pos)
    npairs = psi.size >> k
    for c in prange(npairs):
        idx = np.int64(c)
        for f in range(k):
            pos = fixed_pos[f]
            idx = ((idx >> pos) << (pos + 1)) | (idx & ((np.int64(1) << pos) - 1))
        i = idx | cval
        j = i | tbit
        tmp = psi[i]
        psi[i] = psi[j]
        psi[j] = tmp


@njit(parallel=True, cache=True)
def apply_2x2(psi, tbit, fixed_pos, cval, m00, m01, m10, m11):
    k = len(fixed_pos)
    npairs = psi.size >> k
    for c in prange(npairs):
        idx = np.int64(c)
        for f in range(k):
            pos = fixed_pos[f]
            idx = ((idx >> pos) << (pos + 1)) | (idx & ((np.int64(1) << pos) - 1))
        i = idx | cval
        j = i | tbit
        a = psi[i]
        b = psi[j]
        psi[i] = m00 * a + m01 * b
        psi[j] = m10 * a + m11 * b


@njit(parallel=True, cache=True)
def apply_diag(psi, tbit, fixed_pos, cval, d0, d1):
    k = len(fixed_pos)
    npairs = psi.size >> k
    for c in prange(npairs):
        idx = np.int64(c)
        for f in range(k):
            pos = fixed_pos[f]
            idx = ((idx >> pos) << (pos + 1)) | (idx & ((np.int64(1) << pos) - 1))
        i = idx | cval
        j = i | tbit
        psi[i] = psi[i] * d0
        psi[j] = psi[j] * d1
