"""Compiled inner loops.

Both kernels sum exponentials whose phases advance by a constant step, so a
single complex exponential per output seeds a multiplicative recurrence.
"""
import numpy as np
from numba import njit


@njit(cache=True)
def geometric_sum_real(x, w, step):
    """``2 Re sum_k w[k] exp(2 pi i (k + 1) step x)`` for each ``x``."""
    out = np.empty(x.size)
    for i in range(x.size):
        ph = 2.0 * np.pi * step * abs(x[i])
        z1 = np.exp(1j * ph)
        z = z1
        acc = 0j
        for k in range(w.size):
            acc += w[k] * z
            z *= z1
        out[i] = 2.0 * acc.real
    return out


@njit(cache=True)
def sheared_phase_sum(tau, v, H, b20, db2, n2):
    """``K[t, j] = sum_v H[t, v] exp(2 pi i tau_t v (b20 + j db2))``."""
    nt, nv = H.shape
    K = np.zeros((nt, n2), np.complex128)
    for it in range(nt):
        for iv in range(nv):
            h = H[it, iv]
            if h == 0:
                continue
            ph = 2.0 * np.pi * tau[it] * v[iv]
            z = h * complex(np.cos(ph * b20), np.sin(ph * b20))
            st = complex(np.cos(ph * db2), np.sin(ph * db2))
            for j in range(n2):
                K[it, j] += z
                z *= st
    return K
