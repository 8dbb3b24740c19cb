"""Pure-numpy fallback for the transfer-matrix propagation kernel.

Same fourth-order Magnus scheme as the compiled version: per step of size h
with potential samples q1, q2 at the two Gauss-Legendre nodes, the exact
exponential of

    Omega = [[a, h], [h fbar, -a]],   a = (sqrt(3)/12) h^2 (f1 - f2),
    f_i = q_i - E,  fbar = (f1 + f2)/2,

is cosh(s) I + sinh(s)/s Omega with s^2 = a^2 + h^2 fbar.  All step
matrices are built vectorized, then combined by pairwise (logarithmic)
reduction, which keeps numpy overhead per step negligible and has slightly
better rounding than a sequential product.
"""

from __future__ import annotations

import numpy as np

_SQRT3_12 = np.sqrt(3.0) / 12.0


def _step_matrices(q1, q2, h, E, dtype):
    q1 = np.asarray(q1, dtype=dtype)
    q2 = np.asarray(q2, dtype=dtype)
    h = dtype(h)
    E = dtype(E)
    f1 = q1 - E
    f2 = q2 - E
    a = dtype(_SQRT3_12) * h * h * (f1 - f2)
    hf = h * (f1 + f2) / dtype(2)
    z = a * a + h * hf
    c = np.empty_like(z)
    sl = np.empty_like(z)
    pos = z > 0
    neg = z < 0
    zero = ~(pos | neg)
    sp = np.sqrt(z[pos])
    c[pos] = np.cosh(sp)
    sl[pos] = np.sinh(sp) / sp
    sn = np.sqrt(-z[neg])
    c[neg] = np.cos(sn)
    sl[neg] = np.sin(sn) / sn
    c[zero] = 1
    sl[zero] = 1
    M = np.empty(z.shape + (2, 2), dtype=dtype)
    M[:, 0, 0] = c + sl * a
    M[:, 0, 1] = sl * h
    M[:, 1, 0] = sl * hf
    M[:, 1, 1] = c - sl * a
    return M


def _pairwise_product(M):
    """Ordered product M[n-1] @ ... @ M[0] by pairwise reduction."""
    while M.shape[0] > 1:
        n = M.shape[0]
        even = M[0 : n - n % 2]
        pairs = np.einsum("nij,njk->nik", even[1::2], even[0::2])
        if n % 2:
            M = np.concatenate([pairs, M[-1:]], axis=0)
        else:
            M = pairs
    return M[0]


def propagate(q1, q2, h, E, longdouble=False):
    """Fundamental 2x2 transfer matrix of u'' = (q(x) - E) u over the sampled steps."""
    dtype = np.longdouble if longdouble else np.float64
    M = _step_matrices(q1, q2, h, E, dtype)
    return _pairwise_product(M)
