"""Transfer-matrix propagation kernels: compiled core with numpy fallback.

``propagate(q1, q2, h, E, longdouble=...)`` returns the 2x2 fundamental
matrix of u'' = (q(x) - E) u across len(q1) Magnus steps of size h, where
q1/q2 sample the potential at the two Gauss nodes of each step.  The
compiled (Cython) implementation is preferred when available; the numpy
fallback is mathematically identical.  ``BACKEND`` records which one is
active so benchmarks and logs can report it.
"""

from __future__ import annotations

import numpy as np

from . import _propagate_py

try:  # pragma: no cover - exercised implicitly by the import
    from . import _propagate_c

    _HAVE_C = True
except ImportError:  # pragma: no cover
    _propagate_c = None
    _HAVE_C = False

BACKEND = "cython" if _HAVE_C else "numpy"


def propagate(q1, q2, h, E, longdouble: bool = False) -> np.ndarray:
    q1 = np.ascontiguousarray(q1, dtype=np.float64)
    q2 = np.ascontiguousarray(q2, dtype=np.float64)
    if _HAVE_C:
        if longdouble:
            return _propagate_c.propagate_ld(q1, q2, float(h), float(E))
        return _propagate_c.propagate_d(q1, q2, float(h), float(E))
    return _propagate_py.propagate(q1, q2, float(h), float(E), longdouble=longdouble)


def propagate_python(q1, q2, h, E, longdouble: bool = False) -> np.ndarray:
    """Force the numpy implementation (for benchmarks and equivalence tests)."""
    return _propagate_py.propagate(
        np.asarray(q1, dtype=np.float64),
        np.asarray(q2, dtype=np.float64),
        float(h),
        float(E),
        longdouble=longdouble,
    )
