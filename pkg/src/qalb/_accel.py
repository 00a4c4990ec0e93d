"""Grid collision kernels: compiled path plus a pure-numpy fallback.

Set QALB_PURE_NUMPY=1 to force the numpy path at call time.  Both paths
compute identical arithmetic per site; they are compared by
scripts/benchmark_collision.py.
"""

import os

import numpy as np

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


def active_backend():
    if _HAVE_NUMBA and os.environ.get("QALB_PURE_NUMPY") != "1":
        return "numba"
    return "numpy"


@njit(cache=True)
def _collide_numba(f, c, w, lam):
    nsites, Q = f.shape
    D = c.shape[1]
    u = np.empty(D)
    for s in range(nsites):
        rho = 0.0
        for i in range(Q):
            rho += f[s, i]
        for d in range(D):
            acc = 0.0
            for i in range(Q):
                acc += f[s, i] * c[i, d]
            u[d] = acc / rho
        uu = 0.0
        for d in range(D):
            uu += u[d] * u[d]
        for i in range(Q):
            cu = 0.0
            for d in range(D):
                cu += c[i, d] * u[d]
            feq = rho * w[i] * (1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * uu)
            f[s, i] = f[s, i] - lam * (f[s, i] - feq)


def _collide_numpy(f, c, w, lam):
    rho = f.sum(axis=1)
    u = (f @ c) / rho[:, None]
    cu = u @ c.T
    uu = np.einsum("sd,sd->s", u, u)
    feq = rho[:, None] * w[None, :] * (
        1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * uu[:, None]
    )
    f -= lam * (f - feq)


def grid_collide(f, c, w, lam):
    """Relax f (nsites, Q) toward local equilibrium in place."""
    if active_backend() == "numba":
        _collide_numba(f, c, w, lam)
    else:
        _collide_numpy(f, c, w, lam)
