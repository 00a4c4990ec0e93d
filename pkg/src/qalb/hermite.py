"""Orthogonal polynomials of the Gaussian weight cut to [-z, z].

The recurrence coefficients gamma_n have no closed form on a finite
window; they come from high-precision moment quadrature and Gram-Schmidt
on monomials, and they satisfy a family of Laguerre-Freud relations that
the tests pin down.  As z grows the window stops mattering and
gamma_n -> n/2, the full-line Hermite value.
"""

from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import QuadratureFailure, SingularCoefficient, TooLarge

_MAX_N = 20


@dataclass(frozen=True)
class TruncatedHermiteBasis:
    """Monic orthogonal family P_{n+1} = x P_n - gamma_n P_{n-1} on the
    window [-z, z]; gammas holds gamma_1..gamma_nmax."""

    z: float
    gammas: tuple
    nmax: int

    def __post_init__(self):
        if self.z <= 0.0:
            raise ValueError(f"z must be positive, got {self.z}")
        if self.nmax < 1:
            raise ValueError(f"nmax must be >= 1, got {self.nmax}")
        if len(self.gammas) != self.nmax:
            raise ValueError(
                f"expected {self.nmax} coefficients, got {len(self.gammas)}"
            )
        if any(g <= 0.0 for g in self.gammas):
            raise ValueError("every gamma_n must be positive")


def window_moments(z, kmax, dps=50, tol=1e-12):
    """Moments m_k = int_{-z}^{z} x^k e^{-x^2} dx as floats."""
    if z <= 0.0:
        raise ValueError(f"z must be positive, got {z}")
    out = []
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        for k in range(kmax + 1):
            val, err = mpmath.quad(
                lambda x, k=k: x ** k * mpmath.e ** (-x * x),
                [-zz, 0, zz],
                error=True,
            )
            if abs(err) > tol:
                raise QuadratureFailure(
                    f"moment {k}: quadrature error {err} exceeds {tol}"
                )
            out.append(val)
    return np.array([float(v) for v in out])


def gamma_sequence_oracle(z, nmax, dps=50, tol=1e-12):
    """gamma_1..gamma_nmax by brute force: quadrature moments, then
    Gram-Schmidt on the monomials, then norm ratios
    gamma_n = <P_n, P_n> / <P_{n-1}, P_{n-1}>."""
    if nmax < 1:
        raise ValueError(f"nmax must be >= 1, got {nmax}")
    if nmax > _MAX_N:
        raise TooLarge(f"nmax {nmax} exceeds {_MAX_N}")
    if z <= 0.0:
        raise ValueError(f"z must be positive, got {z}")
    with mpmath.workdps(dps):
        zz = mpmath.mpf(z)
        moments = []
        for k in range(2 * nmax + 1):
            val, err = mpmath.quad(
                lambda x, k=k: x ** k * mpmath.e ** (-x * x),
                [-zz, 0, zz],
                error=True,
            )
            if abs(err) > tol:
                raise QuadratureFailure(
                    f"moment {k}: quadrature error {err} exceeds {tol}"
                )
            moments.append(val)

        def inner(p, q):
            acc = mpmath.mpf(0)
            for i, pi in enumerate(p):
                if pi == 0:
                    continue
                for j, qj in enumerate(q):
                    if qj == 0:
                        continue
                    acc += pi * qj * moments[i + j]
            return acc

        polys = [[mpmath.mpf(1)]]  # P_0
        norms = [inner(polys[0], polys[0])]
        for k in range(1, nmax + 1):
            mono = [mpmath.mpf(0)] * k + [mpmath.mpf(1)]  # x^k
            cur = list(mono)
            for j, pj in enumerate(polys):
                coef = inner(mono, pj) / norms[j]
                for i, c in enumerate(pj):
                    cur[i] -= coef * c
            polys.append(cur)
            norms.append(inner(cur, cur))
        gams = [float(norms[n] / norms[n - 1]) for n in range(1, nmax + 1)]
    return np.array(gams)


def build_basis(z=1.0, nmax=8, dps=50, tol=1e-12):
    """Basis with oracle coefficients; z defaults to the unit window."""
    gams = gamma_sequence_oracle(z, nmax, dps=dps, tol=tol)
    return TruncatedHermiteBasis(
        z=float(z), gammas=tuple(float(g) for g in gams), nmax=int(nmax)
    )


def _gamma(gams, n):
    # gamma_0 multiplies P_{-1} = 0 in the recurrence; 0 is the value
    # under which the Laguerre-Freud identities extend to n = 1.
    if n == 0:
        return 0.0
    if n < 1 or n > len(gams):
        raise ValueError(f"gamma_{n} not available (have 1..{len(gams)})")
    return float(gams[n - 1])


def _evaluate(gams, n, x):
    """P_n(x) from the three-term recurrence; gams holds gamma_1.. ."""
    if n > len(gams) + 1:
        raise ValueError(f"need gamma_1..gamma_{n - 1}, got {len(gams)}")
    x = np.asarray(x, dtype=float)
    pm = np.ones_like(x)  # P_0
    if n == 0:
        return pm
    p = x.copy()  # P_1
    for k in range(1, n):
        pm, p = p, x * p - gams[k - 1] * pm
    return p


def _evaluate_with_derivative(gams, n, x):
    """(P_n, P_n') jointly; the derivative uses the differentiated
    recurrence P'_{n+1} = P_n + x P'_n - gamma_n P'_{n-1}, never finite
    differences."""
    if n > len(gams) + 1:
        raise ValueError(f"need gamma_1..gamma_{n - 1}, got {len(gams)}")
    x = np.asarray(x, dtype=float)
    pm = np.ones_like(x)
    dm = np.zeros_like(x)
    if n == 0:
        return pm, dm
    p = x.copy()
    d = np.ones_like(x)
    for k in range(1, n):
        pm, p, dm, d = (
            p,
            x * p - gams[k - 1] * pm,
            d,
            p + x * d - gams[k - 1] * dm,
        )
    return p, d


def poly_eval(basis, n, x):
    """P_n at x (scalar or array) from the basis coefficients."""
    if n < 0 or n > basis.nmax:
        raise ValueError(f"n must lie in 0..{basis.nmax}, got {n}")
    return _evaluate(basis.gammas, n, x)


def laguerre_freud_residual_1(gams, z, n):
    """Residual of z^2/2 = gamma_n (gamma_{n-1} + gamma_n - z^2 + 1/2 - n)
    - gamma_{n+1} (gamma_{n+1} + gamma_{n+2} - z^2 - n - 3/2)."""
    gm1, g, gp1, gp2 = (
        _gamma(gams, n - 1),
        _gamma(gams, n),
        _gamma(gams, n + 1),
        _gamma(gams, n + 2),
    )
    rhs = g * (gm1 + g - z * z + 0.5 - n) - gp1 * (
        gp1 + gp2 - z * z - n - 1.5
    )
    return z * z / 2.0 - rhs


def laguerre_freud_residual_g(gams, z, n):
    """Residual of (n/2 - g_n)(g_n + g_{n+1})(g_n + g_{n-1}) = z^2 g_n^2
    with g_n = n/2 - gamma_n."""
    gn = n / 2.0 - _gamma(gams, n)
    gp = (n + 1) / 2.0 - _gamma(gams, n + 1)
    gm = (n - 1) / 2.0 - _gamma(gams, n - 1)
    return (n / 2.0 - gn) * (gn + gp) * (gn + gm) - z * z * gn * gn


@dataclass
class LaguerreFreudReport:
    ns: tuple
    form1: np.ndarray
    gform: np.ndarray
    max_residual: float


def gamma_laguerre_freud_check(gammas, z):
    """Residuals of both recurrence-coefficient identities on a gamma
    sequence, for every n they can reach (form 1 needs gamma_{n+2})."""
    gams = np.asarray(gammas, dtype=float)
    if len(gams) < 4:
        raise ValueError(f"need at least 4 coefficients, got {len(gams)}")
    ns = tuple(range(1, len(gams) - 1))
    form1 = np.array([laguerre_freud_residual_1(gams, z, n) for n in ns])
    gform = np.array([laguerre_freud_residual_g(gams, z, n) for n in ns])
    return LaguerreFreudReport(
        ns=ns,
        form1=form1,
        gform=gform,
        max_residual=float(
            max(np.max(np.abs(form1)), np.max(np.abs(gform)))
        ),
    )


def lowering_check(basis, n, xs):
    """|U P_n - P_{n-1}| at the sample points, where U = A d/dx - B lowers
    the degree by one.

    A = (x^2 - z^2) / (2 gamma_n C), B = (n - 2 gamma_n) x / (2 gamma_n C)
    with C = x^2 - z^2 + gamma_n + gamma_{n+1} - n - 1/2.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    x = np.asarray(xs, dtype=float)
    z = basis.z
    gams = basis.gammas
    g = _gamma(gams, n)
    gp1 = _gamma(gams, n + 1)
    C = x * x - z * z + g + gp1 - n - 0.5
    if np.any(np.abs(C) < 1e-10):
        raise SingularCoefficient(
            "lowering coefficient vanishes at an evaluation point"
        )
    A = (x * x - z * z) / (2.0 * g * C)
    B = (n - 2.0 * g) * x / (2.0 * g * C)
    p, d = _evaluate_with_derivative(gams, n, x)
    return np.abs(A * d - B * p - _evaluate(gams, n - 1, x))


def diff_recurrence_check(basis, n, xs):
    """Residual of (x^2 - z^2) P'_{n+1} = (n+1) P_{n+2} + lam_n P_n
    + tau_n P_{n-2} at the sample points, with
    lam_n = (2 (gamma_n + gamma_{n+1} + gamma_{n+2} - z^2 - 1) - n)
    gamma_{n+1} and tau_n = 2 gamma_{n+1} gamma_n gamma_{n-1}."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    x = np.asarray(xs, dtype=float)
    z = basis.z
    gams = basis.gammas
    g = _gamma(gams, n)
    gp1 = _gamma(gams, n + 1)
    gp2 = _gamma(gams, n + 2)
    gm1 = _gamma(gams, n - 1)
    lam = (2.0 * (g + gp1 + gp2 - z * z - 1.0) - n) * gp1
    tau = 2.0 * gp1 * g * gm1
    _, dp1 = _evaluate_with_derivative(gams, n + 1, x)
    lhs = (x * x - z * z) * dp1
    rhs = (
        (n + 1) * _evaluate(gams, n + 2, x)
        + lam * _evaluate(gams, n, x)
        + tau * _evaluate(gams, n - 2, x)
    )
    return np.abs(lhs - rhs)
