"""Carleman embedding of quadratic collision dynamics.

The logistic scalar problem df/dt = -a f + b f^2 is the exactly solvable
probe: its monomial chain d(f^k)/dt = -k a f^k + k b f^(k+1) closes only in
the limit, and truncating at a finite order leaves an upper bidiagonal
system whose first component converges to the true solution as the order
grows.  The same construction applied to a vector of populations with a
quadratic driving polynomial gives the general linearization, and the
homogeneous D1Q3 relaxation closes exactly at order two because the
momentum enters the equilibrium only through a conserved square.
"""

from dataclasses import dataclass, field
from math import inf, log

import numpy as np

from .errors import OmegaOutOfRange, SingularTime, TooLarge
from .lattice import mode_coupling
from .linalg import expm

_MAX_VARS = 9
_MAX_DEGREE = 3
_MAX_ORDER = 4


@dataclass(frozen=True)
class LogisticParams:
    """Rates and initial value for df/dt = -a f + b f^2."""

    a: float
    b: float
    f0: float

    def __post_init__(self):
        if self.a <= 0.0 or self.b <= 0.0:
            raise ValueError(
                f"rates must be positive, got a={self.a}, b={self.b}"
            )

    @property
    def K(self):
        """Fixed point a/b separating decay from blow-up."""
        return self.a / self.b

    @property
    def R(self):
        """Inverse fixed point b/a; R*f0 is the blow-up proximity knob."""
        return self.b / self.a


def singular_time(p):
    """Blow-up time of the logistic solution, inf when none exists.

    The solution escapes in finite time only when f0 exceeds the fixed
    point K = a/b; for f0 >> K the product a * t_singular behaves like
    K / f0.
    """
    if p.f0 <= p.K:
        return inf
    return -log(1.0 - p.K / p.f0) / p.a


def logistic_exact(p, t):
    """Closed-form solution f0 e^{-at} / (1 - (f0/K)(1 - e^{-at}))."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0.0):
        raise ValueError("time must be non-negative")
    ts = singular_time(p)
    if np.any(t_arr >= ts):
        est = p.K / p.f0 / p.a
        raise SingularTime(
            f"solution blows up at t = {ts:.6g} (small-ratio estimate "
            f"K/(a f0) = {est:.6g}); cannot evaluate at t >= {ts:.6g}",
            t_singular=ts,
        )
    e = np.exp(-p.a * t_arr)
    out = p.f0 * e / (1.0 - (p.f0 / p.K) * (1.0 - e))
    return float(out) if np.isscalar(t) else out


def _exponents(total, nvars):
    if nvars == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _exponents(total - first, nvars - 1):
            yield (first,) + rest


def monomial_basis(nvars, order):
    """All exponent tuples of total degree 1..order, graded then
    lexicographic with the first variable ranked highest."""
    basis = []
    for deg in range(1, order + 1):
        basis.extend(_exponents(deg, nvars))
    return basis


@dataclass(frozen=True)
class CarlemanSystem:
    """Linear truncation dV/dt = C V on monomials of degree 1..order."""

    order: int
    variables: tuple  # exponent tuples indexing rows and columns of C
    C: np.ndarray = field(repr=False)

    @property
    def nvars(self):
        return len(self.variables[0])

    def initial_state(self, f0):
        """Monomial lift of a point: V_e(0) = prod_i f0_i^e_i."""
        f0 = np.atleast_1d(np.asarray(f0, dtype=float))
        if f0.shape != (self.nvars,):
            raise ValueError(
                f"initial point must have shape ({self.nvars},), got {f0.shape}"
            )
        return np.array(
            [np.prod(f0 ** np.array(e)) for e in self.variables], dtype=float
        )


def logistic_carleman_chain(p, kmax):
    """Truncated monomial chain of the logistic problem.

    Variables are f^1..f^kmax; the generator is upper bidiagonal with
    diagonal -k a and superdiagonal k b, the k-th row losing its f^{k+1}
    feed when k = kmax.
    """
    if kmax < 1:
        raise ValueError(f"truncation order must be >= 1, got {kmax}")
    C = np.zeros((kmax, kmax))
    for k in range(1, kmax + 1):
        C[k - 1, k - 1] = -k * p.a
        if k < kmax:
            C[k - 1, k] = k * p.b
    variables = tuple((k,) for k in range(1, kmax + 1))
    return CarlemanSystem(order=kmax, variables=variables, C=C)


def evolve_system(system, state0, dt, steps, method="exact"):
    """March dV/dt = C V and return the (steps+1, nvariables) history.

    method "exact" applies the one-step propagator expm(C dt), so the only
    error against the underlying nonlinear problem is the truncation of
    the monomial hierarchy; "euler" uses the first-order update
    V + dt C V and adds time-discretization error on top.
    """
    state = np.asarray(state0, dtype=float)
    n = system.C.shape[0]
    if state.shape != (n,):
        raise ValueError(f"state must have shape ({n},), got {state.shape}")
    hist = np.empty((steps + 1, n))
    hist[0] = state
    if method == "exact":
        P = expm(system.C * dt)
        for k in range(1, steps + 1):
            state = P @ state
            hist[k] = state
    elif method == "euler":
        for k in range(1, steps + 1):
            state = state + dt * (system.C @ state)
            hist[k] = state
    else:
        raise ValueError(f"unknown method {method!r}")
    return hist


def logistic_order_sweep(p, orders, dt, steps, method="exact"):
    """Leading-component trajectories of the truncated chain per order.

    Returns (times, dict order -> f(t) series); feeding the curves of
    successive truncation orders to the exact solution exhibits the
    order-by-order error decrease away from the blow-up regime.
    """
    times = np.arange(steps + 1) * dt
    curves = {}
    for kmax in orders:
        system = logistic_carleman_chain(p, kmax)
        state0 = np.array([p.f0 ** k for k in range(1, kmax + 1)])
        curves[kmax] = evolve_system(system, state0, dt, steps, method)[:, 0]
    return times, curves


def linearize(driving, O_c):
    """Carleman generator of a homogeneous polynomial driving on monomials
    of degree 1..O_c.

    driving maps exponent tuples to coefficient vectors: the rate of
    population i is sum over monomials of driving[e][i] * f^e.  Constant
    terms are rejected; homogenize them through the density first.  Rows
    are assembled by the product rule and any monomial pushed beyond
    degree O_c is dropped, which is the truncation.
    """
    if O_c < 1:
        raise ValueError(f"truncation order must be >= 1, got {O_c}")
    if O_c > _MAX_ORDER:
        raise TooLarge(f"truncation order {O_c} exceeds {_MAX_ORDER}")
    if not driving:
        raise ValueError("driving polynomial is empty")
    nvars = len(next(iter(driving)))
    if nvars > _MAX_VARS:
        raise TooLarge(f"{nvars} variables exceed {_MAX_VARS}")
    terms = {}
    for e, coeff in driving.items():
        e = tuple(int(x) for x in e)
        if len(e) != nvars:
            raise ValueError("inconsistent exponent tuple lengths")
        if any(x < 0 for x in e):
            raise ValueError(f"negative exponent in {e}")
        deg = sum(e)
        if deg == 0:
            raise ValueError(
                "driving must be homogeneous: constant term not allowed"
            )
        if deg > _MAX_DEGREE:
            raise TooLarge(f"monomial degree {deg} exceeds {_MAX_DEGREE}")
        coeff = np.asarray(coeff, dtype=float)
        if coeff.shape != (nvars,):
            raise ValueError(f"coefficient vector must have shape ({nvars},)")
        terms[e] = coeff
    basis = monomial_basis(nvars, O_c)
    index = {e: k for k, e in enumerate(basis)}
    n = len(basis)
    C = np.zeros((n, n))
    for row, e in enumerate(basis):
        for i in range(nvars):
            if e[i] == 0:
                continue
            reduced = list(e)
            reduced[i] -= 1
            for m, coeff in terms.items():
                target = tuple(reduced[j] + m[j] for j in range(nvars))
                col = index.get(target)
                if col is not None:
                    C[row, col] += e[i] * coeff[i]
    return CarlemanSystem(order=O_c, variables=tuple(basis), C=C)


def bgk_driving(model, tau):
    """Homogenized BGK rate -(1/tau)(f - L f - Qt f f) as a driving dict.

    The density factor is written as a sum over populations, so every
    monomial has degree 1 or 2 and the polynomial is homogeneous.
    """
    mc = mode_coupling(model, 1.0)
    Q = model.Q
    driving = {}
    for j in range(Q):
        e = tuple(1 if k == j else 0 for k in range(Q))
        coeff = (mc.L[:, j] - np.eye(Q)[:, j]) / tau
        driving[e] = coeff
    for j in range(Q):
        for k in range(j, Q):
            e = tuple(
                (2 if idx == j else 0)
                if j == k
                else (1 if idx in (j, k) else 0)
                for idx in range(Q)
            )
            if j == k:
                coeff = mc.Qt[:, j, j] / tau
            else:
                coeff = (mc.Qt[:, j, k] + mc.Qt[:, k, j]) / tau
            cur = driving.get(e)
            driving[e] = coeff if cur is None else cur + coeff
    return driving


def clb_closed_d1q3(f0, omega, steps):
    """Exact four-variable closure of the D1Q3 relaxation map.

    State (f_rest, f_minus, f_plus, g) with g = (f_plus - f_minus)^2.  The
    momentum is a fixed point of the relaxation, so g never changes and
    the quadratic equilibrium becomes linear in the extended state; one
    linear map reproduces the nonlinear per-step dynamics exactly.  The
    equilibrium constants are homogenized through the density, hence the
    unit-mass precondition.
    """
    if not 0.0 < omega < 2.0:
        raise OmegaOutOfRange(f"omega must lie in (0, 2), got {omega}")
    f0 = np.asarray(f0, dtype=float)
    if f0.shape != (3,):
        raise ValueError(f"f0 must have shape (3,), got {f0.shape}")
    if abs(f0.sum() - 1.0) > 1e-9:
        raise ValueError(f"populations must sum to 1, got {f0.sum()!r}")
    feq_rows = np.array(
        [
            [2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0, -1.0],
            [1.0 / 6.0, 2.0 / 3.0, -1.0 / 3.0, 0.5],
            [1.0 / 6.0, -1.0 / 3.0, 2.0 / 3.0, 0.5],
        ]
    )
    A = np.zeros((4, 4))
    A[:3] = omega * feq_rows
    A[0, 0] += 1.0 - omega
    A[1, 1] += 1.0 - omega
    A[2, 2] += 1.0 - omega
    A[3, 3] = 1.0
    state = np.array([f0[0], f0[1], f0[2], (f0[2] - f0[1]) ** 2])
    hist = np.empty((steps + 1, 4))
    hist[0] = state
    for n in range(1, steps + 1):
        state = A @ state
        hist[n] = state
    return hist
