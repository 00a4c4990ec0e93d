"""Reference BGK collision dynamics on the discrete velocity models.

This is the floating-point baseline every encoded evolution is judged
against: single-site relaxation, periodic streaming on grids, and the
truncated Gauss-Hermite expansion that motivates the quadratic equilibrium.
"""

from dataclasses import dataclass, field
from math import exp, factorial, pi, sqrt

import numpy as np

from . import _accel
from .errors import TauTooSmall, ZeroDensity
from .lattice import build_lattice

_NAME_BY_Q = {3: "D1Q3", 9: "D2Q9", 27: "D3Q27"}
_NAME_BY_D = {1: "D1Q3", 2: "D2Q9", 3: "D3Q27"}


def model_for_q(Q):
    """The unique supported lattice with Q directions."""
    try:
        return build_lattice(_NAME_BY_Q[Q])
    except KeyError:
        raise ValueError(f"no lattice with {Q} directions") from None


def model_for_dim(D):
    """The unique supported lattice in D dimensions."""
    try:
        return build_lattice(_NAME_BY_D[D])
    except KeyError:
        raise ValueError(f"no lattice in {D} dimensions") from None


def site_moments(f, model):
    """Density and rho-normalized velocity of per-site densities.

    f may carry any number of leading site axes; the direction axis is
    last.  Raises ZeroDensity as soon as any site loses positivity.
    """
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != model.Q:
        raise ValueError(f"last axis must have length {model.Q}, got {f.shape}")
    rho = f.sum(axis=-1)
    if np.any(rho <= 0.0):
        raise ZeroDensity("density must be positive at every site")
    u = (f @ model.velocities) / rho[..., None]
    return rho, u


def equilibrium(f, model):
    """Quadratic equilibrium rho w_i (1 + 3 c.u + 9/2 (c.u)^2 - 3/2 u.u).

    The velocity is the rho-normalized moment of f, so rescaling f scales
    the equilibrium by the same factor and Sum_i feq_i reproduces rho.
    """
    f = np.asarray(f, dtype=float)
    rho, u = site_moments(f, model)
    cu = u @ model.velocities.T.astype(float)
    uu = np.einsum("...d,...d->...", u, u)
    return rho[..., None] * model.weights * (
        1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * uu[..., None]
    )


@dataclass(frozen=True)
class HydroMoments:
    """Per-site density and rho-normalized velocity."""

    rho: np.ndarray
    u: np.ndarray


@dataclass(frozen=True)
class DistributionField:
    """Site-major distribution field of shape (*grid, Q)."""

    model: object
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        m = self.model
        if data.ndim != m.D + 1 or data.shape[-1] != m.Q:
            raise ValueError(
                f"field must have shape (*grid, {m.Q}) with "
                f"{m.D} grid axes, got {data.shape}"
            )
        if not np.all(np.isfinite(data)):
            raise ValueError("field entries must be finite")
        object.__setattr__(self, "data", data)

    @property
    def dims(self):
        return self.data.shape[:-1]

    @classmethod
    def from_equilibrium(cls, model, rho, u):
        rho = np.asarray(rho, dtype=float)
        u = np.asarray(u, dtype=float)
        cu = u @ model.velocities.T.astype(float)
        uu = np.einsum("...d,...d->...", u, u)
        data = rho[..., None] * model.weights * (
            1.0 + 3.0 * cu + 4.5 * cu * cu - 1.5 * uu[..., None]
        )
        return cls(model, data)


def moments(fld):
    """Hydrodynamic moments of a field; ZeroDensity guards positivity."""
    rho, u = site_moments(fld.data, fld.model)
    return HydroMoments(rho=rho, u=u)


def collide(fld, tau, dt):
    """One BGK relaxation step f <- f - (dt/tau)(f - feq) at every site.

    Density and velocity are invariant; the guard tau > dt/2 keeps the
    relaxation factor 1 - dt/tau inside (-1, 1).  Returns a new field.
    """
    if tau <= dt / 2.0:
        raise TauTooSmall(f"tau must exceed dt/2 = {dt / 2.0}, got {tau}")
    m = fld.model
    rho = fld.data.sum(axis=-1)
    if np.any(rho <= 0.0):
        raise ZeroDensity("density must be positive at every site")
    flat = fld.data.reshape(-1, m.Q).copy()
    _accel.grid_collide(
        flat, m.velocities.astype(float), m.weights, dt / tau
    )
    return DistributionField(m, flat.reshape(fld.data.shape))


def stream(fld):
    """Shift each population along its velocity, periodic in every axis.

    np.roll moves bit patterns untouched, so the transport is exact and
    the global multiset of stored values is preserved.  Returns a new
    field.
    """
    m = fld.model
    out = np.empty_like(fld.data)
    axes = tuple(range(m.D))
    for i in range(m.Q):
        shift = tuple(int(s) for s in m.velocities[i])
        out[..., i] = np.roll(fld.data[..., i], shift, axis=axes)
    return DistributionField(m, out)


def step(fld, tau, dt):
    """Collision followed by streaming."""
    return stream(collide(fld, tau, dt))


def evolve_0d(f0, tau, dt, steps):
    """Iterate single-site collisions and return all states, (steps+1, Q).

    The lattice is inferred from the population count.  With moments
    conserved the local equilibrium is a fixed point, so f(t) - feq
    shrinks geometrically by the factor 1 - dt/tau per step.
    """
    if tau <= dt / 2.0:
        raise TauTooSmall(f"tau must exceed dt/2 = {dt / 2.0}, got {tau}")
    f = np.asarray(f0, dtype=float).copy()
    model = model_for_q(f.shape[-1] if f.ndim else 0)
    if f.shape != (model.Q,):
        raise ValueError(f"f0 must have shape ({model.Q},), got {f.shape}")
    hist = np.empty((steps + 1, model.Q))
    hist[0] = f
    lam = dt / tau
    for t in range(1, steps + 1):
        f = f - lam * (f - equilibrium(f, model))
        hist[t] = f
    return hist


def _hermite_sequence(kmax, x):
    """Physicists' Hermite polynomials H_0..H_kmax evaluated at x."""
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1,) + x.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = 2.0 * x
    for k in range(1, kmax):
        out[k + 1] = 2.0 * x * out[k] - 2.0 * k * out[k - 1]
    return out


def hermite_expansion_point(c, u, RT, kmax):
    """Truncated Hermite expansion of the Maxwellian at one velocity point.

    The exponential weight sits at c, which is also the Hermite argument;
    the flow velocity u enters only through the series coefficients
    (u_mu / sqrt(2 RT))^k / k!.  As kmax -> inf the product converges to
    the drifting Maxwellian by the generating-function identity.
    """
    c = np.atleast_1d(np.asarray(c, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    d = c.shape[0]
    s = sqrt(2.0 * RT)
    pref = (2.0 * pi * RT) ** (-d / 2.0) * exp(-float(c @ c) / (2.0 * RT))
    bracket = 1.0
    for mu in range(d):
        H = _hermite_sequence(kmax, c[mu] / s)
        t = u[mu] / s
        bracket *= sum(t ** k / factorial(k) * float(H[k]) for k in range(kmax + 1))
    return pref * bracket


def maxwell_boltzmann(c, u, RT):
    c = np.atleast_1d(np.asarray(c, dtype=float))
    u = np.atleast_1d(np.asarray(u, dtype=float))
    d = c.shape[0]
    dv = c - u
    return (2.0 * pi * RT) ** (-d / 2.0) * exp(-float(dv @ dv) / (2.0 * RT))


@dataclass(frozen=True)
class HermiteEquilibrium:
    """Expansion evaluated at each lattice velocity."""

    values: np.ndarray  # prefactor * bracket per direction
    bracket: np.ndarray
    prefactor: np.ndarray


def hermite_equilibrium_expansion(u, RT, kmax):
    """Evaluate the truncated expansion at the matching lattice velocities.

    The lattice is inferred from the dimension of u.  At kmax = 2 and
    RT = 1/3 the bracket collapses to 1 + 3 c.u + 9/2 (c.u)^2 - 3/2 u.u
    up to O(u^3) cross terms, so weights times bracket reproduces the
    quadratic equilibrium at unit density.
    """
    if RT <= 0.0:
        raise ValueError(f"RT must be positive, got {RT}")
    if kmax < 0:
        raise ValueError(f"kmax must be nonnegative, got {kmax}")
    u = np.atleast_1d(np.asarray(u, dtype=float))
    model = model_for_dim(u.shape[0])
    s = sqrt(2.0 * RT)
    Q, D = model.Q, model.D
    pref = np.empty(Q)
    bracket = np.empty(Q)
    for i in range(Q):
        c = model.velocities[i].astype(float)
        pref[i] = (2.0 * pi * RT) ** (-D / 2.0) * exp(
            -float(c @ c) / (2.0 * RT)
        )
        b = 1.0
        for mu in range(D):
            H = _hermite_sequence(kmax, c[mu] / s)
            t = u[mu] / s
            b *= sum(t ** k / factorial(k) * float(H[k]) for k in range(kmax + 1))
        bracket[i] = b
    return HermiteEquilibrium(
        values=pref * bracket, bracket=bracket, prefactor=pref
    )
