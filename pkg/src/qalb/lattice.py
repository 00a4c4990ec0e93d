"""Velocity sets, weights, and mode-coupling tensors.

Models are built from the one-dimensional stencil (0, -1, +1) with weights
(2/3, 1/6, 1/6); higher dimensions are tensor products.  Ordering is always
rest velocity first, then remaining velocities lexicographically.  All
quantities are assembled in exact rational arithmetic and exported as float
arrays, so the sum rules hold to the last bit.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import OmegaOutOfRange

CS2 = Fraction(1, 3)

_W1D = {0: Fraction(2, 3), -1: Fraction(1, 6), 1: Fraction(1, 6)}

_NAMES = {"D1Q3": 1, "D2Q9": 2, "D3Q27": 3}


@dataclass(frozen=True)
class Lattice:
    name: str
    D: int
    Q: int
    velocities: np.ndarray  # (Q, D) int
    weights: np.ndarray  # (Q,) float
    cs2: float

    def weight_fractions(self):
        return tuple(
            Fraction(
                np.prod([_W1D[int(c)].numerator for c in v], dtype=object),
                np.prod([_W1D[int(c)].denominator for c in v], dtype=object),
            )
            for v in self.velocities
        )


def build_lattice(name):
    if name not in _NAMES:
        raise ValueError(f"unknown lattice {name!r}; choose from {sorted(_NAMES)}")
    D = _NAMES[name]
    rest = (0,) * D
    others = sorted(v for v in product((-1, 0, 1), repeat=D) if v != rest)
    vels = [rest] + others
    weights = []
    for v in vels:
        w = Fraction(1)
        for c in v:
            w *= _W1D[c]
        weights.append(w)
    return Lattice(
        name=name,
        D=D,
        Q=len(vels),
        velocities=np.array(vels, dtype=np.int64),
        weights=np.array([float(w) for w in weights]),
        cs2=float(CS2),
    )


@dataclass(frozen=True)
class ModeCoupling:
    """Linear and quadratic collision tensors for a relaxation rate omega."""

    omega: float
    L: np.ndarray  # (Q, Q)
    Qt: np.ndarray  # (Q, Q, Q)

    def equilibrium(self, f):
        f = np.asarray(f, dtype=float)
        return self.L @ f + np.einsum("ijk,j,k->i", self.Qt, f, f)


def mode_coupling(model, omega):
    """Build L_ij = w_i (1 + c_i.c_j / cs2) and
    Qt_ijk = w_i (c_i.c_i - D cs2) (c_j.c_k) / (2 cs2^2).

    The quadratic trace coefficient keeps sum_i w_i (c_i.c_i - D cs2) = 0,
    so the columns of L sum to one and Qt sums to zero over its first index.
    """
    if not 0.0 < omega < 2.0:
        raise OmegaOutOfRange(f"omega must lie in (0, 2), got {omega}")
    wfr = model.weight_fractions()
    c = model.velocities
    Q, D = model.Q, model.D
    L = np.empty((Q, Q))
    Qt = np.empty((Q, Q, Q))
    for i in range(Q):
        qi = Fraction(int(c[i] @ c[i])) - D * CS2
        for j in range(Q):
            L[i, j] = float(wfr[i] * (1 + Fraction(int(c[i] @ c[j])) / CS2))
            for k in range(Q):
                Qt[i, j, k] = float(
                    wfr[i] * qi * Fraction(int(c[j] @ c[k])) / (2 * CS2 ** 2)
                )
    return ModeCoupling(omega=float(omega), L=L, Qt=Qt)
