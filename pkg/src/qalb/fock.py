"""Truncated bosonic register: ladder matrices, value encoding, spectra.

One mode is stored on `qubits` qubits, giving levels 0..N with
N = 2**qubits - 1.  The lowering operator keeps sqrt(n) on the
superdiagonal (row n-1, column n), so q = (a + a^dag)/sqrt(2) and
p = i (a^dag - a)/sqrt(2) reproduce the canonical pair up to the single
truncation defect in the top corner.
"""

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .errors import (
    ConvergenceFailure,
    DimMismatch,
    GroundAmplitudeZero,
    OutOfRange,
    TooLarge,
)

_MAX_QUBITS_DENSE = 12


@dataclass(frozen=True)
class FockConfig:
    qubits: int

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError(f"qubits must be >= 1, got {self.qubits}")
        if self.qubits > _MAX_QUBITS_DENSE:
            raise TooLarge(
                f"{self.qubits} qubits per mode exceeds {_MAX_QUBITS_DENSE}"
            )

    @property
    def levels(self):
        return 2 ** self.qubits

    @property
    def N(self):
        return self.levels - 1


def a_matrix(cfg):
    """Lowering operator: a[n-1, n] = sqrt(n)."""
    n = cfg.levels
    a = np.zeros((n, n))
    for k in range(1, n):
        a[k - 1, k] = sqrt(k)
    return a


def number_matrix(cfg):
    return np.diag(np.arange(cfg.levels, dtype=float))


def ladder_matrices(cfg):
    """Dense (a, a^dag) pair on the truncated register."""
    a = a_matrix(cfg)
    return a, a.T.copy()


def q_matrix(cfg):
    a = a_matrix(cfg)
    return (a + a.T) / sqrt(2.0)


def p_matrix(cfg):
    a = a_matrix(cfg)
    return 1j * (a.T - a) / sqrt(2.0)


def position_momentum(cfg):
    """Dense (q, p) pair; Hermitian, with the truncation defect confined
    to the top corner of their commutator."""
    return q_matrix(cfg), p_matrix(cfg)


def commutator(A, B):
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimMismatch(f"first operand is not square: {A.shape}")
    if B.shape != A.shape:
        raise DimMismatch(f"operand shapes differ: {A.shape} vs {B.shape}")
    return A @ B - B @ A


def _hermite_phys_all(nmax, x):
    vals = np.empty(nmax + 1)
    vals[0] = 1.0
    if nmax >= 1:
        vals[1] = 2.0 * x
    for k in range(1, nmax):
        vals[k + 1] = 2.0 * x * vals[k] - 2.0 * k * vals[k - 1]
    return vals


def encode_value(f, cfg):
    """Normalized truncated position eigenstate carrying the value f.

    Amplitudes are proportional to 2^(-n/2) H_n(f) / sqrt(n!); the state
    satisfies q psi = f psi on all rows except the last, and the amplitude
    ratio psi_1/psi_0 equals sqrt(2) f exactly.
    """
    if not -1.0 <= f <= 1.0:
        raise OutOfRange(f"encoded value must lie in [-1, 1], got {f}")
    N = cfg.N
    H = _hermite_phys_all(N, float(f))
    amp = np.empty(N + 1)
    fact = 1.0
    for n in range(N + 1):
        if n > 0:
            fact *= n
        amp[n] = H[n] / sqrt(fact) / 2.0 ** (n / 2.0)
    return amp / np.linalg.norm(amp)


def decode_value(psi):
    """Read the value back from the two lowest amplitudes.

    Returns (value, residual): value is Re(psi_1/psi_0)/sqrt(2) and the
    residual is the imaginary part of the same quotient, which vanishes for
    exactly encoded states.
    """
    psi = np.asarray(psi)
    if abs(psi[0]) == 0.0:
        raise GroundAmplitudeZero("ground amplitude is zero; ratio undefined")
    ratio = complex(psi[1]) / complex(psi[0])
    return float(ratio.real) / sqrt(2.0), float(ratio.imag) / sqrt(2.0)


def zero_vectors(cfg):
    """The two one-sided null states: a kills the ground state and, under
    truncation, a^dag kills the top level."""
    lo = np.zeros(cfg.levels)
    hi = np.zeros(cfg.levels)
    lo[0] = 1.0
    hi[-1] = 1.0
    return lo, hi


def _count_below(x, N):
    """Eigenvalues of q strictly below x, by Sturm negative count.

    A pivot that lands exactly on zero is perturbed to a tiny negative
    value before it is counted, so boundary hits (the first midpoint of
    the symmetric bracket is exactly zero) do not undercount.
    """
    count = 0
    d = -x
    if d == 0.0:
        d = -1e-30
    if d < 0.0:
        count += 1
    for n in range(1, N + 1):
        d = -x - (n / 2.0) / d
        if d == 0.0:
            d = -1e-30
        if d < 0.0:
            count += 1
    return count


def q_eigensystem(cfg, tol=1e-13, max_iter=200):
    """All eigenpairs of the truncated q, without dense factorizations.

    Eigenvalues come from Sturm bisection on [-sqrt(2N), sqrt(2N)];
    eigenvectors from the three-term recurrence
    v_{n+1} = (sqrt(2) lam v_n - sqrt(n) v_{n-1}) / sqrt(n+1), v_0 = 1.
    """
    N = cfg.N
    bound = sqrt(2.0 * N) if N > 0 else 1.0
    eigvals = np.empty(N + 1)
    for k in range(N + 1):
        lo, hi = -bound, bound
        it = 0
        while hi - lo > tol and it < max_iter:
            mid = 0.5 * (lo + hi)
            if _count_below(mid, N) <= k:
                lo = mid
            else:
                hi = mid
            it += 1
        if it >= max_iter and hi - lo > tol:
            raise ConvergenceFailure(
                f"bisection for eigenvalue {k} stalled at width {hi - lo}"
            )
        eigvals[k] = 0.5 * (lo + hi)
    if np.any(np.diff(eigvals) <= 0.0):
        raise ConvergenceFailure("expected distinct ordered eigenvalues")
    vecs = np.empty((N + 1, N + 1))
    for k in range(N + 1):
        lam = eigvals[k]
        v = np.empty(N + 1)
        v[0] = 1.0
        if N >= 1:
            v[1] = sqrt(2.0) * lam
        for n in range(1, N):
            v[n + 1] = (sqrt(2.0) * lam * v[n] - sqrt(n) * v[n - 1]) / sqrt(
                n + 1
            )
        vecs[:, k] = v / np.linalg.norm(v)
    return eigvals, vecs
