"""Quantum-register lattice Boltzmann toolkit.

Classical relaxation references, Carleman linearization of the collision
nonlinearity, truncated bosonic registers with Pauli compilation, the
encoded collision engine with its divergence monitors, streaming as
controlled binary increments, closed-form truncation-error bounds,
window-restricted Hermite recurrences, and resource estimates, plus the
`qalb` command-line driver.
"""

__version__ = "0.1.0"

from . import (
    bounds,
    carleman,
    classical,
    complexity,
    engine,
    errors,
    fock,
    hermite,
    lattice,
    linalg,
    pauli,
    streaming,
)

__all__ = [
    "__version__",
    "bounds",
    "carleman",
    "classical",
    "complexity",
    "engine",
    "errors",
    "fock",
    "hermite",
    "lattice",
    "linalg",
    "pauli",
    "streaming",
]
