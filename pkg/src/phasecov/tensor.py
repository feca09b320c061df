"""Dense complex linear algebra primitives.

Matrices are plain ``numpy.ndarray`` values (complex128, row-major).  The
helpers here are thin, validated wrappers around numpy/LAPACK routines:
Kronecker products, partial traces over either tensor factor, and
Hermitian eigenvalue queries used for PSD verification.  Everything is a
pure function; nothing mutates its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, HermiticityError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-12
PSD_TOL = 1e-10


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b."""
    return np.kron(np.asarray(a), np.asarray(b))


def hermiticity_defect(m: np.ndarray) -> float:
    """Max-norm of (m - m^dagger)."""
    m = np.asarray(m)
    return float(np.abs(m - m.conj().T).max())


def is_hermitian(m: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return hermiticity_defect(m) <= tol


def partial_trace(m: np.ndarray, dims: tuple[int, int], side: str = "second") -> np.ndarray:
    """Trace out one tensor factor of a matrix on a bipartite space.

    ``dims = (d_first, d_second)`` gives the factor dimensions in kron
    order.  ``side`` names the factor that is traced out ("first" or
    "second"); the result lives on the remaining factor.
    """
    m = np.asarray(m)
    d1, d2 = dims
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionError(
            f"matrix shape {m.shape} does not match factor dims {d1}x{d2}"
        )
    t = m.reshape(d1, d2, d1, d2)
    if side == "second":
        return np.einsum("ikjk->ij", t)
    if side == "first":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def min_eigenvalue(m: np.ndarray, tol: float = HERMITICITY_TOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    m = np.asarray(m)
    scale = max(1.0, float(np.abs(m).max()))
    if hermiticity_defect(m) > tol * scale:
        raise HermiticityError(
            f"matrix is not Hermitian (defect {hermiticity_defect(m):.3e})"
        )
    return float(np.linalg.eigvalsh(m)[0])


@dataclass(frozen=True)
class DensityMatrix:
    """A Hermitian, unit-trace, PSD matrix on some d-dimensional space.

    Validation happens at construction; the wrapped array should not be
    mutated afterwards.
    """

    matrix: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        if hermiticity_defect(m) > 1e-12 * max(1.0, float(np.abs(m).max())):
            raise HermiticityError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-12:
            raise ValueError(f"density matrix trace {tr} != 1")
        if float(np.linalg.eigvalsh(m)[0]) < -PSD_TOL:
            raise ValueError("density matrix has a significantly negative eigenvalue")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dim", m.shape[0])
