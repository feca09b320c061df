"""Symmetric-subspace combinatorics for qubits and qutrits.

Symmetric basis vectors are labeled by occupation numbers: ``n`` excited
qubits out of ``N``, or ``(p, q)`` qutrits in levels 1 and 2 out of ``N``.
All inner products with equatorial product states reduce to square roots
of binomial/trinomial weights, so the 2^N / 3^N tensor space never has to
be materialized for core computations.  Explicit embeddings into the full
tensor space exist only as a cross-check for small N.

Basis ordering convention (used by every module): qubit labels ascend in
``n``; qutrit labels ascend lexicographically in ``(p, q)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import RangeError

QUBIT = "qubit"
QUTRIT = "qutrit"


@dataclass(frozen=True)
class QubitSymIndex:
    """Occupation label of a symmetric N-qubit basis vector."""

    n_total: int
    n_ones: int

    def __post_init__(self):
        if not 0 <= self.n_ones <= self.n_total:
            raise RangeError(f"n_ones {self.n_ones} outside [0, {self.n_total}]")


@dataclass(frozen=True)
class QutritSymIndex:
    """Occupation label (p ones, q twos) of a symmetric N-qutrit basis vector."""

    n_total: int
    n_one: int
    n_two: int

    def __post_init__(self):
        if self.n_one < 0 or self.n_two < 0 or self.n_one + self.n_two > self.n_total:
            raise RangeError(
                f"occupations ({self.n_one}, {self.n_two}) invalid for N={self.n_total}"
            )


def binomial(n: int, k: int) -> int:
    """C(n, k) as an exact integer."""
    if not 0 <= k <= n:
        raise RangeError(f"binomial index k={k} outside [0, {n}]")
    return math.comb(n, k)


def trinomial_T(M: int, nu1: int, nu2: int) -> int:
    """M! / ((M - nu1 - nu2)! nu1! nu2!) as an exact integer."""
    if nu1 < 0 or nu2 < 0 or nu1 + nu2 > M:
        raise RangeError(f"trinomial indices ({nu1}, {nu2}) invalid for M={M}")
    return math.factorial(M) // (
        math.factorial(M - nu1 - nu2) * math.factorial(nu1) * math.factorial(nu2)
    )


def sym_dim(system: str, N: int) -> int:
    """Dimension of the symmetric subspace of N qudits."""
    if N < 1:
        raise RangeError(f"N must be >= 1, got {N}")
    if system == QUBIT:
        return N + 1
    if system == QUTRIT:
        return (N + 1) * (N + 2) // 2
    raise ValueError(f"unknown system {system!r}")


@lru_cache(maxsize=None)
def qutrit_labels(N: int) -> tuple[tuple[int, int], ...]:
    """All (p, q) occupation labels for N qutrits, lexicographic order."""
    return tuple((p, q) for p in range(N + 1) for q in range(N + 1 - p))


@lru_cache(maxsize=None)
def qutrit_label_index(N: int) -> dict[tuple[int, int], int]:
    return {lab: i for i, lab in enumerate(qutrit_labels(N))}


def equatorial_overlap_qubit(M: int, n_ones: int) -> float:
    """<psi_0^(x)M | s_{M,n}> = sqrt(C(M,n)) / 2^(M/2); real and positive."""
    return math.sqrt(binomial(M, n_ones)) / 2 ** (M / 2)


def equatorial_overlap_qutrit(M: int, p: int, q: int) -> float:
    """<psi_00^(x)M | s_{M,p,q}> = sqrt(T(M,p,q)) / 3^(M/2)."""
    return math.sqrt(trinomial_T(M, p, q)) / 3 ** (M / 2)


def equatorial_state(system: str, N: int, phases: tuple[float, ...] = ()) -> np.ndarray:
    """Equatorial N-copy product state in symmetric-basis coordinates.

    ``phases`` is () for phase zero, (phi,) for qubits, (phi, theta) for
    qutrits.  Component at occupation n (or (p, q)) picks up the phase
    e^{i n phi} (e^{i(p phi + q theta)}).
    """
    if system == QUBIT:
        phi = phases[0] if phases else 0.0
        return np.array(
            [equatorial_overlap_qubit(N, n) * np.exp(1j * n * phi) for n in range(N + 1)]
        )
    phi, theta = (phases + (0.0, 0.0))[:2]
    return np.array(
        [
            equatorial_overlap_qutrit(N, p, q) * np.exp(1j * (p * phi + q * theta))
            for p, q in qutrit_labels(N)
        ]
    )


def phase_rotation(system: str, N: int, phases: tuple[float, ...]) -> np.ndarray:
    """Diagonal of the N-copy phase rotation restricted to the symmetric basis."""
    if system == QUBIT:
        (phi,) = phases
        return np.exp(1j * phi * np.arange(N + 1))
    phi, theta = phases
    return np.array([np.exp(1j * (p * phi + q * theta)) for p, q in qutrit_labels(N)])


@lru_cache(maxsize=None)
def embedding(system: str, N: int) -> np.ndarray:
    """Isometry from the symmetric basis into the full d^N tensor space.

    Columns are the symmetric basis vectors in computational-basis
    coordinates (uniform positive coefficients).  Cross-check use only;
    gated to small N.
    """
    if N > 8:
        raise RangeError(f"full-space embedding gated to N <= 8, got {N}")
    d = 2 if system == QUBIT else 3
    dim = sym_dim(system, N)
    V = np.zeros((d**N, dim))
    for b in range(d**N):
        digits = [(b // d**i) % d for i in range(N)]
        if system == QUBIT:
            col = sum(digits)
        else:
            col = qutrit_label_index(N)[(digits.count(1), digits.count(2))]
        V[b, col] += 1.0
    V /= np.sqrt(V.sum(axis=0))
    return V
