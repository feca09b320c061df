"""Optimal 1 -> M two-phase-covariant cloning maps for equatorial qutrits.

For M = 3k+1 a single sector (k, k) with unit amplitudes is optimal under
both criteria.  Otherwise the optimum is an equal mixture of the three
sectors {(k, k), (k, M-2k-1), (M-2k-1, k)} obtained from the central one
by cycling the three levels; the central amplitudes (r0, r1, r1) solve a
two-variable constrained maximization and the companion sectors carry the
cyclically shifted amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import symspace as ss
from .choi import ChoiBlock, ChoiOperator
from .errors import RangeError

GLOBAL = "global"
SINGLE = "single-particle"


@dataclass(frozen=True)
class QutritCloneSpec:
    n_out: int
    criterion: str = GLOBAL
    n_in: int = 1

    def __post_init__(self):
        if self.n_in != 1:
            raise RangeError("qutrit cloning is built for a single input copy")
        if self.n_out < 1:
            raise RangeError(f"n_out must be >= 1, got {self.n_out}")
        if self.criterion not in (GLOBAL, SINGLE):
            raise ValueError(f"unknown criterion {self.criterion!r}")


def lambda_M(M: int, p: int, q: int) -> float:
    """Single-site transition weight sqrt(p (q+1)) / M between neighbor sectors."""
    if p < 0 or q < 0:
        raise RangeError(f"negative occupation ({p}, {q})")
    return math.sqrt(p * (q + 1)) / M


def central_coefficients(M: int, criterion: str) -> tuple[float, float, float]:
    """Amplitudes (r0, r1, r2 = r1) of the central sector, M not = 1 mod 3.

    Global: maximize r0 A + 2 r1 B with A, B the square roots of the two
    distinct trinomial weights, under r0^2 + 2 r1^2 = 3.  Single-particle:
    maximize 2 r0 r1 L_A + r1^2 L_B under the same constraint.
    """
    k = M // 3 if M % 3 == 0 else (M - 2) // 3
    if criterion == GLOBAL:
        A = math.sqrt(ss.trinomial_T(M, k, k))
        B = math.sqrt(ss.trinomial_T(M, k + 1, k))
        r1 = math.sqrt(3) * (A * A / (B * B) + 2) ** -0.5
    else:
        if M % 3 == 0:
            lam_a = math.sqrt(M * (M + 3)) / (3 * M)
            lam_b = (M + 3) / (3 * M)
        else:
            lam_a = math.sqrt((M + 4) * (M + 1)) / (3 * M)
            lam_b = (M + 1) / (3 * M)
        r1 = math.sqrt(3) / 2 * math.sqrt(1 + lam_b / math.sqrt(lam_b**2 + 8 * lam_a**2))
    r0 = math.sqrt(3 - 2 * r1 * r1)
    return r0, r1, r1


def optimal_map_qutrit(spec: QutritCloneSpec) -> ChoiOperator:
    M = spec.n_out
    if M % 3 == 1:
        k = (M - 1) // 3
        block = ChoiBlock(weight=(k, k), coeffs=(1.0, 1.0, 1.0))
        return ChoiOperator(system=ss.QUTRIT, n_in=1, n_out=M, blocks=(block,))
    k = M // 3 if M % 3 == 0 else (M - 2) // 3
    r0, r1, r2 = central_coefficients(M, spec.criterion)
    third = 1.0 / 3.0
    blocks = (
        ChoiBlock(weight=(k, k), coeffs=(r0, r1, r2), scale=third),
        # companions under cycling the levels 0 -> 1 -> 2 -> 0 and its inverse
        ChoiBlock(weight=(k, M - 2 * k - 1), coeffs=(r1, r2, r0), scale=third),
        ChoiBlock(weight=(M - 2 * k - 1, k), coeffs=(r2, r0, r1), scale=third),
    )
    return ChoiOperator(system=ss.QUTRIT, n_in=1, n_out=M, blocks=blocks)


def closed_form_qutrit_fidelity(spec: QutritCloneSpec) -> float | None:
    """Closed forms exist for M = 1 mod 3 only; None otherwise."""
    M = spec.n_out
    if M % 3 != 1:
        return None
    k = (M - 1) // 3
    if spec.criterion == GLOBAL:
        return ss.trinomial_T(M, k, k) / 3 ** (M - 1)
    return (1 + 2 * (M + 2) / (3 * M)) / 3


def construction_flags(spec: QutritCloneSpec) -> tuple[str, ...]:
    if spec.n_out % 3 == 1:
        return ()
    return (
        "no closed-form fidelity for this residue class; value computed from "
        "the constructed block coefficients",
    )
