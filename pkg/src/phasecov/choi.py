"""Choi-operator representation of phase-covariant cloning channels.

A channel from N to M copies is stored as a direct sum of rank-one blocks
over the irreducible sectors of the joint phase action: sector ``nu``
(qubits) couples output occupation ``j + nu`` to input occupation ``j``;
sector ``(nu1, nu2)`` (qutrits) couples the three single-qutrit input
levels to output occupations ``(nu1, nu2)``, ``(nu1+1, nu2)`` and
``(nu1, nu2+1)``.  Dense expansion exists only for positivity and
covariance checks; fidelities are evaluated directly from the block
coefficients and verified against the dense channel-application route.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import symspace as ss
from .errors import DimensionError
from .tensor import DensityMatrix, min_eigenvalue


@dataclass(frozen=True)
class ChoiBlock:
    """One irreducible sector of a block-diagonal Choi operator.

    ``weight`` is ``(nu,)`` for qubits or ``(nu1, nu2)`` for qutrits.
    ``coeffs`` holds the nonnegative rank-one amplitudes: entry ``j`` for
    input occupation ``j`` (qubits, length N+1, zero where the sector has
    no vector at that occupation), or ``(r0, r1, r2)`` for the three
    qutrit input levels.  ``scale`` is the convex mixing weight of the
    block.
    """

    weight: tuple[int, ...]
    coeffs: tuple[float, ...]
    scale: float = 1.0

    def __post_init__(self):
        if any(c < 0 for c in self.coeffs):
            raise ValueError("block coefficients must be nonnegative")
        if not 0 < self.scale <= 1:
            raise ValueError("block scale must lie in (0, 1]")


@dataclass(frozen=True)
class ChoiOperator:
    system: str
    n_in: int
    n_out: int
    blocks: tuple[ChoiBlock, ...]

    @property
    def dim_in(self) -> int:
        return ss.sym_dim(self.system, self.n_in)

    @property
    def dim_out(self) -> int:
        return ss.sym_dim(self.system, self.n_out)


def identity_operator(system: str, n: int) -> ChoiOperator:
    """Choi operator of the identity channel on n copies."""
    if system == ss.QUBIT:
        block = ChoiBlock(weight=(0,), coeffs=tuple([1.0] * (n + 1)))
    else:
        if n != 1:
            raise DimensionError("qutrit channels are built for a single input copy")
        block = ChoiBlock(weight=(0, 0), coeffs=(1.0, 1.0, 1.0))
    return ChoiOperator(system=system, n_in=n, n_out=n, blocks=(block,))


def block_components(op: ChoiOperator, block: ChoiBlock):
    """Yield (out_label, in_index, coefficient) for the valid entries of a block.

    Output labels are occupation numbers (int for qubits, (p, q) pairs for
    qutrits); input indices follow the symmetric-basis ordering.
    """
    N, M = op.n_in, op.n_out
    if op.system == ss.QUBIT:
        (nu,) = block.weight
        for j in range(N + 1):
            if 0 <= j + nu <= M and block.coeffs[j] != 0.0:
                yield j + nu, j, block.coeffs[j]
    else:
        nu1, nu2 = block.weight
        in_index = ss.qutrit_label_index(1)
        outs = [(nu1, nu2), (nu1 + 1, nu2), (nu1, nu2 + 1)]
        levels = [(0, 0), (1, 0), (0, 1)]
        for (p, q), lev, c in zip(outs, levels, block.coeffs):
            if p >= 0 and q >= 0 and p + q <= M and c != 0.0:
                yield (p, q), in_index[lev], c


def _out_index(op: ChoiOperator, label) -> int:
    if op.system == ss.QUBIT:
        return label
    return ss.qutrit_label_index(op.n_out)[label]


def block_vector(op: ChoiOperator, block: ChoiBlock) -> np.ndarray:
    """Unnormalized rank-one vector of a block on the out (x) in space."""
    v = np.zeros(op.dim_out * op.dim_in)
    for out_label, in_idx, c in block_components(op, block):
        v[_out_index(op, out_label) * op.dim_in + in_idx] = c
    return v


def expand_dense(op: ChoiOperator) -> np.ndarray:
    """Dense Choi matrix on sym(out) (x) sym(in), complex128."""
    R = np.zeros((op.dim_out * op.dim_in,) * 2, dtype=complex)
    for b in op.blocks:
        v = block_vector(op, b)
        R += b.scale * np.outer(v, v)
    return R


def apply_channel(op: ChoiOperator, rho_in: DensityMatrix) -> DensityMatrix:
    """Channel output Tr_in[(I_out (x) rho^t) R], transpose in the symmetric basis."""
    if rho_in.dim != op.dim_in:
        raise DimensionError(
            f"input dimension {rho_in.dim} != symmetric dimension {op.dim_in}"
        )
    R4 = expand_dense(op).reshape(op.dim_out, op.dim_in, op.dim_out, op.dim_in)
    out = np.einsum("mnpq,qn->mp", R4, rho_in.matrix.T)
    return DensityMatrix(out)


def _equatorial_out_overlap(op: ChoiOperator, out_label) -> float:
    if op.system == ss.QUBIT:
        return ss.equatorial_overlap_qubit(op.n_out, out_label)
    return ss.equatorial_overlap_qutrit(op.n_out, *out_label)


def _equatorial_in_overlap(op: ChoiOperator, in_idx: int) -> float:
    if op.system == ss.QUBIT:
        return ss.equatorial_overlap_qubit(op.n_in, in_idx)
    p, q = ss.qutrit_labels(op.n_in)[in_idx]
    return ss.equatorial_overlap_qutrit(op.n_in, p, q)


def global_fidelity(op: ChoiOperator) -> float:
    """Overlap of the full output with the ideal M-copy product, via block sums."""
    total = 0.0
    for b in op.blocks:
        amp = sum(
            c * _equatorial_out_overlap(op, out) * _equatorial_in_overlap(op, idx)
            for out, idx, c in block_components(op, b)
        )
        total += b.scale * amp * amp
    return total


def global_fidelity_from_state(op: ChoiOperator, phases: tuple[float, ...] = ()) -> float:
    """Same functional evaluated through apply_channel; cross-check route."""
    rho = DensityMatrix(
        np.outer(
            ss.equatorial_state(op.system, op.n_in, phases),
            ss.equatorial_state(op.system, op.n_in, phases).conj(),
        )
    )
    out = apply_channel(op, rho)
    target = ss.equatorial_state(op.system, op.n_out, phases)
    return float(np.real(target.conj() @ out.matrix @ target))


def single_particle_fidelity(op: ChoiOperator) -> float:
    """Average single-site fidelity of the output, via the sector formulas."""
    N, M = op.n_in, op.n_out
    total = 0.0
    if op.system == ss.QUBIT:
        for b in op.blocks:
            (nu,) = b.weight
            r = b.coeffs
            js = [j for j in range(N + 1) if 0 <= j + nu <= M]
            s = sum(r[j] ** 2 * ss.binomial(N, j) for j in js)
            s += (2 / M) * sum(
                r[j]
                * r[j + 1]
                * np.sqrt(ss.binomial(N, j) * ss.binomial(N, j + 1))
                * np.sqrt((M - j - nu) * (j + nu + 1))
                for j in js
                if j + 1 in js
            )
            total += b.scale * s / 2 ** (N + 1)
    else:
        lam = lambda p, q: np.sqrt(p * (q + 1)) / M
        for b in op.blocks:
            nu1, nu2 = b.weight
            c = {idx: coef for _, idx, coef in block_components(op, b)}
            c0, c1, c2 = c.get(0, 0.0), c.get(2, 0.0), c.get(1, 0.0)
            s = c0 * c0 + c1 * c1 + c2 * c2
            s += 2 * c0 * c1 * lam(M - nu1 - nu2, nu1)
            s += 2 * c0 * c2 * lam(M - nu1 - nu2, nu2)
            s += 2 * c1 * c2 * lam(nu1 + 1, nu2)
            total += b.scale * s / 9
    return float(total)


def single_particle_fidelity_direct(op: ChoiOperator) -> float:
    """Independent evaluation in the full d^M tensor space (M <= 5).

    Applies the channel, embeds the symmetric output into the full tensor
    space, reduces to each site in turn and averages the single-copy
    overlaps with the equatorial state.
    """
    if op.n_out > 5:
        raise DimensionError("direct tensor-space evaluation gated to M <= 5")
    M = op.n_out
    d = 2 if op.system == ss.QUBIT else 3
    rho_vec = ss.equatorial_state(op.system, op.n_in)
    out = apply_channel(op, DensityMatrix(np.outer(rho_vec, rho_vec.conj())))
    V = ss.embedding(op.system, M)
    full = V @ out.matrix @ V.conj().T
    psi1 = ss.equatorial_state(op.system, 1)
    # single-qutrit symmetric basis order is (0,0),(0,1),(1,0) = levels 0,2,1
    single = psi1 if d == 2 else psi1[[0, 2, 1]]
    acc = 0.0
    t = full.reshape((d,) * (2 * M))
    for site in range(M):
        axes_keep = (site, M + site)
        other = [a for a in range(M) if a != site]
        red = np.trace(
            t.transpose(*axes_keep, *[a for a in other], *[M + a for a in other]).reshape(
                d, d, d ** (M - 1), d ** (M - 1)
            ),
            axis1=2,
            axis2=3,
        )
        acc += float(np.real(single.conj() @ red @ single))
    return acc / M


def trace_condition_residual(op: ChoiOperator) -> float:
    """Max deviation of the per-input-index weight sums from one."""
    sums = np.zeros(op.dim_in)
    for b in op.blocks:
        for _, idx, c in block_components(op, b):
            sums[idx] += b.scale * c * c
    return float(np.abs(sums - 1.0).max())


def _phase_grids(system: str, phase_grid: int):
    angles = np.linspace(0.0, 2 * np.pi, phase_grid, endpoint=False)
    if system == ss.QUBIT:
        return [(phi,) for phi in angles]
    return [(phi, theta) for phi in angles for theta in angles]


def check_covariance_dense(
    R: np.ndarray, system: str, n_in: int, n_out: int, phase_grid: int = 16
) -> float:
    """Max-norm covariance residual of a dense Choi matrix on a phase grid."""
    dim_in = ss.sym_dim(system, n_in)
    dim_out = ss.sym_dim(system, n_out)
    R4 = R.reshape(dim_out, dim_in, dim_out, dim_in)
    rho0 = np.outer(
        ss.equatorial_state(system, n_in), ss.equatorial_state(system, n_in).conj()
    )
    out0 = np.einsum("mnpq,qn->mp", R4, rho0.T)
    worst = 0.0
    for phases in _phase_grids(system, phase_grid):
        u_in = ss.phase_rotation(system, n_in, phases)
        u_out = ss.phase_rotation(system, n_out, phases)
        rho_rot = (u_in[:, None] * rho0 * u_in.conj()[None, :])
        lhs = np.einsum("mnpq,qn->mp", R4, rho_rot.T)
        rhs = u_out[:, None] * out0 * u_out.conj()[None, :]
        worst = max(worst, float(np.abs(lhs - rhs).max()))
    return worst


def check_covariance(op: ChoiOperator, phase_grid: int = 16) -> float:
    return check_covariance_dense(
        expand_dense(op), op.system, op.n_in, op.n_out, phase_grid
    )


def check_fidelity_phase_constancy_dense(
    R: np.ndarray, system: str, n_in: int, n_out: int, phase_grid: int = 16
) -> float:
    """Max |f(phases) - f(0)| of a dense Choi matrix over a phase grid."""

    def fid(phases):
        w_out = ss.equatorial_state(system, n_out, phases)
        w_in = ss.equatorial_state(system, n_in, phases).conj()
        vec = np.kron(w_out, w_in)
        return float(np.real(vec.conj() @ R @ vec))

    f0 = fid(())
    return max(abs(fid(p) - f0) for p in _phase_grids(system, phase_grid))


def check_fidelity_phase_constancy(op: ChoiOperator, phase_grid: int = 16) -> float:
    return check_fidelity_phase_constancy_dense(
        expand_dense(op), op.system, op.n_in, op.n_out, phase_grid
    )


def run_checks(op: ChoiOperator, phase_grid: int = 16) -> dict:
    """Trace / PSD / covariance check bundle used by reports."""
    trace_res = trace_condition_residual(op)
    mineig = min_eigenvalue(expand_dense(op))
    cov_res = check_covariance(op, phase_grid)
    return {
        "trace_preserving": {"pass": trace_res < 1e-12, "residual": trace_res},
        "psd": {"pass": mineig >= -1e-10, "min_eig": mineig},
        "covariant": {"pass": cov_res < 1e-10, "residual": cov_res},
    }


@dataclass
class FidelityReport:
    """Structured record of one (system, criterion, N, M) fidelity evaluation."""

    system: str
    criterion: str
    n_in: int
    n_out: int
    closed_form: float | None
    from_choi: float
    checks: dict
    oracle: float | None = None
    flags: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "criterion": self.criterion,
            "n_in": self.n_in,
            "n_out": self.n_out,
            "closed_form": _sig15(self.closed_form),
            "from_choi": _sig15(self.from_choi),
            "oracle": _sig15(self.oracle),
            "checks": {
                key: {k: (_sig15(v) if isinstance(v, float) else v) for k, v in val.items()}
                for key, val in self.checks.items()
            },
            "flags": list(self.flags),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _sig15(x):
    """Round a float to 15 significant decimal digits (JSON output contract)."""
    if x is None:
        return None
    return float(f"{x:.15g}")
