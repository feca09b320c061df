"""Independent numerical maximizer of the cloning fidelity functionals.

Both fidelity criteria are quadratic forms in the per-sector amplitudes
``c_j^nu`` (mixing weights folded in), and the trace condition confines
the amplitudes to a product of unit spheres, one per input index.  The
maximizer runs seeded multi-start projected-gradient ascent on that
product of spheres, polished by L-BFGS-B in hyperspherical angles; an
exhaustive angle-grid scan and a semidefinite full-block variant cover
the smallest cases as independent cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from . import symspace as ss
from .choi import ChoiBlock, ChoiOperator, trace_condition_residual
from .errors import RangeError

GLOBAL = "global"
SINGLE = "single-particle"

GRAD_TOL = 1e-10
MAX_ITER = 10_000
STALL_ITER = 60


# ---------------------------------------------------------------------------
# feasible points and results


@dataclass(frozen=True)
class FeasiblePoint:
    """Per-sector nonnegative amplitudes with mixing weights folded in.

    ``blocks`` maps sector weight -> coefficient tuple in the same layout
    as ChoiBlock (length N+1 for qubits, 3 for qutrits, zeros where the
    sector has no vector).  The per-input-index squared amplitudes sum to
    one.
    """

    system: str
    n_in: int
    n_out: int
    blocks: tuple[tuple[tuple[int, ...], tuple[float, ...]], ...]

    def __post_init__(self):
        for _, coeffs in self.blocks:
            for c in coeffs:
                if not -1e-12 <= c <= 1 + 1e-12:
                    raise ValueError(f"amplitude {c} outside [0, 1]")

    def to_choi(self) -> ChoiOperator:
        kept = tuple(
            ChoiBlock(weight=w, coeffs=tuple(max(c, 0.0) for c in coeffs))
            for w, coeffs in self.blocks
            if max(coeffs) > 1e-12
        )
        return ChoiOperator(
            system=self.system, n_in=self.n_in, n_out=self.n_out, blocks=kept
        )

    def trace_residual(self) -> float:
        return trace_condition_residual(self.to_choi())


@dataclass(frozen=True)
class OracleResult:
    best_value: float
    best_point: FeasiblePoint
    restarts: int
    converged: bool
    gap_vs_constructed: float
    distinct_optima: tuple[FeasiblePoint, ...] = field(default=())


# ---------------------------------------------------------------------------
# problem structure: variables, groups, quadratic form


@dataclass(frozen=True)
class _Structure:
    system: str
    n_in: int
    n_out: int
    blocks: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]  # (weight, comp keys)
    slices: tuple[slice, ...]
    Q: np.ndarray
    groups: tuple[np.ndarray, ...]  # flat variable indices per input index

    @property
    def nvar(self) -> int:
        return self.Q.shape[0]


def _qubit_block_Q(criterion: str, N: int, M: int, nu: int, js: list[int]) -> np.ndarray:
    n = len(js)
    Q = np.zeros((n, n))
    if criterion == GLOBAL:
        w = np.array(
            [
                ss.equatorial_overlap_qubit(M, j + nu) * ss.equatorial_overlap_qubit(N, j)
                for j in js
            ]
        )
        Q = np.outer(w, w)
    else:
        for a, j in enumerate(js):
            Q[a, a] = ss.binomial(N, j) / 2 ** (N + 1)
            if j + 1 in js:
                b = js.index(j + 1)
                off = (
                    math.sqrt(ss.binomial(N, j) * ss.binomial(N, j + 1))
                    * math.sqrt((M - j - nu) * (j + nu + 1))
                    / (M * 2 ** (N + 1))
                )
                Q[a, b] += off
                Q[b, a] += off
    return Q


def _qutrit_block_Q(criterion: str, M: int, nu1: int, nu2: int, levels: list[int]) -> np.ndarray:
    outs = {0: (nu1, nu2), 1: (nu1 + 1, nu2), 2: (nu1, nu2 + 1)}
    n = len(levels)
    Q = np.zeros((n, n))
    if criterion == GLOBAL:
        w = np.array(
            [
                ss.equatorial_overlap_qutrit(M, *outs[lev]) / math.sqrt(3)
                for lev in levels
            ]
        )
        Q = np.outer(w, w)
    else:
        lam = lambda p, q: math.sqrt(p * (q + 1)) / M
        pair = {
            (0, 1): lam(M - nu1 - nu2, nu1),
            (0, 2): lam(M - nu1 - nu2, nu2),
            (1, 2): lam(nu1 + 1, nu2),
        }
        for a, la in enumerate(levels):
            Q[a, a] = 1 / 9
            for b, lb in enumerate(levels[a + 1:], start=a + 1):
                off = pair[(la, lb)] / 9
                Q[a, b] += off
                Q[b, a] += off
    return Q


def _build_structure(system: str, criterion: str, N: int, M: int) -> _Structure:
    blocks = []
    qs = []
    group_members: dict[int, list[int]] = {}
    pos = 0
    slices = []
    if system == ss.QUBIT:
        for nu in range(-N, M + 1):
            js = [j for j in range(N + 1) if 0 <= j + nu <= M]
            if not js:
                continue
            blocks.append(((nu,), tuple(js)))
            qs.append(_qubit_block_Q(criterion, N, M, nu, js))
            slices.append(slice(pos, pos + len(js)))
            for off, j in enumerate(js):
                group_members.setdefault(j, []).append(pos + off)
            pos += len(js)
    else:
        for nu1 in range(M + 1):
            for nu2 in range(M + 1 - nu1):
                levels = [0]
                if nu1 + nu2 + 1 <= M:
                    levels += [1, 2]
                blocks.append(((nu1, nu2), tuple(levels)))
                qs.append(_qutrit_block_Q(criterion, M, nu1, nu2, levels))
                slices.append(slice(pos, pos + len(levels)))
                for off, lev in enumerate(levels):
                    group_members.setdefault(lev, []).append(pos + off)
                pos += len(levels)
    Q = np.zeros((pos, pos))
    for sl, q in zip(slices, qs):
        Q[sl, sl] = q
    groups = tuple(np.array(group_members[g]) for g in sorted(group_members))
    return _Structure(
        system=system,
        n_in=N,
        n_out=M,
        blocks=tuple(blocks),
        slices=tuple(slices),
        Q=Q,
        groups=groups,
    )


def _coeff_layout(st: _Structure, x: np.ndarray) -> FeasiblePoint:
    """Scatter a flat feasible vector back into per-sector coefficient tuples."""
    ncoef = st.n_in + 1 if st.system == ss.QUBIT else 3
    out = []
    for (weight, keys), sl in zip(st.blocks, st.slices):
        coeffs = [0.0] * ncoef
        base = keys[0] if st.system == ss.QUBIT else 0
        for key, val in zip(keys, x[sl]):
            idx = key - base if st.system == ss.QUBIT else key
            coeffs[idx] = float(min(max(val, 0.0), 1.0))
        out.append((weight, tuple(coeffs)))
    return FeasiblePoint(
        system=st.system, n_in=st.n_in, n_out=st.n_out, blocks=tuple(out)
    )


def _project(st: _Structure, x: np.ndarray) -> np.ndarray:
    """Clip to the nonnegative orthant and renormalize each input-index group."""
    y = np.clip(x, 0.0, None)
    for g in st.groups:
        nrm = np.linalg.norm(y[g])
        if nrm < 1e-300:
            y[g] = 1.0 / math.sqrt(len(g))
        else:
            y[g] /= nrm
    return y


def _ascend(st: _Structure, x: np.ndarray, max_iter: int = MAX_ITER) -> tuple[np.ndarray, bool]:
    """Projected-gradient ascent; returns the iterate and a convergence flag."""
    Q = st.Q
    val = float(x @ Q @ x)
    step = 0.5
    stall = 0
    for _ in range(max_iter):
        grad = 2.0 * Q @ x
        trial = _project(st, x + step * grad)
        if float(np.linalg.norm(trial - x)) < GRAD_TOL:
            return x, True
        tval = float(trial @ Q @ trial)
        if tval > val:
            if tval - val < 1e-15:
                stall += 1
                if stall > STALL_ITER:
                    return trial, False
            else:
                stall = 0
            x, val = trial, tval
            step *= 1.2
        else:
            step *= 0.5
            if step < 1e-14:
                return x, True
    return x, False


# hyperspherical angles: exact feasibility for the L-BFGS-B polish


def _angles_to_group(theta: np.ndarray, size: int) -> np.ndarray:
    x = np.empty(size)
    sprod = 1.0
    for i in range(size - 1):
        x[i] = sprod * math.cos(theta[i])
        sprod *= math.sin(theta[i])
    x[size - 1] = sprod
    return x


def _group_to_angles(x: np.ndarray) -> np.ndarray:
    size = len(x)
    theta = np.zeros(size - 1)
    for i in range(size - 1):
        tail = np.linalg.norm(x[i:])
        theta[i] = math.acos(min(max(x[i] / tail, 0.0), 1.0)) if tail > 1e-300 else 0.0
    return theta


def _angles_jacobian(theta: np.ndarray, size: int) -> np.ndarray:
    """d x_i / d theta_k for one hyperspherical group, shape (size, size-1)."""
    J = np.zeros((size, size - 1))
    cos, sin = np.cos(theta), np.sin(theta)
    for i in range(size):
        # x_i = (prod_{m<i} sin t_m) * (cos t_i if i < size-1 else 1)
        for k in range(min(i, size - 2) + 1):
            if k < i:
                prod = 1.0
                for m in range(i):
                    prod *= cos[m] if m == k else sin[m]
                J[i, k] = prod * (cos[i] if i < size - 1 else 1.0)
            else:  # k == i < size-1
                prod = 1.0
                for m in range(i):
                    prod *= sin[m]
                J[i, k] = -prod * sin[i]
    return J


def _polish(st: _Structure, x: np.ndarray) -> tuple[np.ndarray, bool]:
    sizes = [len(g) for g in st.groups]
    if all(s == 1 for s in sizes):
        return x, True
    theta0 = np.concatenate([_group_to_angles(x[g]) for g in st.groups])
    bounds = [(0.0, math.pi / 2)] * len(theta0)

    def unpack(theta):
        y = np.empty(st.nvar)
        o = 0
        for g, s in zip(st.groups, sizes):
            y[g] = _angles_to_group(theta[o:o + s - 1], s)
            o += s - 1
        return y

    def negval_grad(theta):
        y = unpack(theta)
        g_full = 2.0 * st.Q @ y
        grad = np.empty(len(theta))
        o = 0
        for g, s in zip(st.groups, sizes):
            J = _angles_jacobian(theta[o:o + s - 1], s)
            grad[o:o + s - 1] = g_full[g] @ J
            o += s - 1
        return -float(y @ st.Q @ y), -grad

    res = minimize(negval_grad, theta0, jac=True, method="L-BFGS-B", bounds=bounds)
    y = _project(st, unpack(res.x))
    return y, bool(res.success)


def _value(st: _Structure, x: np.ndarray) -> float:
    return float(x @ st.Q @ x)


def _check_bounds(system: str, N: int, M: int) -> None:
    if system == ss.QUBIT:
        if not (1 <= N <= 4 and N <= M <= 8):
            raise RangeError(f"qubit oracle gated to N <= 4, M <= 8; got ({N}, {M})")
    elif system == ss.QUTRIT:
        if N != 1 or not 1 <= M <= 6:
            raise RangeError(f"qutrit oracle gated to N = 1, M <= 6; got ({N}, {M})")
    else:
        raise ValueError(f"unknown system {system!r}")


def maximize_fidelity(
    system: str,
    criterion: str,
    n_in: int,
    n_out: int,
    restarts: int = 50,
    seed: int = 0,
) -> OracleResult:
    """Multi-start ascent over the full feasible set of sector amplitudes.

    Deterministic for fixed (seed, restarts).  The reported gap is
    best_value minus the constructed map's fidelity (positive would mean
    the construction is beaten).
    """
    _check_bounds(system, n_in, n_out)
    from . import maps

    criterion = maps.normalize_criterion(criterion)
    st = _build_structure(system, criterion, n_in, n_out)
    rng = np.random.default_rng(seed)
    best_x, best_val, best_conv = None, -np.inf, False
    finishers: list[tuple[float, np.ndarray]] = []
    for _ in range(restarts):
        x0 = _project(st, rng.random(st.nvar))
        x, _ = _ascend(st, x0)
        x, conv = _polish(st, x)
        val = _value(st, x)
        finishers.append((val, x))
        if val > best_val:
            best_x, best_val, best_conv = x, val, conv
    near = []
    seen = set()
    for val, x in sorted(finishers, key=lambda t: -t[0]):
        if best_val - val > 1e-8:
            break
        key = tuple(np.round(x, 6))
        if key not in seen:
            seen.add(key)
            near.append(_coeff_layout(st, x))
    constructed = maps.constructed_fidelity(system, criterion, n_in, n_out)
    return OracleResult(
        best_value=best_val,
        best_point=_coeff_layout(st, best_x),
        restarts=restarts,
        converged=best_conv,
        gap_vs_constructed=best_val - constructed,
        distinct_optima=tuple(near),
    )


# ---------------------------------------------------------------------------
# exhaustive grid search for tiny cases


def _unit_sphere_grid(size: int, steps: int) -> np.ndarray:
    """All hyperspherical grid points of a nonnegative unit sphere, (steps^(size-1), size)."""
    if size == 1:
        return np.ones((1, 1))
    angles = np.linspace(0.0, math.pi / 2, steps)
    grids = np.meshgrid(*([angles] * (size - 1)), indexing="ij")
    theta = np.stack([g.ravel() for g in grids], axis=1)
    out = np.empty((theta.shape[0], size))
    sprod = np.ones(theta.shape[0])
    for i in range(size - 1):
        out[:, i] = sprod * np.cos(theta[:, i])
        sprod = sprod * np.sin(theta[:, i])
    out[:, size - 1] = sprod
    return out


def _qubit_ansatz_arrays(criterion: str, N: int, M: int):
    """Per-group diagonal weights and pairwise sector-diagonal couplings.

    Groups are input occupations j = 0..N, each ranging over the ansatz
    sectors nu = 0..M-N (all valid).  Returns (alpha, beta) with
    alpha[j][nu] the c^2 weight and beta[(j, j')][nu] the c_j c_j'
    coupling.
    """
    K = M - N + 1
    alpha = np.zeros((N + 1, K))
    beta: dict[tuple[int, int], np.ndarray] = {}
    if criterion == GLOBAL:
        w = np.array(
            [
                [
                    ss.equatorial_overlap_qubit(M, j + nu) * ss.equatorial_overlap_qubit(N, j)
                    for nu in range(K)
                ]
                for j in range(N + 1)
            ]
        )
        alpha = w * w
        for j in range(N + 1):
            for jp in range(j + 1, N + 1):
                beta[(j, jp)] = 2.0 * w[j] * w[jp]
    else:
        for j in range(N + 1):
            alpha[j, :] = ss.binomial(N, j) / 2 ** (N + 1)
        for j in range(N):
            beta[(j, j + 1)] = np.array(
                [
                    2
                    * math.sqrt(ss.binomial(N, j) * ss.binomial(N, j + 1))
                    * math.sqrt((M - j - nu) * (j + nu + 1))
                    / (M * 2 ** (N + 1))
                    for nu in range(K)
                ]
            )
    return alpha, beta


def _exhaustive_qubit(criterion: str, N: int, M: int, steps: int):
    K = M - N + 1
    if (N + 1) * K > 6:
        raise RangeError(
            f"exhaustive search gated to <= 6 coefficients; ({N}, {M}) needs {(N + 1) * K}"
        )
    alpha, beta = _qubit_ansatz_arrays(criterion, N, M)
    if K == 1:
        val = float(alpha.sum() + sum(b.sum() for b in beta.values()))
        coeffs = np.ones((N + 1, 1))
        return val, coeffs
    S = _unit_sphere_grid(K, steps)
    diag = [S * S @ alpha[j] for j in range(N + 1)]
    if N == 0:
        i = int(np.argmax(diag[0]))
        return float(diag[0][i]), S[[i]].T
    if N == 1:
        b01 = beta[(0, 1)]
        best, bi, bj = -np.inf, 0, 0
        chunk = 512
        SB = S * b01
        for lo in range(0, S.shape[0], chunk):
            cross = SB[lo:lo + chunk] @ S.T
            vals = diag[0][lo:lo + chunk, None] + diag[1][None, :] + cross
            k = int(np.argmax(vals))
            r, c = divmod(k, vals.shape[1])
            if vals[r, c] > best:
                best, bi, bj = float(vals[r, c]), lo + r, c
        coeffs = np.stack([S[bi], S[bj]], axis=0)
        return best, coeffs
    # N == 2: three groups, pairwise coupling matrices (zero where uncoupled)
    zero = np.zeros((S.shape[0], S.shape[0]))
    P = {
        key: (S * beta[key]) @ S.T if key in beta else zero
        for key in [(0, 1), (0, 2), (1, 2)]
    }
    base = diag[1][:, None] + diag[2][None, :] + P[(1, 2)]
    best, bidx = -np.inf, (0, 0, 0)
    for i0 in range(S.shape[0]):
        vals = base + diag[0][i0] + P[(0, 1)][i0][:, None] + P[(0, 2)][i0][None, :]
        k = int(np.argmax(vals))
        r, c = divmod(k, vals.shape[1])
        if vals[r, c] > best:
            best, bidx = float(vals[r, c]), (i0, r, c)
    coeffs = np.stack([S[bidx[0]], S[bidx[1]], S[bidx[2]]], axis=0)
    return best, coeffs


def _qubit_point_from_grid(N: int, M: int, coeffs: np.ndarray) -> FeasiblePoint:
    K = coeffs.shape[1]
    blocks = []
    for nu in range(K):
        col = coeffs[:, nu]
        blocks.append(((nu,), tuple(float(c) for c in col)))
    return FeasiblePoint(system=ss.QUBIT, n_in=N, n_out=M, blocks=tuple(blocks))


def _qutrit_triples(M: int):
    """Cyclic sector triples (base, sigma(base), sigma^-1(base)) with coeff orders."""
    triples = []
    for nu1 in range(M):
        for nu2 in range(M - nu1):
            s = M - nu1 - nu2 - 1
            triples.append(
                (
                    ((nu1, nu2), (0, 1, 2)),
                    ((s, nu1), (2, 0, 1)),
                    ((nu2, s), (1, 2, 0)),
                )
            )
    return triples


def _exhaustive_qutrit(criterion: str, M: int, steps: int):
    R = _unit_sphere_grid(3, steps) * math.sqrt(3)
    best, best_blocks = -np.inf, None
    for triple in _qutrit_triples(M):
        vals = np.zeros(R.shape[0])
        for (w, perm) in triple:
            Q = _qutrit_block_Q(criterion, M, *w, [0, 1, 2])
            C = R[:, list(perm)] / math.sqrt(3)
            vals += np.einsum("ni,ij,nj->n", C, Q, C)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best = float(vals[k])
            best_blocks = tuple(
                (w, tuple(float(c) for c in R[k, list(perm)] / math.sqrt(3)))
                for (w, perm) in triple
            )
    point = FeasiblePoint(system=ss.QUTRIT, n_in=1, n_out=M, blocks=best_blocks)
    return best, point


def exhaustive_small_search(
    system: str,
    criterion: str,
    n_in: int,
    n_out: int,
    grid_steps: int = 200,
) -> OracleResult:
    """Dense angle-grid scan of the small-case ansatz families.

    Qubits: sectors nu = 0..M-N with free per-group amplitudes (gated to
    at most 6 coefficients).  Qutrits: the cyclic three-sector family
    with a shared amplitude triple.  Accurate to O(1/grid_steps) on the
    scanned family.
    """
    _check_bounds(system, n_in, n_out)
    if not 2 <= grid_steps <= 200:
        raise RangeError(f"grid_steps must lie in [2, 200], got {grid_steps}")
    from . import maps

    criterion = maps.normalize_criterion(criterion)
    if system == ss.QUBIT:
        best, coeffs = _exhaustive_qubit(criterion, n_in, n_out, grid_steps)
        point = _qubit_point_from_grid(n_in, n_out, coeffs)
    else:
        best, point = _exhaustive_qutrit(criterion, n_out, grid_steps)
    constructed = maps.constructed_fidelity(system, criterion, n_in, n_out)
    return OracleResult(
        best_value=best,
        best_point=point,
        restarts=1,
        converged=True,
        gap_vs_constructed=best - constructed,
    )


# ---------------------------------------------------------------------------
# delegated mirror-family solve for opposite-parity single-particle maps


def optimize_two_block_single_particle(N: int, M: int) -> np.ndarray:
    """Amplitudes of the nu- sector maximizing the single-particle fidelity
    inside the two-sector mirror family (used when no closed form exists).

    Mirror pairs (j, N-j) satisfy r_j^2 + r_{N-j}^2 = 2 and are
    parameterized by one angle each; the small bounded problem is solved
    deterministically by multi-start L-BFGS-B.
    """
    from .choi import single_particle_fidelity
    from .qubit import _mirror_pair

    npairs = (N + 1) // 2

    def r_of(theta: np.ndarray) -> np.ndarray:
        r = np.ones(N + 1)
        for p in range(npairs):
            r[p] = math.sqrt(2) * math.cos(theta[p])
            r[N - p] = math.sqrt(2) * math.sin(theta[p])
        return r

    def neg(theta: np.ndarray) -> float:
        return -single_particle_fidelity(_mirror_pair(N, M, r_of(theta)))

    bounds = [(0.0, math.pi / 2)] * npairs
    best_val, best_theta = np.inf, None
    starts = np.linspace(0.1, math.pi / 2 - 0.1, 5)
    grids = np.meshgrid(*([starts] * npairs), indexing="ij")
    for theta0 in np.stack([g.ravel() for g in grids], axis=1):
        res = minimize(neg, theta0, method="L-BFGS-B", bounds=bounds)
        if res.fun < best_val:
            best_val, best_theta = res.fun, res.x
    return r_of(best_theta)


# ---------------------------------------------------------------------------
# semidefinite full-block variant (rank-one reduction cross-check)


def full_block_search(system: str, criterion: str, n_in: int, n_out: int) -> float:
    """Maximize over full PSD sector blocks (no rank-one restriction).

    Confirms empirically that saturating the off-diagonal elements is
    optimal.  Gated to the smallest sizes; requires the optional cvxpy
    dependency.
    """
    if n_in != 1 or n_out > 3:
        raise RangeError("full-block search gated to N = 1, M <= 3")
    import cvxpy as cp

    from . import maps

    criterion = maps.normalize_criterion(criterion)
    st = _build_structure(system, criterion, n_in, n_out)
    dim_in = ss.sym_dim(system, n_in)
    blocks_R = []
    objective = 0
    per_index = [0] * dim_in
    for (weight, keys), sl in zip(st.blocks, st.slices):
        n = sl.stop - sl.start
        R = cp.Variable((n, n), symmetric=True)
        blocks_R.append(R)
        objective += cp.sum(cp.multiply(st.Q[sl, sl], R))
        for a in range(n):
            flat = sl.start + a
            for gi, g in enumerate(st.groups):
                if flat in g:
                    per_index[gi] = per_index[gi] + R[a, a]
    constraints = [R >> 0 for R in blocks_R]
    constraints += [per_index[g] == 1 for g in range(dim_in)]
    prob = cp.Problem(cp.Maximize(objective), constraints)
    try:
        prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-11, tol_gap_rel=1e-11)
    except (cp.error.SolverError, AttributeError):
        prob.solve()
    return float(prob.value)
