"""Acceptance criteria: one test per criterion, one pass/fail line each.

Criterion 4 is expected to fail: the independent optimizer (confirmed by
the exhaustive grid scan and the semidefinite full-block variant) finds
0.75 for the (qubit, global, 1->2) optimum, not the 2/3 the criterion
demands.  The assertion is kept as stated rather than weakened; see the
report flags and the mirror-sector construction for the adjudicated map.
"""

import math
import time

import numpy as np
import pytest

from phasecov import qubit, qutrit
from phasecov.choi import (
    check_covariance,
    check_fidelity_phase_constancy,
    expand_dense,
    global_fidelity,
    single_particle_fidelity,
    single_particle_fidelity_direct,
    trace_condition_residual,
)
from phasecov.maps import build_optimal_map, closed_form, construction_flags
from phasecov.oracle import exhaustive_small_search, maximize_fidelity
from phasecov.tensor import min_eigenvalue


def report(num, ok, detail):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} — {detail}")
    assert ok, detail


def test_criterion_01_qubit_global_same_parity():
    t0 = time.time()
    cases = [(1, 3), (1, 5), (1, 7), (2, 4), (2, 6), (3, 5)]
    worst = 0.0
    for n, m in cases:
        op = build_optimal_map("qubit", "global", n, m)
        cf = closed_form("qubit", "global", n, m)
        worst = max(worst, abs(global_fidelity(op) - cf))
    spot = max(
        abs(closed_form("qubit", "global", 1, 3) - 0.75),
        abs(closed_form("qubit", "global", 1, 5) - 0.625),
    )
    elapsed = time.time() - t0
    report(
        1,
        worst < 1e-12 and spot < 1e-12 and elapsed < 1.0,
        f"same-parity global closed forms, worst residual {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_02_qubit_single_particle_closed_forms():
    t0 = time.time()
    targets = {
        (1, 2): 0.853553390593,
        (1, 3): 0.833333333333,
        (2, 3): 0.940958551844,
    }
    worst = max(
        abs(closed_form("qubit", "single-particle", n, m) - val)
        for (n, m), val in targets.items()
    )
    elapsed = time.time() - t0
    report(
        2,
        worst < 1e-9 and elapsed < 1.0,
        f"single-particle closed forms F12/F13/F23, worst residual {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_03_oracle_equivalence():
    t0 = time.time()
    cases = [
        ("qubit", crit, n, m)
        for crit in ("global", "single-particle")
        for n in range(1, 4)
        for m in range(n, 7)
    ] + [
        ("qutrit", crit, 1, m)
        for crit in ("global", "single-particle")
        for m in range(1, 6)
    ]
    worst_gap = 0.0
    worst_grid = 0.0
    for system, crit, n, m in cases:
        result = maximize_fidelity(system, crit, n, m, restarts=50, seed=0)
        worst_gap = max(worst_gap, abs(result.gap_vs_constructed))
        grid_feasible = system == "qutrit" or (n + 1) * (m - n + 1) <= 6
        if grid_feasible:
            grid = exhaustive_small_search(system, crit, n, m, grid_steps=150)
            worst_grid = max(worst_grid, abs(grid.best_value - result.best_value))
    elapsed = time.time() - t0
    report(
        3,
        worst_gap <= 1e-6 and worst_grid <= 2e-4 and elapsed < 120,
        f"oracle gap {worst_gap:.2e}, grid gap {worst_grid:.2e}, {elapsed:.0f}s",
    )


def test_criterion_04_even_m_adjudication():
    flags = construction_flags("qubit", "global", 1, 2)
    flagged = qubit.FLAG_EVEN_M_CLOSED_FORM in flags
    oracle_value = maximize_fidelity("qubit", "global", 1, 2, restarts=50, seed=0).best_value
    matches_stated = abs(oracle_value - 2 / 3) <= 1e-6
    report(
        4,
        flagged and matches_stated,
        f"even-M formula flagged: {flagged}; oracle value {oracle_value:.12f} "
        f"vs stated 2/3 (matches: {matches_stated})",
    )


def test_criterion_05_qutrit_closed_forms():
    residuals = [abs(closed_form("qutrit", "global", 1, 4) - 12 / 27)]
    for m in (4, 7):
        expected = (1 + 2 * (m + 2) / (3 * m)) / 3
        residuals.append(abs(closed_form("qutrit", "single-particle", 1, m) - expected))
        op = build_optimal_map("qutrit", "single-particle", 1, m)
        residuals.append(abs(single_particle_fidelity(op) - expected))
    worst = max(residuals)
    report(5, worst < 1e-12, f"qutrit closed forms, worst residual {worst:.2e}")


def test_criterion_06_channel_integrity():
    t0 = time.time()
    cases = [
        ("qubit", crit, n, m)
        for crit in ("global", "single-particle")
        for n in range(1, 5)
        for m in range(n, 9)
    ] + [
        ("qutrit", crit, 1, m)
        for crit in ("global", "single-particle")
        for m in range(1, 7)
    ]
    worst = {"trace": 0.0, "eig": 0.0, "cov": 0.0, "const": 0.0}
    for system, crit, n, m in cases:
        op = build_optimal_map(system, crit, n, m)
        worst["trace"] = max(worst["trace"], trace_condition_residual(op))
        worst["eig"] = min(worst.get("eig", 0.0), min_eigenvalue(expand_dense(op)))
        worst["cov"] = max(worst["cov"], check_covariance(op, phase_grid=16))
        worst["const"] = max(worst["const"], check_fidelity_phase_constancy(op, phase_grid=16))
    elapsed = time.time() - t0
    ok = (
        worst["trace"] < 1e-12
        and worst["eig"] >= -1e-10
        and worst["cov"] < 1e-10
        and worst["const"] < 1e-10
        and elapsed < 30
    )
    report(
        6,
        ok,
        f"trace {worst['trace']:.1e}, min eig {worst['eig']:.1e}, "
        f"covariance {worst['cov']:.1e}, constancy {worst['const']:.1e}, {elapsed:.0f}s",
    )


def test_criterion_07_symmetric_subspace_reduction():
    t0 = time.time()
    cases = [
        ("qubit", crit, n, m)
        for crit in ("global", "single-particle")
        for n in range(1, 5)
        for m in range(n, 6)
    ] + [
        ("qutrit", crit, 1, m)
        for crit in ("global", "single-particle")
        for m in range(1, 6)
    ]
    worst = 0.0
    for system, crit, n, m in cases:
        op = build_optimal_map(system, crit, n, m)
        worst = max(
            worst,
            abs(single_particle_fidelity(op) - single_particle_fidelity_direct(op)),
        )
    elapsed = time.time() - t0
    report(
        7,
        worst < 1e-10 and elapsed < 30,
        f"block formula vs full-tensor evaluation, worst residual {worst:.2e}, {elapsed:.0f}s",
    )


def test_criterion_08_ordering_claims():
    f12 = single_particle_fidelity(build_optimal_map("qubit", "single-particle", 1, 2))
    f23 = single_particle_fidelity(build_optimal_map("qubit", "single-particle", 2, 3))
    beats_universal = f12 > 5 / 6 and f23 > 11 / 12
    qutrit_below = True
    for crit in ("global", "single-particle"):
        fid = global_fidelity if crit == "global" else single_particle_fidelity
        for m in range(2, 6):
            qb = fid(build_optimal_map("qubit", crit, 1, m))
            qt = fid(build_optimal_map("qutrit", crit, 1, m))
            qutrit_below = qutrit_below and qt < qb
    report(
        8,
        beats_universal and qutrit_below,
        f"F12={f12:.6f} > 5/6, F23={f23:.6f} > 11/12, qutrit below qubit: {qutrit_below}",
    )


def test_criterion_09_estimation_asymptotics():
    t0 = time.time()
    worst_margin = min(
        3 / (2 * m) - abs(closed_form("qubit", "single-particle", 1, m) - 0.75)
        for m in range(3, 102, 2)
    )
    elapsed = time.time() - t0
    report(
        9,
        worst_margin > 0 and elapsed < 1.0,
        f"|F_1M - 3/4| < 3/(2M) for odd M <= 101, min margin {worst_margin:.2e}, {elapsed:.2f}s",
    )


def _same_blocks(a, b):
    if len(a.blocks) != len(b.blocks):
        return False
    for ba, bb in zip(
        sorted(a.blocks, key=lambda x: x.weight), sorted(b.blocks, key=lambda x: x.weight)
    ):
        if ba.weight != bb.weight or abs(ba.scale - bb.scale) > 1e-12:
            return False
        if not np.allclose(ba.coeffs, bb.coeffs, atol=1e-12):
            return False
    return True


def test_criterion_10_same_parity_criterion_coincidence():
    same_ok = True
    for n in range(1, 4):
        for m in range(n, 8):
            if (m - n) % 2 != 0:
                continue
            g = build_optimal_map("qubit", "global", n, m)
            s = build_optimal_map("qubit", "single-particle", n, m)
            same_ok = same_ok and _same_blocks(g, s)
    g23 = build_optimal_map("qubit", "global", 2, 3)
    s23 = build_optimal_map("qubit", "single-particle", 2, 3)
    differs = not _same_blocks(g23, s23)
    report(
        10,
        same_ok and differs,
        f"same-parity maps coincide: {same_ok}; (2,3) criteria differ: {differs}",
    )
