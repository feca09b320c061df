"""Report assembly: one FidelityReport per (system, criterion, N, M) cell."""

from __future__ import annotations

from . import maps
from .choi import FidelityReport, run_checks


def build_report(
    system: str,
    criterion: str,
    n_in: int,
    n_out: int,
    with_oracle: bool = False,
    oracle_restarts: int = 50,
    seed: int = 0,
    phase_grid: int = 12,
) -> FidelityReport:
    criterion = maps.normalize_criterion(criterion)
    op = maps.build_optimal_map(system, criterion, n_in, n_out)
    from_choi = maps.fidelity_of(op, criterion)
    oracle_value = None
    if with_oracle:
        from .oracle import maximize_fidelity

        oracle_value = maximize_fidelity(
            system, criterion, n_in, n_out, restarts=oracle_restarts, seed=seed
        ).best_value
    return FidelityReport(
        system=system,
        criterion=criterion,
        n_in=n_in,
        n_out=n_out,
        closed_form=maps.closed_form(system, criterion, n_in, n_out),
        from_choi=from_choi,
        checks=run_checks(op, phase_grid=phase_grid),
        oracle=oracle_value,
        flags=maps.construction_flags(system, criterion, n_in, n_out),
    )
