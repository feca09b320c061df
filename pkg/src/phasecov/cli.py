"""Command-line front end: fidelity reports, table sweeps, verification.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import maps, symspace as ss
from .choi import (
    check_covariance_dense,
    expand_dense,
    run_checks,
)
from .errors import PhasecovError, RangeError
from .reports import build_report
from .tensor import min_eigenvalue

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3


def _fmt(x: float) -> str:
    return f"{x:.15g}"


def _default_seed() -> int:
    try:
        return int(os.environ.get("PHASECOV_SEED", "0"))
    except ValueError:
        return 0


def _sweep_cells(args) -> list[tuple[str, str, int, int]]:
    """Expand the sweep flags into (system, criterion, N, M) cells.

    Rows are ordered N ascending, then M, then criterion; M starts at
    max(N, m_min).  An empty expansion is an input error.
    """
    system = args.system
    if args.criterion == "both":
        criteria = list(maps.CRITERIA)
    else:
        criteria = [maps.normalize_criterion(args.criterion)]
    n_lo, n_hi = args.n_min, args.n_max
    if system == ss.QUTRIT:
        if (n_lo, n_hi) != (1, 1):
            raise ValueError("qutrit sweeps require an input range of exactly [1, 1]")
    cells = []
    for n in range(n_lo, n_hi + 1):
        for m in range(max(n, args.m_min), args.m_max + 1):
            for crit in criteria:
                cells.append((system, crit, n, m))
    if not cells:
        raise ValueError("empty sweep range")
    return cells


def _table_rows(cells, seed: int) -> list[dict]:
    rows = []
    for system, criterion, n, m in cells:
        cf = maps.closed_form(system, criterion, n, m)
        if cf is not None:
            value, source = cf, "closed-form"
        else:
            value, source = maps.constructed_fidelity(system, criterion, n, m), "constructed"
        rows.append(
            {
                "system": system,
                "criterion": criterion,
                "N": n,
                "M": m,
                "fidelity": float(_fmt(value)),
                "source": source,
            }
        )
    return rows


def _write_table(rows: list[dict], fmt: str, path: str | None) -> None:
    if fmt == "csv":
        lines = ["system,criterion,N,M,fidelity,source"]
        for r in rows:
            lines.append(
                f"{r['system']},{r['criterion']},{r['N']},{r['M']},"
                f"{_fmt(r['fidelity'])},{r['source']}"
            )
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(rows, indent=2) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def cmd_fidelity(args) -> int:
    report = build_report(
        args.system,
        args.criterion,
        args.n,
        args.m,
        with_oracle=args.with_oracle,
        oracle_restarts=args.restarts,
        seed=args.seed,
    )
    print(report.to_json())
    return EXIT_OK


def cmd_table(args) -> int:
    cells = _sweep_cells(args)
    rows = _table_rows(cells, args.seed)
    try:
        _write_table(rows, args.format, args.output)
        if args.output and args.figure:
            from .plotting import render_table_figure

            stem, _ = os.path.splitext(args.output)
            render_table_figure(rows, stem + ".png")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _offblock_perturbed_checks(system: str, criterion: str, n: int, m: int) -> dict:
    """Check bundle for a map corrupted by an off-sector Choi element."""
    op = maps.build_optimal_map(system, criterion, n, m)
    R = expand_dense(op)
    a = 0
    b = (op.dim_out - 1) * op.dim_in
    R[a, b] += 0.1
    R[b, a] += 0.1
    R4 = R.reshape(op.dim_out, op.dim_in, op.dim_out, op.dim_in)
    trace_res = float(np.abs(np.einsum("mnmq->nq", R4) - np.eye(op.dim_in)).max())
    mineig = min_eigenvalue(R)
    cov_res = check_covariance_dense(R, system, n, m, phase_grid=12)
    return {
        "trace_preserving": {"pass": trace_res < 1e-12, "residual": trace_res},
        "psd": {"pass": mineig >= -1e-10, "min_eig": mineig},
        "covariant": {"pass": cov_res < 1e-10, "residual": cov_res},
    }


def cmd_verify(args) -> int:
    cells = _sweep_cells(args)
    failures = []
    details = []
    for system, criterion, n, m in cells:
        if args.inject_fault == "offblock":
            checks = _offblock_perturbed_checks(system, criterion, n, m)
            cell_detail = {
                "system": system,
                "criterion": criterion,
                "N": n,
                "M": m,
                "checks": checks,
            }
        else:
            op = maps.build_optimal_map(system, criterion, n, m)
            checks = run_checks(op, phase_grid=12)
            from_choi = maps.fidelity_of(op, criterion)
            cf = maps.closed_form(system, criterion, n, m)
            if cf is not None:
                res = abs(cf - from_choi)
                checks["closed_form_vs_choi"] = {"pass": res < 1e-9, "residual": res}
            if args.with_oracle:
                from .oracle import maximize_fidelity

                result = maximize_fidelity(
                    system, criterion, n, m, restarts=args.restarts, seed=args.seed
                )
                gap = result.gap_vs_constructed
                checks["oracle_gap"] = {"pass": abs(gap) <= 1e-6, "residual": gap}
            cell_detail = {
                "system": system,
                "criterion": criterion,
                "N": n,
                "M": m,
                "checks": checks,
            }
        details.append(cell_detail)
        for name, entry in cell_detail["checks"].items():
            if not entry["pass"]:
                residual = entry.get("residual", entry.get("min_eig"))
                failures.append((system, criterion, n, m, name, residual))
    for system, criterion, n, m, name, residual in failures:
        print(
            f"FAIL {system} {criterion} N={n} M={m} check={name} residual={residual:.3e}"
        )
    print(
        f"verify: {len(cells)} cells, {len(cells) - len({f[:4] for f in failures})} clean, "
        f"{len(failures)} failing checks"
    )
    if args.detail:
        try:
            with open(args.detail, "w") as fh:
                json.dump(details, fh, indent=2, default=float)
                fh.write("\n")
        except OSError as exc:
            print(f"error: cannot write detail file: {exc}", file=sys.stderr)
            return EXIT_IO
    return EXIT_OK if not failures else EXIT_VERIFY


def cmd_oracle(args) -> int:
    from .oracle import exhaustive_small_search, maximize_fidelity

    if args.grid is not None:
        result = exhaustive_small_search(
            args.system, args.criterion, args.n, args.m, grid_steps=args.grid
        )
    else:
        result = maximize_fidelity(
            args.system, args.criterion, args.n, args.m,
            restarts=args.restarts, seed=args.seed,
        )
    payload = {
        "system": args.system,
        "criterion": maps.normalize_criterion(args.criterion),
        "n_in": args.n,
        "n_out": args.m,
        "best_value": float(_fmt(result.best_value)),
        "gap_vs_constructed": float(f"{result.gap_vs_constructed:.6g}"),
        "restarts": result.restarts,
        "converged": result.converged,
    }
    print(json.dumps(payload, indent=2))
    return EXIT_OK


def _add_case_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", required=True, choices=[ss.QUBIT, ss.QUTRIT])
    p.add_argument("--criterion", default="global",
                   choices=["global", "single", "single-particle"])
    p.add_argument("--n", type=int, default=1, help="input copies N")
    p.add_argument("--m", type=int, required=True, help="output copies M")


def _add_sweep_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--system", required=True, choices=[ss.QUBIT, ss.QUTRIT])
    p.add_argument("--criterion", default="both",
                   choices=["global", "single", "single-particle", "both"])
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, default=1)
    p.add_argument("--m-min", type=int, default=1)
    p.add_argument("--m-max", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phasecov",
        description="Optimal phase-covariant cloning maps for equatorial qubits and qutrits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fid = sub.add_parser("fidelity", help="report for one (system, criterion, N, M)")
    _add_case_flags(p_fid)
    p_fid.add_argument("--with-oracle", action="store_true")
    p_fid.add_argument("--restarts", type=int, default=50)
    p_fid.add_argument("--seed", type=int, default=None)
    p_fid.set_defaults(func=cmd_fidelity)

    p_tab = sub.add_parser("table", help="fidelity sweep to CSV/JSON (+ figure)")
    _add_sweep_flags(p_tab)
    p_tab.add_argument("--format", default="csv", choices=["csv", "json"])
    p_tab.add_argument("--output", default=None, help="output file (default stdout)")
    p_tab.add_argument("--figure", action=argparse.BooleanOptionalAction, default=True,
                       help="render a PNG next to the output file")
    p_tab.add_argument("--seed", type=int, default=None)
    p_tab.set_defaults(func=cmd_table)

    p_ver = sub.add_parser("verify", help="run invariant checks over a sweep")
    _add_sweep_flags(p_ver)
    p_ver.add_argument("--with-oracle", action="store_true")
    p_ver.add_argument("--restarts", type=int, default=50)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--inject-fault", default=None, choices=["offblock"])
    p_ver.add_argument("--detail", default=None, help="JSON detail file path")
    p_ver.set_defaults(func=cmd_verify)

    p_orc = sub.add_parser("oracle", help="run the optimizer directly")
    _add_case_flags(p_orc)
    p_orc.add_argument("--restarts", type=int, default=50)
    p_orc.add_argument("--seed", type=int, default=None)
    p_orc.add_argument("--grid", type=int, default=None,
                       help="use the exhaustive grid search with this many steps")
    p_orc.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", None) is None:
        args.seed = _default_seed()
    try:
        return args.func(args)
    except (PhasecovError, RangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
