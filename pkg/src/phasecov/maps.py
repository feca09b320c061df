"""Uniform facade over the qubit and qutrit constructors.

Callers (oracle, reports, CLI) address a case as (system, criterion,
n_in, n_out) without caring which constructor module owns it.
"""

from __future__ import annotations

from . import qubit, qutrit, symspace as ss
from .choi import ChoiOperator, global_fidelity, single_particle_fidelity
from .errors import RangeError

GLOBAL = "global"
SINGLE = "single-particle"
CRITERIA = (GLOBAL, SINGLE)


def normalize_criterion(name: str) -> str:
    aliases = {"global": GLOBAL, "single": SINGLE, "single-particle": SINGLE}
    try:
        return aliases[name]
    except KeyError:
        raise ValueError(f"unknown criterion {name!r}") from None


def build_optimal_map(system: str, criterion: str, n_in: int, n_out: int) -> ChoiOperator:
    criterion = normalize_criterion(criterion)
    if system == ss.QUBIT:
        return qubit.optimal_map(qubit.QubitCloneSpec(n_in, n_out, criterion))
    if system == ss.QUTRIT:
        if n_in != 1:
            raise RangeError("qutrit cloning is built for a single input copy")
        return qutrit.optimal_map_qutrit(qutrit.QutritCloneSpec(n_out, criterion))
    raise ValueError(f"unknown system {system!r}")


def closed_form(system: str, criterion: str, n_in: int, n_out: int) -> float | None:
    criterion = normalize_criterion(criterion)
    if system == ss.QUBIT:
        return qubit.closed_form_fidelity(qubit.QubitCloneSpec(n_in, n_out, criterion))
    return qutrit.closed_form_qutrit_fidelity(qutrit.QutritCloneSpec(n_out, criterion))


def construction_flags(system: str, criterion: str, n_in: int, n_out: int) -> tuple[str, ...]:
    criterion = normalize_criterion(criterion)
    if system == ss.QUBIT:
        return qubit.construction_flags(qubit.QubitCloneSpec(n_in, n_out, criterion))
    return qutrit.construction_flags(qutrit.QutritCloneSpec(n_out, criterion))


def fidelity_of(op: ChoiOperator, criterion: str) -> float:
    criterion = normalize_criterion(criterion)
    if criterion == GLOBAL:
        return global_fidelity(op)
    return single_particle_fidelity(op)


def constructed_fidelity(system: str, criterion: str, n_in: int, n_out: int) -> float:
    return fidelity_of(build_optimal_map(system, criterion, n_in, n_out), criterion)
