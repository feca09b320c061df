"""Optimal phase-covariant cloning channels for equatorial qubits and qutrits.

Construct the optimal N -> M (qubit) and 1 -> M (qutrit) cloning maps
under the global and single-particle fidelity criteria, apply them in
the symmetric-subspace Choi representation, and verify optimality with
an independent constrained optimizer.
"""

from .choi import (
    ChoiBlock,
    ChoiOperator,
    FidelityReport,
    apply_channel,
    expand_dense,
    global_fidelity,
    run_checks,
    single_particle_fidelity,
)
from .errors import DimensionError, HermiticityError, PhasecovError, RangeError
from .maps import build_optimal_map, closed_form, constructed_fidelity
from .oracle import (
    FeasiblePoint,
    OracleResult,
    exhaustive_small_search,
    maximize_fidelity,
)
from .qubit import QubitCloneSpec
from .qutrit import QutritCloneSpec
from .reports import build_report
from .symspace import QUBIT, QUTRIT
from .tensor import DensityMatrix

__version__ = "0.1.0"

__all__ = [
    "ChoiBlock",
    "ChoiOperator",
    "DensityMatrix",
    "DimensionError",
    "FeasiblePoint",
    "FidelityReport",
    "HermiticityError",
    "OracleResult",
    "PhasecovError",
    "QUBIT",
    "QUTRIT",
    "QubitCloneSpec",
    "QutritCloneSpec",
    "RangeError",
    "apply_channel",
    "build_optimal_map",
    "build_report",
    "closed_form",
    "constructed_fidelity",
    "exhaustive_small_search",
    "expand_dense",
    "global_fidelity",
    "maximize_fidelity",
    "run_checks",
    "single_particle_fidelity",
]
