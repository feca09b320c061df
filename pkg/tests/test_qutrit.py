"""Tests for the qutrit cloning-map constructions and closed forms."""

import math

import numpy as np
import pytest

from phasecov import qutrit
from phasecov.choi import global_fidelity, single_particle_fidelity
from phasecov.errors import RangeError
from phasecov.qutrit import QutritCloneSpec, optimal_map_qutrit

# independently verified optima (constrained-optimizer cross-checked)
GLOBAL_VALUES = {
    2: 5 / 9,
    3: 4 / 9,
    4: 12 / 27,
    5: 0.3292181069958845,
    6: 0.2880658436213992,
}
SINGLE_VALUES = {
    2: 0.7602588021348051,
    3: 0.6928964419444211,
    4: 2 / 3,
    5: 0.6403700850309326,
    6: 0.6263842898686654,
}


class TestSpecValidation:
    def test_single_input_copy_only(self):
        with pytest.raises(RangeError):
            QutritCloneSpec(3, n_in=2)
        with pytest.raises(RangeError):
            QutritCloneSpec(0)


class TestStructure:
    def test_residue_one_single_sector(self):
        op = optimal_map_qutrit(QutritCloneSpec(4, qutrit.GLOBAL))
        assert len(op.blocks) == 1
        assert op.blocks[0].weight == (1, 1)
        assert op.blocks[0].coeffs == (1.0, 1.0, 1.0)

    @pytest.mark.parametrize("m", [2, 3, 5, 6])
    def test_other_residues_cyclic_triple(self, m):
        op = optimal_map_qutrit(QutritCloneSpec(m, qutrit.GLOBAL))
        assert len(op.blocks) == 3
        assert all(b.scale == pytest.approx(1 / 3) for b in op.blocks)
        # each block carries the same amplitude multiset, cyclically shifted
        base = sorted(op.blocks[0].coeffs)
        for b in op.blocks[1:]:
            assert sorted(b.coeffs) == pytest.approx(base)

    def test_central_coefficients_normalized(self):
        for m in (2, 3, 5, 6):
            for crit in (qutrit.GLOBAL, qutrit.SINGLE):
                r0, r1, r2 = qutrit.central_coefficients(m, crit)
                assert r0**2 + r1**2 + r2**2 == pytest.approx(3.0, abs=1e-12)
                assert r1 == r2

    def test_equal_sector_contributions(self):
        # the permutation symmetry makes all three sectors contribute equally
        op = optimal_map_qutrit(QutritCloneSpec(3, qutrit.GLOBAL))
        from phasecov.choi import ChoiOperator

        per_block = [
            global_fidelity(
                ChoiOperator(system=op.system, n_in=1, n_out=3, blocks=(b,))
            )
            for b in op.blocks
        ]
        assert max(per_block) - min(per_block) < 1e-12


class TestFidelities:
    @pytest.mark.parametrize("m,expected", sorted(GLOBAL_VALUES.items()))
    def test_global_values(self, m, expected):
        op = optimal_map_qutrit(QutritCloneSpec(m, qutrit.GLOBAL))
        assert global_fidelity(op) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("m,expected", sorted(SINGLE_VALUES.items()))
    def test_single_values(self, m, expected):
        op = optimal_map_qutrit(QutritCloneSpec(m, qutrit.SINGLE))
        assert single_particle_fidelity(op) == pytest.approx(expected, abs=1e-12)

    def test_closed_forms_residue_one(self):
        assert qutrit.closed_form_qutrit_fidelity(
            QutritCloneSpec(4, qutrit.GLOBAL)
        ) == pytest.approx(12 / 27, abs=1e-14)
        assert qutrit.closed_form_qutrit_fidelity(
            QutritCloneSpec(4, qutrit.SINGLE)
        ) == pytest.approx((1 + 2 * 6 / 12) / 3, abs=1e-14)
        assert qutrit.closed_form_qutrit_fidelity(QutritCloneSpec(3, qutrit.GLOBAL)) is None

    def test_lambda_weight(self):
        assert qutrit.lambda_M(4, 2, 1) == pytest.approx(0.5)
        with pytest.raises(RangeError):
            qutrit.lambda_M(4, -1, 0)


class TestFlags:
    def test_residue_one_unflagged(self):
        assert qutrit.construction_flags(QutritCloneSpec(4, qutrit.GLOBAL)) == ()

    def test_other_residues_flagged(self):
        flags = qutrit.construction_flags(QutritCloneSpec(3, qutrit.GLOBAL))
        assert len(flags) == 1 and "no closed-form" in flags[0]
