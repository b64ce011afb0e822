import numpy as np
import pytest

from circuitgrowth.architecture import brickwork, construct, identity_point, sample_point, single_slot
from circuitgrowth.dimension import (
    DimensionCurve,
    accessible_dimension,
    allstructure_dimension_upper,
    dimension_curve,
    generic_rank_probe,
    growth_report,
    jacobian_at,
)
from circuitgrowth.linalg import expm_antihermitian, generator_basis, su_coordinates
from circuitgrowth.oracle import highprec_rank

# Minted with scripts/mint_oracle_values.py: 160-bit Jacobian ranks of brickwork(3),
# 10 random points at k = 1 and 3 points for every other k; all points agreed.
ORACLE_BRICKWORK3 = [0, 27, 45, 63, 63, 63, 63, 63, 63]


def fd_column(point, m, j, eps=1e-6):
    h = generator_basis(4)[j]
    nudged = point.replace_gate(m, expm_antihermitian(1j * eps * h) @ point.gates[m])
    f = construct(point)
    diff = (construct(nudged) @ f.conj().T - np.eye(f.shape[0])) / (1j * eps)
    return su_coordinates(diff, generator_basis(f.shape[0]))


def test_jacobian_shape_and_single_gate_rank(rng):
    frame = jacobian_at(sample_point(brickwork(3), 2, rng))
    assert frame.jacobian.shape == (63, 60)
    assert jacobian_at(sample_point(single_slot(2), 1, rng)).rank() == 15


@pytest.mark.parametrize("arch", [brickwork(2), brickwork(3), single_slot(3, (2, 0))])
def test_jacobian_matches_finite_differences(arch, rng):
    point = sample_point(arch, 2, rng)
    jac = jacobian_at(point).jacobian
    for _ in range(8):
        m, j = rng.integers(len(point.gates)), rng.integers(15)
        col = jac[:, 15 * m + j]
        fd = fd_column(point, m, j)
        assert np.linalg.norm(fd - col) / np.linalg.norm(col) <= 1e-4


def test_jacobian_needs_a_block():
    with pytest.raises(ValueError):
        jacobian_at(identity_point(brickwork(3), 0))


def test_k1_brickwork3_rank_matches_oracle(rng):
    for _ in range(10):
        assert jacobian_at(sample_point(brickwork(3), 1, rng)).rank() == ORACLE_BRICKWORK3[1]


@pytest.mark.parametrize("n,slots,k", [(2, [(0, 1)], 1), (3, [(0, 1), (1, 2)], 1)])
def test_highprec_oracle_agrees(n, slots, k):
    arch = brickwork(n)
    assert highprec_rank(n, slots, k, seed=99) == accessible_dimension(arch, k, 3, rng=np.random.default_rng(0))[0]


def test_accessible_dimension_k0_and_single_slot():
    assert accessible_dimension(brickwork(3), 0, rng=np.random.default_rng(0)) == (0, [0] * 5)
    for k in range(1, 5):
        d, ranks = accessible_dimension(single_slot(2), k, 3, rng=np.random.default_rng(k))
        assert d == 15 and ranks == [15, 15, 15]


def test_curve_single_slot():
    curve = dimension_curve(single_slot(2), 4, rng=np.random.default_rng(0))
    assert curve.values() == [0, 15, 15, 15, 15]


def test_curve_brickwork3_matches_oracle():
    curve = dimension_curve(brickwork(3), 5, rng=np.random.default_rng(1))
    assert curve.values() == ORACLE_BRICKWORK3[:6]
    assert all(e.tol_stable and e.deficient_count == 0 for e in curve.entries)


def test_curve_respects_parameter_count():
    arch = brickwork(4)
    curve = dimension_curve(arch, 3, samples=2, rng=np.random.default_rng(2))
    for e in curve.entries:
        assert all(r <= 15 * e.k * arch.size and r <= 255 for r in e.ranks)
    assert curve.values() == sorted(curve.values())


def test_curve_independent_of_threads():
    a = dimension_curve(brickwork(3), 3, rng=np.random.default_rng(4), threads=1)
    b = dimension_curve(brickwork(3), 3, rng=np.random.default_rng(4), threads=4)
    assert [e.samples for e in a.entries] == [e.samples for e in b.entries]


@pytest.mark.parametrize("n,s,expected", [(3, 0, 0), (3, 2, 30), (2, 10, 15), (3, 5, 63)])
def test_allstructure_upper(n, s, expected):
    assert allstructure_dimension_upper(n, s) == expected


def test_generic_rank_probe():
    assert generic_rank_probe(single_slot(2), 2, 20, rng=np.random.default_rng(0)) == (15, 0)
    generic, deficient = generic_rank_probe(brickwork(3), 2, 20, rng=np.random.default_rng(0))
    assert (generic, deficient) == (ORACLE_BRICKWORK3[2], 0)
    ident_rank = jacobian_at(identity_point(brickwork(3), 2)).rank()
    assert ident_rank < generic
    # at the identity every block contributes the same columns
    assert ident_rank == jacobian_at(identity_point(brickwork(3), 1)).rank()


def test_report_on_stated_curve():
    rep = growth_report(DimensionCurve.from_values(single_slot(2), [0, 15, 15]))
    assert rep.monotone_pass and rep.subadditive_pass and rep.eq2_pass
    assert rep.c2_fit == 7.5
    assert rep.saturation_k == 1


def test_report_flags_parameter_count_violation():
    rep = growth_report(DimensionCurve.from_values(single_slot(2), [0, 16, 15]))
    assert not rep.eq2_pass
    assert rep.eq2_per_k == [True, False, True]
    assert not rep.monotone_pass


def test_report_flags_subadditivity_violation():
    rep = growth_report(DimensionCurve.from_values(brickwork(3), [0, 10, 30]))
    assert not rep.subadditive_pass and rep.subadditive_violations == [(1, 1)]


def test_report_rejects_gaps():
    curve = DimensionCurve.from_values(single_slot(2), [0, 15, 15])
    del curve.entries[1]
    with pytest.raises(ValueError):
        growth_report(curve)


def test_report_on_brickwork3_curve():
    rep = growth_report(DimensionCurve.from_values(brickwork(3), ORACLE_BRICKWORK3), shortcut_c=1.0)
    assert rep.saturation_k == 3
    assert rep.c2_fit == pytest.approx(63 / 8)
    assert rep.shortcut_table[0] == {"k": 1, "d": 27, "s": 1, "allstructure_upper": 15, "exceeds": True}
    js = rep.to_json()
    for name in ("eq2_pass", "monotone_pass", "subadditive_pass", "saturation_k", "c2_fit"):
        assert f'"{name}"' in js
