import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuitgrowth.oracle import bfs_complexities, lattice_mean_l1, lattice_return_probability
from circuitgrowth.walk import (
    CayleyBall,
    CliffordTBackend,
    LatticeBackend,
    PermutationBackend,
    enumerate_group,
    exact_complexity,
    exact_return_probability,
    kingman_estimate,
    make_backend,
    random_word,
    return_probability,
)


def word(backend, labels):
    return backend.word_product([backend.labels.index(lab) for lab in labels])


def test_lattice_examples():
    z1 = LatticeBackend(1)
    g = word(z1, ["+x", "+x", "-x"])
    assert g == (1,) and exact_complexity(z1, g, radius_cap=2) == 1
    z2 = LatticeBackend(2)
    assert exact_complexity(z2, word(z2, ["+x", "+x", "+y", "-x"]), radius_cap=2) == 2


def test_three_cycle_needs_two_transpositions():
    s3 = PermutationBackend(3)
    assert exact_complexity(s3, (1, 2, 0), radius_cap=2) == 2
    assert exact_complexity(s3, s3.generators[0], radius_cap=2) == 1


def test_backends_reject_non_inverse_closed():
    with pytest.raises(ValueError, match="inverse-closed"):
        PermutationBackend(3, {"c": (1, 2, 0)})
    with pytest.raises(ValueError):
        PermutationBackend(3, {"id": (0, 1, 2)})
    with pytest.raises(ValueError):
        make_backend("nope")


def test_random_word_basics():
    be = CliffordTBackend()
    rec = random_word(be, 0, np.random.default_rng(0))
    assert rec.word == () and be.is_identity(rec.element)
    a = random_word(be, 30, np.random.default_rng(9))
    b = random_word(be, 30, np.random.default_rng(9))
    assert a.word == b.word and a.key == b.key


def test_nonuniform_weights():
    be = LatticeBackend(1)
    rec = random_word(be, 50, np.random.default_rng(0), weights=[1.0, 0.0])
    assert rec.element == (50,)
    with pytest.raises(ValueError):
        random_word(be, 5, np.random.default_rng(0), weights=[0.5, 0.2])


def test_identity_and_generators():
    be = CliffordTBackend()
    assert exact_complexity(be, be.identity, 3) == 0
    for g in be.generators:
        assert exact_complexity(be, g, 3) == 1


@pytest.fixture(scope="module")
def clifford_oracle():
    be = CliffordTBackend()
    return be, bfs_complexities(be.identity, be.generators, be.multiply, be.key, 6)


def test_htH_matches_plain_bfs(clifford_oracle):
    be, oracle = clifford_oracle
    g = word(be, ["H", "T", "H"])
    assert oracle[be.key(g)] == 3
    assert exact_complexity(be, g, radius_cap=2) == 3
    assert exact_complexity(be, g, radius_cap=1) is None


@pytest.mark.parametrize("backend,radius", [
    (LatticeBackend(2), 8),
    (PermutationBackend(4), 6),
    (CliffordTBackend(projective=False), 5),
])
def test_bidirectional_equals_bfs(backend, radius):
    oracle = bfs_complexities(backend.identity, backend.generators, backend.multiply, backend.key, radius)
    ball = CayleyBall(backend)
    ball.grow((radius + 1) // 2)
    full = CayleyBall(backend)
    full.grow(radius)
    elems = [g for layer in full.layers for g in layer]
    for g in elems:
        assert ball.query(g) == oracle[backend.key(g)]


def test_memory_cap_censors_instead_of_guessing(clifford_oracle):
    be, oracle = clifford_oracle
    ball = CayleyBall(be, memory_cap=20)
    ball.grow(6)
    assert ball.truncated and ball.radius == 2 and len(ball) == 17
    full = CayleyBall(be)
    full.grow(6)
    for layer in full.layers:
        for g in layer:
            got = ball.query(g)
            assert got is None or got == oracle[be.key(g)]
            if oracle[be.key(g)] <= 4:
                assert got == oracle[be.key(g)]


def test_projective_and_unquotiented_differ():
    proj, raw = CliffordTBackend(), CliffordTBackend(projective=False)
    # (HS)^3 is a pure phase: trivial projectively, not in the unquotiented group
    idx = [0, 1] * 3
    assert exact_complexity(proj, proj.word_product(idx), 3) == 0
    assert exact_complexity(raw, raw.word_product(idx), 4) > 0


@given(st.lists(st.integers(0, 5), max_size=25))
@settings(max_examples=60, deadline=None)
def test_lattice_complexity_is_l1_norm(letters):
    be = LatticeBackend(3)
    g = be.word_product(letters)
    assert exact_complexity(be, g, radius_cap=13) == sum(map(abs, g))


@given(st.lists(st.integers(0, 4), max_size=8), st.lists(st.integers(0, 4), max_size=8))
@settings(max_examples=60, deadline=None)
def test_word_length_metric_properties(u_word, v_word):
    be = CliffordTBackend()
    ball = _shared_ball()
    u, v = be.word_product(u_word), be.word_product(v_word)
    cu, cv, cuv = ball.query(u), ball.query(v), ball.query(be.multiply(u, v))
    assert cu <= len(u_word) and cv <= len(v_word)
    assert ball.query(be.inverse(u)) == cu
    assert cuv <= cu + cv


_BALL = {}


def _shared_ball():
    if "b" not in _BALL:
        _BALL["b"] = CayleyBall(CliffordTBackend())
        _BALL["b"].grow(8)
    return _BALL["b"]


def test_closed_form_lattice_oracle():
    assert float(lattice_mean_l1(1, 400)) == pytest.approx(math.sqrt(2 * 400 / math.pi), rel=2e-3)
    assert float(lattice_mean_l1(1, 400)) / 400 == pytest.approx(0.0399, abs=1e-4)
    assert float(lattice_mean_l1(2, 4)) == pytest.approx(
        sum(sum(map(abs, LatticeBackend(2).word_product(w))) for w in np.ndindex(4, 4, 4, 4)) / 256
    )
    assert float(lattice_return_probability(200)) == pytest.approx(0.0563, abs=1e-4)


def test_kingman_lattice1_small_ratio():
    est = kingman_estimate(LatticeBackend(1), [400], 200, radius_cap=60, rng=np.random.default_rng(0))
    row = est.row(400)
    assert row.censored_count == 0
    assert row.mean_ratio <= 0.08
    exact = float(lattice_mean_l1(1, 400)) / 400
    assert abs(row.mean_ratio - exact) <= 4 * row.stderr


def test_kingman_reports_censoring():
    est = kingman_estimate(CliffordTBackend(), [0, 2, 30], 10, radius_cap=1, rng=np.random.default_rng(0))
    assert est.row(0).censored_count == 0 and est.row(0).mean_ratio is None
    assert est.row(30).censored_count > 0
    all_cens = kingman_estimate(LatticeBackend(1), [41], 5, radius_cap=1, rng=np.random.default_rng(0), weights=[1.0, 0.0])
    assert all_cens.row(41).all_censored and all_cens.row(41).mean_ratio is None


def test_kingman_independent_of_threads():
    args = (CliffordTBackend(), [4, 8], 12)
    a = kingman_estimate(*args, radius_cap=4, rng=np.random.default_rng(3), threads=1)
    b = kingman_estimate(*args, radius_cap=4, rng=np.random.default_rng(3), threads=4)
    assert [(r.word, r.complexity) for r in a.records] == [(r.word, r.complexity) for r in b.records]
    assert a.to_csv() == b.to_csv()


def test_exact_return_probability_small_groups():
    s3 = PermutationBackend(3)
    assert len(enumerate_group(s3)) == 6
    # hexagonal Cayley graph: after an even number of steps the walk is uniform on 3 even elements
    assert exact_return_probability(s3, 64) == pytest.approx(1 / 3, abs=1e-12)
    assert exact_return_probability(s3, 2) == pytest.approx(0.5)
    assert exact_return_probability(s3, 3) == 0.0
    with pytest.raises(ValueError):
        exact_return_probability(LatticeBackend(1), 4, max_elements=100)


def test_return_probability_permutation_near_one():
    est = return_probability(PermutationBackend(3), [32], 2000, rng=np.random.default_rng(0))[0]
    assert est.rho_estimate >= 0.9
    exact = exact_return_probability(PermutationBackend(3), 64)
    assert abs(est.returns / est.trials - exact) < 0.05


def test_return_probability_zero_returns_is_upper_bound():
    est = return_probability(LatticeBackend(1), [50], 10, rng=np.random.default_rng(1))[0]
    if est.returns == 0:
        assert est.upper_bound and est.rho_estimate == pytest.approx((1 / 10) ** (1 / 100))
    est = return_probability(LatticeBackend(3), [200], 5, rng=np.random.default_rng(1))[0]
    assert est.upper_bound and est.returns == 0
