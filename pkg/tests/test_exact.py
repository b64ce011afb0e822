import cmath
import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circuitgrowth import exact
from circuitgrowth.exact import (
    ONE,
    ExactUnitary,
    GateSet,
    RingScalar,
    canonical_key,
    clifford_t_gateset,
    identity,
    inverse,
    is_exactly_unitary,
    multiply,
    omega_times,
    phase_equal,
    reduce,
    ring_add,
    ring_conj,
    ring_mul,
    word_product,
)
from circuitgrowth.walk import CayleyBall, CliffordTBackend

W = cmath.exp(1j * cmath.pi / 4)
ints = st.integers(-(2**40), 2**40)
scalars = st.builds(lambda a, b, c, d, k: reduce(RingScalar(a, b, c, d, k)), ints, ints, ints, ints, st.integers(0, 12))
GS = clifford_t_gateset()
H, S, SDG, T, TDG = GS.elements


def close(x, y):
    return abs(x - y) <= 1e-9 * max(1.0, abs(y))


def test_ring_examples():
    assert ring_mul(ONE, ONE) == ONE
    assert ring_mul(RingScalar(0, 1, 0, 0), RingScalar(0, 0, 0, 1)) == RingScalar(-1, 0, 0, 0)
    sqrt2 = RingScalar(0, 1, 0, -1)
    assert ring_mul(sqrt2, sqrt2) == RingScalar(2, 0, 0, 0)


def test_reduce_examples():
    assert reduce(RingScalar(2, 0, 0, 0, 2)) == ONE
    assert reduce(RingScalar(1, 1, 0, 0, 1)) == RingScalar(1, 1, 0, 0, 1)
    assert reduce(RingScalar(0, 0, 0, 0, 5)) == RingScalar(0, 0, 0, 0, 0)


@given(scalars)
def test_reduce_idempotent(x):
    assert reduce(x) == x


@given(scalars, scalars)
@settings(max_examples=200)
def test_float_embedding_is_a_homomorphism(x, y):
    assert close(complex(ring_add(x, y)), complex(x) + complex(y))
    assert close(complex(ring_mul(x, y)), complex(x) * complex(y))
    assert close(complex(ring_conj(x)), complex(x).conjugate())
    assert close(complex(omega_times(x)), W * complex(x))


@given(scalars, st.integers(0, 6))
def test_reduce_is_a_normal_form(x, j):
    # the same number written with j extra factors sqrt2 / sqrt2
    a, b, c, d = x[:4]
    for _ in range(j):
        a, b, c, d = exact._times_sqrt2(a, b, c, d)
    assert reduce(RingScalar(a, b, c, d, x.k + j)) == x


@given(scalars, scalars, scalars)
def test_ring_axioms(x, y, z):
    assert ring_mul(x, ring_mul(y, z)) == ring_mul(ring_mul(x, y), z)
    assert ring_mul(x, ring_add(y, z)) == ring_add(ring_mul(x, y), ring_mul(x, z))
    assert ring_add(x, y) == ring_add(y, x)


def test_gate_identities():
    assert H @ H == identity()
    assert T @ T == S
    assert T @ TDG == identity()
    assert phase_equal(multiply(H, H), identity())


def test_gate_matrices_match_floats():
    s2 = 1 / np.sqrt(2)
    refs = {
        "H": np.array([[s2, s2], [s2, -s2]]),
        "S": np.diag([1, 1j]),
        "Sdg": np.diag([1, -1j]),
        "T": np.diag([1, W]),
        "Tdg": np.diag([1, W.conjugate()]),
    }
    for lab, u in zip(GS.labels, GS.elements):
        m = np.array(u.to_complex())
        ref = refs[lab]
        # equal up to a power of omega
        assert any(np.allclose(m, W**j * ref) for j in range(8)), lab


def random_word(r, n):
    return [r.choice(GS.elements) for _ in range(n)]


def test_inverse_and_associativity():
    r = random.Random(0)
    for _ in range(100):
        u = word_product(random_word(r, 8))
        assert multiply(u, inverse(u)) == identity()
        a, b, c = (word_product(random_word(r, r.randint(0, 8))) for _ in range(3))
        assert multiply(a, multiply(b, c)) == multiply(multiply(a, b), c)


def test_phase_equal_and_keys():
    u = word_product(random_word(random.Random(1), 9))
    raw = ExactUnitary(tuple(omega_times(e) for e in u.entries), projective=False)
    assert phase_equal(raw, u) or phase_equal(u, raw)
    assert canonical_key(raw) == canonical_key(u)
    assert canonical_key(identity()) == canonical_key(ExactUnitary.of([omega_times(e, 3) for e in identity(False).entries], False))
    assert canonical_key(T) != canonical_key(S)


def test_unquotiented_products_keep_phase():
    t = clifford_t_gateset(projective=False)
    tt = dict(zip(t.labels, t.elements))
    eight = word_product([tt["T"]] * 8, projective=False)
    assert eight == identity(False)
    four = word_product([tt["T"]] * 4, projective=False)
    assert four != identity(False) and phase_equal(four, identity(False)) is False
    hh = word_product([tt["H"], tt["S"]] * 3, projective=False)  # (HS)^3 = w I
    assert hh != identity(False)
    assert word_product([tt["H"], tt["S"]] * 3, projective=True) == identity()


def test_long_word_stays_exact():
    r = random.Random(2)
    u = word_product(random_word(r, 10_000))
    assert is_exactly_unitary(u)
    assert max(abs(v) for e in u.entries for v in e[:4]).bit_length() > 64


def test_gateset_json_round_trip():
    text = GS.to_json()
    assert GateSet.from_json(text) == GS


def test_gateset_loader_rejects_missing_inverse():
    data = json.loads(GS.to_json())
    data["gates"] = [g for g in data["gates"] if g["label"] != "Tdg"]
    with pytest.raises(ValueError, match="not inverse-closed"):
        GateSet.from_json(json.dumps(data))


def test_gateset_loader_rejects_non_unitary():
    data = json.loads(GS.to_json())
    data["gates"][0]["matrix"][0][0] = [1, 0, 0, 0, 0]
    with pytest.raises(ValueError, match="not exactly unitary"):
        GateSet.from_json(json.dumps(data))


def test_gateset_rejects_phase_duplicates():
    with pytest.raises(ValueError, match="phase-equal"):
        GateSet("dup", ("H", "H2"), (H, H))


def test_ball_sizes_strictly_increase():
    ball = CayleyBall(CliffordTBackend())
    ball.grow(10)
    sizes = ball.sizes()
    assert all(a < b for a, b in zip(sizes, sizes[1:]))
    assert sizes[:4] == [1, 6, 17, 41]
