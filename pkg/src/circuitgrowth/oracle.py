"""Slow, independently coded reference computations.

Nothing here is used by the fast paths. These routines mint the constants
frozen into the test suite and are re-run (at small sizes) by the tests to
cross-check the fast implementations.

* :func:`highprec_rank` - Jacobian rank of the construction map in
  multiprecision arithmetic, with its own gate sampler, qubit embedding,
  Pauli-string coordinates and full-pivot elimination.
* :func:`bfs_complexities` - single-direction breadth-first word lengths.
* :func:`lattice_mean_l1` / :func:`lattice_return_probability` - closed forms
  for the simple random walk on Z^d.
"""
from __future__ import annotations

import random
from collections import deque
from fractions import Fraction
from itertools import product
from math import comb

import mpmath

# --- multiprecision Jacobian rank ---------------------------------------------

_PAULI = {
    "I": [[1, 0], [0, 1]],
    "X": [[0, 1], [1, 0]],
    "Y": [[0, -1j], [1j, 0]],
    "Z": [[1, 0], [0, -1]],
}


def _mat(rows):
    return [[mpmath.mpc(x) for x in r] for r in rows]


def _mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[mpmath.fsum(a[i][t] * b[t][j] for t in range(m)) for j in range(p)] for i in range(n)]


def _dagger(a):
    return [[mpmath.conj(a[j][i]) for j in range(len(a))] for i in range(len(a[0]))]


def _eye(d):
    return [[mpmath.mpc(1 if i == j else 0) for j in range(d)] for i in range(d)]


def _kron(a, b):
    return [[a[i // len(b)][j // len(b[0])] * b[i % len(b)][j % len(b[0])]
             for j in range(len(a[0]) * len(b[0]))] for i in range(len(a) * len(b))]


def _haar_su4(rnd: random.Random):
    cols = [[mpmath.mpc(rnd.gauss(0, 1), rnd.gauss(0, 1)) for _ in range(4)] for _ in range(4)]
    q = []
    for v in cols:
        for u in q:
            ip = mpmath.fsum(mpmath.conj(x) * y for x, y in zip(u, v))
            v = [y - ip * x for x, y in zip(u, v)]
        nrm = mpmath.sqrt(mpmath.fsum(abs(y) ** 2 for y in v))
        q.append([y / nrm for y in v])
    u = [[q[j][i] for j in range(4)] for i in range(4)]  # columns -> matrix
    det = mpmath.det(mpmath.matrix(u))
    root = mpmath.exp(mpmath.mpc(0, 1) * mpmath.arg(det) / 4)
    return [[x / root for x in r] for r in u]


def _lift(op, pair, n):
    """Embed a 4x4 operator on qubits ``pair`` by explicit index bookkeeping."""
    i, j = pair
    dim = 2**n
    out = [[mpmath.mpc(0)] * dim for _ in range(dim)]
    for row in range(dim):
        for col in range(dim):
            rb = [(row >> (n - 1 - q)) & 1 for q in range(n)]
            cb = [(col >> (n - 1 - q)) & 1 for q in range(n)]
            if any(rb[q] != cb[q] for q in range(n) if q not in (i, j)):
                continue
            out[row][col] = op[2 * rb[i] + rb[j]][2 * cb[i] + cb[j]]
    return out


def _pauli_strings(n):
    for labels in product("IXYZ", repeat=n):
        if set(labels) == {"I"}:
            continue
        m = _mat(_PAULI[labels[0]])
        for lab in labels[1:]:
            m = _kron(m, _mat(_PAULI[lab]))
        yield m


def _elimination_rank(rows, rel_cut):
    a = [list(r) for r in rows]
    scale = max((abs(x) for r in a for x in r), default=0)
    if scale == 0:
        return 0
    rank = 0
    n_rows, n_cols = len(a), len(a[0])
    used_cols = set()
    for _ in range(min(n_rows, n_cols)):
        best, bi, bj = mpmath.mpf(0), -1, -1
        for i in range(rank, n_rows):
            for j in range(n_cols):
                if j not in used_cols and abs(a[i][j]) > best:
                    best, bi, bj = abs(a[i][j]), i, j
        if best <= rel_cut * scale:
            break
        a[rank], a[bi] = a[bi], a[rank]
        used_cols.add(bj)
        piv = a[rank][bj]
        for i in range(rank + 1, n_rows):
            f = a[i][bj] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def highprec_rank(n: int, slots, k: int, seed: int, prec: int = 160) -> int:
    """Jacobian rank of the k-block circuit on ``slots`` at a random point.

    Gates are drawn from Python's ``random`` with ``seed`` and made exactly
    unitary at ``prec`` bits. Columns are ``dF F^dagger / i`` evaluated with
    full products, expanded in Pauli strings; rank uses full-pivot
    elimination with a relative cut of 2^(-prec/2).
    """
    with mpmath.workprec(prec):
        rnd = random.Random(seed)
        pairs = [tuple(s) for s in slots] * k
        if not pairs:
            return 0
        gates = [_haar_su4(rnd) for _ in pairs]
        lifted = [_lift(g, p, n) for g, p in zip(gates, pairs)]
        total = _eye(2**n)
        for g in lifted:
            total = _mul(g, total)
        total_dag = _dagger(total)
        # suffix[m] = product of gates applied after gate m
        suffix = [None] * len(lifted)
        acc = _eye(2**n)
        for m in range(len(lifted) - 1, -1, -1):
            suffix[m] = acc
            acc = _mul(acc, lifted[m])
        prefix = [None] * len(lifted)
        acc = _eye(2**n)
        for m in range(len(lifted)):
            prefix[m] = acc
            acc = _mul(lifted[m], acc)
        paulis = list(_pauli_strings(n))
        norm = mpmath.mpf(2) ** n
        gens = []
        for a, b in [(x, y) for x in range(4) for y in range(4)][1:]:
            gens.append(_kron(_mat(_PAULI["IXYZ"[a]]), _mat(_PAULI["IXYZ"[b]])))
        columns = []
        for m, pair in enumerate(pairs):
            right = _mul(_mul(lifted[m], prefix[m]), total_dag)
            for h in gens:
                # dF F^dagger / i = A H G_m B F^dagger
                v = _mul(_mul(suffix[m], _lift(h, pair, n)), right)
                columns.append([mpmath.re(sum(p[r][c] * v[c][r] for r in range(2**n) for c in range(2**n))) / norm
                                for p in paulis])
        rows = [list(r) for r in zip(*columns)]
        return _elimination_rank(rows, mpmath.mpf(2) ** (-prec // 2))


# --- plain BFS word lengths ----------------------------------------------------

def bfs_complexities(identity, generators, multiply, key, radius: int) -> dict:
    """Map key -> word length for every element within ``radius`` of the identity."""
    depth = {key(identity): 0}
    queue = deque([(identity, 0)])
    while queue:
        g, d = queue.popleft()
        if d == radius:
            continue
        for s in generators:
            h = multiply(g, s)
            kh = key(h)
            if kh not in depth:
                depth[kh] = d + 1
                queue.append((h, d + 1))
    return depth


# --- simple random walk on Z^d -------------------------------------------------

def _abs_mean_1d(steps: int) -> Fraction:
    return sum(Fraction(comb(steps, j) * abs(2 * j - steps), 2**steps) for j in range(steps + 1))


def lattice_mean_l1(d: int, k: int) -> Fraction:
    """Exact E|g_k|_1 for the uniform walk on Z^d with generators +-e_i."""
    if d == 1:
        return _abs_mean_1d(k)
    # number of steps spent on axis 0 is Binomial(k, 1/d)
    total = Fraction(0)
    rest_cache: dict[int, Fraction] = {}
    for m in range(k + 1):
        w = Fraction(comb(k, m)) * Fraction(1, d) ** m * Fraction(d - 1, d) ** (k - m)
        if k - m not in rest_cache:
            rest_cache[k - m] = lattice_mean_l1(d - 1, k - m) if k - m else Fraction(0)
        total += w * (_abs_mean_1d(m) + rest_cache[k - m])
    return total


def lattice_return_probability(steps: int) -> Fraction:
    """Exact Prob(S_steps = 0) for the simple walk on Z."""
    if steps % 2:
        return Fraction(0)
    return Fraction(comb(steps, steps // 2), 2**steps)
