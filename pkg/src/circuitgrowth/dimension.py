"""Accessible dimension of block circuits as the generic rank of the construction map.

The differential of the construction map at a point is assembled from
body-frame tangent vectors: gate ``g_m`` is moved along ``exp(i t H_j) g_m``
and the resulting velocity is translated back to the identity by right
multiplication with ``F(x)^dagger``. Every such vector is ``i A H A^dagger``
with ``A`` the product of the gates applied after ``g_m``; its coordinates
``c`` in the orthonormal su(2^n) basis are defined by ``Y = i sum_a c_a B_a``.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .architecture import BlockArchitecture, CircuitPoint, embedded_gates, sample_point
from .linalg import (
    DEFAULT_REL_TOL,
    embed_operator,
    generator_basis,
    rank_from_singular_values,
    singular_values,
    su_coordinates,
)

SWEEP_FACTORS = (0.1, 1.0, 10.0)
LOCAL_DIM = 15  # dim SU(4)


def su_dim(n: int) -> int:
    return 4**n - 1


@dataclass(frozen=True)
class TangentFrame:
    point: CircuitPoint
    jacobian: np.ndarray  # (4**n - 1, 15 * k * |B|), column index = 15 * gate + generator

    def rank(self, rel_tol: float = DEFAULT_REL_TOL) -> int:
        return rank_from_singular_values(singular_values(self.jacobian), rel_tol)


def jacobian_at(point: CircuitPoint) -> TangentFrame:
    if point.k < 1:
        raise ValueError("jacobian needs at least one block")
    n = point.arch.n
    local = generator_basis(4)
    big = generator_basis(2**n)
    lifted = {p: np.array([embed_operator(h, p, n) for h in local]) for p in set(point.arch.slots)}
    gates = embedded_gates(point)
    pairs = point.pairs
    cols = [None] * len(gates)
    after = np.eye(2**n, dtype=complex)
    for m in range(len(gates) - 1, -1, -1):
        x = after @ lifted[pairs[m]] @ after.conj().T
        tr = np.abs(np.trace(x, axis1=1, axis2=2))
        if np.max(tr) > 1e-9:
            raise ArithmeticError(f"tangent vector has trace residue {np.max(tr):.2e}")
        cols[m] = su_coordinates(x, big)
        after = after @ gates[m]
    return TangentFrame(point, np.concatenate(cols, axis=0).T)


@dataclass(frozen=True)
class SampleRank:
    rank: int
    sweep: tuple[int, ...]  # ranks at rel_tol * SWEEP_FACTORS

    @property
    def stable(self) -> bool:
        return len(set(self.sweep)) == 1


def _sample_rank(arch: BlockArchitecture, k: int, rel_tol: float, rng: np.random.Generator) -> SampleRank:
    if k == 0:
        return SampleRank(0, (0,) * len(SWEEP_FACTORS))
    sv = singular_values(jacobian_at(sample_point(arch, k, rng)).jacobian)
    sweep = tuple(rank_from_singular_values(sv, rel_tol * f) for f in SWEEP_FACTORS)
    return SampleRank(rank_from_singular_values(sv, rel_tol), sweep)


def _ranks(arch, k, samples, rel_tol, rng, threads=1) -> list[SampleRank]:
    # children are spawned before dispatch so results do not depend on threads
    children = rng.spawn(samples)
    if threads <= 1:
        return [_sample_rank(arch, k, rel_tol, c) for c in children]
    with ThreadPoolExecutor(threads) as pool:
        return list(pool.map(lambda c: _sample_rank(arch, k, rel_tol, c), children))


def accessible_dimension(
    arch: BlockArchitecture,
    k: int,
    samples: int = 5,
    rel_tol: float = DEFAULT_REL_TOL,
    rng: np.random.Generator | None = None,
) -> tuple[int, list[int]]:
    """Estimate d^B(k) as the maximum Jacobian rank over ``samples`` Haar points."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    rng = rng if rng is not None else np.random.default_rng()
    ranks = [s.rank for s in _ranks(arch, k, samples, rel_tol, rng)]
    return max(ranks), ranks


@dataclass
class CurveEntry:
    k: int
    d_estimate: int
    samples: list[SampleRank]

    @property
    def ranks(self) -> list[int]:
        return [s.rank for s in self.samples]

    @property
    def deficient_count(self) -> int:
        return sum(r < self.d_estimate for r in self.ranks)

    @property
    def tol_stable(self) -> bool:
        return all(s.stable for s in self.samples)


@dataclass
class DimensionCurve:
    arch: BlockArchitecture
    entries: list[CurveEntry]
    rel_tol: float = DEFAULT_REL_TOL
    seed: int | None = None

    def values(self) -> list[int]:
        return [e.d_estimate for e in self.entries]

    def __getitem__(self, k: int) -> int:
        for e in self.entries:
            if e.k == k:
                return e.d_estimate
        raise KeyError(k)

    @classmethod
    def from_values(cls, arch: BlockArchitecture, values: list[int], **kw) -> DimensionCurve:
        """Curve with one synthetic sample per k (used for reports on stored curves)."""
        entries = [CurveEntry(k, d, [SampleRank(d, (d,) * len(SWEEP_FACTORS))]) for k, d in enumerate(values)]
        return cls(arch, entries, **kw)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "d_estimate", "samples", "deficient_count", "tol_stable", "seed"])
        for e in self.entries:
            w.writerow([e.k, e.d_estimate, len(e.samples), e.deficient_count, str(e.tol_stable).lower(), self.seed])
        return buf.getvalue()


def dimension_curve(
    arch: BlockArchitecture,
    k_max: int,
    samples: int = 5,
    rel_tol: float = DEFAULT_REL_TOL,
    rng: np.random.Generator | None = None,
    threads: int = 1,
    seed: int | None = None,
) -> DimensionCurve:
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    rng = rng if rng is not None else np.random.default_rng(seed)
    per_k = rng.spawn(k_max + 1)
    entries = []
    for k, child in enumerate(per_k):
        ranked = _ranks(arch, k, samples, rel_tol, child, threads)
        entries.append(CurveEntry(k, max(s.rank for s in ranked), ranked))
    return DimensionCurve(arch, entries, rel_tol, seed)


def allstructure_dimension_upper(n: int, s: int) -> int:
    """Upper bound min(15 s, 4^n - 1) on the dimension reachable with s gates in any layout."""
    if s < 0:
        raise ValueError("gate count must be nonnegative")
    return min(LOCAL_DIM * s, su_dim(n))


def generic_rank_probe(
    arch: BlockArchitecture,
    k: int,
    trials: int = 20,
    rel_tol: float = DEFAULT_REL_TOL,
    rng: np.random.Generator | None = None,
) -> tuple[int, int]:
    """Return (generic rank, number of samples whose rank falls below it)."""
    if trials < 2:
        raise ValueError("need at least two trials")
    rng = rng if rng is not None else np.random.default_rng()
    ranks = [s.rank for s in _ranks(arch, k, trials, rel_tol, rng)]
    top = max(ranks)
    return top, sum(r < top for r in ranks)


@dataclass
class GrowthReport:
    n: int
    block_size: int
    values: list[int]
    monotone_pass: bool
    eq2_pass: bool
    eq2_per_k: list[bool]
    subadditive_pass: bool
    subadditive_violations: list[tuple[int, int]]
    saturation_k: int | None
    c2_fit: float | None
    shortcut_c: float | None = None
    shortcut_table: list[dict] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True) + "\n"


def growth_report(curve: DimensionCurve, shortcut_c: float | None = None) -> GrowthReport:
    """Check the dimension inequalities on a curve covering k = 0..k_max."""
    ks = [e.k for e in curve.entries]
    if not ks or ks != list(range(len(ks))):
        raise ValueError(f"curve must cover k = 0..k_max without gaps, got {ks}")
    arch = curve.arch
    d = curve.values()
    top = su_dim(arch.n)
    eq2 = [
        all(r <= LOCAL_DIM * e.k * arch.size and r <= top for r in e.ranks + [e.d_estimate])
        for e in curve.entries
    ]
    monotone = all(a <= b for a, b in zip(d, d[1:]))
    violations = [
        (k1, k2)
        for k1 in range(len(d))
        for k2 in range(k1, len(d) - k1)
        if d[k1 + k2] > d[k1] + d[k2]
    ]
    saturation = next((k for k, v in enumerate(d) if v == top), None)
    ratios = [d[k] / k for k in range(1, len(d))]
    table = []
    if shortcut_c is not None:
        for k in range(1, len(d)):
            s = math.floor(shortcut_c * k)
            upper = allstructure_dimension_upper(arch.n, s)
            table.append({"k": k, "d": d[k], "s": s, "allstructure_upper": upper, "exceeds": d[k] > upper})
    return GrowthReport(
        n=arch.n,
        block_size=arch.size,
        values=d,
        monotone_pass=monotone,
        eq2_pass=all(eq2),
        eq2_per_k=eq2,
        subadditive_pass=not violations,
        subadditive_violations=violations,
        saturation_k=saturation,
        c2_fit=min(ratios) if ratios else None,
        shortcut_c=shortcut_c,
        shortcut_table=table,
    )
