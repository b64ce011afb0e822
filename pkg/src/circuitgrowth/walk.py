"""Random walks on finitely generated groups and exact word-length complexity.

Complexity is found by meet-in-the-middle on the Cayley graph: a ball around
the identity is grown breadth-first once, and a query ``g`` is answered by
scanning spheres ``S(r)`` for an element ``v`` with ``v g`` inside the ball.
Because generator sets are inverse-closed, spheres are inverse-closed too.
"""
from __future__ import annotations

import csv
import io
import json
import math
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Hashable, Sequence

import numpy as np

from . import exact


class GroupBackend(ABC):
    """A group with an inverse-closed, identity-free generating list."""

    name: str
    labels: tuple[str, ...]
    generators: tuple[Any, ...]

    @property
    @abstractmethod
    def identity(self) -> Any: ...

    @abstractmethod
    def multiply(self, g, h): ...

    @abstractmethod
    def inverse(self, g): ...

    @abstractmethod
    def key(self, g) -> Hashable: ...

    def word_product(self, word: Sequence[int]):
        """Product ``h_1 ... h_k`` of generators given by index."""
        acc = self.identity
        for i in word:
            acc = self.multiply(acc, self.generators[i])
        return acc

    def is_identity(self, g) -> bool:
        return self.key(g) == self.key(self.identity)

    def _check_generators(self) -> None:
        keys = [self.key(s) for s in self.generators]
        if not keys:
            raise ValueError("empty generator list")
        if self.key(self.identity) in keys:
            raise ValueError("generator list contains the identity")
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate generators")
        missing = [lab for lab, s in zip(self.labels, self.generators) if self.key(self.inverse(s)) not in keys]
        if missing:
            raise ValueError(f"generators not inverse-closed: inverse of {missing} missing")


class CliffordTBackend(GroupBackend):
    """Single-qubit Clifford+T words; ``projective`` counts modulo the phases w^m."""

    def __init__(self, gateset: exact.GateSet | None = None, projective: bool = True):
        gs = gateset if gateset is not None else exact.clifford_t_gateset(projective)
        if any(u.projective != projective for u in gs.elements):
            gs = exact.GateSet(gs.name, gs.labels, tuple(exact.ExactUnitary.of(u.entries, projective) for u in gs.elements))
        self.projective = projective
        self.gateset = gs
        self.name = gs.name if projective else f"{gs.name}_unquotiented"
        self.labels = gs.labels
        self.generators = gs.elements
        self._identity = exact.identity(projective)
        self._check_generators()

    @property
    def identity(self):
        return self._identity

    def multiply(self, g, h):
        return exact.multiply(g, h)

    def inverse(self, g):
        return exact.inverse(g)

    def key(self, g):
        return g.key_tuple()

    def word_product(self, word):
        return exact.word_product([self.generators[i] for i in word], self.projective)


class LatticeBackend(GroupBackend):
    """Z^d with generators +-e_i."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError(f"lattice dimension must be >= 1, got {d}")
        self.d = d
        self.name = f"lattice{d}"
        axes = "xyz" if d <= 3 else [f"e{i}" for i in range(d)]
        gens, labels = [], []
        for i in range(d):
            for sign in (1, -1):
                v = [0] * d
                v[i] = sign
                gens.append(tuple(v))
                labels.append(("+" if sign > 0 else "-") + axes[i])
        self.generators = tuple(gens)
        self.labels = tuple(labels)
        self._check_generators()

    @property
    def identity(self):
        return (0,) * self.d

    def multiply(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inverse(self, g):
        return tuple(-a for a in g)

    def key(self, g):
        return g

    def word_product(self, word):
        v = [0] * self.d
        for i in word:
            v[i // 2] += 1 if i % 2 == 0 else -1
        return tuple(v)


class PermutationBackend(GroupBackend):
    """Permutations of ``range(m)``; ``(p * q)[i] = p[q[i]]``.

    Default generators are the adjacent transpositions (i i+1).
    """

    def __init__(self, m: int, generators: dict[str, Sequence[int]] | None = None):
        if m < 2:
            raise ValueError(f"need m >= 2, got {m}")
        self.m = m
        self.name = f"perm{m}"
        if generators is None:
            generators = {}
            for i in range(m - 1):
                p = list(range(m))
                p[i], p[i + 1] = p[i + 1], p[i]
                generators[f"s{i}"] = p
        for lab, p in generators.items():
            if sorted(p) != list(range(m)):
                raise ValueError(f"{lab} is not a permutation of range({m})")
        self.labels = tuple(generators)
        self.generators = tuple(tuple(int(x) for x in p) for p in generators.values())
        self._check_generators()

    @property
    def identity(self):
        return tuple(range(self.m))

    def multiply(self, g, h):
        return tuple(g[i] for i in h)

    def inverse(self, g):
        out = [0] * self.m
        for i, x in enumerate(g):
            out[x] = i
        return tuple(out)

    def key(self, g):
        return g


def make_backend(name: str, **params) -> GroupBackend:
    """Backend by name: ``clifford_t``, ``clifford_t_unquotiented``, ``lattice`` (d), ``permutation`` (m)."""
    if name == "clifford_t":
        return CliffordTBackend(projective=True)
    if name == "clifford_t_unquotiented":
        return CliffordTBackend(projective=False)
    if name == "lattice":
        return LatticeBackend(int(params.get("d", 1)))
    if name == "permutation":
        gens = params.get("generators")
        return PermutationBackend(int(params.get("m", 3)), gens)
    raise ValueError(f"unknown backend {name!r}")


# --- Cayley balls ------------------------------------------------------------

class CayleyBall:
    """Breadth-first ball around the identity, grown lazily and shared across queries.

    At most ``memory_cap`` elements are stored; a layer that would exceed the
    cap is discarded whole so that every stored radius is complete.
    """

    def __init__(self, backend: GroupBackend, memory_cap: int = 10**6):
        if memory_cap < 1:
            raise ValueError("memory_cap must be positive")
        self.backend = backend
        self.memory_cap = memory_cap
        self.layers: list[list] = [[backend.identity]]
        self.depth: dict[Hashable, int] = {backend.key(backend.identity): 0}
        self.truncated = False
        self.peak = 1

    @property
    def radius(self) -> int:
        return len(self.layers) - 1

    def __len__(self) -> int:
        return len(self.depth)

    def grow(self, radius: int) -> int:
        be = self.backend
        while self.radius < radius and not self.truncated:
            r = self.radius + 1
            new, new_keys = [], []
            for g in self.layers[-1]:
                for s in be.generators:
                    h = be.multiply(g, s)
                    kh = be.key(h)
                    if kh in self.depth:
                        continue
                    if len(self.depth) >= self.memory_cap:
                        self.truncated = True
                        break
                    self.depth[kh] = r
                    new.append(h)
                    new_keys.append(kh)
                if self.truncated:
                    break
            self.peak = max(self.peak, len(self.depth))
            if self.truncated:
                for kh in new_keys:
                    del self.depth[kh]
            else:
                self.layers.append(new)
        return self.radius

    def sizes(self) -> list[int]:
        """Cumulative ball sizes |B(0)|, |B(1)|, ..."""
        out, total = [], 0
        for layer in self.layers:
            total += len(layer)
            out.append(total)
        return out

    def query(self, g) -> int | None:
        """Exact word length of ``g`` if it is at most twice the stored radius, else None."""
        be = self.backend
        d = self.depth.get(be.key(g))
        if d is not None:
            return d
        for r1 in range(1, self.radius + 1):
            hits = [self.depth.get(be.key(be.multiply(v, g))) for v in self.layers[r1]]
            hits = [h for h in hits if h is not None]
            if hits:
                return r1 + min(hits)
        return None

    def stats(self) -> dict:
        return {"ball_radius": self.radius, "ball_size": len(self), "peak": self.peak, "truncated": self.truncated}


def exact_complexity(
    backend: GroupBackend,
    element,
    radius_cap: int,
    memory_cap: int = 10**6,
    ball: CayleyBall | None = None,
) -> int | None:
    """Minimal generator count for ``element``; None means it exceeds the caps.

    Answers up to ``2 * radius_cap`` are reachable; a returned number is
    always exact.
    """
    if radius_cap < 1 or memory_cap < 1:
        raise ValueError("caps must be positive")
    if ball is None:
        ball = CayleyBall(backend, memory_cap)
    ball.grow(radius_cap)
    return ball.query(element)


# --- walks -------------------------------------------------------------------

@dataclass
class WalkRecord:
    backend: str
    k: int
    word: tuple[str, ...]
    element: Any = field(repr=False)
    key: Hashable = field(repr=False)
    complexity: int | None = None
    censored: bool = False
    stats: dict = field(default_factory=dict)
    seed: int | None = None


def _draw(backend: GroupBackend, k: int, rng: np.random.Generator, weights=None) -> list[int]:
    n = len(backend.generators)
    if weights is None:
        return [int(i) for i in rng.integers(n, size=k)]
    p = np.asarray(weights, dtype=float)
    if p.shape != (n,) or np.any(p < 0) or not np.isclose(p.sum(), 1.0):
        raise ValueError("weights must be a probability vector over the generators")
    return [int(i) for i in rng.choice(n, size=k, p=p)]


def random_word(
    backend: GroupBackend,
    k: int,
    rng: np.random.Generator,
    weights: Sequence[float] | None = None,
    seed: int | None = None,
) -> WalkRecord:
    """Random word of length k, each letter drawn independently (uniform by default)."""
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    idx = _draw(backend, k, rng, weights)
    g = backend.word_product(idx)
    return WalkRecord(backend.name, k, tuple(backend.labels[i] for i in idx), g, backend.key(g), seed=seed)


@dataclass
class KRow:
    k: int
    trials: int
    censored_count: int
    mean_ratio: float | None
    stderr: float | None

    @property
    def all_censored(self) -> bool:
        return self.censored_count == self.trials


@dataclass
class GrowthEstimate:
    backend: str
    rows: list[KRow]
    records: list[WalkRecord]
    radius_cap: int
    memory_cap: int
    seed: int | None = None

    def row(self, k: int) -> KRow:
        return next(r for r in self.rows if r.k == k)

    @property
    def censored_total(self) -> int:
        return sum(r.censored_count for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["backend", "k", "trial", "complexity", "censored", "ball_radius", "ball_size", "seed"])
        for t, rec in _with_trial_index(self.records):
            w.writerow([
                rec.backend, rec.k, t, "" if rec.complexity is None else rec.complexity,
                str(rec.censored).lower(), rec.stats.get("ball_radius"), rec.stats.get("ball_size"), rec.seed,
            ])
        return buf.getvalue()

    def summary(self) -> list[dict]:
        return [
            {"k": r.k, "mean_ratio": r.mean_ratio, "stderr": r.stderr, "trials": r.trials,
             "censored_count": r.censored_count, "all_censored": r.all_censored}
            for r in self.rows
        ]


def _with_trial_index(records):
    counts: dict[int, int] = {}
    for rec in records:
        t = counts.get(rec.k, 0)
        counts[rec.k] = t + 1
        yield t, rec


def _mean_se(xs: list[float]) -> tuple[float | None, float | None]:
    if not xs:
        return None, None
    m = sum(xs) / len(xs)
    if len(xs) < 2:
        return m, 0.0
    var = sum((x - m) ** 2 for x in xs) / (len(xs) - 1)
    return m, math.sqrt(var / len(xs))


def kingman_estimate(
    backend: GroupBackend,
    k_list: Sequence[int],
    trials: int,
    radius_cap: int,
    memory_cap: int = 10**6,
    rng: np.random.Generator | None = None,
    threads: int = 1,
    weights: Sequence[float] | None = None,
    seed: int | None = None,
) -> GrowthEstimate:
    """Mean and standard error of C(g_k)/k over independent random words.

    Censored words (beyond the caps) are counted and left out of the means.
    """
    if trials < 1 or not k_list:
        raise ValueError("need trials >= 1 and a nonempty k list")
    rng = rng if rng is not None else np.random.default_rng(seed)
    ball = CayleyBall(backend, memory_cap)
    ball.grow(radius_cap)
    streams = [child.spawn(trials) for child in rng.spawn(len(k_list))]

    def one(args):
        k, g = args
        rec = random_word(backend, k, g, weights, seed)
        rec.complexity = ball.query(rec.element)
        rec.censored = rec.complexity is None
        rec.stats = ball.stats()
        return rec

    jobs = [(k, g) for k, gens in zip(k_list, streams) for g in gens]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            records = list(pool.map(one, jobs))
    else:
        records = [one(j) for j in jobs]
    rows = []
    for k in k_list:
        recs = [r for r in records if r.k == k]
        ok = [r.complexity / k for r in recs if not r.censored and k > 0]
        m, se = _mean_se(ok)
        rows.append(KRow(k, len(recs), sum(r.censored for r in recs), m, se))
    return GrowthEstimate(backend.name, rows, records, radius_cap, memory_cap, seed)


@dataclass
class ReturnEstimate:
    k: int
    steps: int
    trials: int
    returns: int
    rho_estimate: float
    upper_bound: bool  # no returns observed: estimate is (1/trials)^(1/steps)

    def to_dict(self) -> dict:
        return {"k": self.k, "steps": self.steps, "trials": self.trials, "returns": self.returns,
                "rho_estimate": self.rho_estimate, "upper_bound": self.upper_bound}


def return_probability(
    backend: GroupBackend,
    k_list: Sequence[int],
    trials: int,
    rng: np.random.Generator | None = None,
    threads: int = 1,
    weights: Sequence[float] | None = None,
    seed: int | None = None,
) -> list[ReturnEstimate]:
    """Monte-Carlo estimate of Prob(g_{2k} = id)^(1/2k) for each k."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = rng if rng is not None else np.random.default_rng(seed)
    streams = [child.spawn(trials) for child in rng.spawn(len(k_list))]
    ident = backend.key(backend.identity)

    def returned(args):
        steps, g = args
        return backend.key(backend.word_product(_draw(backend, steps, g, weights))) == ident

    out = []
    for k, gens in zip(k_list, streams):
        if k < 1:
            raise ValueError("k must be positive")
        jobs = [(2 * k, g) for g in gens]
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                hits = sum(pool.map(returned, jobs))
        else:
            hits = sum(map(returned, jobs))
        freq = hits / trials if hits else 1.0 / trials
        out.append(ReturnEstimate(k, 2 * k, trials, hits, freq ** (1.0 / (2 * k)), hits == 0))
    return out


def enumerate_group(backend: GroupBackend, max_elements: int = 10**4) -> list:
    """All elements of a finite group (BFS closure); raises if larger than ``max_elements``."""
    ball = CayleyBall(backend, max_elements)
    while True:
        before = len(ball)
        ball.grow(ball.radius + 1)
        if ball.truncated:
            raise ValueError(f"group has more than {max_elements} elements")
        if len(ball) == before:
            return [g for layer in ball.layers for g in layer]


def exact_return_probability(backend: GroupBackend, steps: int, max_elements: int = 10**4,
                             weights: Sequence[float] | None = None) -> float:
    """Prob(g_steps = id) by dynamic programming over a finite group's multiplication table."""
    elems = enumerate_group(backend, max_elements)
    index = {backend.key(g): i for i, g in enumerate(elems)}
    table = np.array([[index[backend.key(backend.multiply(g, s))] for s in backend.generators] for g in elems])
    n_gen = len(backend.generators)
    p = np.full(n_gen, 1.0 / n_gen) if weights is None else np.asarray(weights, dtype=float)
    dist = np.zeros(len(elems))
    dist[index[backend.key(backend.identity)]] = 1.0
    for _ in range(steps):
        nxt = np.zeros_like(dist)
        for j in range(n_gen):
            np.add.at(nxt, table[:, j], dist * p[j])
        dist = nxt
    return float(dist[index[backend.key(backend.identity)]])


def summary_json(rows: list[dict], meta: dict) -> str:
    return json.dumps({"meta": meta, "estimates": rows}, indent=2, sort_keys=True) + "\n"
