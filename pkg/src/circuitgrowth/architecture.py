"""Building blocks of two-qubit gate slots and the circuit construction map."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path

import numpy as np

from .linalg import check_pair, embed_two_qubit, haar_random_su, is_unitary

Slot = tuple[int, int]


@dataclass(frozen=True)
class BlockArchitecture:
    """A fixed ordered arrangement of two-qubit gate slots on ``n`` qubits."""

    n: int
    slots: tuple[Slot, ...]
    name: str = ""

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"need at least 2 qubits, got n={self.n}")
        slots = tuple((int(i), int(j)) for i, j in self.slots)
        if not slots:
            raise ValueError("architecture needs at least one slot")
        for s in slots:
            check_pair(s, self.n)
        object.__setattr__(self, "slots", slots)

    @property
    def size(self) -> int:
        """|B|, the number of slots per block."""
        return len(self.slots)

    def connectivity(self) -> dict[int, set[int]]:
        graph: dict[int, set[int]] = {q: set() for q in range(self.n)}
        for i, j in self.slots:
            graph[i].add(j)
            graph[j].add(i)
        return graph

    def is_connected(self) -> bool:
        graph = self.connectivity()
        seen, stack = {0}, [0]
        while stack:
            for nb in graph[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == self.n

    def universal_block(self) -> bool | None:
        """Whether one block can realize any two-qubit gate on any qubit pair.

        ``True`` when SWAP routing suffices: for every pair some slot can be
        reached by setting earlier slots to SWAP/identity, and later slots can
        undo the permutation. ``False`` when the connectivity graph is
        disconnected (no block can couple the components). ``None`` otherwise,
        since routing is only a sufficient criterion.
        """
        if not self.is_connected():
            return False
        if self.n > 8:
            return None
        m = self.size
        # reachable[t]: permutations (pos -> logical qubit) after slots[:t]
        ident = tuple(range(self.n))
        reachable = [{ident}]
        for s in self.slots:
            reachable.append({p for q in reachable[-1] for p in (q, _swap(q, s))})
        # undo[t]: permutations that slots[t:] can map back to the identity
        undo = [set() for _ in range(m + 1)]
        undo[m] = {ident}
        for t in range(m - 1, -1, -1):
            s = self.slots[t]
            undo[t] = undo[t + 1] | {_swap(q, s) for q in undo[t + 1]}
        for a, b in combinations(range(self.n), 2):
            if not any(
                perm in undo[t + 1] and {perm[self.slots[t][0]], perm[self.slots[t][1]]} == {a, b}
                for t in range(m)
                for perm in reachable[t]
            ):
                return None
        return True

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "name": self.name, "slots": [list(s) for s in self.slots]})

    @classmethod
    def from_json(cls, text: str) -> BlockArchitecture:
        data = json.loads(text)
        return cls(n=int(data["n"]), slots=tuple(tuple(s) for s in data["slots"]), name=data.get("name", ""))

    @classmethod
    def load(cls, path: str | Path) -> BlockArchitecture:
        return cls.from_json(Path(path).read_text())


def _swap(perm: tuple[int, ...], slot: Slot) -> tuple[int, ...]:
    p = list(perm)
    i, j = slot
    p[i], p[j] = p[j], p[i]
    return tuple(p)


def brickwork(n: int) -> BlockArchitecture:
    """Even layer (0,1),(2,3),... followed by odd layer (1,2),(3,4),..."""
    if n < 2:
        raise ValueError(f"brickwork needs n >= 2, got {n}")
    even = [(q, q + 1) for q in range(0, n - 1, 2)]
    odd = [(q, q + 1) for q in range(1, n - 1, 2)]
    return BlockArchitecture(n=n, slots=tuple(even + odd), name=f"brickwork{n}")


def single_slot(n: int, pair: Slot = (0, 1)) -> BlockArchitecture:
    return BlockArchitecture(n=n, slots=(pair,), name=f"single{n}")


@dataclass(frozen=True)
class CircuitPoint:
    """k blocks worth of SU(4) gates, ``len(gates) == k * arch.size``."""

    arch: BlockArchitecture
    k: int
    gates: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        gates = tuple(np.asarray(g, dtype=complex) for g in self.gates)
        if self.k < 0:
            raise ValueError(f"k must be nonnegative, got {self.k}")
        if len(gates) != self.k * self.arch.size:
            raise ValueError(f"expected {self.k * self.arch.size} gates, got {len(gates)}")
        for g in gates:
            if g.shape != (4, 4) or not is_unitary(g, 1e-9):
                raise ValueError("gate is not a 4x4 unitary")
            if abs(np.linalg.det(g) - 1.0) > 1e-9:
                raise ValueError("gate determinant is not 1")
        object.__setattr__(self, "gates", gates)

    @property
    def pairs(self) -> list[Slot]:
        return list(self.arch.slots) * self.k

    def extend(self, other: CircuitPoint) -> CircuitPoint:
        """The circuit running ``self`` first and then ``other``."""
        if other.arch != self.arch:
            raise ValueError("architectures differ")
        return CircuitPoint(self.arch, self.k + other.k, self.gates + other.gates)

    def replace_gate(self, m: int, gate: np.ndarray) -> CircuitPoint:
        gates = list(self.gates)
        gates[m] = gate
        return CircuitPoint(self.arch, self.k, tuple(gates))


def identity_point(arch: BlockArchitecture, k: int) -> CircuitPoint:
    return CircuitPoint(arch, k, tuple(np.eye(4, dtype=complex) for _ in range(k * arch.size)))


def embedded_gates(point: CircuitPoint) -> list[np.ndarray]:
    n = point.arch.n
    return [embed_two_qubit(g, p, n) for g, p in zip(point.gates, point.pairs)]


def construct(point: CircuitPoint) -> np.ndarray:
    """The n-qubit unitary of the circuit; earlier gates act first (rightmost factor)."""
    out = np.eye(2**point.arch.n, dtype=complex)
    for g in embedded_gates(point):
        out = g @ out
    return out


def sample_point(arch: BlockArchitecture, k: int, rng: np.random.Generator) -> CircuitPoint:
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    return CircuitPoint(arch, k, tuple(haar_random_su(4, rng) for _ in range(k * arch.size)))


__all__ = [
    "BlockArchitecture",
    "CircuitPoint",
    "brickwork",
    "single_slot",
    "construct",
    "sample_point",
    "identity_point",
    "embedded_gates",
]
