"""Exact single-qubit Clifford+T arithmetic over Z[omega, 1/sqrt2], omega = exp(i pi/4).

A ring element is stored as ``(a + b w + c w^2 + d w^3) / sqrt2^k`` with
Python integers, so products of arbitrarily long words stay exact.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple

OMEGA = cmath.exp(1j * math.pi / 4)
_SQRT2 = math.sqrt(2.0)


class RingScalar(NamedTuple):
    a: int
    b: int
    c: int
    d: int
    k: int = 0

    @property
    def sort_key(self) -> tuple[int, int, int, int, int]:
        return (self.k, self.a, self.b, self.c, self.d)

    def __complex__(self) -> complex:
        re = self.a + (self.b - self.d) / _SQRT2
        im = self.c + (self.b + self.d) / _SQRT2
        return complex(re, im) / _SQRT2**self.k

    def __str__(self) -> str:
        return f"({self.a}{self.b:+}w{self.c:+}w^2{self.d:+}w^3)/sqrt2^{self.k}"


ZERO = RingScalar(0, 0, 0, 0, 0)
ONE = RingScalar(1, 0, 0, 0, 0)


def reduce(x: RingScalar) -> RingScalar:
    """Divide the numerator by sqrt2 while it is divisible and k > 0."""
    a, b, c, d, k = x
    while k > 0 and not (a - c) & 1 and not (b - d) & 1:
        # x * (w - w^3) / 2
        a, b, c, d = (b - d) >> 1, (a + c) >> 1, (b + d) >> 1, (c - a) >> 1
        k -= 1
    return RingScalar(a, b, c, d, k)


def _times_sqrt2(a, b, c, d):
    return b - d, a + c, b + d, c - a


def ring_add(x: RingScalar, y: RingScalar) -> RingScalar:
    if x.k < y.k:
        x, y = y, x
    a, b, c, d = y[:4]
    for _ in range(x.k - y.k):
        a, b, c, d = _times_sqrt2(a, b, c, d)
    return reduce(RingScalar(x.a + a, x.b + b, x.c + c, x.d + d, x.k))


def ring_neg(x: RingScalar) -> RingScalar:
    return RingScalar(-x.a, -x.b, -x.c, -x.d, x.k)


def ring_mul(x: RingScalar, y: RingScalar) -> RingScalar:
    a0, a1, a2, a3, ka = x
    b0, b1, b2, b3, kb = y
    return reduce(RingScalar(
        a0 * b0 - a1 * b3 - a2 * b2 - a3 * b1,
        a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
        a0 * b2 + a1 * b1 + a2 * b0 - a3 * b3,
        a0 * b3 + a1 * b2 + a2 * b1 + a3 * b0,
        ka + kb,
    ))


def ring_conj(x: RingScalar) -> RingScalar:
    """Complex conjugation, w -> w^7 = -w^3."""
    return RingScalar(x.a, -x.d, -x.c, -x.b, x.k)


def omega_times(x: RingScalar, m: int = 1) -> RingScalar:
    a, b, c, d, k = x
    for _ in range(m % 8):
        a, b, c, d = -d, a, b, c
    return RingScalar(a, b, c, d, k)


# --- 2x2 unitaries -------------------------------------------------------------

Entries = tuple[RingScalar, RingScalar, RingScalar, RingScalar]  # row-major


def _matmul(x: Entries, y: Entries) -> Entries:
    return (
        ring_add(ring_mul(x[0], y[0]), ring_mul(x[1], y[2])),
        ring_add(ring_mul(x[0], y[1]), ring_mul(x[1], y[3])),
        ring_add(ring_mul(x[2], y[0]), ring_mul(x[3], y[2])),
        ring_add(ring_mul(x[2], y[1]), ring_mul(x[3], y[3])),
    )


def _order_key(entries: Entries) -> tuple:
    return tuple(v for e in entries for v in (e.k, e.a, e.b, e.c, e.d))


def _phase_canonical(entries: Entries) -> Entries:
    return min(
        (tuple(omega_times(e, m) for e in entries) for m in range(8)),
        key=_order_key,
    )


@dataclass(frozen=True)
class ExactUnitary:
    """A 2x2 matrix over the ring.

    With ``projective=True`` (the default) the stored entries are the
    minimum, in (k, a, b, c, d) lexicographic order over row-major entries,
    of the eight multiples w^m U; equality is then equality of phase classes.
    """

    entries: Entries
    projective: bool = True

    @classmethod
    def of(cls, entries, projective: bool = True) -> ExactUnitary:
        ents = tuple(reduce(RingScalar(*e)) for e in entries)
        if len(ents) != 4:
            raise ValueError("need four entries")
        return cls(_phase_canonical(ents) if projective else ents, projective)

    def to_complex(self) -> list[list[complex]]:
        e = [complex(x) for x in self.entries]
        return [[e[0], e[1]], [e[2], e[3]]]

    def key_tuple(self) -> tuple:
        return _order_key(self.entries)

    def __matmul__(self, other: ExactUnitary) -> ExactUnitary:
        return multiply(self, other)


def identity(projective: bool = True) -> ExactUnitary:
    return ExactUnitary.of((ONE, ZERO, ZERO, ONE), projective)


def multiply(u: ExactUnitary, v: ExactUnitary) -> ExactUnitary:
    ents = _matmul(u.entries, v.entries)
    return ExactUnitary(_phase_canonical(ents) if u.projective else ents, u.projective)


def word_product(elements: list[ExactUnitary], projective: bool | None = None) -> ExactUnitary:
    """Left-to-right product ``h_1 h_2 ... h_k``, canonicalizing the phase only once."""
    if projective is None:
        projective = elements[0].projective if elements else True
    acc: Entries = identity(False).entries
    for h in elements:
        acc = _matmul(acc, h.entries)
    return ExactUnitary(_phase_canonical(acc) if projective else acc, projective)


def inverse(u: ExactUnitary) -> ExactUnitary:
    a, b, c, d = u.entries
    ents = (ring_conj(a), ring_conj(c), ring_conj(b), ring_conj(d))
    return ExactUnitary(_phase_canonical(ents) if u.projective else ents, u.projective)


def phase_equal(u: ExactUnitary, v: ExactUnitary) -> bool:
    return any(tuple(omega_times(e, m) for e in u.entries) == v.entries for m in range(8))


def canonical_key(u: ExactUnitary) -> bytes:
    """Stable byte key; equal keys iff phase-equal (for projective values)."""
    ents = u.entries if u.projective else _phase_canonical(u.entries)
    return ",".join(map(str, _order_key(ents))).encode("ascii")


def raw_key(u: ExactUnitary) -> bytes:
    """Key of the stored matrix itself, distinguishing global phases."""
    return ",".join(map(str, _order_key(u.entries))).encode("ascii")


def is_exactly_unitary(u: ExactUnitary) -> bool:
    a, b, c, d = u.entries
    dag = (ring_conj(a), ring_conj(c), ring_conj(b), ring_conj(d))
    return _matmul(dag, u.entries) == (ONE, ZERO, ZERO, ONE)


# --- gate sets -----------------------------------------------------------------

@dataclass(frozen=True)
class GateSet:
    name: str
    labels: tuple[str, ...]
    elements: tuple[ExactUnitary, ...]

    def __post_init__(self):
        problems = gateset_findings(self.labels, self.elements)
        if problems:
            raise ValueError("; ".join(problems))

    @property
    def closed_under_inverse(self) -> bool:
        return True  # enforced at construction

    def __len__(self) -> int:
        return len(self.elements)

    def to_json(self) -> str:
        gates = [
            {"label": lab, "matrix": [[list(u.entries[0]), list(u.entries[1])], [list(u.entries[2]), list(u.entries[3])]]}
            for lab, u in zip(self.labels, self.elements)
        ]
        return json.dumps({"name": self.name, "gates": gates})

    @classmethod
    def from_json(cls, text: str, projective: bool = True) -> GateSet:
        data = json.loads(text)
        labels, elements = [], []
        for g in data["gates"]:
            (e00, e01), (e10, e11) = g["matrix"]
            labels.append(str(g["label"]))
            elements.append(ExactUnitary.of([tuple(e) for e in (e00, e01, e10, e11)], projective))
        return cls(data.get("name", ""), tuple(labels), tuple(elements))

    @classmethod
    def load(cls, path: str | Path, projective: bool = True) -> GateSet:
        return cls.from_json(Path(path).read_text(), projective)


def gateset_findings(labels, elements) -> list[str]:
    """Problems that make a gate set unusable; empty when it is valid."""
    out = []
    if len(labels) != len(elements):
        out.append("labels and elements differ in length")
    if not elements:
        out.append("gate set is empty")
    for lab, u in zip(labels, elements):
        if not is_exactly_unitary(u):
            out.append(f"{lab} is not exactly unitary")
    for i in range(len(elements)):
        for j in range(i + 1, len(elements)):
            if phase_equal(elements[i], elements[j]):
                out.append(f"{labels[i]} and {labels[j]} are phase-equal")
        if phase_equal(elements[i], identity(elements[i].projective)):
            out.append(f"{labels[i]} is the identity up to phase")
    if not out:
        for lab, u in zip(labels, elements):
            inv = inverse(u)
            if not any(inv == v for v in elements):
                out.append(f"not inverse-closed: inverse of {lab} missing")
    return out


def clifford_t_gateset(projective: bool = True) -> GateSet:
    """The default generators H, S, S^dagger, T, T^dagger."""
    r = RingScalar
    h = ExactUnitary.of((r(1, 0, 0, 0, 1), r(1, 0, 0, 0, 1), r(1, 0, 0, 0, 1), r(-1, 0, 0, 0, 1)), projective)
    s = ExactUnitary.of((ONE, ZERO, ZERO, r(0, 0, 1, 0)), projective)
    sdg = ExactUnitary.of((ONE, ZERO, ZERO, r(0, 0, -1, 0)), projective)
    t = ExactUnitary.of((ONE, ZERO, ZERO, r(0, 1, 0, 0)), projective)
    tdg = ExactUnitary.of((ONE, ZERO, ZERO, r(0, 0, 0, -1)), projective)
    return GateSet("clifford_t", ("H", "S", "Sdg", "T", "Tdg"), (h, s, sdg, t, tdg))
