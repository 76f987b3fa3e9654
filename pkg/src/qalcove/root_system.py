"""Exact A_N root-system combinatorics.

Weights are stored as integer coordinate tuples in the fundamental-weight
basis; ambient coordinates (rationals with denominator dividing N+1) are
derived on demand, so pairings with roots stay in integer arithmetic.
Pairings against rho-shifted points are returned as GradedScalar values that
keep the coupling g symbolic until trigonometric evaluation, which lets
identical angles compare exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

Vector = tuple[Fraction, ...]  # ambient point of R^{N+1} with zero component sum
Weight = tuple[int, ...]  # fundamental-weight coordinates (n_1, ..., n_N)


@dataclass(frozen=True)
class GradedScalar:
    """Exact value gcoef*g + const with rational parts; g stays symbolic."""

    gcoef: Fraction
    const: Fraction

    def __add__(self, other: "GradedScalar") -> "GradedScalar":
        return GradedScalar(self.gcoef + other.gcoef, self.const + other.const)

    def __sub__(self, other: "GradedScalar") -> "GradedScalar":
        return GradedScalar(self.gcoef - other.gcoef, self.const - other.const)

    def __neg__(self) -> "GradedScalar":
        return GradedScalar(-self.gcoef, -self.const)

    def shift(self, gcoef=0, const=0) -> "GradedScalar":
        """Add integer/rational offsets to either part."""
        return GradedScalar(self.gcoef + Fraction(gcoef), self.const + Fraction(const))

    def value(self, g: float) -> float:
        return float(self.gcoef) * g + float(self.const)


def graded(gcoef=0, const=0) -> GradedScalar:
    return GradedScalar(Fraction(gcoef), Fraction(const))


@dataclass(frozen=True)
class RootData:
    """Simple/positive roots, fundamental weights and rho/g for A_N."""

    rank: int
    simple_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    positive_heights: tuple[int, ...]  # height of each positive root, same order
    a_max: Vector
    fundamental_weights: tuple[Vector, ...]
    rho_coeff: Vector  # rho with the overall factor g removed


def dot(v: Vector, w: Vector) -> Fraction:
    """Exact inner product of two ambient vectors."""
    if len(v) != len(w):
        raise ValueError("ambient dimension mismatch")
    return sum((a * b for a, b in zip(v, w)), Fraction(0))


@lru_cache(maxsize=None)
def build_root_data(rank: int) -> RootData:
    """Construct the exact A_N root data for the given rank (N >= 1)."""
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    n1 = rank + 1
    zero = [Fraction(0)] * n1

    simple = []
    for j in range(rank):
        v = list(zero)
        v[j] = Fraction(1)
        v[j + 1] = Fraction(-1)
        simple.append(tuple(v))

    positive = []
    heights = []
    for j in range(n1):
        for k in range(j + 1, n1):
            v = list(zero)
            v[j] = Fraction(1)
            v[k] = Fraction(-1)
            positive.append(tuple(v))
            heights.append(k - j)

    fundamental = []
    for j in range(1, rank + 1):
        v = [Fraction(1) if i < j else Fraction(0) for i in range(n1)]
        shift = Fraction(j, n1)
        fundamental.append(tuple(c - shift for c in v))

    rho = tuple(Fraction(rank - 2 * j, 2) for j in range(n1))
    a_max = list(zero)
    a_max[0] = Fraction(1)
    a_max[-1] = Fraction(-1)

    return RootData(
        rank=rank,
        simple_roots=tuple(simple),
        positive_roots=tuple(positive),
        positive_heights=tuple(heights),
        a_max=tuple(a_max),
        fundamental_weights=tuple(fundamental),
        rho_coeff=rho,
    )


def ambient(w: Weight, rd: RootData) -> Vector:
    """Ambient coordinates of a weight given in fundamental-weight coordinates."""
    if len(w) != rd.rank:
        raise ValueError("weight rank mismatch")
    coords = [Fraction(0)] * (rd.rank + 1)
    for c, omega in zip(w, rd.fundamental_weights):
        if c:
            coords = [x + c * y for x, y in zip(coords, omega)]
    return tuple(coords)


def to_weight(v: Vector, rd: RootData) -> Weight:
    """Fundamental-weight coordinates of an ambient lattice vector."""
    coords = []
    for a in rd.simple_roots:
        c = dot(a, v)
        if c.denominator != 1:
            raise ValueError(f"{v} is not a weight-lattice vector")
        coords.append(int(c))
    return tuple(coords)


def orbit(r: int, rank: int) -> tuple[Vector, ...]:
    """Permutation orbit of the r-th fundamental weight, in deterministic order.

    Each element is sum_{j in J} e_j - (r/(N+1)) * (e_1 + ... + e_{N+1}) for an
    r-subset J; negating an element lands in orbit(N+1-r, rank).
    """
    if not 1 <= r <= rank:
        raise ValueError(f"orbit index must be in 1..{rank}, got {r}")
    n1 = rank + 1
    shift = Fraction(r, n1)
    out = []
    for subset in itertools.combinations(range(n1), r):
        v = [-shift] * n1
        for j in subset:
            v[j] += 1
        out.append(tuple(v))
    return tuple(out)


def pairing(v: Vector, w: Weight, rd: RootData, include_rho: bool = False) -> GradedScalar:
    """Exact pairing <v, w> or <v, rho + w> as a GradedScalar."""
    if len(v) != rd.rank + 1:
        raise ValueError("ambient dimension mismatch")
    b = dot(v, ambient(w, rd))
    a = dot(v, rd.rho_coeff) if include_rho else Fraction(0)
    return GradedScalar(a, b)


def simple_root_coefficients(w: Weight, rd: RootData) -> tuple[Fraction, ...]:
    """Expansion coefficients of a weight in the simple-root basis."""
    coords = ambient(w, rd)
    partial = Fraction(0)
    out = []
    for c in coords[:-1]:
        partial += c
        out.append(partial)
    return tuple(out)


def dominance_leq(mu: Weight, lam: Weight, rd: RootData) -> bool:
    """mu <= lam in dominance order: lam - mu in the nonnegative root cone."""
    if len(mu) != len(lam):
        raise ValueError("weight rank mismatch")
    diff = tuple(a - b for a, b in zip(lam, mu))
    for c in simple_root_coefficients(diff, rd):
        if c.denominator != 1 or c < 0:
            return False
    return True


def is_dominant(w: Weight) -> bool:
    return all(c >= 0 for c in w)


def weight_height(w: Weight) -> int:
    """Pairing with the maximal root: n_1 + ... + n_N."""
    return sum(w)


@lru_cache(maxsize=None)
def enumerate_alcove(rank: int, m_max: int) -> tuple[Weight, ...]:
    """Dominant weights with height <= m_max, in graded lexicographic order.

    The order (total height first, then lexicographic on coordinates) is the
    index contract for every matrix in this package; index 0 is the zero
    weight, and the count is binomial(rank + m_max, rank).
    """
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    if rank < 1:
        raise ValueError(f"rank must be >= 1, got {rank}")
    weights = []
    for total in range(m_max + 1):
        for w in _compositions(total, rank):
            weights.append(w)
    weights.sort(key=lambda w: (sum(w), w))
    assert len(weights) == comb(rank + m_max, rank)
    return tuple(weights)


def _compositions(total: int, nparts: int):
    if nparts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, nparts - 1):
            yield (first,) + rest


def dominant_predecessors(lam: Weight, rd: RootData) -> set[Weight]:
    """All dominant mu <= lam in dominance order, including lam itself."""
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    height = weight_height(lam)
    if height == 0:
        return {lam}
    return {
        mu
        for mu in enumerate_alcove(rd.rank, height)
        if dominance_leq(mu, lam, rd)
    }


def contragredient(lam: Weight) -> Weight:
    """Coordinate-reversal involution on dominant weights."""
    return tuple(reversed(lam))
