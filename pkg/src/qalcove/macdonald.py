"""Macdonald symmetric functions in N+1 variables.

Monomial basis, the commuting q-difference operators acting triangularly on
it, construction of the monic joint eigenfunctions, evaluation/symmetry/
conjugation formulas, projection to trigonometric polynomials labeled by
dominant weights, and the bilinear alcove summation identities that hold when
t^{N+1} q^M = 1.

The operator action is computed by node interpolation: the rational
symmetrizer prefactors are regular at generic nodes, so we evaluate pointwise
and solve a monomial-evaluation system instead of expanding symbolically.
"""

from __future__ import annotations

import cmath
import itertools
import math
import zlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .qseries import SingularValueError
from .root_system import Weight

Partition = tuple[int, ...]  # nonincreasing, length rank+1
SymPoly = dict[Partition, complex]  # homogeneous monomial-basis expansion


class DegenerateNodesError(RuntimeError):
    """Interpolation nodes produced an ill-conditioned system after retries."""


class DegenerateSpectrumError(RuntimeError):
    """Eigenvalues failed to separate the triangular construction."""


@dataclass(frozen=True)
class MacParams:
    """Parameters (q, t) for rank N, optionally pinned to the unit circle.

    On the unit circle q = e^{i alpha}, t = q^g, and all powers are taken
    through exponent arithmetic exp(i alpha (g*texp + qexp)) so that the
    constraint t^{N+1} q^M = 1 holds exactly.
    """

    rank: int
    q: complex
    t: complex
    alpha: float | None = None
    g: float | None = None

    @classmethod
    def generic(cls, rank: int, q: complex, t: complex) -> "MacParams":
        return cls(rank=rank, q=complex(q), t=complex(t))

    @classmethod
    def unit_circle(cls, rank: int, m_max: int, g: float) -> "MacParams":
        alpha = 2 * math.pi / ((rank + 1) * g + m_max)
        return cls(
            rank=rank,
            q=cmath.exp(1j * alpha),
            t=cmath.exp(1j * alpha * g),
            alpha=alpha,
            g=g,
        )

    def on_unit_circle(self) -> bool:
        return self.alpha is not None

    def qtpow(self, texp, qexp) -> complex:
        """t**texp * q**qexp with exact exponent arithmetic where possible."""
        if self.alpha is not None:
            return cmath.exp(1j * self.alpha * (self.g * float(texp) + float(qexp)))
        out = 1.0 + 0.0j
        if texp:
            out *= cmath.exp(float(texp) * cmath.log(self.t))
        if qexp:
            out *= cmath.exp(float(qexp) * cmath.log(self.q))
        return out

    def qpow(self, expo) -> complex:
        return self.qtpow(0, expo)

    def tpow(self, expo) -> complex:
        return self.qtpow(expo, 0)

    def tau(self) -> tuple[complex, ...]:
        """Principal specialization point (t^N, t^{N-1}, ..., t, 1)."""
        return tuple(self.tpow(self.rank - j) for j in range(self.rank + 1))


def partition_weight(n: Partition) -> int:
    return sum(n)


def is_partition(n) -> bool:
    return all(a >= b for a, b in zip(n, n[1:])) and all(a >= 0 for a in n)


@lru_cache(maxsize=None)
def partitions_of(weight: int, nparts: int) -> tuple[Partition, ...]:
    """Partitions of `weight` into at most `nparts` parts, zero padded to
    length nparts, ordered most-dominant first (descending partial sums)."""

    out: list[Partition] = []

    def rec(remaining, maxpart, prefix):
        if len(prefix) == nparts:
            if remaining == 0:
                out.append(tuple(prefix))
            return
        lo = math.ceil(remaining / (nparts - len(prefix)))
        for part in range(min(remaining, maxpart), max(lo, 0) - 1, -1):
            rec(remaining - part, part, prefix + [part])

    rec(weight, weight, [])
    out.sort(key=lambda n: tuple(itertools.accumulate(n)), reverse=True)
    return tuple(out)


def partition_dominance(m: Partition, n: Partition) -> bool:
    """m <= n: equal weight and partial sums of m never exceed those of n."""
    if len(m) != len(n):
        raise ValueError("partition length mismatch")
    if sum(m) != sum(n):
        return False
    sm = sn = 0
    for a, b in zip(m[:-1], n[:-1]):
        sm += a
        sn += b
        if sm > sn:
            return False
    return True


def contragredient_partition(n: Partition) -> Partition:
    """Parts n_1 - n_{N+2-j}; involutive modulo the all-ones shift."""
    return tuple(n[0] - p for p in reversed(n))


def monomial_eval(n: Partition, z) -> complex:
    """Monomial symmetric function: sum over the distinct permutations of n."""
    if len(z) != len(n):
        raise ValueError("variable count must match partition length")
    total = 0.0 + 0.0j
    for perm in set(itertools.permutations(n)):
        term = 1.0 + 0.0j
        for zj, e in zip(z, perm):
            term *= zj ** e
        total += term
    return total


def evaluate_sympoly(f: SymPoly, z) -> complex:
    return sum(c * monomial_eval(n, z) for n, c in f.items())


def eigenvalue_E(n: Partition, r: int, mp: MacParams) -> complex:
    """Sum over r-subsets J of prod_{j in J} t^{N+1-j} q^{n_j}."""
    n1 = mp.rank + 1
    total = 0.0 + 0.0j
    for J in itertools.combinations(range(n1), r):
        texp = sum(n1 - 1 - j for j in J)
        qexp = sum(n[j] for j in J)
        total += mp.qtpow(texp, qexp)
    return total


def apply_D_at(r: int, f: SymPoly, z, mp: MacParams) -> complex:
    """Pointwise action of the r-th q-difference operator on f at node z."""
    n1 = mp.rank + 1
    total = 0.0 + 0.0j
    for J in itertools.combinations(range(n1), r):
        inJ = [j in J for j in range(n1)]
        pref = 1.0 + 0.0j
        for j in J:
            for k in range(n1):
                if not inJ[k]:
                    den = z[j] - z[k]
                    if den == 0:
                        raise SingularValueError("coincident node coordinates")
                    pref *= (mp.t * z[j] - z[k]) / den
        shifted = tuple(mp.q * zj if inJ[j] else zj for j, zj in enumerate(z))
        total += pref * evaluate_sympoly(f, shifted)
    return mp.tpow(r * (r - 1) // 2) * total


def _stable_seed(key) -> int:
    return zlib.crc32(repr(key).encode())


def _interpolation_nodes(mp: MacParams, count: int, rng) -> list[tuple[complex, ...]]:
    tau = mp.tau()
    nodes = []
    for _ in range(count):
        while True:
            eps = rng.uniform(0.08, 0.4, size=len(tau)) * np.exp(
                2j * math.pi * rng.uniform(0, 1, size=len(tau))
            )
            z = tuple(tj * (1 + e) for tj, e in zip(tau, eps))
            if all(z[i] != z[j] for i in range(len(z)) for j in range(i + 1, len(z))):
                break
        nodes.append(z)
    return nodes


_COND_LIMIT = 1e8
_MATRIX_CACHE: dict = {}


def _d_matrix(r: int, weight: int, mp: MacParams) -> np.ndarray:
    """Matrix of the r-th operator on the monomial basis of given weight.

    Entry [i, j] is the coefficient of basis[i] in D_r basis[j]; triangular
    (up to solve noise) in the most-dominant-first basis order.
    """
    key = (r, weight, mp)
    cached = _MATRIX_CACHE.get(key)
    if cached is not None:
        return cached
    basis = partitions_of(weight, mp.rank + 1)
    dim = len(basis)
    rng = np.random.default_rng(_stable_seed(key))
    last_cond = math.inf
    for _ in range(5):
        nodes = _interpolation_nodes(mp, dim, rng)
        A = np.array([[monomial_eval(m, z) for m in basis] for z in nodes])
        last_cond = np.linalg.cond(A)
        if last_cond > _COND_LIMIT:
            continue
        V = np.array([[apply_D_at(r, {m: 1.0}, z, mp) for m in basis] for z in nodes])
        mat = np.linalg.solve(A, V)
        _MATRIX_CACHE[key] = mat
        return mat
    raise DegenerateNodesError(
        f"interpolation stayed ill-conditioned (cond ~ {last_cond:.2e}) "
        f"for weight {weight}, rank {mp.rank}"
    )


def apply_D(r: int, f: SymPoly, mp: MacParams) -> SymPoly:
    """Expand D_r f in the monomial basis (f homogeneous)."""
    if not f:
        return {}
    weights = {partition_weight(n) for n in f}
    if len(weights) > 1:
        raise ValueError("f must be homogeneous")
    weight = weights.pop()
    basis = partitions_of(weight, mp.rank + 1)
    mat = _d_matrix(r, weight, mp)
    vec = np.array([f.get(m, 0.0) for m in basis], dtype=complex)
    out = mat @ vec
    return {m: out[i] for i, m in enumerate(basis)}


_POLY_CACHE: dict = {}


def macdonald_poly(n: Partition, mp: MacParams) -> SymPoly:
    """Monic joint eigenfunction with leading monomial m_n.

    Built by triangular back-substitution against the r=1 operator matrix;
    if two r=1 eigenvalues in the dominance lower set collide, falls back to
    a random real combination of all the operators, whose joint eigenvalues
    separate whenever the labels are distinct.
    """
    n = tuple(n)
    if not is_partition(n):
        raise ValueError(f"{n} is not a partition")
    if len(n) != mp.rank + 1:
        raise ValueError("partition length must be rank + 1")
    key = (n, mp)
    cached = _POLY_CACHE.get(key)
    if cached is not None:
        return dict(cached)

    weight = partition_weight(n)
    basis = partitions_of(weight, mp.rank + 1)
    lower = [m for m in basis if partition_dominance(m, n)]
    index = {m: i for i, m in enumerate(basis)}

    mat = _d_matrix(1, weight, mp)
    evals = [eigenvalue_E(m, 1, mp) for m in lower]
    scale = max(abs(e) for e in evals) or 1.0
    if any(abs(evals[0] - e) < 1e-8 * scale for e in evals[1:]):
        mat, evals = _separated_combination(n, lower, weight, mp)

    sub = np.array([[mat[index[mi], index[mj]] for mj in lower] for mi in lower])
    coeffs = np.zeros(len(lower), dtype=complex)
    coeffs[0] = 1.0
    top = evals[0]
    for i in range(1, len(lower)):
        coeffs[i] = (sub[i, :i] @ coeffs[:i]) / (top - evals[i])
    poly = {m: coeffs[i] for i, m in enumerate(lower)}
    _POLY_CACHE[key] = dict(poly)
    return poly


def _separated_combination(n, lower, weight, mp):
    rng = np.random.default_rng(_stable_seed((n, mp, "sep")))
    mats = [_d_matrix(r, weight, mp) for r in range(1, mp.rank + 2)]
    per_label = [
        [eigenvalue_E(m, r, mp) for r in range(1, mp.rank + 2)] for m in lower
    ]
    for _ in range(5):
        gamma = rng.uniform(0.5, 1.5, size=mp.rank + 1)
        evals = [sum(g * e for g, e in zip(gamma, es)) for es in per_label]
        scale = max(abs(e) for e in evals) or 1.0
        if all(abs(evals[0] - e) >= 1e-8 * scale for e in evals[1:]):
            mat = sum(g * m for g, m in zip(gamma, mats))
            return mat, evals
    gaps = [
        (abs(per_label[0][0] - es[0]), m) for es, m in zip(per_label[1:], lower[1:])
    ]
    worst = min(gaps)[1]
    raise DegenerateSpectrumError(
        f"eigenvalues of {n} and {worst} stayed within tolerance of each other"
    )


def macdonald_eval(n: Partition, mp: MacParams, z) -> complex:
    return evaluate_sympoly(macdonald_poly(n, mp), z)


def _finite_poch(mp: MacParams, texp, qexp, count: int) -> complex:
    """(t^texp q^qexp; q)_count as a finite product."""
    out = 1.0 + 0.0j
    for k in range(count):
        out *= 1.0 - mp.qtpow(texp, qexp + k)
    return out


def evaluation_formula(n: Partition, mp: MacParams):
    """Value at the principal point, directly vs the closed product form."""
    direct = macdonald_eval(n, mp, mp.tau())
    formula = mp.tpow(sum(j * n[j] for j in range(len(n))))
    for j in range(len(n)):
        for k in range(j + 1, len(n)):
            formula *= _finite_poch(mp, 1 + k - j, 0, n[j] - n[k])
            den = _finite_poch(mp, k - j, 0, n[j] - n[k])
            if den == 0:
                raise SingularValueError("singular Pochhammer in the product form")
            formula /= den
    return direct, formula


def normalized_eval(n: Partition, mp: MacParams, z) -> complex:
    """Evaluation normalized to 1 at the principal point."""
    tau_val = macdonald_eval(n, mp, mp.tau())
    if tau_val == 0:
        raise SingularValueError("vanishing principal value")
    return macdonald_eval(n, mp, z) / tau_val


def symmetry_check(n: Partition, m: Partition, mp: MacParams):
    """Normalized evaluations with the roles of the two labels exchanged."""
    zn = tuple(mp.qtpow(mp.rank - j, n[j]) for j in range(mp.rank + 1))
    zm = tuple(mp.qtpow(mp.rank - j, m[j]) for j in range(mp.rank + 1))
    return normalized_eval(m, mp, zn), normalized_eval(n, mp, zm)


def project_AN(n: Partition) -> Weight:
    """Dominant weight with coordinates n_j - n_{j+1} (mean-shift projection)."""
    return tuple(n[j] - n[j + 1] for j in range(len(n) - 1))


def lift_weight(lam: Weight) -> Partition:
    """Canonical lift with last part zero; project_AN inverts it."""
    return tuple(sum(lam[j:]) for j in range(len(lam))) + (0,)


def conjugation_check(n: Partition, mp: MacParams, z):
    """Contragredient label vs inverted variables times the top power sum."""
    if any(zj == 0 for zj in z):
        raise ValueError("conjugation identity needs nonzero coordinates")
    lhs = macdonald_eval(contragredient_partition(n), mp, z)
    zprod = 1.0 + 0.0j
    for zj in z:
        zprod *= zj
    rhs = zprod ** n[0] * macdonald_eval(n, mp, tuple(1.0 / zj for zj in z))
    return lhs, rhs


def macdonald_identity(r: int, mp: MacParams, z):
    """Constant-term identity: the symmetrizer sum is z-free."""
    n1 = mp.rank + 1
    if len(set(z)) != n1:
        raise SingularValueError("coordinates must be pairwise distinct")
    lhs = 0.0 + 0.0j
    for J in itertools.combinations(range(n1), r):
        term = 1.0 + 0.0j
        for j in J:
            for k in range(n1):
                if k not in J:
                    term *= (mp.t * z[j] - z[k]) / (z[j] - z[k])
        lhs += term
    lhs *= mp.tpow(r * (r - 1) // 2)
    rhs = eigenvalue_E((0,) * n1, r, mp)
    return lhs, rhs


def grid_partitions(rank: int, m_max: int) -> tuple[Partition, ...]:
    """Partitions M >= m_1 >= ... >= m_N >= m_{N+1} = 0 indexing the alcove."""
    out = []

    def rec(prefix, cap):
        if len(prefix) == rank:
            out.append(tuple(prefix) + (0,))
            return
        for part in range(cap, -1, -1):
            rec(prefix + [part], part)

    rec([], m_max)
    return tuple(out)


def grid_weight(m: Partition, mp: MacParams) -> complex:
    """Orthogonality weight in (q,t) form; matches the trigonometric weight
    on the unit circle and is invariant under the all-ones shift."""
    n1 = len(m)
    out = mp.tpow(-sum((n1 - 2 * j - 1) * m[j] for j in range(n1)))
    for j in range(n1):
        for k in range(j + 1, n1):
            d = m[j] - m[k]
            out *= (1.0 - mp.qtpow(k - j, d)) / (1.0 - mp.tpow(k - j))
            out *= _finite_poch(mp, 1 + k - j, 0, d)
            den = _finite_poch(mp, k - j - 1, 1, d)
            if den == 0:
                raise SingularValueError("singular grid weight")
            out /= den
    return out


def pair_norm(n: Partition, mp: MacParams) -> complex:
    """Diagonal normalization attached to a label in the bilinear identity."""
    out = 1.0 + 0.0j
    for j in range(len(n)):
        for k in range(j + 1, len(n)):
            d = n[j] - n[k]
            out *= _finite_poch(mp, 1 + k - j, 0, d)
            out *= _finite_poch(mp, k - j - 1, 1, d)
            out /= _finite_poch(mp, k - j, 0, d)
            out /= _finite_poch(mp, k - j, 1, d)
    return out


def grid_norm_total(rank: int, m_max: int, mp: MacParams) -> complex:
    """Total mass (N+1) prod_{j=1..N} (q t^j; q)_{M-1} of the grid weight."""
    out = rank + 1.0 + 0.0j
    for j in range(1, rank + 1):
        out *= _finite_poch(mp, j, 1, m_max - 1)
    return out


def bilinear_identity(n: Partition, k: Partition, rank: int, m_max: int, g: float,
                      variant: str = "base"):
    """Alcove-grid bilinear sum against its closed evaluation.

    variant "base" pairs p_n(tau q^m) with p_k(tau^{-1} q^{-m}) and is
    diagonal on k = n modulo the all-ones shift; "contragredient" pairs both
    at tau q^m and is diagonal on k = n* modulo the shift; "normalized" is
    the contragredient pairing for the normalized polynomials, with diagonal
    value N_0 / Delta(n).
    """
    mp = MacParams.unit_circle(rank, m_max, g)
    n, k = tuple(n), tuple(k)
    for label in (n, k):
        if not is_partition(label) or len(label) != rank + 1:
            raise ValueError(f"{label} is not a partition of length {rank + 1}")
        if label[0] - label[-1] > m_max:
            raise ValueError(f"label {label} lies outside the alcove bound {m_max}")

    wn, wk = partition_weight(n), partition_weight(k)
    total = 0.0 + 0.0j
    for m in grid_partitions(rank, m_max):
        wm = partition_weight(m)
        z_up = tuple(mp.qtpow(rank - j, m[j]) for j in range(rank + 1))
        if variant == "base":
            z_dn = tuple(mp.qtpow(-(rank - j), -m[j]) for j in range(rank + 1))
            term = mp.qpow(Fraction(-wm * (wn - wk), rank + 1))
            term *= macdonald_eval(n, mp, z_up) * macdonald_eval(k, mp, z_dn)
        elif variant == "contragredient":
            term = mp.qpow(Fraction(-wm * (wn + wk), rank + 1))
            term *= macdonald_eval(n, mp, z_up) * macdonald_eval(k, mp, z_up)
        elif variant == "normalized":
            term = mp.qpow(Fraction(-wm * (wn + wk), rank + 1))
            term *= normalized_eval(n, mp, z_up) * normalized_eval(k, mp, z_up)
        else:
            raise ValueError(f"unknown variant {variant!r}")
        total += term * grid_weight(m, mp)

    if variant == "base":
        diagonal = _constant_difference(n, k)
    else:
        diagonal = _constant_difference(contragredient_partition(n), k)
    if not diagonal:
        return total, 0.0 + 0.0j
    n0 = grid_norm_total(rank, m_max, mp)
    if variant == "normalized":
        return total, n0 / grid_weight(n, mp)
    if variant == "base":
        expected = mp.tpow(Fraction(rank * (wn - wk), 2)) * n0 * pair_norm(n, mp)
    else:
        expected = mp.tpow(Fraction(rank * (wn + wk), 2)) * n0 * pair_norm(n, mp)
    return total, expected


def _constant_difference(a: Partition, b: Partition) -> bool:
    diffs = {x - y for x, y in zip(a, b)}
    return len(diffs) == 1
