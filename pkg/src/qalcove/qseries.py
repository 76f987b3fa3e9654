"""q-Pochhammer and trigonometric-Pochhammer evaluation, theta products, and
the Aomoto-Ito-Macdonald family of weight-lattice sums (bilateral, truncated
to the dominant cone, terminating on the alcove).

Conventions follow Gasper-Rahman: (a;q)_m = prod_{k=0}^{m-1} (1 - a q^k),
(a;q)_oo = prod_{k>=0} (1 - a q^k), and theta(zeta) = (q, zeta, q/zeta; q)_oo.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .root_system import (
    GradedScalar,
    RootData,
    Weight,
    ambient,
    build_root_data,
    dot,
    enumerate_alcove,
)


class SingularValueError(ArithmeticError):
    """A denominator factor vanished (parameters hit a pole)."""


MAX_PRODUCT_TERMS = 100_000


@dataclass(frozen=True)
class QParams:
    """Base q with truncation policy for infinite products.

    Infinite products are cut once the tail bound |q|^K / (1 - |q|) drops
    below `tolerance`; K is capped at MAX_PRODUCT_TERMS with a loud failure.
    """

    q: complex
    tolerance: float = 1e-15

    def n_terms(self) -> int:
        aq = abs(self.q)
        if aq >= 1:
            raise ValueError(f"infinite products need |q| < 1, got |q| = {aq}")
        k = math.ceil(math.log(self.tolerance * (1 - aq)) / math.log(aq)) if aq > 0 else 1
        k = max(k, 1)
        if k > MAX_PRODUCT_TERMS:
            raise ValueError(
                f"tail bound needs {k} > {MAX_PRODUCT_TERMS} factors; "
                "raise tolerance or move q away from the unit circle"
            )
        return k

    def tail_bound(self) -> float:
        aq = abs(self.q)
        return aq ** self.n_terms() / (1 - aq)


def trig_pochhammer(z: GradedScalar, m: int, g: float, alpha: float) -> float:
    """Product of sines sin(alpha/2 (z + k)) for k = 0..m-1; 1 when m = 0."""
    if m < 0:
        raise ValueError(f"trigonometric Pochhammer needs m >= 0, got {m}")
    out = 1.0
    zv = z.value(g)
    for k in range(m):
        out *= math.sin(0.5 * alpha * (zv + k))
    return out


def q_pochhammer(a: complex, qp: QParams, m) -> complex:
    """(a;q)_m for integer m (any sign) or m = math.inf.

    Negative m uses 1 / prod_{k=1}^{-m} (1 - a q^{-k}); a vanishing factor
    there raises SingularValueError. The infinite product is truncated per
    the QParams tail policy.
    """
    q = qp.q
    if m is math.inf or (isinstance(m, float) and math.isinf(m)):
        out = 1.0 + 0.0j
        aqk = complex(a)
        for _ in range(qp.n_terms()):
            out *= 1.0 - aqk
            aqk *= q
        return out
    m = int(m)
    if m == 0:
        return 1.0 + 0.0j
    if m > 0:
        out = 1.0 + 0.0j
        aqk = complex(a)
        for _ in range(m):
            out *= 1.0 - aqk
            aqk *= q
        return out
    out = 1.0 + 0.0j
    qinv = 1.0 / q
    aqk = a * qinv
    for _ in range(-m):
        factor = 1.0 - aqk
        if factor == 0:
            raise SingularValueError(f"(a;q)_{m} hit a zero factor at a = {a}")
        out *= factor
        aqk *= qinv
    return 1.0 / out


def theta(zeta: complex, qp: QParams) -> complex:
    """Triple product theta(zeta) = (q;q)_oo (zeta;q)_oo (q/zeta;q)_oo."""
    if zeta == 0:
        raise ValueError("theta is undefined at zeta = 0")
    return (
        q_pochhammer(qp.q, qp, math.inf)
        * q_pochhammer(zeta, qp, math.inf)
        * q_pochhammer(qp.q / zeta, qp, math.inf)
    )


def _qpow(qp: QParams, expo: complex) -> complex:
    """q**expo via the principal logarithm (q real in (0,1) in practice)."""
    return cmath.exp(expo * cmath.log(qp.q))


def _weights_in_ball(rd: RootData, radius: int):
    """All weights whose pairings with every positive root are <= radius."""
    rank = rd.rank
    for coords in itertools.product(range(-radius, radius + 1), repeat=rank):
        w: Weight = tuple(coords)
        amb = ambient(w, rd)
        if all(abs(dot(a, amb)) <= radius for a in rd.positive_roots):
            yield w


def aim_gamma(rank: int, g: complex, qp: QParams) -> complex:
    """The z-independent constant of the bilateral sum, root-by-root form."""
    rd = build_root_data(rank)
    out = rank + 1.0
    for a, h in zip(rd.positive_roots, rd.positive_heights):
        delta = 1 if h == 1 else 0
        out *= q_pochhammer(_qpow(qp, 1 - g - h * g), qp, math.inf)
        out *= q_pochhammer(_qpow(qp, delta + g - h * g), qp, math.inf)
        out /= q_pochhammer(_qpow(qp, 1 - h * g), qp, math.inf)
        out /= q_pochhammer(_qpow(qp, -h * g), qp, math.inf)
    return out


def aim_gamma_compact(rank: int, g: complex, qp: QParams) -> complex:
    """Compact form of the same constant after cancelling common factors."""
    out = (rank + 1.0) * q_pochhammer(qp.q, qp, math.inf) ** rank
    out /= q_pochhammer(_qpow(qp, 1 - g), qp, math.inf) ** rank
    for n in range(1, rank + 1):
        out *= q_pochhammer(_qpow(qp, 1 - (n + 1) * g), qp, math.inf)
        out /= q_pochhammer(_qpow(qp, -n * g), qp, math.inf)
    return out


def aim_sum(rank: int, g: complex, qp: QParams, z, radius: int):
    """Bilateral weight-lattice sum against its theta-product evaluation.

    Returns (lhs, rhs): lhs is the partial sum over weights mu with
    |<a, mu>| <= radius for every positive root a; rhs = gamma * Theta(z).
    Absolute convergence (Re g < 0, 0 < q < 1) drives lhs -> rhs as the
    radius grows.
    """
    rd = build_root_data(rank)
    if len(z) != rank + 1:
        raise ValueError("z must have N+1 components")
    z_rho = sum(float(r) * zj for r, zj in zip(rd.rho_coeff, z))
    lhs = 0.0 + 0.0j
    for mu in _weights_in_ball(rd, radius):
        amb = ambient(mu, rd)
        rho_pair = dot(rd.rho_coeff, amb)
        term = _qpow(qp, -2 * (g * (z_rho + float(rho_pair))))
        for a in rd.positive_roots:
            az = sum(float(c) * zj for c, zj in zip(a, z))
            am = float(dot(a, amb))
            expo = az + am
            term *= 1.0 - _qpow(qp, expo)
            term *= q_pochhammer(_qpow(qp, 1 - g + expo), qp, math.inf)
            term /= q_pochhammer(_qpow(qp, g + expo), qp, math.inf)
        if not (cmath.isfinite(term)):
            raise SingularValueError("summand is not finite; z violates genericity")
        lhs += term
    rhs = _qpow(qp, -2 * g * z_rho)
    for a in rd.positive_roots:
        az = sum(float(c) * zj for c, zj in zip(a, z))
        num = theta(_qpow(qp, az), qp)
        den = theta(_qpow(qp, g + az), qp)
        if abs(den) < 1e-280:
            raise SingularValueError("theta denominator vanished")
        rhs *= num / den
    rhs *= aim_gamma(rank, g, qp)
    return lhs, rhs


def truncated_aim(rank: int, g: complex, qp: QParams, radius: int):
    """Dominant-cone truncation of the lattice sum against its product side.

    lhs sums the normalized terms over dominant mu with height <= radius;
    rhs = (N+1) prod_{n=1..N} (q^{1+ng};q)_oo / (q^{-ng};q)_oo.
    """
    rd = build_root_data(rank)
    lhs = 0.0 + 0.0j
    for mu in enumerate_alcove(rank, radius):
        amb = ambient(mu, rd)
        term = _qpow(qp, -2 * g * dot(rd.rho_coeff, amb))
        for a, h in zip(rd.positive_roots, rd.positive_heights):
            am = int(dot(a, amb))
            term *= (1.0 - _qpow(qp, g * h + am)) / (1.0 - _qpow(qp, g * h))
            term *= q_pochhammer(_qpow(qp, g + g * h), qp, am)
            term /= q_pochhammer(_qpow(qp, 1 - g + g * h), qp, am)
        if not cmath.isfinite(term):
            raise SingularValueError("summand is not finite; g violates genericity")
        lhs += term
    rhs = rank + 1.0
    for n in range(1, rank + 1):
        rhs *= q_pochhammer(_qpow(qp, 1 + n * g), qp, math.inf)
        rhs /= q_pochhammer(_qpow(qp, -n * g), qp, math.inf)
    return lhs, rhs


def terminating_aim(rank: int, m_max: int, g: float):
    """Alcove-terminating sum in trigonometric form against its product form.

    Returns (sum, product) with alpha = 2*pi/((N+1)g + M):
    sum of the weight-function values over the alcove, and
    2^{N(M-1)} (N+1) prod sin(alpha/2 (m + ng)). The two sides agree; this is
    exactly the normalization constant of the ground-state wave function.
    """
    if g <= 0:
        raise ValueError(f"coupling must be positive, got g = {g}")
    if m_max < 1:
        raise ValueError(f"m_max must be >= 1, got {m_max}")
    rd = build_root_data(rank)
    alpha = 2 * math.pi / ((rank + 1) * g + m_max)
    total = 0.0
    for mu in enumerate_alcove(rank, m_max):
        total += _alcove_weight(mu, rd, g, alpha)
    product = 2.0 ** (rank * (m_max - 1)) * (rank + 1)
    for n in range(1, rank + 1):
        for m in range(1, m_max):
            product *= math.sin(0.5 * alpha * (m + n * g))
    return total, product


def _alcove_weight(mu: Weight, rd: RootData, g: float, alpha: float) -> float:
    """Orthogonality weight at a dominant weight, as a positive sine product."""
    amb = ambient(mu, rd)
    out = 1.0
    for a, h in zip(rd.positive_roots, rd.positive_heights):
        am = int(dot(a, amb))
        base = GradedScalar(Fraction(h), Fraction(0))
        out *= math.sin(0.5 * alpha * GradedScalar(Fraction(h), Fraction(am)).value(g))
        out /= math.sin(0.5 * alpha * base.value(g))
        out *= trig_pochhammer(base.shift(gcoef=1), am, g, alpha)
        out /= trig_pochhammer(base.shift(gcoef=-1, const=1), am, g, alpha)
    return out


def rank_one_sums(which: str, *, q: float | None = None, g: float | None = None,
                  z: float | None = None, m_max: int | None = None,
                  radius: int = 60, tolerance: float = 1e-15):
    """Rank-one reductions of the lattice sums: bilateral well-poised 2psi2
    ("A5"), one-sided 2phi1 ("A6"), and the terminating alcove sum ("A7").

    Returns (lhs, rhs). A5/A6 need 0 < q < 1 and Re g < 0; A7 fixes q on the
    unit circle from (g, m_max).
    """
    if which == "A5":
        qp = QParams(q, tolerance)
        if z is None:
            raise ValueError("A5 needs the spectral offset z")

        def step(m):
            # term(m) / term(m-1); raw bilateral Pochhammers overflow, the
            # ratio stays O(1) away from poles
            num = (1.0 - _qpow(qp, z + m)) * (1.0 - _qpow(qp, g + z + m - 1))
            den = (1.0 - _qpow(qp, z + m - 1)) * (1.0 - _qpow(qp, 1 - g + z + m - 1))
            if den == 0:
                raise SingularValueError("pole in the bilateral term")
            return _qpow(qp, -g) * num / den

        lhs = 1.0 + 0.0j
        term = 1.0 + 0.0j
        for m in range(1, radius + 1):
            term *= step(m)
            lhs += term
        term = 1.0 + 0.0j
        for m in range(0, -radius, -1):
            term /= step(m)
            lhs += term
        rhs = 2.0 + 0.0j
        rhs *= q_pochhammer(_qpow(qp, 1 + z), qp, math.inf)
        rhs *= q_pochhammer(_qpow(qp, 1 - z), qp, math.inf)
        rhs /= q_pochhammer(_qpow(qp, 1 - g + z), qp, math.inf)
        rhs /= q_pochhammer(_qpow(qp, 1 - g - z), qp, math.inf)
        rhs *= q_pochhammer(_qpow(qp, 1 - 2 * g), qp, math.inf)
        rhs /= q_pochhammer(_qpow(qp, 1 - g), qp, math.inf)
        # z-independent factor fixed by the z -> g limit, where the bilateral
        # sum truncates to the one-sided 2phi1 ("A6") evaluation
        rhs *= q_pochhammer(qp.q, qp, math.inf)
        rhs /= q_pochhammer(_qpow(qp, -g), qp, math.inf)
        return lhs, rhs
    if which == "A6":
        qp = QParams(q, tolerance)
        lhs = 0.0 + 0.0j
        for m in range(radius + 1):
            term = _qpow(qp, -g * m)
            term *= (1.0 - _qpow(qp, g + m)) / (1.0 - _qpow(qp, g))
            term *= q_pochhammer(_qpow(qp, 2 * g), qp, m)
            term /= q_pochhammer(qp.q, qp, m)
            lhs += term
        rhs = 2.0 * q_pochhammer(_qpow(qp, 1 + g), qp, math.inf)
        rhs /= q_pochhammer(_qpow(qp, -g), qp, math.inf)
        return lhs, rhs
    if which == "A7":
        if g is None or m_max is None:
            raise ValueError("A7 needs g and m_max")
        alpha = 2 * math.pi / (2 * g + m_max)

        def qpow(x):
            return cmath.exp(1j * alpha * x)

        lhs = 0.0 + 0.0j
        for m in range(m_max + 1):
            term = qpow(-g * m)
            term *= (1.0 - qpow(g + m)) / (1.0 - qpow(g))
            num = den = 1.0 + 0.0j
            for k in range(m):
                num *= 1.0 - qpow(2 * g + k)
                den *= 1.0 - qpow(1 + k)
            lhs += term * num / den
        rhs = 2.0 + 0.0j
        for k in range(m_max - 1):
            rhs *= 1.0 - qpow(1 + g + k)
        return lhs, rhs
    raise ValueError(f"unknown reduction {which!r}; expected A5, A6 or A7")
