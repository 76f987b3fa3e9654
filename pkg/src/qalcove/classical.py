"""Classical side of the model: integrals of motion, configuration-space
membership, the projective-space embedding of the phase space and its
inverse, and the equilibrium (vertex) energies.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .lattice_model import ModelParams, v_function, ground_energy
from .root_system import build_root_data, orbit


class OutsideConfigurationSpaceError(ValueError):
    """A radicand went nonpositive: the point is not interior."""


class OutsidePatchError(ValueError):
    """Angle recovery requested off the dense coordinate patch."""


@dataclass(frozen=True)
class PhasePoint:
    """Positions and momenta in ambient coordinates (length N+1 each)."""

    x: tuple[float, ...]
    p: tuple[float, ...]


@dataclass(frozen=True)
class ProjectivePoint:
    """Homogeneous coordinates [z_0 : ... : z_N], not all zero."""

    z: tuple[complex, ...]

    def __post_init__(self):
        if all(abs(c) == 0 for c in self.z):
            raise ValueError("projective point needs a nonzero coordinate")


def reduced_coordinates(pt: PhasePoint, mp: ModelParams):
    """Simple-root position pairings and fundamental-weight momentum angles,
    the latter wrapped to (-pi, pi]."""
    rd = build_root_data(mp.n)
    xs = []
    for a in rd.simple_roots:
        xs.append(sum(float(c) * xj for c, xj in zip(a, pt.x)))
    ps = []
    for w in rd.fundamental_weights:
        angle = sum(float(c) * pj for c, pj in zip(w, pt.p))
        angle = math.remainder(angle, 2 * math.pi)
        if angle <= -math.pi:
            angle += 2 * math.pi
        ps.append(angle)
    return xs, ps


def phase_point(root_pairings, weight_angles, mp: ModelParams) -> PhasePoint:
    """Assemble ambient coordinates from reduced ones (dual-basis expansion)."""
    rd = build_root_data(mp.n)
    x = [0.0] * (mp.n + 1)
    p = [0.0] * (mp.n + 1)
    for c, w in zip(root_pairings, rd.fundamental_weights):
        for j in range(mp.n + 1):
            x[j] += c * float(w[j])
    for c, a in zip(weight_angles, rd.simple_roots):
        for j in range(mp.n + 1):
            p[j] += c * float(a[j])
    return PhasePoint(x=tuple(x), p=tuple(p))


def membership(x, mp: ModelParams, closed: bool = True) -> bool:
    """Open/closed configuration-simplex membership on the zero-sum plane.

    Walls sit at simple-root pairing g and maximal-root pairing
    2*pi/alpha - g; a 1e-12 band around each wall counts as boundary.
    """
    if abs(sum(x)) > 1e-9 * max(1.0, max(abs(c) for c in x)):
        raise ValueError("point is off the center-of-mass hyperplane")
    rd = build_root_data(mp.n)
    tol = 1e-12
    lows = [
        sum(float(c) * xj for c, xj in zip(a, x)) - mp.g for a in rd.simple_roots
    ]
    high = (2 * math.pi / mp.alpha - mp.g) - sum(
        float(c) * xj for c, xj in zip(rd.a_max, x)
    )
    margins = lows + [high]
    if closed:
        return all(v >= -tol for v in margins)
    return all(v > tol for v in margins)


def hamiltonian_value(which: str, pt: PhasePoint, mp: ModelParams, r: int | None = None) -> float:
    """Classical integrals: the full ("H"), the r-th symmetric ("H_r"), or
    the reduced center-of-mass form ("reduced_r").

    The point must be interior (every radicand positive); a nonpositive
    radicand raises OutsideConfigurationSpaceError.
    """
    if which == "H":
        return _full_hr(1, pt, mp)
    if which == "H_r":
        if r is None:
            raise ValueError("H_r needs r")
        return _full_hr(r, pt, mp)
    if which == "reduced_r":
        if r is None:
            raise ValueError("reduced_r needs r")
        return _reduced_hr(r, pt, mp)
    raise ValueError(f"unknown Hamiltonian {which!r}")


def _sin2_factor(diff: float, mp: ModelParams) -> float:
    wall = math.sin(0.5 * mp.alpha * mp.g) ** 2
    radicand = 1.0 - wall / math.sin(0.5 * mp.alpha * diff) ** 2
    if radicand <= 0:
        raise OutsideConfigurationSpaceError(
            f"pair separation {diff} is not interior (radicand {radicand})"
        )
    return math.sqrt(radicand)


def _full_hr(r: int, pt: PhasePoint, mp: ModelParams) -> float:
    import itertools

    n1 = mp.n + 1
    if not 1 <= r <= n1:
        raise ValueError(f"r must be in 1..{n1}")
    total = 0.0
    for J in itertools.combinations(range(n1), r):
        term = math.cos(sum(pt.p[j] for j in J))
        for j in J:
            for k in range(n1):
                if k not in J:
                    term *= _sin2_factor(pt.x[j] - pt.x[k], mp)
        total += term
    return total


def _reduced_hr(r: int, pt: PhasePoint, mp: ModelParams) -> float:
    total = 0.0
    for nu in orbit(r, mp.n):
        angle = sum(float(c) * pj for c, pj in zip(nu, pt.p))
        term = math.cos(angle)
        # product over roots paired +1 with nu of the interaction factor
        for j in range(mp.n + 1):
            for k in range(mp.n + 1):
                if j != k and nu[j] - nu[k] == 1:
                    term *= _sin2_factor(pt.x[j] - pt.x[k], mp)
        total += term
    return total


def product_identity(nu, x, mp: ModelParams):
    """Both sides of V_nu(x) V_nu(-x) = prod (1 - sin^2(alpha g/2)/sin^2)."""
    lhs = v_function(nu, x, mp) * v_function(tuple(-c for c in nu), x, mp)
    rhs = 1.0
    wall = math.sin(0.5 * mp.alpha * mp.g) ** 2
    for j in range(mp.n + 1):
        for k in range(mp.n + 1):
            if j != k and nu[j] - nu[k] == 1:
                rhs *= 1.0 - wall / math.sin(0.5 * mp.alpha * (x[j] - x[k])) ** 2
    return lhs, rhs


def embed(pt: PhasePoint, mp: ModelParams) -> ProjectivePoint:
    """Interior phase point to homogeneous coordinates with z_0 = 1."""
    rd = build_root_data(mp.n)
    period = 2 * math.pi / mp.alpha
    amax = sum(float(c) * xj for c, xj in zip(rd.a_max, pt.x))
    denom = period - mp.g - amax
    if denom <= 0:
        raise OutsideConfigurationSpaceError("point is not interior to the simplex")
    zs = [1.0 + 0.0j]
    for a, w in zip(rd.simple_roots, rd.fundamental_weights):
        ax = sum(float(c) * xj for c, xj in zip(a, pt.x))
        if ax - mp.g <= 0:
            raise OutsideConfigurationSpaceError("point is not interior to the simplex")
        angle = sum(float(c) * pj for c, pj in zip(w, pt.p))
        zs.append(cmath.exp(1j * angle) * math.sqrt((ax - mp.g) / denom))
    return ProjectivePoint(z=tuple(zs))


def inverse_embed(zp: ProjectivePoint, mp: ModelParams):
    """Recover (x, p) from homogeneous coordinates.

    Action coordinates extend continuously to the whole projective space and
    are always returned; momentum angles exist only on the dense patch with
    all coordinates nonzero, so p is None off it (the angle-undefined
    marker).
    """
    if len(zp.z) != mp.n + 1:
        raise ValueError("projective point must have N+1 coordinates")
    norms = [abs(c) ** 2 for c in zp.z]
    total = sum(norms)
    span = 2 * math.pi / mp.alpha - (mp.n + 1) * mp.g
    pairings = [span * nz / total + mp.g for nz in norms[1:]]
    x = phase_point(pairings, [0.0] * mp.n, mp).x
    if any(n == 0 for n in norms):
        return x, None
    z0 = zp.z[0]
    angles = []
    for zj in zp.z[1:]:
        w = zj * abs(z0) / (z0 * abs(zj))
        angles.append(cmath.phase(w))
    p = phase_point([0.0] * mp.n, angles, mp).p
    return x, tuple(p)


def rho_point(mp: ModelParams) -> tuple[float, ...]:
    rd = build_root_data(mp.n)
    return tuple(float(c) * mp.g for c in rd.rho_coeff)


def energy_function(x, mp: ModelParams) -> float:
    """Sum of cosines of the scaled ambient coordinates."""
    return sum(math.cos(mp.alpha * xj) for xj in x)


def vertex_energies(mp: ModelParams):
    """The N+1 simplex vertices with their critical energies.

    Returns tuples (r, vertex, direct, closed): r = 0 is the base vertex with
    closed-form energy sin(alpha g (N+1)/2)/sin(alpha g/2); r >= 1 are the
    far vertices with energy cos(2 pi r/(N+1)) times that. `direct` is the
    cosine sum evaluated at the vertex; the action-variable form of the first
    reduced integral, which takes exactly these values at the vertices.
    """
    rd = build_root_data(mp.n)
    base = rho_point(mp)
    e_rho = ground_energy(1, mp)
    out = [(0, base, energy_function(base, mp), e_rho)]
    for r in range(1, mp.n + 1):
        vertex = tuple(
            float(c) * mp.g + mp.m * float(w)
            for c, w in zip(rd.rho_coeff, rd.fundamental_weights[r - 1])
        )
        closed = math.cos(2 * math.pi * r / (mp.n + 1)) * e_rho
        out.append((r, vertex, energy_function(vertex, mp), closed))
    return out
