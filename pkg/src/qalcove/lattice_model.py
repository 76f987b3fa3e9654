"""The finite-dimensional quantum model on the alcove lattice.

Difference operators act on complex functions over the rho-shifted dominant
weights of bounded height. Coefficients vanish exactly at the boundary (the
decision is an integer lattice test, never a small-sine test), which makes
the forward/backward shift matrices exact transposes of each other and the
symmetrized Hamiltonians exactly symmetric, entry by entry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .macdonald import MacParams, evaluate_sympoly, lift_weight, macdonald_poly
from .root_system import (
    Vector,
    Weight,
    ambient,
    build_root_data,
    enumerate_alcove,
    graded,
    orbit,
)
from .qseries import trig_pochhammer


class AmbiguousValueError(ArithmeticError):
    """Boundary evaluation at an exceptional coupling has no continuous value."""


@dataclass(frozen=True)
class ModelParams:
    """Model data (N, M, g) with alpha = 2*pi / ((N+1) g + M)."""

    n: int
    m: int
    g: float
    alpha: float
    exceptional_g: bool


def new_model(n: int, m: int, g: float) -> ModelParams:
    if n < 1 or m < 1 or g <= 0:
        raise ValueError(f"need n >= 1, m >= 1, g > 0; got ({n}, {m}, {g})")
    alpha = 2 * math.pi / ((n + 1) * g + m)
    exceptional = any(abs(g - 1 / j) < 1e-12 for j in range(1, n + 1))
    return ModelParams(n=n, m=m, g=g, alpha=alpha, exceptional_g=exceptional)


def alcove(mp: ModelParams) -> tuple[Weight, ...]:
    return enumerate_alcove(mp.n, mp.m)


def in_alcove(w: Weight, mp: ModelParams) -> bool:
    return all(c >= 0 for c in w) and sum(w) <= mp.m


@dataclass(frozen=True)
class _NuData:
    """One orbit vector with everything pairings need precomputed."""

    wcoords: Weight  # fundamental coordinates <a_j, nu>
    terms: tuple[tuple[int, int, int, int], ...]  # (sign, height, j, k) per root with <a,nu>=+-1
    omega_pairs: tuple[Fraction, ...]  # <nu, omega_i>
    rho_pair: Fraction  # <nu, rho>/g
    amb: Vector


@lru_cache(maxsize=None)
def _orbit_data(rank: int, r: int) -> tuple[_NuData, ...]:
    rd = build_root_data(rank)
    out = []
    for nu in orbit(r, rank):
        wcoords = tuple(int(sum(a * b for a, b in zip(root, nu))) for root in rd.simple_roots)
        terms = []
        for root, h in zip(rd.positive_roots, rd.positive_heights):
            s = int(sum(a * b for a, b in zip(root, nu)))
            if s:
                j = next(i for i, c in enumerate(root) if c == 1)
                k = next(i for i, c in enumerate(root) if c == -1)
                terms.append((s, h, j, k))
        omega_pairs = tuple(
            sum((a * b for a, b in zip(w, nu)), Fraction(0))
            for w in rd.fundamental_weights
        )
        out.append(
            _NuData(
                wcoords=wcoords,
                terms=tuple(terms),
                omega_pairs=omega_pairs,
                rho_pair=sum(omega_pairs, Fraction(0)),
                amb=nu,
            )
        )
    return tuple(out)


@lru_cache(maxsize=None)
def _nu_lookup(rank: int) -> dict[Weight, _NuData]:
    table: dict[Weight, _NuData] = {}
    for r in range(1, rank + 1):
        for data in _orbit_data(rank, r):
            table[data.wcoords] = data
    return table


def _find_nu(nu: Vector, mp: ModelParams) -> _NuData:
    rd = build_root_data(mp.n)
    wcoords = tuple(int(sum(a * b for a, b in zip(root, nu))) for root in rd.simple_roots)
    data = _nu_lookup(mp.n).get(wcoords)
    if data is None or data.amb != tuple(nu):
        raise ValueError(f"{nu} is not in a fundamental-weight orbit of A_{mp.n}")
    return data


def _negate(data: _NuData, mp: ModelParams) -> _NuData:
    out = _nu_lookup(mp.n).get(tuple(-c for c in data.wcoords))
    assert out is not None
    return out


def _root_pairing(mu: Weight, j: int, k: int) -> int:
    # <e_j - e_k, mu> in fundamental coordinates is a coordinate partial sum
    return sum(mu[j:k])


def _sin(gcoef: int, const: int, mp: ModelParams) -> float:
    # single canonical float path so that identical exact angles produce
    # bitwise-identical values across call sites
    return math.sin(0.5 * mp.alpha * (gcoef * mp.g + const))


def _v_at(data: _NuData, mu: Weight, mp: ModelParams) -> float:
    out = 1.0
    for s, h, j, k in data.terms:
        b = _root_pairing(mu, j, k)
        out *= _sin(h + s, b, mp) / _sin(h, b, mp)
    return out


def _v_reflected(data: _NuData, mu: Weight, mp: ModelParams) -> float:
    out = 1.0
    for s, h, j, k in data.terms:
        b = _root_pairing(mu, j, k)
        out *= _sin(h - s, b + s, mp) / _sin(h, b + s, mp)
    return out


def _shifted(mu: Weight, data: _NuData, sign: int = 1) -> Weight:
    return tuple(c + sign * d for c, d in zip(mu, data.wcoords))


def coeff_V(nu: Vector, mu: Weight, form: str, mp: ModelParams) -> float:
    """Shift coefficient at a lattice point ("at_point") or its reflected
    partner ("reflected").

    The at_point value is exactly zero when the shifted point leaves the
    alcove (an integer test, not a small-sine test). The reflected form is
    finite in range; out of range it refuses to evaluate at exceptional
    couplings, where the continuous limit is ambiguous.
    """
    data = _find_nu(nu, mp)
    if not in_alcove(mu, mp):
        raise ValueError(f"{mu} is outside the alcove")
    target_in = in_alcove(_shifted(mu, data), mp)
    if form == "at_point":
        if not target_in:
            return 0.0
        return _v_at(data, mu, mp)
    if form == "reflected":
        if not target_in and mp.exceptional_g:
            raise AmbiguousValueError(
                f"reflected coefficient at boundary point {mu} is ambiguous at g = {mp.g}"
            )
        return _v_reflected(data, mu, mp)
    raise ValueError(f"unknown form {form!r}")


def _w_plus(data: _NuData, mu: Weight, mp: ModelParams) -> float:
    if not in_alcove(_shifted(mu, data), mp):
        return 0.0
    v1 = _v_at(data, mu, mp)
    v2 = _v_reflected(data, mu, mp)
    if v1 <= 0 or v2 <= 0:
        raise RuntimeError(
            f"nonpositive radicand ({v1}, {v2}) at mu={mu}; positivity is guaranteed in range"
        )
    return math.sqrt(v1) * math.sqrt(v2)


def coeff_W(nu: Vector, mu: Weight, sign: str, mp: ModelParams) -> float:
    """Symmetrized shift coefficient: positive in range, exactly zero at the
    boundary (the continuity convention at exceptional couplings)."""
    if not in_alcove(mu, mp):
        raise ValueError(f"{mu} is outside the alcove")
    data = _find_nu(nu, mp)
    if sign == "+":
        return _w_plus(data, mu, mp)
    if sign == "-":
        return _w_plus(_negate(data, mp), mu, mp)
    raise ValueError(f"unknown sign {sign!r}")


@lru_cache(maxsize=None)
def _roots_heights(rank: int):
    rd = build_root_data(rank)
    out = []
    for root, h in zip(rd.positive_roots, rd.positive_heights):
        j = next(i for i, c in enumerate(root) if c == 1)
        k = next(i for i, c in enumerate(root) if c == -1)
        out.append((h, j, k))
    return tuple(out)


def c_plus(mu: Weight, mp: ModelParams) -> float:
    out = 1.0
    for h, j, k in _roots_heights(mp.n):
        b = _root_pairing(mu, j, k)
        out *= trig_pochhammer(graded(h), b, mp.g, mp.alpha)
        out /= trig_pochhammer(graded(h + 1), b, mp.g, mp.alpha)
    return out


def c_minus(mu: Weight, mp: ModelParams) -> float:
    out = 1.0
    for h, j, k in _roots_heights(mp.n):
        b = _root_pairing(mu, j, k)
        out *= trig_pochhammer(graded(h - 1, 1), b, mp.g, mp.alpha)
        out /= trig_pochhammer(graded(h, 1), b, mp.g, mp.alpha)
    return out


def delta(mu: Weight, mp: ModelParams) -> float:
    """Positive orthogonality weight at an alcove point."""
    if not in_alcove(mu, mp):
        raise ValueError(f"{mu} is outside the alcove")
    return 1.0 / (c_plus(mu, mp) * c_minus(mu, mp))


def delta_dominant(mu: Weight, mp: ModelParams) -> float:
    """Weight-function value at any dominant weight (no alcove restriction)."""
    return 1.0 / (c_plus(mu, mp) * c_minus(mu, mp))


def n0_sum(mp: ModelParams) -> float:
    return sum(delta(mu, mp) for mu in alcove(mp))


def n0_product(mp: ModelParams) -> float:
    out = 2.0 ** (mp.n * (mp.m - 1)) * (mp.n + 1)
    for n in range(1, mp.n + 1):
        out *= trig_pochhammer(graded(n, 1), mp.m - 1, mp.g, mp.alpha)
    return out


def functional_relation_check(mu: Weight, nu: Vector, mp: ModelParams):
    """Both sides of the weight-function shift relation
    Delta(mu+nu) V_nu(-rho-mu-nu) = Delta(mu) V_nu(rho+mu), for dominant mu
    and mu+nu."""
    data = _find_nu(nu, mp)
    target = _shifted(mu, data)
    if any(c < 0 for c in mu) or any(c < 0 for c in target):
        raise ValueError("both mu and mu+nu must be dominant")
    lhs = delta_dominant(target, mp) * _v_reflected(data, mu, mp)
    rhs = delta_dominant(mu, mp) * _v_at(data, mu, mp)
    return lhs, rhs


@dataclass(frozen=True)
class HamiltonianMatrix:
    entries: np.ndarray
    r: int
    sign: str


def hamiltonian(r: int, sign: str, mp: ModelParams) -> HamiltonianMatrix:
    """Shift matrix in alcove order: "+", "-", or their symmetrized mean.

    The "+" and "-" matrices are exact transposes entry by entry, so the
    symmetrized matrix is exactly symmetric.
    """
    if not 1 <= r <= mp.n:
        raise ValueError(f"r must be in 1..{mp.n}")
    if sign == "sym":
        plus = hamiltonian(r, "+", mp).entries
        minus = hamiltonian(r, "-", mp).entries
        return HamiltonianMatrix((plus + minus) / 2, r, "sym")
    labels = alcove(mp)
    index = {w: i for i, w in enumerate(labels)}
    out = np.zeros((len(labels), len(labels)))
    direction = 1 if sign == "+" else -1 if sign == "-" else None
    if direction is None:
        raise ValueError(f"unknown sign {sign!r}")
    for i, mu in enumerate(labels):
        for data in _orbit_data(mp.n, r):
            j = index.get(_shifted(mu, data, direction))
            if j is None:
                continue
            wdata = data if direction == 1 else _negate(data, mp)
            out[i, j] = _w_plus(wdata, mu, mp)
    return HamiltonianMatrix(out, r, sign)


def _nu_angle(data: _NuData, lam: Weight) -> tuple[Fraction, Fraction]:
    pair = sum((c * o for c, o in zip(lam, data.omega_pairs)), Fraction(0))
    return data.rho_pair, pair


def spectrum(r: int, mp: ModelParams) -> np.ndarray:
    """Real eigenvalue function on the alcove: sums of cosines of exact angles."""
    out = []
    for lam in alcove(mp):
        total = 0.0
        for data in _orbit_data(mp.n, r):
            rho_pair, pair = _nu_angle(data, lam)
            total += math.cos(mp.alpha * (float(rho_pair) * mp.g + float(pair)))
        out.append(total)
    return np.array(out)


def energies_plus(r: int, mp: ModelParams) -> np.ndarray:
    """Complex forward eigenvalue function on the alcove."""
    out = []
    for lam in alcove(mp):
        total = 0.0 + 0.0j
        for data in _orbit_data(mp.n, r):
            rho_pair, pair = _nu_angle(data, lam)
            total += cmath.exp(1j * mp.alpha * (float(rho_pair) * mp.g + float(pair)))
        out.append(total)
    return np.array(out)


def ground_energy(r: int, mp: ModelParams) -> float:
    """Closed product form of the top eigenvalue (a sine binomial)."""
    num = 1.0
    for j in range(1, mp.n + 2):
        num *= math.sin(0.5 * j * mp.alpha * mp.g)
    den = 1.0
    for j in range(1, r + 1):
        den *= math.sin(0.5 * j * mp.alpha * mp.g)
    for j in range(1, mp.n + 2 - r):
        den *= math.sin(0.5 * j * mp.alpha * mp.g)
    return num / den


def v_function(nu: Vector, x, mp: ModelParams) -> float:
    """Raw coefficient function at an arbitrary real point of the ambient
    center-of-mass hyperplane (used by continuum identities)."""
    data = _find_nu(nu, mp)
    out = 1.0
    for s, h, j, k in data.terms:
        ax = x[j] - x[k]
        out *= math.sin(0.5 * mp.alpha * (mp.g + s * ax)) / math.sin(0.5 * mp.alpha * s * ax)
    return out


def psi0(mp: ModelParams) -> np.ndarray:
    """Strictly positive normalized ground-state vector."""
    weights = np.array([delta(mu, mp) for mu in alcove(mp)])
    vec = np.sqrt(weights)
    return vec / math.sqrt(weights.sum())


@dataclass(frozen=True)
class WaveBasis:
    """Rows are wave functions Psi_lambda over the lattice, alcove order."""

    psi: np.ndarray  # complex, [label, point]
    energies: np.ndarray  # real, [r-1, label]
    route: str
    params: ModelParams


def lattice_point(mu: Weight, mp: ModelParams) -> tuple[complex, ...]:
    """Unit-circle coordinates exp(i alpha x_j) of the rho-shifted point."""
    rd = build_root_data(mp.n)
    amb = ambient(mu, rd)
    return tuple(
        cmath.exp(1j * mp.alpha * (float(r) * mp.g + float(a)))
        for r, a in zip(rd.rho_coeff, amb)
    )


def wave_basis_coefficient_route(mp: ModelParams) -> WaveBasis:
    """Wave functions assembled from the polynomial eigenfunctions.

    Each row is N_0^{-1/2} Delta^{1/2}(lambda) Delta^{1/2}(mu) P_lambda at the
    lattice point, with P normalized to 1 at the base vertex.
    """
    labels = alcove(mp)
    mps = MacParams.unit_circle(mp.n, mp.m, mp.g)
    weights = np.array([delta(mu, mp) for mu in labels])
    n0 = weights.sum()
    points = [lattice_point(mu, mp) for mu in labels]
    psi = np.zeros((len(labels), len(labels)), dtype=complex)
    for i, lam in enumerate(labels):
        poly = macdonald_poly(lift_weight(lam), mps)
        values = np.array([evaluate_sympoly(poly, z) for z in points])
        values *= c_plus(lam, mp)  # now normalized to 1 at the base vertex
        psi[i] = np.sqrt(weights[i]) * np.sqrt(weights) * values / math.sqrt(n0)
    energies = np.array([spectrum(r, mp) for r in range(1, mp.n + 1)])
    return WaveBasis(psi=psi, energies=energies, route="coefficient", params=mp)


class DegenerateMatchError(RuntimeError):
    """Eigenvector-to-label matching stayed ambiguous after retries."""


def wave_basis_spectral_route(mp: ModelParams, seed: int = 0) -> WaveBasis:
    """Wave functions from joint diagonalization of the commuting matrices.

    A random real combination of the symmetrized matrices is diagonalized;
    degenerate clusters (conjugate label pairs share every real eigenvalue)
    are refined with the forward-shift matrices, whose complex eigenvalue
    tuples separate all labels; rows are matched to labels by those tuples
    and phased so the entry at the base vertex is positive real.
    """
    rng = np.random.default_rng(seed)
    labels = alcove(mp)
    dim = len(labels)
    syms = [hamiltonian(r, "sym", mp).entries for r in range(1, mp.n + 1)]
    plus = [hamiltonian(r, "+", mp).entries for r in range(1, mp.n + 1)]
    eplus = np.array([energies_plus(r, mp) for r in range(1, mp.n + 1)])  # [r, label]
    scale = max(np.abs(eplus).max(), 1.0)

    last_err = None
    for _ in range(5):
        gamma = rng.uniform(0.5, 1.5, size=mp.n)
        vals, vecs = np.linalg.eigh(sum(c * h for c, h in zip(gamma, syms)))
        columns = []
        i = 0
        while i < dim:
            span = [i]
            while span[-1] + 1 < dim and abs(vals[span[-1] + 1] - vals[i]) < 1e-8 * scale:
                span.append(span[-1] + 1)
            block = vecs[:, span].astype(complex)
            if len(span) > 1:
                block = _refine_cluster(block, plus, rng)
            columns.extend(block[:, j] for j in range(block.shape[1]))
            i = span[-1] + 1

        try:
            rows, order = _match_labels(columns, plus, eplus, scale)
        except DegenerateMatchError as exc:
            last_err = exc
            continue
        psi = np.zeros((dim, dim), dtype=complex)
        for label_idx, vec in zip(order, rows):
            v0 = vec[0]
            if abs(v0) < 1e-12:
                raise RuntimeError("vanishing base-vertex entry; phase convention broken")
            psi[label_idx] = vec * (v0.conjugate() / abs(v0))
        energies = np.array([spectrum(r, mp) for r in range(1, mp.n + 1)])
        return WaveBasis(psi=psi, energies=energies, route="spectral", params=mp)
    raise DegenerateMatchError(f"label matching failed after retries: {last_err}")


def _refine_cluster(block: np.ndarray, plus: list[np.ndarray], rng) -> np.ndarray:
    # the cluster spans an invariant subspace of every commuting matrix; a
    # random combination of the (normal) forward matrices separates it
    for _ in range(5):
        deltas = rng.uniform(0.5, 1.5, size=len(plus))
        sub = block.conj().T @ sum(d * p for d, p in zip(deltas, plus)) @ block
        w, u = np.linalg.eig(sub)
        if min(
            abs(a - b) for i, a in enumerate(w) for b in w[i + 1:]
        ) < 1e-10 * max(np.abs(w).max(), 1.0):
            continue
        refined = block @ u
        # Gram-Schmidt: eigenvectors of a normal matrix are orthogonal,
        # clean up the numerical residue
        for j in range(refined.shape[1]):
            for k in range(j):
                refined[:, j] -= (refined[:, k].conj() @ refined[:, j]) * refined[:, k]
            refined[:, j] /= np.linalg.norm(refined[:, j])
        return refined
    raise DegenerateMatchError("cluster refinement failed to separate")


def _match_labels(columns, plus, eplus, scale):
    dim = eplus.shape[1]
    rows = []
    order = []
    taken = set()
    for vec in columns:
        vec = vec / np.linalg.norm(vec)
        rayleigh = np.array([vec.conj() @ p @ vec for p in plus])
        costs = np.abs(eplus - rayleigh[:, None]).sum(axis=0)
        best = int(np.argmin(costs))
        if best in taken or costs[best] > 1e-6 * scale * len(plus):
            raise DegenerateMatchError(
                f"ambiguous match (cost {costs[best]:.2e}, label {best})"
            )
        taken.add(best)
        order.append(best)
        rows.append(vec)
    assert len(taken) == dim
    return rows, order


def star_permutation(mp: ModelParams) -> np.ndarray:
    """Index permutation of the alcove induced by coordinate reversal."""
    labels = alcove(mp)
    index = {w: i for i, w in enumerate(labels)}
    return np.array([index[tuple(reversed(w))] for w in labels])


@dataclass(frozen=True)
class RealBasis:
    """Real/imaginary parts of the wave functions and a fundamental domain.

    c_rows/s_rows hold the half-sum combinations for every label; `domain`
    lists the representative label indices (the lexicographically smaller of
    each conjugate pair). `orthonormal()` assembles the real orthonormal
    basis: representatives' c-rows, scaled by sqrt(2) on non-self-paired
    orbits, plus the s-rows of the strictly paired representatives.
    """

    c_rows: np.ndarray
    s_rows: np.ndarray
    domain: tuple[int, ...]
    star: np.ndarray

    def orthonormal(self) -> np.ndarray:
        rows = []
        for i in self.domain:
            if self.star[i] == i:
                rows.append(self.c_rows[i])
            else:
                rows.append(self.c_rows[i] * math.sqrt(2))
        for i in self.domain:
            if self.star[i] != i:
                rows.append(self.s_rows[i] * math.sqrt(2))
        return np.array(rows)


def real_basis(wb: WaveBasis) -> RealBasis:
    star = star_permutation(wb.params)
    labels = alcove(wb.params)
    c_rows = (wb.psi + wb.psi.conj()).real / 2
    s_rows = ((wb.psi - wb.psi.conj()) / 2j).real
    domain = tuple(
        i for i, w in enumerate(labels) if w <= tuple(reversed(w))
    )
    return RealBasis(c_rows=c_rows, s_rows=s_rows, domain=domain, star=star)


def nonneg_hamiltonian(r: int, mp: ModelParams) -> HamiltonianMatrix:
    """Ground-energy shift making the symmetrized matrix positive
    semidefinite for r = 1, with the ground state in its kernel."""
    sym = hamiltonian(r, "sym", mp).entries
    shifted = ground_energy(r, mp) * np.eye(sym.shape[0]) - sym
    return HamiltonianMatrix(shifted, r, "nonneg")


def orthogonality_tables(wb: WaveBasis, mp: ModelParams) -> dict:
    """Residuals of the discrete orthogonality relations in both the monic
    and the vertex-normalized polynomial scalings."""
    labels = alcove(mp)
    weights = np.array([delta(mu, mp) for mu in labels])
    n0 = weights.sum()
    cplus = np.array([c_plus(lam, mp) for lam in labels])
    cminus = np.array([c_minus(lam, mp) for lam in labels])
    # recover vertex-normalized values from the wave functions
    pmat = wb.psi * math.sqrt(n0) / (
        np.sqrt(weights)[:, None] * np.sqrt(weights)[None, :]
    )
    monic = pmat / cplus[:, None]
    gram_p = (pmat * weights[None, :]) @ pmat.conj().T
    gram_monic = (monic * weights[None, :]) @ monic.conj().T
    diag_p = n0 / weights
    diag_monic = n0 * cminus / cplus
    off_p = np.abs(gram_p - np.diag(np.diag(gram_p))).max()
    off_monic = np.abs(gram_monic - np.diag(np.diag(gram_monic))).max()
    return {
        "off_diagonal_normalized": float(off_p),
        "off_diagonal_monic": float(off_monic),
        "diagonal_normalized": float(np.abs(np.diag(gram_p) - diag_p).max()),
        "diagonal_monic": float(np.abs(np.diag(gram_monic) - diag_monic).max()),
        "scale": float(n0),
    }
