"""Closed-form two-body solution used as an independent oracle.

Everything here is written directly from the explicit one-variable formulas
(weight function, normalization, terminating basic-hypergeometric wave
function, tridiagonal matrix) without touching the general-rank machinery,
so cross-checks against it are genuinely two-route.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np


class OracleMismatchError(AssertionError):
    """The general engine disagreed with the closed-form solution."""


@dataclass(frozen=True)
class RankOneModel:
    m: int
    g: float
    alpha: float


def new_rank_one(m: int, g: float) -> RankOneModel:
    if m < 1 or g <= 0:
        raise ValueError(f"need m >= 1 and g > 0, got ({m}, {g})")
    return RankOneModel(m=m, g=g, alpha=2 * math.pi / (2 * g + m))


def weight(m: int, rm: RankOneModel) -> float:
    """Explicit one-variable orthogonality weight."""
    a, g = rm.alpha, rm.g
    out = math.sin(0.5 * a * (m + g)) / math.sin(0.5 * a * g)
    for j in range(1, m + 1):
        out *= math.sin(0.5 * a * (2 * g + j - 1)) / math.sin(0.5 * a * j)
    return out


def norm_constant(rm: RankOneModel) -> float:
    """2^M prod_{k=1}^{M-1} sin(alpha/2 (k + g))."""
    out = 2.0 ** rm.m
    for k in range(1, rm.m):
        out *= math.sin(0.5 * rm.alpha * (k + rm.g))
    return out


def hypergeometric_value(l: int, m: int, rm: RankOneModel) -> complex:
    """Terminating 3phi2 value of the normalized polynomial at a lattice
    point: q^{lm/2} sum_k (q^{-l}, q^g, q^{-m}; q)_k / ((q, q^{2g}; q)_k) q^k
    with q = e^{i alpha}. The upper parameter q^{-l} terminates the series
    after l+1 terms."""
    a, g = rm.alpha, rm.g

    def qpow(x):
        return cmath.exp(1j * a * x)

    total = 0.0 + 0.0j
    term = 1.0 + 0.0j
    for k in range(l + 1):
        total += term
        # ratio from summand k to k+1
        term *= (1 - qpow(-l + k)) * (1 - qpow(g + k)) * (1 - qpow(-m + k))
        term /= (1 - qpow(1 + k)) * (1 - qpow(2 * g + k))
        term *= qpow(1)
    return qpow(0.5 * l * m) * total


def closed_form_psi(l: int, m: int, rm: RankOneModel) -> float:
    """Real symmetric orthonormal wave-function value at (label l, point m)."""
    if not (0 <= l <= rm.m and 0 <= m <= rm.m):
        raise ValueError("indices must lie in 0..M")
    value = hypergeometric_value(l, m, rm)
    if abs(value.imag) > 1e-9 * max(abs(value), 1.0):
        raise RuntimeError(f"wave value at ({l},{m}) is not real: {value}")
    return (
        math.sqrt(weight(l, rm))
        * math.sqrt(weight(m, rm))
        * value.real
        / math.sqrt(norm_constant(rm))
    )


def psi_matrix(rm: RankOneModel) -> np.ndarray:
    dim = rm.m + 1
    out = np.zeros((dim, dim))
    for l in range(dim):
        for m in range(dim):
            out[l, m] = closed_form_psi(l, m, rm)
    return out


def tridiagonal_hamiltonian(rm: RankOneModel) -> np.ndarray:
    """Symmetric (M+1)x(M+1) matrix with eigenvalues 2 cos(alpha/2 (g+l))."""
    a, g = rm.alpha, rm.g
    dim = rm.m + 1
    out = np.zeros((dim, dim))
    for m in range(rm.m):
        x = g + m
        coupling = math.sqrt(
            math.sin(0.5 * a * (x + g))
            / math.sin(0.5 * a * x)
            * math.sin(0.5 * a * (x + 1 - g))
            / math.sin(0.5 * a * (x + 1))
        )
        out[m, m + 1] = coupling
        out[m + 1, m] = coupling
    return out


def eigenvalues(rm: RankOneModel) -> np.ndarray:
    return np.array([2 * math.cos(0.5 * rm.alpha * (rm.g + l)) for l in range(rm.m + 1)])


def crosscheck(rm: RankOneModel, tolerance: float = 1e-9) -> dict:
    """Compare the closed forms against the general engine at rank one.

    Checks the wave matrix against both general construction routes, the
    tridiagonal matrix against the general shift matrices, the eigenvalue
    list, and the orthogonality of the closed-form matrix itself. Raises
    OracleMismatchError if any deviation exceeds the tolerance.
    """
    from . import lattice_model as lm

    mp = lm.new_model(1, rm.m, rm.g)
    psi = psi_matrix(rm)
    report = {}

    wb_c = lm.wave_basis_coefficient_route(mp)
    wb_s = lm.wave_basis_spectral_route(mp)
    report["vs_coefficient_route"] = float(np.abs(wb_c.psi - psi).max())
    report["vs_spectral_route"] = float(np.abs(wb_s.psi - psi).max())

    tri = tridiagonal_hamiltonian(rm)
    general = lm.hamiltonian(1, "sym", mp).entries
    report["vs_general_matrix"] = float(np.abs(tri - general).max())

    evs = np.sort(np.linalg.eigvalsh(tri))
    report["eigenvalues"] = float(np.abs(evs - np.sort(eigenvalues(rm))).max())

    gram = psi @ psi.T
    report["orthonormality"] = float(np.abs(gram - np.eye(rm.m + 1)).max())

    worst = max(report.values())
    if worst > tolerance:
        bad = {k: v for k, v in report.items() if v > tolerance}
        raise OracleMismatchError(f"closed-form cross-check failed: {bad}")
    return report
