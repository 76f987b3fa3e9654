"""Discrete Fourier-type eigenfunction transform and its real restrictions.

The kernel is the wave-function matrix itself: symmetric, unitary, and an
involution up to complex conjugation. Cosine/sine restrictions act on lattice
functions that are symmetric/antisymmetric under the coordinate-reversal
involution, with coefficients indexed by a fundamental domain of that
involution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lattice_model import ModelParams, WaveBasis, alcove, real_basis, star_permutation


@dataclass(frozen=True)
class TransformMatrix:
    """Dense transform kernel with rows/columns in alcove order."""

    F: np.ndarray
    params: ModelParams
    star: np.ndarray
    domain: tuple[int, ...]
    c_rows: np.ndarray
    s_rows: np.ndarray


def build_transform(wb: WaveBasis) -> TransformMatrix:
    rb = real_basis(wb)
    return TransformMatrix(
        F=wb.psi.copy(),
        params=wb.params,
        star=rb.star,
        domain=rb.domain,
        c_rows=rb.c_rows,
        s_rows=rb.s_rows,
    )


def forward(f: np.ndarray, tm: TransformMatrix) -> np.ndarray:
    """Coefficients (f, Psi_lambda) of the eigenfunction expansion."""
    return tm.F.conj() @ np.asarray(f, dtype=complex)


def inverse(fhat: np.ndarray, tm: TransformMatrix) -> np.ndarray:
    """Reconstruct a lattice function from its expansion coefficients."""
    return tm.F @ np.asarray(fhat, dtype=complex)


def _symmetrize(f: np.ndarray, star: np.ndarray, sign: int) -> np.ndarray:
    return (f + sign * f[star]) / 2


def cosine_sine(f: np.ndarray, which: str, tm: TransformMatrix) -> np.ndarray:
    """Coefficients of the cosine ("C") or sine ("S") restriction.

    The input must lie in the matching symmetry class of the reversal
    involution. Coefficients are taken against the orthonormalized real rows
    on the fundamental domain: sqrt(2)-scaled on strictly paired orbits.
    """
    f = np.asarray(f, dtype=complex)
    sign = 1 if which == "C" else -1 if which == "S" else None
    if sign is None:
        raise ValueError(f"unknown restriction {which!r}")
    residual = np.abs(f - sign * f[tm.star]).max()
    scale = max(np.abs(f).max(), 1.0)
    if residual > 1e-9 * scale:
        raise ValueError(
            f"input is not {'symmetric' if sign == 1 else 'antisymmetric'} "
            f"under the reversal involution (residual {residual:.2e})"
        )
    rows = _real_rows(which, tm)
    return rows @ f


def cosine_sine_reconstruct(coeffs: np.ndarray, which: str, tm: TransformMatrix) -> np.ndarray:
    """Inverse of cosine_sine on the matching symmetry class."""
    rows = _real_rows(which, tm)
    return rows.T @ np.asarray(coeffs, dtype=complex)


def _real_rows(which: str, tm: TransformMatrix) -> np.ndarray:
    rows = []
    for i in tm.domain:
        paired = tm.star[i] != i
        if which == "C":
            rows.append(tm.c_rows[i] * (math.sqrt(2) if paired else 1.0))
        else:
            if paired:
                rows.append(tm.s_rows[i] * math.sqrt(2))
    if not rows:
        return np.zeros((0, tm.F.shape[0]))
    return np.array(rows)


def domain_labels(tm: TransformMatrix) -> list:
    labels = alcove(tm.params)
    return [labels[i] for i in tm.domain]
