r"""Configuration probabilities as determinants.

Probabilities are squared moduli of pfaffinhos, which turn into plain
determinants. For real ``R`` on the empty base they can be written through
the correlation matrix ``G`` alone, with ``D`` a diagonal of ±1:

* σ^z:  ``P(I) = det[(I - D G) / 2]``, ``D = -1`` on occupied sites
* σ^x:  ``P(S) = ½ det[(I - D G P) / 2]``, ``D = -1`` on domain walls
* σ^y:  ``P(S) = ½ det[(P - G D) / 2]``, ``D = -1`` on domain walls

These per-configuration evaluations do no matrix inversion. The
``nlp_*`` variants return ``-ln P`` through ``slogdet`` and stay finite for
chains where ``P`` underflows.
"""

from __future__ import annotations

import math

import numpy as np

from .basis import DualMatrices, dual_for, parse_signs, shift_matrix, wall_mask, domain_wall
from .correlators import correlations
from .exceptions import NotRealMatrix, StructureError
from .state import GaussianState, amplitude_z, parse_bits

__all__ = [
    "prob_z",
    "prob_z_real",
    "prob_x",
    "prob_y",
    "prob_phi",
    "nlp_z",
    "nlp_x",
    "nlp_y",
    "nlp_phi",
    "rtilde_phi_cot",
]

LN2 = math.log(2.0)


def _require_real_vacuum(state: GaussianState) -> None:
    if not state.is_real:
        raise NotRealMatrix("determinant formula requires a real R")
    if state.base.any():
        raise StructureError("determinant formula requires the empty base configuration")


def _minus_logdet(M: np.ndarray) -> float:
    sign, ld = np.linalg.slogdet(M)
    if sign == 0:
        return math.inf
    return -float(np.real(ld))


def _signs_from_bits(bits: np.ndarray) -> np.ndarray:
    return np.where(bits.astype(bool), -1.0, 1.0)


def nlp_z(G, I) -> float:
    """``-ln det[(I - D G)/2]`` for the occupation configuration ``I``."""
    G = np.asarray(G)
    D = _signs_from_bits(parse_bits(I, G.shape[0]))
    return _minus_logdet((np.eye(G.shape[0]) - D[:, None] * G) / 2)


def nlp_x(G, S) -> float:
    """``-ln`` of the σ^x probability of sign sequence ``S`` from ``G``."""
    G = np.asarray(G)
    L = G.shape[0]
    D = _signs_from_bits(domain_wall(parse_signs(S, L)))
    return LN2 + _minus_logdet((np.eye(L) - D[:, None] * (G @ shift_matrix(L))) / 2)


def nlp_y(G, S) -> float:
    """``-ln`` of the σ^y probability of sign sequence ``S`` from ``G``."""
    G = np.asarray(G)
    L = G.shape[0]
    D = _signs_from_bits(domain_wall(parse_signs(S, L)))
    return LN2 + _minus_logdet((shift_matrix(L) - G * D[None, :]) / 2)


def nlp_phi(dual: DualMatrices, keep) -> float:
    """``-ln(|pf R̃_keep|² / (2 N²))`` from precomputed dual matrices."""
    keep = np.asarray(keep, dtype=bool)
    if keep.sum() % 2:
        return math.inf
    ld = -_minus_logdet(dual.Rtilde[np.ix_(keep, keep)]) if keep.any() else 0.0
    return -(ld - LN2 - 2 * dual.log_norm)


def prob_z(state: GaussianState, I) -> float:
    """``|<I|R, C>|²`` from the pfaffinho amplitude."""
    return float(abs(amplitude_z(state, I)) ** 2)


def prob_z_real(state: GaussianState, I) -> float:
    """σ^z probability of a real ``R`` on the empty base, from ``G``.

    Raises
    ------
    NotRealMatrix
        If ``R`` has a non-negligible imaginary part.
    """
    _require_real_vacuum(state)
    return math.exp(-nlp_z(correlations(state.R).G.real, I))


def prob_x(state: GaussianState, S) -> float:
    """σ^x probability of sign sequence ``S`` for a real ``R`` on the empty base."""
    _require_real_vacuum(state)
    return math.exp(-nlp_x(correlations(state.R).G.real, S))


def prob_y(state: GaussianState, S) -> float:
    """σ^y probability of sign sequence ``S`` for a real ``R`` on the empty base."""
    _require_real_vacuum(state)
    return math.exp(-nlp_y(correlations(state.R).G.real, S))


def prob_phi(state: GaussianState, S, phi: float) -> float:
    """Probability of ``S`` in the basis ``(φ, π/2, α)`` for any state.

    Computed as ``|det[((I - D) R̃ + I + D)/2]| / (2 N_R̃²)`` with ``D = -1`` on
    the kept wall sites. Independent of ``α``.
    """
    S = parse_signs(S, state.L)
    dual = dual_for(state, phi)
    keep = wall_mask(state.base, S)
    if keep.sum() % 2:
        return 0.0
    D = np.where(keep, -1.0, 1.0)
    I = np.eye(state.L)
    M = ((1 - D)[:, None] * dual.Rtilde + I * (1 + D)[:, None]) / 2
    return float(abs(np.linalg.det(M)) / 2 * math.exp(-2 * dual.log_norm))


def rtilde_phi_cot(R, phi: float) -> np.ndarray:
    r"""Dual matrix of :math:`e^{2i\phi}R` written through :math:`\cot\phi`.

    With ``H = (R - I)(R + I)^{-1}``, ``B = H - i cot φ I`` and ``c = cot φ``:

    .. math::

        \tilde R^\phi = B^{-1}(H - icHP + P - icI)(-H - icHP + P + icI)^{-1} B.

    The similarity by ``B`` is needed unless ``H`` and ``P`` commute. Used as
    a cross-check of the direct construction; undefined at ``sin φ = 0``.
    """
    if abs(math.sin(phi)) < 1e-12:
        raise ValueError("cot φ form is undefined for sin φ = 0")
    R = np.asarray(R, dtype=complex)
    L = R.shape[0]
    I = np.eye(L)
    P = shift_matrix(L)
    c = 1.0 / math.tan(phi)
    H = np.linalg.solve((R + I).T, (R - I).T).T
    HP = H @ P
    num = H - 1j * c * HP + P - 1j * c * I
    den = -H - 1j * c * HP + P + 1j * c * I
    B = H - 1j * c * I
    Rt = np.linalg.solve(B, np.linalg.solve(den.T, num.T).T @ B)
    return (Rt - Rt.T) / 2
