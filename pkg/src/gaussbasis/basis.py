r"""Amplitudes of Gaussian states in rotated bases of the xy plane.

A sign sequence ``S`` in the :math:`(\phi, \pi/2, \alpha)` basis is mapped to
its cyclic domain-wall string. The state in that basis is again Gaussian in
the domain-wall variables, with the dual matrix

.. math::

    \tilde R = (I + H P)(H P - I)^{-1}, \qquad H = (R - I)(R + I)^{-1},

built from the φ-twisted matrix :math:`R^\phi`. The amplitude of ``S`` is a
signed pfaffinho of :math:`\tilde R^\phi` over the sites where the wall
string differs from the wall-frame base configuration.

Local basis convention: the kets of a site are the eigenvectors of
:math:`\cos\phi\,\sigma^x + \sin\phi\,\sigma^y`,
:math:`|+\rangle \propto |{\uparrow}\rangle + e^{i\phi}|{\downarrow}\rangle`
and :math:`|-\rangle \propto e^{i\alpha}(|{\uparrow}\rangle - e^{i\phi}|{\downarrow}\rangle)`,
so that the component of ``S`` picks up :math:`e^{-i\alpha}` per ``-`` sign.
"""

from __future__ import annotations

import math
import weakref
from dataclasses import dataclass

import numpy as np

from .exceptions import SingularCayley
from .pfaffian import pfaffinho
from .state import GaussianState, log_norm, parse_bits

__all__ = [
    "parse_signs",
    "format_signs",
    "BasisSpec",
    "DualMatrices",
    "shift_matrix",
    "domain_wall",
    "base_domain_config",
    "wall_mask",
    "sequence_sign",
    "phi_twist",
    "dual_matrix",
    "dual_for",
    "amplitude_phi",
    "basis_vector",
]

MAX_COND = 1e12

_SIGN_CHARS = {"+": 1, "-": -1, "\u2212": -1}


def parse_signs(signs, L: int | None = None) -> np.ndarray:
    """Convert ``"++-"`` or a ±1 sequence to an int array of ±1."""
    if isinstance(signs, str):
        try:
            arr = np.array([_SIGN_CHARS[ch] for ch in signs], dtype=np.int8)
        except KeyError as exc:
            raise ValueError(f"sign sequence must contain only '+' and '-': {signs!r}") from exc
    else:
        arr = np.asarray(signs).astype(np.int8).ravel()
        if arr.size and not np.isin(arr, (-1, 1)).all():
            raise ValueError(f"sign sequence must contain only +1 and -1: {signs!r}")
    if L is not None and arr.size != L:
        raise ValueError(f"expected {L} signs, got {arr.size}")
    return arr


def format_signs(signs) -> str:
    return "".join("+" if s > 0 else "-" for s in signs)


@dataclass(frozen=True)
class BasisSpec:
    """Basis :math:`(\\phi, \\pi/2, \\alpha)`; ``phi=0`` is σ^x and ``phi=π/2`` is σ^y."""

    phi: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.phi) and math.isfinite(self.alpha)):
            raise ValueError(f"basis angles must be finite: {self}")

    @classmethod
    def x(cls) -> "BasisSpec":
        return cls(0.0, 0.0)

    @classmethod
    def y(cls) -> "BasisSpec":
        return cls(math.pi / 2, 0.0)


def shift_matrix(L: int) -> np.ndarray:
    """``P``: +1 at (1, L), -1 on the first subdiagonal."""
    P = np.zeros((L, L))
    P[0, L - 1] = 1.0
    P[np.arange(1, L), np.arange(L - 1)] = -1.0
    return P


def domain_wall(S) -> np.ndarray:
    """Cyclic domain walls: bit ``j`` is 1 iff ``s_j != s_{j+1}`` with ``s_{L+1} = s_1``."""
    S = parse_signs(S)
    return (S != np.roll(S, -1)).astype(np.int8)


def base_domain_config(C) -> np.ndarray:
    """Wall-frame base: ``C`` itself for even filling, last bit flipped for odd filling."""
    C = parse_bits(C).copy()
    if C.sum() % 2:
        C[-1] ^= 1
    return C


def wall_mask(C, S) -> np.ndarray:
    """Sites kept in the pfaffinho for sequence ``S`` of a state with base ``C``."""
    return domain_wall(S) != base_domain_config(C)


def sequence_sign(C, S) -> int:
    r"""Sign :math:`\prod_j (-1)^{(n_j - 1)(\bar s_j - 1)/2}`: -1 per ``-`` on an empty site."""
    C = parse_bits(C)
    S = parse_signs(S)
    if C.size != S.size:
        raise ValueError(f"length mismatch: {C.size} vs {S.size}")
    return -1 if np.count_nonzero((C == 0) & (S < 0)) % 2 else 1


def phi_twist(R, C, phi: float) -> np.ndarray:
    """``r_ij · exp(2iφ(1 - n_i - n_j))``; reduces to ``e^{2iφ} R`` for the empty base."""
    R = np.asarray(R, dtype=complex)
    n = parse_bits(C, R.shape[0]).astype(float)
    return R * np.exp(2j * phi * (1.0 - n[:, None] - n[None, :]))


@dataclass(frozen=True, eq=False)
class DualMatrices:
    """Dual (domain-wall) description of a state: ``H``, ``P``, ``R̃`` and ``ln N_R̃``."""

    H: np.ndarray
    P: np.ndarray
    Rtilde: np.ndarray
    log_norm: float

    @property
    def norm(self) -> float:
        return float(np.exp(self.log_norm))


def _checked_inverse(A: np.ndarray, what: str, max_cond: float) -> np.ndarray:
    try:
        inv = np.linalg.inv(A)
    except np.linalg.LinAlgError as exc:
        raise SingularCayley(f"{what} is singular") from exc
    cond = np.linalg.norm(A, 1) * np.linalg.norm(inv, 1)
    if not np.isfinite(cond) or cond > max_cond:
        raise SingularCayley(f"{what} is ill conditioned (cond_1 = {cond:.3e})")
    return inv


def dual_matrix(R, max_cond: float = MAX_COND) -> DualMatrices:
    """Dual matrix ``R̃ = (I + HP)(HP - I)^{-1}`` with ``H = (R - I)(R + I)^{-1}``.

    Raises
    ------
    SingularCayley
        If ``R + I`` or ``HP - I`` has 1-norm condition number above ``max_cond``.
    """
    R = np.asarray(R, dtype=complex)
    L = R.shape[0]
    I = np.eye(L)
    P = shift_matrix(L)
    H = (R - I) @ _checked_inverse(R + I, "R + I", max_cond)
    HP = H @ P
    Rt = (I + HP) @ _checked_inverse(HP - I, "H P - I", max_cond)
    Rt = (Rt - Rt.T) / 2
    return DualMatrices(H=H, P=P, Rtilde=Rt, log_norm=log_norm(Rt))


_dual_cache: "weakref.WeakKeyDictionary[GaussianState, dict]" = weakref.WeakKeyDictionary()


def dual_for(state: GaussianState, phi: float) -> DualMatrices:
    """Cached dual matrices of ``state`` for the basis angle ``phi``."""
    per_state = _dual_cache.setdefault(state, {})
    key = float(phi)
    if key not in per_state:
        per_state[key] = dual_matrix(phi_twist(state.R, state.base, phi))
    return per_state[key]


def amplitude_phi(state: GaussianState, S, basis: BasisSpec = BasisSpec(), alpha_sign: int = -1) -> complex:
    """Amplitude of the sign sequence ``S`` in the basis ``(φ, π/2, α)``.

    ``alpha_sign`` selects the phase attached to each ``-``: the default -1
    gives ``e^{-iα}`` per minus sign, +1 gives ``e^{+iα}``. Probabilities do
    not depend on it.

    The overall phase relative to the occupation-basis expansion is not
    fixed; amplitudes agree with a direct basis rotation up to one global
    phase per state and basis.
    """
    if alpha_sign not in (-1, 1):
        raise ValueError("alpha_sign must be -1 or +1")
    S = parse_signs(S, state.L)
    dual = dual_for(state, basis.phi)
    pf = pfaffinho(dual.Rtilde, wall_mask(state.base, S))
    if pf == 0:
        return 0.0j
    n_minus = int(np.count_nonzero(S < 0))
    phase = np.exp(1j * alpha_sign * basis.alpha * n_minus)
    return complex(sequence_sign(state.base, S) * pf * phase * np.exp(-dual.log_norm) / math.sqrt(2))


def basis_vector(state: GaussianState, basis: BasisSpec = BasisSpec(), alpha_sign: int = -1) -> np.ndarray:
    """All ``2^L`` rotated amplitudes; index bit 1 means ``-``, site 1 most significant."""
    L = state.L
    out = np.empty(2**L, dtype=complex)
    for idx in range(2**L):
        signs = [-1 if (idx >> (L - 1 - j)) & 1 else 1 for j in range(L)]
        out[idx] = amplitude_phi(state, signs, basis, alpha_sign)
    return out
