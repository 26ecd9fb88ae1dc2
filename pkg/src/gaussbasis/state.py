r"""Gaussian fermionic pure states :math:`|R, C\rangle` in the occupation basis.

A state is fixed by an antisymmetric matrix ``R`` and a base configuration
``C = (n_1, ..., n_L)``:

.. math::

    |R, C\rangle = \mathcal{N}_R^{-1} \exp\Big(\tfrac12 \sum_{ij} a_i r_{ij} a_j\Big) |C\rangle,
    \qquad a_j = c_j \text{ if } n_j = 1 \text{ else } c_j^\dagger,

with :math:`\mathcal{N}_R = \det(I + R^\dagger R)^{1/4}`. The amplitude of a
configuration ``I`` is a signed Pfaffian of the submatrix of ``R`` on the
sites where ``I`` and ``C`` differ.

Fermion operators follow the Jordan--Wigner convention
:math:`c_l = \prod_{j<l}(-\sigma^z_j)\sigma^-_l`, occupation 1 is spin up and
site 1 is written first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
import scipy.linalg

from .exceptions import SingularBlock, StructureError, ZeroAmplitudeBase
from .pfaffian import as_antisymmetric, pfaffinho

__all__ = [
    "parse_bits",
    "format_bits",
    "sign_cfg",
    "log_norm",
    "GaussianState",
    "GenericGaussianExponent",
    "amplitude_z",
    "rebase",
    "from_generic",
]


def log_norm(R) -> float:
    """``¼ ln det(I + R^† R)`` from the singular values of ``R``.

    Summing ``log1p(σ²)`` avoids forming ``R^† R``, which would square the
    condition number when ``R`` has large entries.
    """
    s = np.linalg.svd(np.asarray(R), compute_uv=False)
    return float(np.sum(np.log1p(s * s))) / 4


def parse_bits(bits, L: int | None = None) -> np.ndarray:
    """Convert ``"0101"`` or a 0/1 sequence into an int array, optionally checking its length."""
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise ValueError(f"bit string must contain only 0 and 1: {bits!r}")
        arr = np.fromiter((int(ch) for ch in bits), dtype=np.int8, count=len(bits))
    else:
        arr = np.asarray(bits).astype(np.int8).ravel()
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise ValueError(f"bit string must contain only 0 and 1: {bits!r}")
    if L is not None and arr.size != L:
        raise ValueError(f"expected {L} bits, got {arr.size}")
    return arr


def format_bits(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def sign_cfg(C, I) -> int:
    r"""Fermionic sign :math:`\prod_{i\ge2}(-1)^{|n_i-m_i|\sum_{j<i}n_j}` of ``I`` relative to base ``C``."""
    C = parse_bits(C)
    I = parse_bits(I)
    if C.size != I.size:
        raise ValueError(f"length mismatch: {C.size} vs {I.size}")
    filled_before = np.concatenate(([0], np.cumsum(C)[:-1]))
    exponent = int(np.sum((C != I) * filled_before))
    return -1 if exponent % 2 else 1


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Immutable pair ``(R, base)`` describing :math:`|R, C\\rangle`.

    ``R`` is validated as antisymmetric (tolerance ``1e-12``) and stored
    exactly antisymmetrized. The normalization is computed lazily in log form
    so that large chains do not overflow.
    """

    R: np.ndarray
    base: np.ndarray = field(default=None)

    def __post_init__(self):
        R = as_antisymmetric(self.R)
        R.setflags(write=False)
        base = np.zeros(R.shape[0], dtype=np.int8) if self.base is None else parse_bits(self.base, R.shape[0])
        base.setflags(write=False)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "base", base)

    @property
    def L(self) -> int:
        return self.R.shape[0]

    @cached_property
    def log_norm(self) -> float:
        """``ln N_R = ¼ ln det(I + R^† R)``."""
        return log_norm(self.R)

    @property
    def norm(self) -> float:
        return float(np.exp(self.log_norm))

    @property
    def is_real(self) -> bool:
        return bool(np.abs(self.R.imag).max(initial=0.0) <= 1e-12)

    def amplitude(self, I) -> complex:
        return amplitude_z(self, I)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "base": format_bits(self.base),
            "R": [[[float(z.real), float(z.imag)] for z in row] for row in self.R],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> "GaussianState":
        try:
            L = int(data["L"])
            R = np.array([[complex(re, im) for re, im in row] for row in data["R"]], dtype=complex)
            base = data.get("base", "0" * L)
        except (KeyError, TypeError, ValueError) as exc:
            raise StructureError(f"malformed state description: {exc}") from exc
        if R.shape != (L, L):
            raise StructureError(f"R has shape {R.shape}, expected ({L}, {L})")
        return cls(R, parse_bits(base, L))

    @classmethod
    def from_json(cls, text: str) -> "GaussianState":
        return cls.from_dict(json.loads(text))


def amplitude_z(state: GaussianState, I) -> complex:
    """Amplitude :math:`\\langle I | R, C\\rangle` in the occupation (σ^z) basis."""
    I = parse_bits(I, state.L)
    flipped = state.base != I
    pf = pfaffinho(state.R, flipped)
    if pf == 0:
        return 0.0j
    return sign_cfg(state.base, I) * pf * np.exp(-state.log_norm)


def rebase(state: GaussianState, Cprime, rtol: float = 1e-12) -> GaussianState:
    """Re-express the state over a new base configuration ``Cprime``.

    Every entry of the new matrix is a ratio of two pfaffinhos of ``R``: the
    one connecting ``C`` to ``Cprime`` with sites ``i, j`` flipped, over the
    one connecting ``C`` to ``Cprime``.

    Raises
    ------
    ZeroAmplitudeBase
        If ``Cprime`` has vanishing amplitude in the state, judged relative to
        the median modulus of the two-flip pfaffinhos.
    """
    C = state.base
    Cp = parse_bits(Cprime, state.L)
    L = state.L
    R = state.R

    denom = pfaffinho(R, C != Cp)
    s_ccp = sign_cfg(C, Cp)

    Rp = np.zeros((L, L), dtype=complex)
    numerators = {}
    for i, j in combinations(range(L), 2):
        Ip = Cp.copy()
        Ip[[i, j]] ^= 1
        numerators[i, j] = (sign_cfg(C, Ip) * sign_cfg(Cp, Ip), pfaffinho(R, C != Ip))

    scale = np.median([abs(pf) for _, pf in numerators.values()]) if numerators else 0.0
    if scale == 0.0:
        scale = max(1.0, float(np.abs(R).max(initial=0.0)))
    if abs(denom) <= rtol * scale:
        raise ZeroAmplitudeBase(
            f"configuration {format_bits(Cp)} has vanishing amplitude (|pf| = {abs(denom):.3e})"
        )

    for (i, j), (sgn, pf) in numerators.items():
        Rp[i, j] = s_ccp * sgn * pf / denom
        Rp[j, i] = -Rp[i, j]
    return GaussianState(Rp, Cp)


def _swap_permutation(base: np.ndarray) -> np.ndarray:
    L = base.size
    perm = np.arange(2 * L)
    occupied = np.flatnonzero(base)
    perm[occupied], perm[occupied + L] = occupied + L, occupied
    return np.eye(2 * L)[perm]


@dataclass(frozen=True, eq=False)
class GenericGaussianExponent:
    r"""Generic quadratic exponent acting on a configuration.

    Represents :math:`\exp[\tfrac12 (c^\dagger, c) M (c, c^\dagger)^T] |C\rangle`
    with ``J M`` antisymmetric, ``J = [[0, I], [I, 0]]``.
    """

    M: np.ndarray
    base: np.ndarray = field(default=None)

    def __post_init__(self):
        M = np.asarray(self.M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
            raise StructureError(f"M must be 2L x 2L, got shape {M.shape}")
        L = M.shape[0] // 2
        J = np.block([[np.zeros((L, L)), np.eye(L)], [np.eye(L), np.zeros((L, L))]])
        JM = J @ M
        scale = max(1.0, float(np.abs(M).max(initial=0.0)))
        if np.abs(JM + JM.T).max(initial=0.0) > 1e-12 * scale:
            raise StructureError("J·M must be antisymmetric")
        base = np.zeros(L, dtype=np.int8) if self.base is None else parse_bits(self.base, L)
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "base", base)

    @property
    def L(self) -> int:
        return self.M.shape[0] // 2


def from_generic(g: GenericGaussianExponent, max_cond: float = 1e12) -> GaussianState:
    """Reduce a generic Gaussian exponent to the standard ``|R, C⟩`` form.

    Creation and annihilation operators are swapped on the occupied sites of
    the base so that the base becomes a vacuum; then ``T = exp(M̄)`` gives
    ``R = T_12 T_22^{-1}`` by the Balian--Brezin factorization. The returned
    state equals the input up to normalization and global phase.

    Raises
    ------
    SingularBlock
        If ``T_22`` has condition number above ``max_cond``; this means the
        base configuration has vanishing amplitude in the target state.
    """
    L = g.L
    Pi = _swap_permutation(g.base)
    T = scipy.linalg.expm(Pi @ g.M @ Pi)
    T12, T22 = T[:L, L:], T[L:, L:]
    if L and np.linalg.cond(T22) > max_cond:
        raise SingularBlock("T_22 is numerically singular; base configuration has zero weight")
    R = np.linalg.solve(T22.T, T12.T).T if L else T12
    return GaussianState((R - R.T) / 2, g.base)
