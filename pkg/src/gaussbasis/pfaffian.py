r"""Pfaffians of complex skew-symmetric matrices.

Three kernels live here:

* :func:`pfaffian` -- dense Pfaffian by Parlett--Reid elimination with
  partial pivoting, :math:`O(L^3)`.
* :func:`pfaffinho` -- Pfaffian of a principal submatrix selected by an index
  set. These are the configuration amplitudes of a Gaussian state.
* The skew-circulant fast path (:func:`skew_circulant_spectrum`,
  :func:`spectral_pfaffinho`, :func:`all_plus_amplitude`) for translation
  invariant periodic chains, where the matrix is diagonalized by half-integer
  shifted Fourier modes.

Index sets are 0-based throughout (``keep=[0, 1]`` selects sites 1 and 2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .exceptions import StructureError

__all__ = [
    "ANTISYMMETRY_TOL",
    "as_antisymmetric",
    "index_set",
    "pfaffian",
    "pfaffinho",
    "SpectralForm",
    "skew_circulant_matrix",
    "skew_circulant_first_row",
    "skew_circulant_eigenvalues",
    "skew_circulant_row_from_eigenvalues",
    "skew_circulant_spectrum",
    "spectral_pfaffinho",
    "all_plus_amplitude",
    "log_all_plus_probability",
]

ANTISYMMETRY_TOL = 1e-12
PIVOT_TOL = 1e-300


def as_antisymmetric(A, tol: float = ANTISYMMETRY_TOL) -> np.ndarray:
    """Validate ``A`` as skew-symmetric and return the exactly antisymmetrized copy.

    The tolerance is applied relative to ``max(1, max|A|)``.

    Raises
    ------
    StructureError
        If ``A`` is not square or ``A + A^T`` exceeds the tolerance.
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {A.shape}")
    if A.size:
        scale = max(1.0, float(np.abs(A).max()))
        err = float(np.abs(A + A.T).max())
        if err > tol * scale:
            raise StructureError(f"matrix is not antisymmetric (max |A + A^T| = {err:.3e})")
    return (A - A.T) / 2


def index_set(keep, L: int) -> np.ndarray:
    """Normalize ``keep`` (indices or boolean mask of length ``L``) to sorted 0-based indices."""
    keep = np.asarray(keep)
    if keep.dtype == bool:
        if keep.shape != (L,):
            raise ValueError(f"boolean mask must have shape ({L},), got {keep.shape}")
        return np.flatnonzero(keep)
    keep = keep.astype(int).ravel()
    if keep.size and (keep.min() < 0 or keep.max() >= L):
        raise ValueError(f"indices out of range for L={L}: {keep.tolist()}")
    out = np.unique(keep)
    if out.size != keep.size:
        raise ValueError(f"duplicate indices in {keep.tolist()}")
    return out


def pfaffian(A) -> complex:
    """Pfaffian of a skew-symmetric matrix.

    Uses the Parlett--Reid reduction to tridiagonal form: at step ``k`` the
    largest entry below the diagonal of column ``k`` is pivoted into position
    ``k+1`` (each swap flips the sign), and the rank-2 update eliminates the
    remainder of row/column ``k``. The Pfaffian is the signed product of the
    super-diagonal pivots ``A[k, k+1]`` for even ``k``.

    The input is not validated for antisymmetry; only the strict lower
    triangle is effectively read. An empty matrix has Pfaffian 1 and odd
    dimensions give 0.
    """
    A = np.array(A, dtype=complex)
    n = A.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    if n % 2:
        return 0.0j

    result = 1.0 + 0.0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(A[k + 1 :, k])))
        if kp != k + 1:
            A[[k + 1, kp], k:] = A[[kp, k + 1], k:]
            A[k:, [k + 1, kp]] = A[k:, [kp, k + 1]]
            result = -result
        if abs(A[k + 1, k]) <= PIVOT_TOL:
            return 0.0j
        result *= A[k, k + 1]
        if k + 2 < n:
            tau = A[k, k + 2 :] / A[k, k + 1]
            col = A[k + 2 :, k + 1]
            A[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return complex(result)


def pfaffinho(A, keep) -> complex:
    """Pfaffian of the principal submatrix of ``A`` on the index set ``keep``.

    ``keep`` may be a sequence of 0-based indices or a boolean mask. An empty
    set gives 1 and an odd-sized set gives 0.
    """
    A = np.asarray(A)
    idx = index_set(keep, A.shape[0])
    if idx.size == 0:
        return 1.0 + 0.0j
    if idx.size % 2:
        return 0.0j
    return pfaffian(A[np.ix_(idx, idx)])


# ---------------------------------------------------------------------------
# skew-circulant fast path
# ---------------------------------------------------------------------------


def skew_circulant_matrix(first_row) -> np.ndarray:
    """Dense skew-circulant matrix with the given first row.

    Entry ``(j, k)`` is ``c[k-j]`` for ``k >= j`` and ``-c[k-j+L]`` otherwise.
    """
    c = np.asarray(first_row, dtype=complex)
    L = c.size
    j, k = np.indices((L, L))
    d = k - j
    return np.where(d >= 0, c[d % L], -c[d % L])


def skew_circulant_first_row(A, tol: float = 1e-10) -> np.ndarray:
    """Return the first row of ``A`` after checking that ``A`` is skew-circulant."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise StructureError(f"expected a square matrix, got shape {A.shape}")
    row = A[0].copy()
    scale = max(1.0, float(np.abs(A).max())) if A.size else 1.0
    err = float(np.abs(skew_circulant_matrix(row) - A).max()) if A.size else 0.0
    if err > tol * scale:
        raise StructureError(f"matrix is not skew-circulant (deviation {err:.3e})")
    return row


def skew_circulant_eigenvalues(first_row) -> np.ndarray:
    r"""Eigenvalues :math:`\Lambda_m = \sum_k c_k e^{-i\pi k (2m+1)/L}`, ``m = 0..L-1``.

    The matching eigenvector is :math:`y^{(m)}_k = e^{-i\pi k(2m+1)/L}/\sqrt{L}`
    for every skew-circulant matrix of size ``L``, so eigenvalues of sums,
    products and inverses combine mode by mode.
    """
    c = np.asarray(first_row, dtype=complex).ravel()
    k = np.arange(c.size)
    return np.fft.fft(c * np.exp(-1j * np.pi * k / c.size))


def skew_circulant_row_from_eigenvalues(lambdas) -> np.ndarray:
    """Inverse of :func:`skew_circulant_eigenvalues`."""
    lam = np.asarray(lambdas, dtype=complex).ravel()
    k = np.arange(lam.size)
    return np.fft.ifft(lam) * np.exp(1j * np.pi * k / lam.size)


def _pair_order(L: int) -> np.ndarray:
    """Mode order 0, L-1, 1, L-2, ... pairing each mode with its conjugate."""
    order = []
    lo, hi = 0, L - 1
    while lo < hi:
        order += [lo, hi]
        lo += 1
        hi -= 1
    if lo == hi:
        order.append(lo)
    return np.array(order, dtype=int)


@dataclass(frozen=True)
class SpectralForm:
    """Spectral data of an antisymmetric skew-circulant matrix ``A = V Σ V^T``.

    ``lambdas`` holds all ``L`` eigenvalues in paired order
    ``(Λ_0, Λ_{L-1}, Λ_1, Λ_{L-2}, ...)``; partners satisfy
    ``Λ_{L-1-m} = -Λ_m``. ``U`` has the matching Fourier columns and
    ``V = e^{-iπ/4} U K^†`` depends on ``L`` only.
    """

    L: int
    lambdas: np.ndarray
    U: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)

    @property
    def block_lambdas(self) -> np.ndarray:
        """One eigenvalue per 2x2 block of Σ (the first member of each pair)."""
        return self.lambdas[0 : 2 * (self.L // 2) : 2]

    @property
    def sigma(self) -> np.ndarray:
        """Block form with ``[[0, iΛ̃], [-iΛ̃, 0]]`` blocks (and a trailing 0 for odd L)."""
        S = np.zeros((self.L, self.L), dtype=complex)
        for b, lam in enumerate(self.block_lambdas):
            S[2 * b, 2 * b + 1] = 1j * lam
            S[2 * b + 1, 2 * b] = -1j * lam
        return S

    def matrix(self) -> np.ndarray:
        """Reconstruct the dense matrix as ``V Σ V^T``."""
        return self.V @ self.sigma @ self.V.T


def skew_circulant_spectrum(first_row, tol: float = 1e-10) -> SpectralForm:
    r"""Diagonalize an antisymmetric skew-circulant matrix from its first row.

    The eigenvalues are :math:`\Lambda_m = \sum_k c_k e^{-2\pi i k (m + 1/2)/L}`
    with eigenvectors :math:`y^{(m)}_k = e^{-2\pi i k (m+1/2)/L}/\sqrt{L}`.

    Raises
    ------
    StructureError
        If the row does not close into an antisymmetric matrix, i.e. unless
        ``c[0] == 0`` and ``c[k] == c[L-k]``.
    """
    c = np.asarray(first_row, dtype=complex).ravel()
    L = c.size
    if L == 0:
        raise StructureError("empty first row")
    scale = max(1.0, float(np.abs(c).max()))
    closure = np.abs(c[1:] - c[1:][::-1]).max() if L > 1 else 0.0
    if abs(c[0]) > tol * scale or closure > tol * scale:
        raise StructureError(
            "first row does not define an antisymmetric skew-circulant matrix "
            f"(|c_0| = {abs(c[0]):.3e}, max |c_k - c_(L-k)| = {closure:.3e})"
        )

    k = np.arange(L)
    lam = skew_circulant_eigenvalues(c)
    order = _pair_order(L)
    modes = np.exp(-2j * np.pi * np.outer(k, order + 0.5) / L) / np.sqrt(L)

    J = np.array([[1, 1j], [1j, 1]]) / np.sqrt(2)
    K = np.eye(L, dtype=complex)
    for b in range(L // 2):
        K[2 * b : 2 * b + 2, 2 * b : 2 * b + 2] = J
    V = np.exp(-1j * np.pi / 4) * modes @ K.conj().T
    return SpectralForm(L=L, lambdas=lam[order], U=modes, V=V)


def spectral_pfaffinho(s: SpectralForm, keep) -> complex:
    """Pfaffinho of ``V Σ V^T`` via the minor-summation expansion.

    ``pf A_I = Σ_J det V_{IJ} pf Σ_{JJ}``; only ``J`` made of whole 2x2
    blocks of Σ contribute, so the sum runs over ``C(L//2, |I|/2)`` block
    subsets.
    """
    idx = index_set(keep, s.L)
    if idx.size == 0:
        return 1.0 + 0.0j
    if idx.size % 2:
        return 0.0j
    blocks = 1j * s.block_lambdas
    VI = s.V[idx]
    total = 0.0j
    for chosen in itertools.combinations(range(blocks.size), idx.size // 2):
        cols = np.ravel([(2 * b, 2 * b + 1) for b in chosen])
        total += np.linalg.det(VI[:, cols]) * np.prod(blocks[list(chosen)])
    return complex(total)


def log_all_plus_probability(lambdas: Iterable[complex]) -> float:
    """``-ln`` of the squared all-``+`` amplitude: ``ln 2 + ½ Σ ln(1 + |Λ|²)``."""
    lam = np.asarray(list(lambdas) if not isinstance(lambdas, np.ndarray) else lambdas)
    return float(np.log(2.0) + 0.5 * np.sum(np.log1p(np.abs(lam) ** 2)))


def all_plus_amplitude(s: SpectralForm | Sequence[complex]) -> float:
    """Modulus of the all-``+`` amplitude, ``2^{-1/2} Π_j (1 + |Λ̃_j|²)^{-1/4}``.

    The product runs over all ``L`` eigenvalues.
    """
    lam = s.lambdas if isinstance(s, SpectralForm) else np.asarray(s)
    return float(np.exp(-0.5 * log_all_plus_probability(lam)))
