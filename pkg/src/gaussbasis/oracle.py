r"""Dense Fock-space reference implementations for small chains.

Everything here works with explicit ``2^L`` state vectors and sparse
Jordan--Wigner operators, independent of the Pfaffian machinery. Vectors are
indexed with site 1 as the most significant bit; bit value 1 means an
occupied site (spin up) in the occupation basis and ``-`` in a rotated basis.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .exceptions import DegenerateGroundState, SizeLimit

__all__ = [
    "MAX_DENSE_L",
    "MAX_ED_L",
    "DenseState",
    "configurations",
    "config_index",
    "annihilators",
    "dense_from_gaussian",
    "dense_from_generic",
    "rotate",
    "dense_correlations",
    "tfi_hamiltonian",
    "tfi_exact_ground_state",
]

MAX_DENSE_L = 14
MAX_ED_L = 12


def _check_size(L: int) -> None:
    if L > MAX_DENSE_L:
        raise SizeLimit(f"dense oracle is limited to L <= {MAX_DENSE_L}, got {L}")
    if L < 1:
        raise ValueError("L must be positive")


@dataclass(frozen=True, eq=False)
class DenseState:
    """A ``2^L`` amplitude vector."""

    amplitudes: np.ndarray
    L: int

    def __post_init__(self):
        v = np.asarray(self.amplitudes, dtype=complex).ravel()
        if v.size != 2**self.L:
            raise ValueError(f"expected {2 ** self.L} amplitudes, got {v.size}")
        object.__setattr__(self, "amplitudes", v)

    def normalized(self) -> "DenseState":
        return DenseState(self.amplitudes / np.linalg.norm(self.amplitudes), self.L)

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amplitudes) ** 2
        return p / p.sum()

    def overlap(self, other: "DenseState") -> float:
        """``|<self|other>|`` of the normalized vectors."""
        a = self.amplitudes / np.linalg.norm(self.amplitudes)
        b = other.amplitudes / np.linalg.norm(other.amplitudes)
        return float(abs(np.vdot(a, b)))


def configurations(L: int) -> np.ndarray:
    """All ``2^L`` bit strings as rows, in vector index order."""
    idx = np.arange(2**L)
    return ((idx[:, None] >> np.arange(L - 1, -1, -1)[None, :]) & 1).astype(np.int8)


def config_index(bits) -> int:
    return int("".join(str(int(b)) for b in bits), 2) if len(bits) else 0


@lru_cache(maxsize=32)
def annihilators(L: int) -> tuple:
    r"""Sparse :math:`c_l = \prod_{j<l}(-\sigma^z_j)\,\sigma^-_l` in the ``n`` basis."""
    _check_size(L)
    string = sp.diags([1.0, -1.0])
    lower = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    eye = sp.identity(2, format="csr")
    ops = []
    for l in range(L):
        factors = [string] * l + [lower] + [eye] * (L - l - 1)
        op = factors[0]
        for f in factors[1:]:
            op = sp.kron(op, f, format="csr")
        ops.append(sp.csr_matrix(op))
    return tuple(ops)


def _basis_vector(base, L: int) -> np.ndarray:
    e = np.zeros(2**L, dtype=complex)
    e[config_index(base)] = 1.0
    return e


def dense_from_gaussian(state, method: str = "fock") -> DenseState:
    """Normalized dense vector of ``|R, C>``.

    ``method="fock"`` applies ``exp(½ Σ a_i r_ij a_j)`` to ``|C>`` with sparse
    operators, independently of the Pfaffian code. ``method="pfaffian"``
    collects the library's occupation-basis amplitudes.
    """
    L = state.L
    _check_size(L)
    if method == "pfaffian":
        from .state import amplitude_z

        v = np.array([amplitude_z(state, bits) for bits in configurations(L)])
        return DenseState(v, L)
    if method != "fock":
        raise ValueError(f"unknown method {method!r}")
    c = annihilators(L)
    a = [c[j] if state.base[j] else c[j].conj().T.tocsr() for j in range(L)]
    X = sp.csr_matrix((2**L, 2**L), dtype=complex)
    for i in range(L):
        for j in range(L):
            if state.R[i, j] != 0:
                X = X + 0.5 * state.R[i, j] * (a[i] @ a[j])
    v = spla.expm_multiply(X.tocsc(), _basis_vector(state.base, L))
    return DenseState(v, L).normalized()


def dense_from_generic(M, base) -> DenseState:
    """Normalized ``exp[½ (c^†, c) M (c, c^†)^T] |C>`` by dense matrix exponential."""
    M = np.asarray(M, dtype=complex)
    L = M.shape[0] // 2
    _check_size(L)
    c = annihilators(L)
    cd = [op.conj().T.tocsr() for op in c]
    v_ops = cd + list(c)
    w_ops = list(c) + cd
    X = sp.csr_matrix((2**L, 2**L), dtype=complex)
    for a in range(2 * L):
        for b in range(2 * L):
            if M[a, b] != 0:
                X = X + 0.5 * M[a, b] * (v_ops[a] @ w_ops[b])
    v = scipy.linalg.expm(X.toarray()) @ _basis_vector(base, L)
    return DenseState(v, L).normalized()


def _local_map(phi: float, alpha: float) -> np.ndarray:
    # rows: s = +, -; columns: n = 0, 1
    return np.array(
        [[np.exp(-1j * phi), 1.0], [-np.exp(-1j * (alpha + phi)), np.exp(-1j * alpha)]]
    ) / np.sqrt(2)


def rotate(v, phi: float, alpha: float = 0.0, inverse: bool = False) -> np.ndarray:
    r"""Components of ``v`` in the ``(φ, π/2, α)`` basis.

    Site kets are :math:`|+\rangle = (|{\uparrow}\rangle + e^{i\phi}|{\downarrow}\rangle)/\sqrt2`
    and :math:`|-\rangle = e^{i\alpha}(|{\uparrow}\rangle - e^{i\phi}|{\downarrow}\rangle)/\sqrt2`.
    ``inverse=True`` maps rotated components back to the occupation basis.
    """
    v = np.asarray(v.amplitudes if isinstance(v, DenseState) else v, dtype=complex)
    L = int(round(np.log2(v.size)))
    if 2**L != v.size:
        raise ValueError("vector length must be a power of two")
    _check_size(L)
    M = _local_map(phi, alpha)
    if inverse:
        M = M.conj().T
    t = v.reshape([2] * L)
    for j in range(L):
        t = np.moveaxis(np.tensordot(M, t, axes=([1], [j])), 0, j)
    return t.reshape(-1)


def dense_correlations(v) -> dict:
    """``C = <c^† c>``, ``G = <B A>``, ``K = <A A>``, ``Kbar = <B B>`` of a dense vector."""
    v = np.asarray(v.amplitudes if isinstance(v, DenseState) else v, dtype=complex)
    v = v / np.linalg.norm(v)
    L = int(round(np.log2(v.size)))
    c = annihilators(L)
    cd = [op.conj().T.tocsr() for op in c]
    A = [cd[j] + c[j] for j in range(L)]
    B = [cd[j] - c[j] for j in range(L)]

    def expect(X, Y):
        return np.array([[np.vdot(v, X[j] @ (Y[k] @ v)) for k in range(L)] for j in range(L)])

    return {"C": expect(cd, c), "G": expect(B, A), "K": expect(A, A), "Kbar": expect(B, B)}


def tfi_hamiltonian(L: int, boundary: str = "periodic", h: float = 1.0) -> sp.csr_matrix:
    """``-½ Σ σ^x_j σ^x_{j+1} - (h/2) Σ σ^z_j`` as a sparse matrix (``σ^z = 2n - 1``)."""
    _check_size(L)
    from .tfi import normalize_boundary

    periodic = normalize_boundary(boundary) == "periodic"
    sx = sp.csr_matrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
    sz = sp.diags([-1.0, 1.0])

    def site(op, j):
        return sp.kron(sp.kron(sp.identity(2**j), op), sp.identity(2 ** (L - j - 1)), format="csr")

    X = [site(sx, j) for j in range(L)]
    H = sp.csr_matrix((2**L, 2**L))
    # at L = 2 the periodic ring carries the bond twice, as in the closed-form correlators
    bonds = L if periodic else L - 1
    for j in range(bonds):
        H = H - 0.5 * (X[j] @ X[(j + 1) % L])
    for j in range(L):
        H = H - 0.5 * h * site(sz, j)
    return H.tocsr()


def tfi_exact_ground_state(model, gap_tol: float = 1e-8) -> DenseState:
    """Exact ground state of a :class:`~gaussbasis.tfi.TFIModel`.

    The phase is fixed so that the largest-modulus amplitude is real positive.
    Chains up to ``L = 10`` use a dense eigensolver, larger ones a sparse
    Lanczos solver for the two lowest levels.

    Raises
    ------
    SizeLimit
        For ``L > 12``.
    DegenerateGroundState
        If the gap to the first excited state is below ``gap_tol``.
    """
    L = model.L
    if L > MAX_ED_L:
        raise SizeLimit(f"exact diagonalization is limited to L <= {MAX_ED_L}, got {L}")
    H = tfi_hamiltonian(L, model.boundary, model.h)
    if L <= 10:
        w, V = np.linalg.eigh(H.toarray())
    else:
        w, V = spla.eigsh(H, k=2, which="SA", tol=1e-12)
        order = np.argsort(w)
        w, V = w[order], V[:, order]
    if w[1] - w[0] < gap_tol:
        raise DegenerateGroundState(f"ground-state gap {w[1] - w[0]:.3e} below {gap_tol:.0e}")
    v = V[:, 0].astype(complex)
    k = np.argmax(np.abs(v))
    v *= np.exp(-1j * np.angle(v[k]))
    return DenseState(v / np.linalg.norm(v), L)
