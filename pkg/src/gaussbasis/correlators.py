r"""Two-point correlators of the state :math:`|R, 0\rangle`.

With :math:`Q = (I - R^* R)^{-1}` and Majorana operators
:math:`A_j = c_j^\dagger + c_j`, :math:`B_j = c_j^\dagger - c_j`:

* ``C[j, k] = <c_j^† c_k> = (I - Q)[j, k]``
* ``G[j, k] = <B_j A_k> = (I + Q^T (R - I) + R^* Q^T - Q)[j, k]``
* ``K[j, k] = <A_j A_k>`` and ``Kbar[j, k] = <B_j B_k>``

``G`` is computed exactly as written above (so that ``R = 0`` gives
``G = -I``, the all-down state). For a real ``R`` the formula is equivalent
to ``G = (R - I)(I + R)^{-1}``. ``Kbar`` follows from ``K`` through
``Kbar = K - 2(C - C^T + I)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import SingularQ
from .pfaffian import as_antisymmetric

__all__ = ["CorrelationSet", "correlations", "kw_residuals"]

MAX_COND = 1e12


@dataclass(frozen=True, eq=False)
class CorrelationSet:
    """Correlation matrices ``Q, C, G, K, Kbar`` of one state."""

    Q: np.ndarray
    C: np.ndarray
    G: np.ndarray
    K: np.ndarray
    Kbar: np.ndarray

    @property
    def L(self) -> int:
        return self.Q.shape[0]


def correlations(R, max_cond: float = MAX_COND) -> CorrelationSet:
    """All two-point correlators of :math:`|R, 0\\rangle`.

    Raises
    ------
    SingularQ
        If ``I - R^* R`` has condition number above ``max_cond``.
    """
    R = as_antisymmetric(R)
    L = R.shape[0]
    I = np.eye(L)
    A = I - R.conj() @ R
    if L and np.linalg.cond(A) > max_cond:
        raise SingularQ(f"I - R* R is ill conditioned (cond = {np.linalg.cond(A):.3e})")
    Q = np.linalg.inv(A)
    Rc = R.conj()
    QT = Q.T
    C = I - Q
    G = I + QT @ (R - I) + Rc @ QT - Q
    K = (I / 2 + Rc) @ QT + QT @ (I / 2 - R) - Q + I
    # <BB> and <AA> differ only by the normal-ordered part
    Kbar = K - 2 * (C - C.T + I)
    return CorrelationSet(Q=Q, C=C, G=G, K=K, Kbar=Kbar)


def kw_residuals(R, Rtilde) -> np.ndarray:
    """Residuals of the Kramers--Wannier identities between ``R`` and its dual.

    The identities tie nearest-neighbour ``G`` of one state to the density of
    the other::

        G_{j,j+1}(R) - 1 + 2 C_{jj}(R̃)        = 0,   j < L
        G_{L,1}(R)   + 1 - 2 C_{LL}(R̃)        = 0
        G_{j,j+1}(R̃) - 1 + 2 C_{j+1,j+1}(R)  = 0,   j < L
        G_{L,1}(R̃)   + 1 - 2 C_{11}(R)        = 0

    Returns the ``2L`` complex residuals in that order.
    """
    a = correlations(R)
    b = correlations(Rtilde)
    L = a.L
    j = np.arange(L - 1)
    forward = np.concatenate([a.G[j, j + 1] - 1 + 2 * b.C[j, j], [a.G[L - 1, 0] + 1 - 2 * b.C[L - 1, L - 1]]])
    backward = np.concatenate([b.G[j, j + 1] - 1 + 2 * a.C[j + 1, j + 1], [b.G[L - 1, 0] + 1 - 2 * a.C[0, 0]]])
    return np.concatenate([forward, backward])
