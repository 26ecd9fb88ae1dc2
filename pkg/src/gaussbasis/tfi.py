r"""Critical transverse-field Ising chain and emptiness-formation scans.

The chain :math:`H = -\tfrac12\sum_j \sigma^x_j\sigma^x_{j+1} - \tfrac{h}{2}\sum_j \sigma^z_j`
at ``h = 1`` has a Gaussian ground state whose correlation matrix is known in
closed form (periodic chains in the even-parity sector, open chains with free
ends). Its ``R`` follows from ``R = (I + G)(I - G)^{-1}``.

A formation scan evaluates ``-ln P`` of a crystal configuration (a short
pattern tiled over the chain) for a range of sizes ``L``; the resulting
series feeds the scaling fits in :mod:`gaussbasis.scaling`.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import BasisSpec, dual_matrix, parse_signs, phi_twist, wall_mask
from .exceptions import GaussBasisError, SingularG
from .pfaffian import (
    SpectralForm,
    log_all_plus_probability,
    skew_circulant_eigenvalues,
    skew_circulant_first_row,
    skew_circulant_row_from_eigenvalues,
    skew_circulant_spectrum,
)
from .probability import nlp_phi, nlp_x, nlp_y, nlp_z
from .state import GaussianState, parse_bits

__all__ = [
    "TFIModel",
    "CrystalConfig",
    "ScanPoint",
    "ScanResult",
    "tfi_G",
    "tfi_R",
    "tfi_dual_eigenvalues",
    "tfi_dual_spectrum",
    "formation_grid",
    "formation_point",
    "scan_formation",
    "select_path",
]

logger = logging.getLogger(__name__)

_BOUNDARY_ALIASES = {"periodic": "periodic", "pbc": "periodic", "open": "open", "obc": "open"}
PHI_TOL = 1e-15
MAX_COND = 1e12


def normalize_boundary(boundary: str) -> str:
    try:
        return _BOUNDARY_ALIASES[boundary.lower()]
    except (KeyError, AttributeError):
        raise ValueError(f"boundary must be 'periodic' or 'open', got {boundary!r}") from None


@dataclass(frozen=True)
class TFIModel:
    """Transverse-field Ising chain of ``L`` sites."""

    L: int
    boundary: str = "periodic"
    h: float = 1.0

    def __post_init__(self):
        if int(self.L) != self.L or self.L < 2 or self.L % 2:
            raise ValueError(f"L must be an even integer >= 2, got {self.L}")
        object.__setattr__(self, "L", int(self.L))
        object.__setattr__(self, "boundary", normalize_boundary(self.boundary))

    @property
    def periodic(self) -> bool:
        return self.boundary == "periodic"


def tfi_G(model: TFIModel | int, boundary: str = "periodic") -> np.ndarray:
    """Closed-form ``G_{nm} = <B_n A_m>`` of the critical ground state.

    Accepts a :class:`TFIModel` or a size ``L`` together with ``boundary``.
    """
    if not isinstance(model, TFIModel):
        model = TFIModel(model, boundary)
    if model.h != 1.0:
        raise ValueError("closed-form correlators are available only at h = 1")
    L = model.L
    n = np.arange(1, L + 1)
    d = n[:, None] - n[None, :]
    sign = np.where(d % 2, -1.0, 1.0)
    if model.periodic:
        return sign / (L * np.sin(np.pi * (d + 0.5) / L))
    s = n[:, None] + n[None, :]
    w = 2 * L + 1
    return sign / w * (1 / np.sin(np.pi * (d + 0.5) / w) + 1 / np.sin(np.pi * (s - 0.5) / w))


def tfi_R(model: TFIModel, max_cond: float = MAX_COND) -> GaussianState:
    """Ground state as ``|R, 0>`` with ``R = (I + G)(I - G)^{-1}``.

    Raises
    ------
    SingularG
        If ``I - G`` is numerically singular.
    StructureError
        For periodic chains, if ``R`` fails to be skew-circulant.
    """
    G = tfi_G(model)
    I = np.eye(model.L)
    if np.linalg.cond(I - G) > max_cond:
        raise SingularG("I - G is numerically singular")
    R = np.linalg.solve((I - G).T, (I + G).T).T
    R = (R - R.T) / 2
    if model.periodic:
        skew_circulant_first_row(R)
    return GaussianState(R)


def _tfi_G_row(L: int) -> np.ndarray:
    k = np.arange(L)
    sign = np.where(k % 2, -1.0, 1.0)
    return sign / (L * np.sin(np.pi * (0.5 - k) / L))


def tfi_dual_eigenvalues(L: int, phi: float = 0.0) -> np.ndarray:
    """Eigenvalues of the dual matrix of the twisted periodic ground state.

    Everything is skew-circulant, so ``Λ^R = (1 + Λ^G)/(1 - Λ^G)`` and
    ``Λ^R̃ = (Λ^R Λ^P + Λ^R - Λ^P + 1)/(Λ^R Λ^P - Λ^R - Λ^P - 1)``
    hold mode by mode. Cost is ``O(L log L)``.
    """
    lam_g = skew_circulant_eigenvalues(_tfi_G_row(L))
    lam_r = np.exp(2j * phi) * (1 + lam_g) / (1 - lam_g)
    p_row = np.zeros(L)
    p_row[L - 1] = 1.0
    lam_p = skew_circulant_eigenvalues(p_row)
    return (lam_r * lam_p + lam_r - lam_p + 1) / (lam_r * lam_p - lam_r - lam_p - 1)


def tfi_dual_spectrum(L: int, phi: float = 0.0) -> SpectralForm:
    """Spectral form ``V Σ V^T`` of the periodic dual matrix ``R̃^φ``."""
    row = skew_circulant_row_from_eigenvalues(tfi_dual_eigenvalues(L, phi))
    return skew_circulant_spectrum(row)


@dataclass(frozen=True)
class CrystalConfig:
    """A unit pattern tiled along the chain.

    ``"1000"`` is an occupation (σ^z) pattern, ``"+-"`` a sign pattern for a
    rotated basis.
    """

    pattern: str

    def __post_init__(self):
        if not self.pattern:
            raise ValueError("empty crystal pattern")
        chars = set(self.pattern)
        if not (chars <= {"0", "1"} or chars <= {"+", "-"}):
            raise ValueError(f"pattern must use 0/1 or +/-, got {self.pattern!r}")

    @property
    def is_occupation(self) -> bool:
        return set(self.pattern) <= {"0", "1"}

    @property
    def period(self) -> int:
        return len(self.pattern)

    @property
    def base(self) -> str:
        return self.pattern

    @property
    def u(self) -> int:
        """Number of ``1`` (or ``+``) entries in the pattern."""
        return self.pattern.count("1") + self.pattern.count("+")

    @property
    def is_all_plus(self) -> bool:
        return set(self.pattern) == {"+"}

    def admissible(self, L: int) -> bool:
        """``L`` tiles the pattern, is even, and (for σ^z) gives an even fermion number."""
        if L % self.period or L % 2:
            return False
        if self.is_occupation:
            return (L // self.period) * self.pattern.count("1") % 2 == 0
        return True

    def tile(self, L: int) -> np.ndarray:
        if L % self.period:
            raise ValueError(f"L={L} is not a multiple of the period {self.period}")
        text = self.pattern * (L // self.period)
        return parse_bits(text) if self.is_occupation else parse_signs(text)


def formation_grid(
    config: CrystalConfig,
    L_min: int = 400,
    L_max: int = 1000,
    stride: int | None = None,
    min_points: int = 30,
    residue: tuple[int, int] | None = None,
) -> list[int]:
    """Admissible sizes in ``[L_min, L_max]``.

    With ``stride=None`` every ``k``-th admissible size is kept, ``k`` being
    the largest value that still leaves ``min_points`` sizes. An explicit
    ``stride`` keeps sizes with ``(L - L_first) % stride == 0``.
    ``residue=(m, r)`` restricts to ``L % m == r``.
    """
    if L_min > L_max:
        return []
    sizes = [L for L in range(max(L_min, 2), L_max + 1) if config.admissible(L)]
    if residue is not None:
        m, r = residue
        sizes = [L for L in sizes if L % m == r]
    if not sizes:
        return []
    if stride is not None:
        if stride <= 0:
            raise ValueError("stride must be positive")
        return [L for L in sizes if (L - sizes[0]) % stride == 0]
    k = max(1, len(sizes) // max(1, min_points))
    while k > 1 and len(sizes[::k]) < min_points:
        k -= 1
    return sizes[::k]


def select_path(boundary: str, config: CrystalConfig, basis: BasisSpec | None) -> str:
    """Evaluation route for one scan: spectral, determinant or general dual path."""
    if config.is_occupation:
        if basis is not None:
            raise ValueError("occupation patterns are evaluated in the σ^z basis (basis=None)")
        return "z-determinant"
    if basis is None:
        raise ValueError("sign patterns need a rotated basis")
    if normalize_boundary(boundary) == "periodic" and config.is_all_plus:
        return "spectral"
    if abs(basis.phi) <= PHI_TOL:
        return "x-determinant"
    if abs(basis.phi - math.pi / 2) <= PHI_TOL:
        return "y-determinant"
    return "phi-general"


@dataclass(frozen=True)
class ScanPoint:
    L: int
    minus_log_p: float
    path: str


@dataclass
class ScanResult:
    """Ordered scan points plus the sizes that failed (gaps in the series)."""

    points: list[ScanPoint] = field(default_factory=list)
    failures: dict[int, str] = field(default_factory=dict)

    @property
    def L(self) -> np.ndarray:
        return np.array([p.L for p in self.points], dtype=int)

    @property
    def minus_log_p(self) -> np.ndarray:
        return np.array([p.minus_log_p for p in self.points], dtype=float)


def formation_point(
    L: int, boundary: str, configs: Sequence[CrystalConfig], basis: BasisSpec | None = None
) -> list[ScanPoint | None]:
    """``-ln P`` of several crystal configurations at one size, sharing the setup work.

    Entries are ``None`` for configurations that are not admissible at ``L``.
    """
    model = TFIModel(L, boundary)
    out: list[ScanPoint | None] = []
    G = None
    dual = None
    for config in configs:
        if not config.admissible(L):
            out.append(None)
            continue
        path = select_path(boundary, config, basis)
        cfg = config.tile(L)
        if path == "spectral":
            value = log_all_plus_probability(tfi_dual_eigenvalues(L, basis.phi))
        elif path in ("z-determinant", "x-determinant", "y-determinant"):
            if G is None:
                G = tfi_G(model)
            value = {"z-determinant": nlp_z, "x-determinant": nlp_x, "y-determinant": nlp_y}[path](G, cfg)
        else:
            if dual is None:
                state = tfi_R(model)
                dual = dual_matrix(phi_twist(state.R, state.base, basis.phi))
            value = nlp_phi(dual, wall_mask(np.zeros(L, dtype=np.int8), cfg))
        out.append(ScanPoint(L, float(value), path))
    return out


def _scan_task(args):
    L, boundary, configs, basis = args
    try:
        return L, formation_point(L, boundary, configs, basis), None
    except (GaussBasisError, np.linalg.LinAlgError, ValueError) as exc:
        return L, None, f"{type(exc).__name__}: {exc}"


def default_workers() -> int:
    env = os.environ.get("GAUSSBASIS_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring non-integer GAUSSBASIS_WORKERS=%r", env)
    return os.cpu_count() or 1


def scan_formation(
    boundary: str,
    configs: CrystalConfig | Sequence[CrystalConfig],
    Ls: Sequence[int],
    basis: BasisSpec | None = None,
    workers: int = 1,
) -> ScanResult | list[ScanResult]:
    """Evaluate ``-ln P`` over the sizes ``Ls``.

    Per-size failures, including sizes a pattern cannot tile, are logged and
    recorded in ``ScanResult.failures``; the scan carries on. Results are
    ordered by ``L`` regardless of ``workers``. Passing a sequence of
    configurations returns one result per configuration and reuses the
    per-size matrices across them.
    """
    single = isinstance(configs, CrystalConfig)
    configs = [configs] if single else list(configs)
    for config in configs:
        select_path(boundary, config, basis)
    tasks = [(int(L), boundary, configs, basis) for L in sorted(set(Ls))]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_scan_task, tasks))
    else:
        outcomes = [_scan_task(t) for t in tasks]

    results = [ScanResult() for _ in configs]
    for L, points, error in outcomes:
        if error is not None:
            logger.warning("scan failed at L=%d: %s", L, error)
            for res in results:
                res.failures[L] = error
            continue
        for res, point in zip(results, points):
            if point is None:
                res.failures[L] = "size not admissible for this pattern"
            else:
                res.points.append(point)
    return results[0] if single else results
