r"""Finite-size scaling fits of formation probabilities.

Periodic chains: ``-ln P = γ L + c_0 + c_1/L``, with the universal term
``s = -c_0/2`` (so ``c_0 = -2s``). Open chains: ``-ln P = γ L + a ln L + b``.

The fitted universal number is matched to the known boundary-condition
classes of the critical Ising chain. For periodic chains ``s`` takes the
values ``-ln2/2`` (fixed), ``0`` (free) and ``+ln2/2`` (mixed); for open chains
``a = -1/8`` is the free class and ``a = 3/8`` is shared by fixed and mixed
(reported as ``"3/8-class"``).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .exceptions import IllConditionedFit, InsufficientData
from .tfi import normalize_boundary

__all__ = [
    "ScalingFit",
    "BoundaryClass",
    "design_matrix",
    "fit_pbc",
    "fit_obc",
    "fit_scaling",
    "classify",
    "fit_report",
    "PBC_CLASSES",
    "OBC_CLASSES",
]

MIN_POINTS = 10
MAX_COND = 1e10

PBC_CLASSES = {"fixed": -math.log(2) / 2, "free": 0.0, "mixed": math.log(2) / 2}
OBC_CLASSES = {"free": -1 / 8, "3/8-class": 3 / 8}
PBC_TOL = 0.01 * math.log(2)
OBC_TOL = 0.02


@dataclass(frozen=True)
class ScalingFit:
    """Result of one least-squares fit.

    ``s_or_a`` is ``s`` for periodic fits and ``a`` for open fits;
    ``stderr`` lists standard errors of ``coef`` in design-column order.
    """

    boundary: str
    coef: tuple[float, ...]
    stderr: tuple[float, ...]
    gamma: float
    constant_term: float
    s_or_a: float
    s_or_a_stderr: float
    residual_rms: float
    n_points: int
    window: tuple[int, int]


@dataclass(frozen=True)
class BoundaryClass:
    label: str
    target: float | None
    distance: float


def design_matrix(L, boundary: str) -> np.ndarray:
    """Columns ``[L, 1, 1/L]`` (periodic) or ``[L, ln L, 1]`` (open)."""
    L = np.asarray(L, dtype=float).ravel()
    if normalize_boundary(boundary) == "periodic":
        return np.column_stack([L, np.ones_like(L), 1 / L])
    return np.column_stack([L, np.log(L), np.ones_like(L)])


def fit_scaling(L, minus_log_p, boundary: str) -> ScalingFit:
    """Ordinary least squares of ``-ln P`` on the boundary-specific design.

    Raises
    ------
    InsufficientData
        With fewer than 10 finite points.
    IllConditionedFit
        If the design matrix has condition number above ``1e10``.
    """
    boundary = normalize_boundary(boundary)
    L = np.asarray(L, dtype=float).ravel()
    y = np.asarray(minus_log_p, dtype=float).ravel()
    if L.shape != y.shape:
        raise ValueError(f"L and -ln P differ in length: {L.size} vs {y.size}")
    ok = np.isfinite(L) & np.isfinite(y)
    L, y = L[ok], y[ok]
    if L.size < MIN_POINTS:
        raise InsufficientData(f"need at least {MIN_POINTS} points, got {L.size}")
    if (L <= 0).any():
        raise ValueError("chain lengths must be positive")

    X = design_matrix(L, boundary)
    cond = np.linalg.cond(X)
    if not np.isfinite(cond) or cond > MAX_COND:
        raise IllConditionedFit(f"design matrix condition number {cond:.3e} exceeds {MAX_COND:.0e}")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    dof = L.size - X.shape[1]
    sigma2 = float(resid @ resid) / dof if dof > 0 else 0.0
    cov = sigma2 * np.linalg.inv(X.T @ X)
    err = np.sqrt(np.clip(np.diag(cov), 0.0, None))

    if boundary == "periodic":
        constant, s_or_a, s_or_a_err = coef[1], -coef[1] / 2, err[1] / 2
    else:
        constant, s_or_a, s_or_a_err = coef[2], coef[1], err[1]
    return ScalingFit(
        boundary=boundary,
        coef=tuple(float(c) for c in coef),
        stderr=tuple(float(e) for e in err),
        gamma=float(coef[0]),
        constant_term=float(constant),
        s_or_a=float(s_or_a),
        s_or_a_stderr=float(s_or_a_err),
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        n_points=int(L.size),
        window=(int(L.min()), int(L.max())),
    )


def fit_pbc(L, minus_log_p) -> ScalingFit:
    return fit_scaling(L, minus_log_p, "periodic")


def fit_obc(L, minus_log_p) -> ScalingFit:
    return fit_scaling(L, minus_log_p, "open")


def classify(fit: ScalingFit, boundary: str | None = None) -> BoundaryClass:
    """Nearest boundary class within tolerance, else ``"unresolved"``.

    Tolerances are ``0.01 ln 2`` on ``s`` and ``0.02`` on ``a``. ``boundary``
    defaults to the one the fit was made for.
    """
    boundary = fit.boundary if boundary is None else normalize_boundary(boundary)
    if boundary == "periodic":
        classes, tol = PBC_CLASSES, PBC_TOL
    else:
        classes, tol = OBC_CLASSES, OBC_TOL
    distances = {label: abs(fit.s_or_a - target) for label, target in classes.items()}
    hits = [label for label, d in distances.items() if d <= tol]
    if len(hits) != 1:
        nearest = min(distances.values())
        return BoundaryClass("unresolved", None, float(nearest))
    label = hits[0]
    return BoundaryClass(label, classes[label], float(distances[label]))


def fit_report(fit: ScalingFit) -> dict:
    """JSON-ready summary of a fit and its classification."""
    cls = classify(fit)
    report = asdict(fit)
    report["window"] = list(fit.window)
    report["coef"] = list(fit.coef)
    report["stderr"] = list(fit.stderr)
    report["s_or_a_name"] = "s" if fit.boundary == "periodic" else "a"
    report["class"] = cls.label
    report["class_target"] = cls.target
    return report


def fit_report_json(fit: ScalingFit, **kwargs) -> str:
    return json.dumps(fit_report(fit), **kwargs)
