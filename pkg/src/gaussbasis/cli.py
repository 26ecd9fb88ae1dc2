"""Command-line front end.

Subcommands::

    gaussbasis amplitude STATE CONFIG [--phi F] [--alpha F]
    gaussbasis prob      STATE CONFIG [--phi F]
    gaussbasis scan      CAMPAIGN [--workers N]
    gaussbasis fit       CSV --model pbc|obc [--output PATH]
    gaussbasis check     [--L N] [--trials N] [--seed N]

``CONFIG`` over ``0/1`` is an occupation configuration; over ``+/-`` it is a
sign sequence in the ``(φ, π/2, α)`` basis. Exit codes: 0 success, 1 failed
checks or a scan where every point failed, 2 malformed input, 3 singular
dual-matrix construction.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from .basis import BasisSpec, amplitude_phi, basis_vector, dual_matrix, parse_signs
from .correlators import kw_residuals
from .exceptions import GaussBasisError, SingularCayley
from .probability import prob_phi, prob_z
from .scaling import fit_report, fit_scaling
from .state import GaussianState, amplitude_z, parse_bits
from .tfi import CrystalConfig, default_workers, formation_grid, normalize_boundary, scan_formation

logger = logging.getLogger("gaussbasis")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_SINGULAR = 0, 1, 2, 3

CAMPAIGN_KEYS = {"boundary", "basis", "base_pattern", "L_min", "L_max", "stride", "output", "workers"}
REQUIRED_CAMPAIGN_KEYS = {"boundary", "basis", "base_pattern", "L_min", "L_max"}


class InputError(Exception):
    """Malformed command-line input (exit code 2)."""


def _fmt(x) -> str:
    """Shortest round-trip representation of a float."""
    return repr(float(x))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path`` and rename it into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(record: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(record))
        return
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(record.keys())
    writer.writerow(_fmt(v) if isinstance(v, float) else v for v in record.values())
    sys.stdout.write(buf.getvalue())


def _load_state(path: str) -> GaussianState:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read state file: {exc}") from exc
    try:
        return GaussianState.from_json(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"state file is not valid JSON: {exc}") from exc


def _parse_config(config: str, L: int):
    """Return ``("z", bits)`` or ``("phi", signs)``."""
    try:
        if set(config) <= {"0", "1"} and config:
            return "z", parse_bits(config, L)
        return "phi", parse_signs(config, L)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def cmd_amplitude(args) -> int:
    state = _load_state(args.state)
    kind, cfg = _parse_config(args.config, state.L)
    if kind == "z":
        amp = amplitude_z(state, cfg)
        path = "z-pfaffinho"
    else:
        amp = amplitude_phi(state, cfg, BasisSpec(args.phi, args.alpha))
        path = "phi-pfaffinho"
    _emit({"re": float(amp.real), "im": float(amp.imag), "modulus2": float(abs(amp) ** 2), "path": path}, args.format)
    return EXIT_OK


def cmd_prob(args) -> int:
    state = _load_state(args.state)
    kind, cfg = _parse_config(args.config, state.L)
    if kind == "z":
        p, path = prob_z(state, cfg), "z-pfaffinho"
    else:
        p, path = prob_phi(state, cfg, args.phi), "phi-determinant"
    _emit({"probability": float(p), "minus_log_p": -math.log(p) if p > 0 else math.inf, "path": path}, args.format)
    return EXIT_OK


def load_campaign(path: str) -> dict:
    """Read and validate a scan campaign file."""
    try:
        plan = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read campaign: {exc}") from exc
    if not isinstance(plan, dict):
        raise InputError("campaign must be a JSON object")
    unknown = set(plan) - CAMPAIGN_KEYS
    if unknown:
        raise InputError(f"unknown campaign keys: {sorted(unknown)}")
    missing = REQUIRED_CAMPAIGN_KEYS - set(plan)
    if missing:
        raise InputError(f"missing campaign keys: {sorted(missing)}")
    try:
        plan["boundary"] = normalize_boundary(plan["boundary"])
        plan["config"] = CrystalConfig(str(plan["base_pattern"]))
        basis = plan["basis"]
        if basis == "z":
            plan["basis_spec"] = None
        elif isinstance(basis, dict) and set(basis) <= {"phi", "alpha"}:
            plan["basis_spec"] = BasisSpec(float(basis.get("phi", 0.0)), float(basis.get("alpha", 0.0)))
        else:
            raise ValueError(f"basis must be 'z' or {{phi, alpha}}, got {basis!r}")
        if plan["config"].is_occupation != (plan["basis_spec"] is None):
            raise ValueError("0/1 patterns go with basis 'z', +/- patterns with a rotated basis")
        for key in ("L_min", "L_max"):
            if int(plan[key]) != plan[key]:
                raise ValueError(f"{key} must be an integer")
        stride = plan.get("stride")
        if stride is not None and (int(stride) != stride or stride <= 0):
            raise ValueError("stride must be a positive integer")
        workers = plan.get("workers")
        if workers is not None and (int(workers) != workers or workers <= 0):
            raise ValueError("workers must be a positive integer")
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return plan


def scan_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["L", "minus_log_P", "path_used"])
    for p in result.points:
        writer.writerow([p.L, _fmt(p.minus_log_p), p.path])
    return buf.getvalue()


def cmd_scan(args) -> int:
    plan = load_campaign(args.campaign)
    Ls = formation_grid(plan["config"], int(plan["L_min"]), int(plan["L_max"]), plan.get("stride"))
    if not Ls:
        raise InputError("campaign has an empty L range")
    workers = args.workers or plan.get("workers") or default_workers()
    result = scan_formation(plan["boundary"], plan["config"], Ls, plan["basis_spec"], workers=workers)
    text = scan_csv(result)
    output = args.output or plan.get("output")
    if output:
        atomic_write(output, text)
    else:
        sys.stdout.write(text)
    for L, msg in result.failures.items():
        logger.warning("L=%d failed: %s", L, msg)
    return EXIT_FAIL if not result.points else EXIT_OK


def read_scan_csv(path: str):
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise InputError(f"cannot read CSV: {exc}") from exc
    try:
        L = np.array([float(r["L"]) for r in rows])
        y = np.array([float(r["minus_log_P"]) for r in rows])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"CSV needs numeric columns L and minus_log_P: {exc}") from exc
    return L, y


def cmd_fit(args) -> int:
    L, y = read_scan_csv(args.csv)
    fit = fit_scaling(L, y, args.model)
    report = fit_report(fit)
    if args.format == "json":
        text = json.dumps(report, indent=2) + "\n"
    else:
        keys = ["gamma", "s_or_a", "s_or_a_stderr", "class", "n_points", "residual_rms"]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(keys)
        writer.writerow(_fmt(report[k]) if isinstance(report[k], float) else report[k] for k in keys)
        text = buf.getvalue()
    if args.output:
        atomic_write(args.output, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_check(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst_kw = 0.0
    worst_norm = 0.0
    for _ in range(args.trials):
        A = rng.normal(size=(args.L, args.L)) + 1j * rng.normal(size=(args.L, args.L))
        R = 0.5 * (A - A.T) / math.sqrt(args.L)
        worst_kw = max(worst_kw, float(np.abs(kw_residuals(R, dual_matrix(R).Rtilde)).max()))
        if args.L <= 10:
            state = GaussianState(R, rng.integers(0, 2, args.L))
            v = basis_vector(state, BasisSpec(float(rng.uniform(0, np.pi)), 0.0))
            worst_norm = max(worst_norm, abs(float(np.sum(np.abs(v) ** 2)) - 1.0))
    ok = worst_kw < 1e-9 and worst_norm < 1e-10
    _emit({"L": args.L, "trials": args.trials, "max_kw_residual": worst_kw, "max_norm_error": worst_norm, "ok": ok}, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gaussbasis", description="Gaussian-state amplitudes and formation probabilities.")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, helptext in (
        ("amplitude", cmd_amplitude, "amplitude of one configuration"),
        ("prob", cmd_prob, "probability of one configuration"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("state", help="state JSON file")
        p.add_argument("config", help="0/1 occupations or +/- signs")
        p.add_argument("--phi", type=float, default=0.0)
        if name == "amplitude":
            p.add_argument("--alpha", type=float, default=0.0)
        p.set_defaults(func=func)

    p = sub.add_parser("scan", help="run a formation-probability campaign")
    p.add_argument("campaign", help="campaign JSON file")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output", default=None, help="overrides the campaign output path")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("fit", help="fit a scan CSV")
    p.add_argument("csv")
    p.add_argument("--model", choices=("pbc", "obc"), required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("check", help="KW-residual and normalization self-test")
    p.add_argument("--L", type=int, default=6)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except SingularCayley as exc:
        print(f"error: singular dual-matrix construction: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (InputError, GaussBasisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
