"""``lizshear`` command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage, configuration or I/O error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import io
from .exceptions import (ConfigError, InconsistentAdmissibilityError, InputFormatError,
                         InvalidArgumentError, NotAdmissibleError)
from .radon import affine_slices, radon_affine_direct, radon_polar
from .shearlet import admissibility_constant, analyze_spectral, seminorm_profile
from .synthesis import band_limited_field, reconstruct, refinement_levels
from .testfn import builtin2d, sampled_function
from .verify import CHECKS, environment, run_checks

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
COMMANDS = ("admissibility", "analyze", "synthesize", "roundtrip", "radon", "verify", "decay")


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lizshear", description="Continuous shearlet toolkit.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON run configuration")
    p.add_argument("--input", help="builtin:NAME or a CSV file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--only", help="comma-separated check names (verify)")
    p.add_argument("--refine", type=int, help="number of nested grid levels (roundtrip)")
    p.add_argument("--threads", type=int, help="worker threads")
    p.add_argument("--heatmap", help="s_index,a_index of the |coefficient| heatmap (analyze)")
    p.add_argument("--mode", choices=("polar", "affine", "slice"), default="polar",
                   help="radon output (radon)")
    return p


def _settings(args) -> dict:
    cfg = cfgmod.load(args.config, known_checks=tuple(CHECKS))
    over = {}
    if args.input is not None:
        over["input"] = args.input
    if args.out is not None:
        over["output_dir"] = args.out
    if args.threads is not None:
        over["threads"] = args.threads
    return cfgmod.validate({**cfg, **over}, tuple(CHECKS)) if over else cfg


def _is_coefficient_csv(path: Path) -> bool:
    try:
        with open(path) as fh:
            head = fh.readline().strip()
    except OSError as exc:
        raise InputFormatError(f"cannot read {path}: {exc}") from None
    return head == ",".join(io.COEFFICIENT_HEADER)


def _function(spec: str):
    """``builtin:NAME`` or a field CSV, as an AnalyticFunction2D."""
    if spec.startswith("builtin:"):
        return builtin2d(spec.split(":", 1)[1])
    return sampled_function(io.read_field_csv(spec), label=Path(spec).stem)


def _tol(cfg, name):
    return cfg["tolerances"].get(name, CHECKS[name].tolerance)


def _out(cfg) -> Path:
    return Path(cfg["output_dir"])


# ---------------------------------------------------------------------------
# commands

def cmd_admissibility(cfg) -> int:
    psi = cfgmod.generator(cfg)
    try:
        r = admissibility_constant(psi, rtol=math.inf)
    except NotAdmissibleError as exc:
        print(f"not admissible: {exc}")
        return EXIT_FAIL
    tol = _tol(cfg, "admissibility")
    print(f"C_psi (2D quadrature) = {r.value:.17g}")
    print(f"C_psi (factored)      = {r.factorized:.17g}")
    print(f"relative difference   = {r.relative_difference:.3e} (tolerance {tol:g})")
    return EXIT_OK if r.relative_difference <= tol else EXIT_FAIL


def _heatmap_indices(text):
    try:
        s_idx, a_idx = (int(t) for t in text.split(","))
    except ValueError:
        raise UsageError("--heatmap expects s_index,a_index") from None
    return s_idx, a_idx


def cmd_analyze(cfg, args) -> int:
    f = _function(cfg["input"])
    grid = cfgmod.param_grid(cfg)
    hm = _heatmap_indices(args.heatmap) if args.heatmap else None
    c = analyze_spectral(f, cfgmod.generator(cfg), grid, cfg["threads"])
    out = _out(cfg)
    path = io.write_coefficients_csv(out / "coefficients.csv", c)
    print(f"wrote {grid.size} coefficients on grid {grid.shape} to {path}")
    if hm is not None:
        img = io.coefficient_heatmap(c, *hm)
        print(f"wrote heatmap to {io.write_pgm(out / 'heatmap.pgm', img)}")
    return EXIT_OK


def cmd_synthesize(cfg) -> int:
    psi = cfgmod.generator(cfg)
    spec = cfg["input"]
    if not spec.startswith("builtin:") and _is_coefficient_csv(Path(spec)):
        c = io.read_coefficients_csv(spec)
    else:
        c = analyze_spectral(_function(spec), psi, cfgmod.param_grid(cfg), cfg["threads"])
    g = cfgmod.symmetric_grid(cfg["field_grid"])
    field = band_limited_field(c, psi, g, g)
    path = io.write_field_csv(_out(cfg) / "synthesis.csv", field)
    print(f"wrote S^t coefficients field on {g.n}x{g.n} nodes to {path}")
    return EXIT_OK


def cmd_roundtrip(cfg, args) -> int:
    f = _function(cfg["input"])
    psi = cfgmod.generator(cfg)
    grid = cfgmod.param_grid(cfg)
    n = 1 if args.refine is None else args.refine
    if not 1 <= n <= 3:
        raise UsageError("--refine must be 1, 2 or 3")
    coarse, base, fine = refinement_levels(grid) if n > 1 else (None, grid, None)
    levels = [base] if n == 1 else [coarse, base] if n == 2 else [coarse, base, fine]
    tol = _tol(cfg, "reconstruction")
    residuals = []
    result = None
    for k, g in enumerate(levels):
        c = analyze_spectral(f, psi, g, cfg["threads"])
        result = reconstruct(f, psi, g, c)
        rep = result.residual_report
        residuals.append(rep["residual"])
        flag = " (degenerate: zero input)" if rep["zero_input"] else ""
        print(f"level {k} grid {g.shape}: residual {rep['residual']:.6e}{flag}")
    path = io.write_field_csv(_out(cfg) / "reconstruction.csv", result.field)
    print(f"wrote reconstructed field to {path}")
    monotone = all(b <= a for a, b in zip(residuals, residuals[1:]))
    if n > 1:
        print(f"monotone non-increasing: {'yes' if monotone else 'no'}")
    return EXIT_OK if residuals[-1] <= tol and monotone else EXIT_FAIL


def cmd_radon(cfg, args) -> int:
    f = _function(cfg["input"])
    r = cfg["radon"]
    out = _out(cfg)
    if args.mode == "polar":
        th = cfgmod.theta_grid(r["theta"])
        q = cfgmod.symmetric_grid(r["q"])
        vals = radon_polar(f, th, q).values
        T, Q = np.meshgrid(th.nodes, q.nodes, indexing="ij")
        path = io.write_csv(out / "sinogram.csv", io.POLAR_HEADER,
                            zip(T.ravel(), Q.ravel(), vals.real.ravel()))
        status = EXIT_OK
    else:
        v = cfgmod.symmetric_grid(r["v"]).nodes
        t = cfgmod.symmetric_grid(r["t"])
        direct = radon_affine_direct(f, v, t).values
        vals = direct if args.mode == "affine" else affine_slices(f, v, t.nodes)
        V, T = np.meshgrid(v, t.nodes, indexing="ij")
        path = io.write_csv(out / "sinogram.csv", io.AFFINE_HEADER,
                            zip(V.ravel(), T.ravel(), vals.real.ravel()))
        status = EXIT_OK
        if args.mode == "slice":
            diff = float(np.max(np.abs(vals - direct)))
            tol = _tol(cfg, "slice-theorem")
            print(f"max |slice - affine| = {diff:.3e} (tolerance {tol:g})")
            status = EXIT_OK if diff <= tol else EXIT_FAIL
    if np.max(np.abs(vals.imag), initial=0.0) > 1e-12 * max(np.max(np.abs(vals)), 1e-300):
        print("note: input is complex; the value column holds the real part", file=sys.stderr)
    print(f"wrote {vals.size} sinogram values to {path}")
    return status


def _json_safe(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: _json_safe(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_json_safe(v) for v in x]
    return x


def cmd_verify(cfg, args) -> int:
    only = None
    if args.only:
        only = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in only if s not in CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    records, seconds = run_checks(cfg, only, progress=lambda r: print(r.line(), flush=True))
    report = {
        "checks": [r.as_dict() for r in records],
        "config_digest": cfgmod.digest(cfg),
        "runtime_seconds": round(seconds, 3) if cfg["record_runtime"] else 0.0,
        "environment": environment(),
    }
    out = _out(cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "report.json"
    path.write_text(json.dumps(_json_safe(report), indent=2) + "\n")
    failed = [r.name for r in records if not r.passed]
    print(f"{len(records) - len(failed)}/{len(records)} checks passed in {seconds:.1f} s; report {path}")
    if failed:
        print(f"failed: {', '.join(failed)}")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_decay(cfg) -> int:
    f = _function(cfg["input"])
    orders = [tuple(o) for o in cfg["decay_orders"]]
    rows = seminorm_profile(f, cfgmod.generator(cfg), orders, cfg["threads"])
    path = io.write_csv(_out(cfg) / "decay.csv", io.DECAY_HEADER, rows)
    levels = max(r[4] for r in rows)
    for o in orders:
        vals = [r[5] for r in rows if r[:4] == o]
        growth = (vals[-1] - vals[-2]) / vals[-2] if vals[-2] else 0.0
        note = "  growing (informational)" if growth > 0.05 else ""
        print(f"p{o}: " + ", ".join(f"{v:.4e}" for v in vals) + f"  finest-pair growth {growth:+.2%}{note}")
    print(f"wrote {len(rows)} rows over {levels + 1} levels to {path}")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = _settings(args)
        cmd = args.command
        if cmd == "admissibility":
            return cmd_admissibility(cfg)
        if cmd == "analyze":
            return cmd_analyze(cfg, args)
        if cmd == "synthesize":
            return cmd_synthesize(cfg)
        if cmd == "roundtrip":
            return cmd_roundtrip(cfg, args)
        if cmd == "radon":
            return cmd_radon(cfg, args)
        if cmd == "verify":
            return cmd_verify(cfg, args)
        return cmd_decay(cfg)
    except (ConfigError, InputFormatError, InvalidArgumentError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotAdmissibleError, InconsistentAdmissibilityError) as exc:
        print(f"not admissible: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
