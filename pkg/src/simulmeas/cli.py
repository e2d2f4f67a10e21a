"""Command-line front end: state reports, sweeps, calibration, Monte Carlo.

Subcommands
-----------
state      protocol quantities for one equatorial state at a given overlap
sweep      minimum/maximum/sharp product curves over w_a_plus, as CSV or JSON
calibrate  rotation angles where a plate stack reaches the minimum product
mc         seeded coincidence-counting simulation of one setting

All output is deterministic for a fixed configuration (including the seed).
CSV numbers carry 12 significant digits; divergent values (the maximum
product at the sweep endpoints) print as ``inf`` in CSV and ``null`` in
JSON. A key-value config file can pin defaults; explicit flags win.

Exit codes: 0 success, 2 usage error, 3 singular rescaling, 4 infeasible
calibration or empty ensemble, 5 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

from . import experiment, protocol
from .errors import (
    CalibrationInfeasibleError,
    DegenerateBasisError,
    EmptyEnsembleError,
    RescalingSingularError,
    UsageError,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SINGULAR = 3
EXIT_INFEASIBLE = 4
EXIT_IO = 5

SWEEP_COLUMNS = ["w_a_plus", "delta_a", "delta_b", "c_opt",
                 "min_product", "max_product", "sharp_product"]
MC_COLUMNS = ["w_a_plus", "c_used", "shots", "seed", "visibility",
              "product_measured", "product_stderr", "product_analytic"]
SWEEP_NOTE = ("products are symmetric about w_a_plus = 0.5; "
              "max_product diverges where c_opt reaches 0 or 1")

_CONFIG_KEYS = {"seed": int, "shots": int, "visibility": float,
                "index": float, "grid": int, "format": str}


def _fmt(x) -> str:
    """12-significant-digit, locale-independent rendering."""
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".12g")
    return str(x)


def _json_value(x):
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


# --------------------------------------------------------------------------
# configuration

@dataclass
class RunConfig:
    seed: int = 20251
    shots: int = experiment.DEFAULT_SHOTS
    visibility: float = 1.0
    index: float = experiment.DEFAULT_REFRACTIVE_INDEX
    grid: int = 201
    format: str = "csv"
    out: str | None = None


def load_config_file(path: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment."""
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, _, val = line.partition("=")
            key, val = key.strip(), val.strip()
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
            try:
                values[key] = _CONFIG_KEYS[key](val)
            except ValueError as exc:
                raise UsageError(f"{path}:{lineno}: bad value for {key!r}: {val!r}") from exc
    if "format" in values and values["format"] not in ("csv", "json"):
        raise UsageError(f"{path}: format must be 'csv' or 'json'")
    return values


def merge_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        for key, val in load_config_file(args.config).items():
            setattr(cfg, key, val)
    for key in ("seed", "shots", "visibility", "index", "grid", "format", "out"):
        val = getattr(args, key, None)
        if val is not None:
            setattr(cfg, key, val)
    return cfg


# --------------------------------------------------------------------------
# sweep rows

@dataclass(frozen=True)
class SweepRow:
    w_a_plus: float
    delta_a: float
    delta_b: float
    c_opt: float
    min_product: float
    max_product: float
    sharp_product: float


def sweep_row(w: float) -> SweepRow:
    delta_a, delta_b = protocol.sharp_deltas(w)
    value, c_opt = protocol.min_product(delta_a, delta_b)
    if 0.0 < c_opt < 1.0:
        maxp = protocol.max_product(c_opt)
    else:
        maxp = math.inf
    return SweepRow(w_a_plus=w, delta_a=delta_a, delta_b=delta_b, c_opt=c_opt,
                    min_product=value, max_product=maxp,
                    sharp_product=delta_a * delta_b)


def sweep_rows(w_values) -> list[SweepRow]:
    rows = [sweep_row(float(w)) for w in w_values]
    for prev, cur in zip(rows, rows[1:]):
        if cur.w_a_plus <= prev.w_a_plus:
            raise UsageError("sweep grid must be strictly increasing in w_a_plus")
    return rows


def _sweep_grid(grid: int, full_range: bool) -> list[float]:
    if grid < 2:
        raise UsageError(f"grid must be >= 2, got {grid}")
    lo = 0.0 if full_range else 0.5
    step = (1.0 - lo) / (grid - 1)
    return [lo + step * i for i in range(grid)]


def render_sweep_csv(rows) -> str:
    buf = io.StringIO()
    buf.write(f"# {SWEEP_NOTE}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for r in rows:
        writer.writerow([_fmt(getattr(r, col)) for col in SWEEP_COLUMNS])
    return buf.getvalue()


def render_sweep_json(rows) -> str:
    doc = {
        "note": SWEEP_NOTE,
        "rows": [{col: _json_value(getattr(r, col)) for col in SWEEP_COLUMNS} for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _append_point(path: str | None, fmt: str, point: dict):
    line_csv = ",".join(_fmt(point[col]) for col in MC_COLUMNS) + "\n"
    if path is None:
        return
    if fmt == "json":
        with open(path, "a", encoding="utf-8", newline="") as fh:
            fh.write(json.dumps({col: _json_value(point[col]) for col in MC_COLUMNS}) + "\n")
        return
    fresh = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", encoding="utf-8", newline="") as fh:
        if fresh:
            fh.write(",".join(MC_COLUMNS) + "\n")
        fh.write(line_csv)


# --------------------------------------------------------------------------
# subcommands

def cmd_state(args) -> int:
    sign = +1 if args.sign == "+" else -1
    s = protocol.make_equatorial(args.w, sign)
    pa = protocol.sharp_probabilities(s, "A")
    pb = protocol.sharp_probabilities(s, "B")
    delta_a, delta_b = protocol.sharp_uncertainties(s)
    report = protocol.unsharp_uncertainties(s, args.c)
    value, c_opt = protocol.min_product(delta_a, delta_b)
    scan = protocol.numeric_c_scan(s, grid_size=1000)

    print(f"equatorial state: w_a_plus = {_fmt(s.w_a_plus)}, sign = {args.sign}")
    print(f"amplitudes: [{_fmt(s.amplitudes[0].real)}, {_fmt(s.amplitudes[1].real)}]")
    print(f"sharp probabilities: A -> ({_fmt(pa[0])}, {_fmt(pa[1])})   "
          f"B -> ({_fmt(pb[0])}, {_fmt(pb[1])})")
    print(f"sharp uncertainties: delta_a = {_fmt(delta_a)}  delta_b = {_fmt(delta_b)}  "
          f"product = {_fmt(delta_a * delta_b)}")
    print(f"unsharp at c = {_fmt(args.c)}: delta_a' = {_fmt(report.delta_a_prime)}  "
          f"delta_b' = {_fmt(report.delta_b_prime)}  "
          f"product = {_fmt(report.product_simultaneous)}")
    at_opt = "  [at optimum]" if abs(args.c - c_opt) <= 1e-3 else ""
    print(f"closed-form optimum: c_opt = {_fmt(c_opt)}  min_product = {_fmt(value)}{at_opt}")
    flag = " (boundary)" if scan.boundary else ""
    print(f"numeric scan: c_best = {_fmt(scan.c_best)}  "
          f"product_best = {_fmt(scan.product_best)}{flag}")
    print(f"max product at c = {_fmt(args.c)}: {_fmt(protocol.max_product(args.c))}")
    if args.c < 0.01 or args.c > 0.99:
        print("warning: c is near a singular boundary; one rescaled eigenvalue is very large",
              file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = merge_config(args)
    rows = sweep_rows(_sweep_grid(cfg.grid, args.full_range))
    text = render_sweep_json(rows) if cfg.format == "json" else render_sweep_csv(rows)
    _write_text(cfg.out, text)
    return EXIT_OK


def cmd_calibrate(args) -> int:
    cfg = merge_config(args)
    t_s = experiment.plate_transmittance(cfg.index) ** args.plates
    print(f"plates = {args.plates}  index = {_fmt(cfg.index)}  t_s = {_fmt(t_s)}")
    roots = experiment.calibrate_alpha(args.plates, cfg.index)
    print("root  alpha_rad         c                 w_a_plus          "
          "min_product       residual")
    for k, alpha in enumerate(roots, start=1):
        pol = experiment.PolarizerConfig.from_plates(args.plates, alpha, cfg.index)
        d = experiment.prepare(pol).decomposition
        delta_a, delta_b = protocol.sharp_deltas(d.w_a_plus)
        value, c_opt = protocol.min_product(delta_a, delta_b)
        print(f"{k:<5d} {_fmt(alpha):<18s}{_fmt(d.c):<18s}{_fmt(d.w_a_plus):<18s}"
              f"{_fmt(value):<18s}{_fmt(abs(d.c - c_opt))}")
    return EXIT_OK


def _resolve_mc_setting(args, cfg: RunConfig):
    """Return (w, c, run) where run(shots, seed, noise) -> (counts, report)."""
    if args.plates is not None:
        if args.w is not None or args.c is not None:
            raise UsageError("give either --plates/--root or --w/--c, not both")
        roots = experiment.calibrate_alpha(args.plates, cfg.index)
        if not 1 <= args.root <= len(roots):
            raise UsageError(f"--root must be in 1..{len(roots)} for {args.plates} plates")
        pol = experiment.PolarizerConfig.from_plates(args.plates, roots[args.root - 1], cfg.index)
        d = experiment.prepare(pol).decomposition

        def run(shots, seed, noise):
            result = experiment.run_setting(pol, shots, seed, noise)
            return result.counts, result.report

        return d.w_a_plus, d.c, run
    if args.w is None or args.c is None:
        raise UsageError("mc needs either --plates (with --root) or both --w and --c")

    def run(shots, seed, noise):
        return experiment.run_state_setting(args.w, args.c, shots, seed, noise)

    return args.w, args.c, run


def cmd_mc(args) -> int:
    cfg = merge_config(args)
    w, c, run = _resolve_mc_setting(args, cfg)
    noise = experiment.NoiseModel(visibility=cfg.visibility)
    counts, report = run(cfg.shots, cfg.seed, noise)

    delta_a, delta_b = protocol.sharp_deltas(w)
    analytic = protocol.unsharp_product(delta_a, delta_b, c)
    print(f"setting: w_a_plus = {_fmt(w)}  c = {_fmt(c)}  shots = {counts.shots}  "
          f"seed = {counts.seed}  visibility = {_fmt(cfg.visibility)}")
    print(f"counts: (B+,M+) {counts.n_pp}  (B+,M-) {counts.n_pm}  "
          f"(B-,M+) {counts.n_mp}  (B-,M-) {counts.n_mm}")
    print(f"measured product = {_fmt(report.product_simultaneous)}  "
          f"stderr = {_fmt(report.product_stderr)}")
    print(f"analytic product = {_fmt(analytic)}  "
          f"minimum possible = {_fmt(1.0 + delta_a * delta_b)}")
    _append_point(cfg.out, cfg.format, {
        "w_a_plus": w, "c_used": c, "shots": counts.shots, "seed": counts.seed,
        "visibility": cfg.visibility,
        "product_measured": report.product_simultaneous,
        "product_stderr": report.product_stderr,
        "product_analytic": analytic,
    })
    return EXIT_OK


# --------------------------------------------------------------------------
# parser and entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simulmeas",
        description="Simultaneous unsharp measurement of complementary qubit "
                    "observables: protocol math, polarizer calibration, and "
                    "Monte Carlo coincidence counting.")
    parser.add_argument("--config", help="key-value config file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    p_state = sub.add_parser("state", help="report one equatorial state")
    p_state.add_argument("--w", type=float, required=True, help="w_a_plus in [0, 1]")
    p_state.add_argument("--sign", choices=["+", "-"], default="+")
    p_state.add_argument("--c", type=float, required=True, help="probe overlap in (0, 1)")
    p_state.set_defaults(func=cmd_state)

    p_sweep = sub.add_parser("sweep", help="emit product curves over w_a_plus")
    p_sweep.add_argument("--grid", type=int, default=None, help="number of rows (default 201)")
    p_sweep.add_argument("--full-range", action="store_true",
                         help="sweep w in [0, 1] instead of [0.5, 1]")
    p_sweep.add_argument("--out", default=None, help="output path (default stdout)")
    p_sweep.add_argument("--format", choices=["csv", "json"], default=None)
    p_sweep.set_defaults(func=cmd_sweep)

    p_cal = sub.add_parser("calibrate", help="find optimal polarizer rotations")
    p_cal.add_argument("--plates", type=int, required=True, help="glass plate count")
    p_cal.add_argument("--index", type=float, default=None,
                       help="glass refractive index (default 1.5)")
    p_cal.set_defaults(func=cmd_calibrate)

    p_mc = sub.add_parser("mc", help="Monte Carlo coincidence run of one setting")
    p_mc.add_argument("--plates", type=int, default=None)
    p_mc.add_argument("--root", type=int, default=1,
                      help="which calibrated rotation to use (1 or 2)")
    p_mc.add_argument("--w", type=float, default=None, help="explicit w_a_plus")
    p_mc.add_argument("--c", type=float, default=None, help="explicit overlap")
    p_mc.add_argument("--shots", type=int, default=None)
    p_mc.add_argument("--seed", type=int, default=None)
    p_mc.add_argument("--visibility", type=float, default=None)
    p_mc.add_argument("--index", type=float, default=None)
    p_mc.add_argument("--out", default=None, help="append the measured point here")
    p_mc.add_argument("--format", choices=["csv", "json"], default=None)
    p_mc.set_defaults(func=cmd_mc)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RescalingSingularError, DegenerateBasisError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except CalibrationInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.residuals:
            k = max(range(len(exc.residuals)), key=lambda i: exc.residuals[i])
            print(f"diagnostic: residual maximum {exc.residuals[k]:+.6f} at "
                  f"alpha = {exc.alpha_grid[k]:.6f} rad over {len(exc.residuals)} scan points",
                  file=sys.stderr)
        return EXIT_INFEASIBLE
    except EmptyEnsembleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
