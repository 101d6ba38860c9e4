"""Command-line front end.

Subcommands: simulate, find-cycle, verify-series, classify-conic,
stability-band, scan.  Single-object results are emitted as JSON, grids and
series as CSV (UTF-8, LF, '.' decimal separator).  A JSON config file can
supply any flag value; explicit flags win.  Exit codes: 0 success, 1
numerical failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cycles, invariants, returns, stability
from .errors import NoReturnError, TwofoldError
from .sigma import RegionKind, classify_point
from .system import SystemParams, build_system, resonant_system
from .flow import flow_X, flow_Y, z_closed_form


def _fmt(value) -> str:
    if isinstance(value, float):  # incl. numpy scalars; shortest round-trip form
        return repr(float(value))
    return str(value)


def _write_csv(path: str, header: list[str], rows: list[list]):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _write_json(path: str, obj):
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _merge_config(args: argparse.Namespace) -> dict:
    merged = dict(vars(args))
    cfg_path = merged.pop("config", None)
    if cfg_path:
        try:
            with open(cfg_path, "r", encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {cfg_path!r}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError(f"config {cfg_path!r} must hold a JSON object")
        for key, value in cfg.items():
            key = key.replace("-", "_")
            if merged.get(key) is None:
                merged[key] = value
    return merged


def _params_from(merged: dict) -> SystemParams:
    missing = [k for k in ("C", "H", "Lambda") if merged.get(k) is None]
    if missing:
        raise UsageError(f"missing required parameter(s): {', '.join(missing)}")
    C, H, L = float(merged["C"]), float(merged["H"]), float(merged["Lambda"])
    try:
        if merged.get("A") is None:
            return resonant_system(C, H, L)
        return build_system(float(merged["A"]), C, H, L)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


class UsageError(Exception):
    pass


def _add_param_flags(sp: argparse.ArgumentParser):
    sp.add_argument("--A", type=float, default=None,
                    help="real eigenvalue (default: -2C, the resonant family)")
    sp.add_argument("--C", type=float, default=None, help="real part of the complex pair")
    sp.add_argument("--H", type=float, default=None, help="focal-line slope parameter")
    sp.add_argument("--Lambda", type=float, default=None, help="fold-visibility parameter")


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--config", default=None, help="JSON file with flag defaults")
    sp.add_argument("--output", "-o", default="-", help="output path ('-' = stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twofold",
        description=("Symmetric crossing limit cycles of a 3D piecewise-linear "
                     "family: simulation, cycle detection, and stability maps."),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("simulate", help="integrate a trajectory across the switching plane")
    _add_param_flags(sp)
    _add_common(sp)
    sp.add_argument("--x0", type=float, default=None)
    sp.add_argument("--y0", type=float, default=None)
    sp.add_argument("--z0", type=float, default=None)
    sp.add_argument("--t-max", type=float, default=None, help="simulation horizon")
    sp.add_argument("--dt", type=float, default=None, help="sampling interval (default 0.01)")
    sp.set_defaults(handler=cmd_simulate)

    sp = sub.add_parser("find-cycle", help="locate a symmetric crossing cycle")
    _add_param_flags(sp)
    _add_common(sp)
    sp.add_argument("--seed", type=float, default=None,
                    help="initial branch coordinate y0 (default: series-head prediction)")
    sp.set_defaults(handler=cmd_find_cycle)

    sp = sub.add_parser("verify-series", help="flight-time expansions vs numeric times")
    _add_param_flags(sp)
    _add_common(sp)
    sp.add_argument("--v0", default=None,
                    help="comma-separated v0 values (default 1e-3,1e-4,1e-5)")
    sp.set_defaults(handler=cmd_verify_series)

    sp = sub.add_parser("classify-conic", help="reduced conic coefficients and kind")
    _add_param_flags(sp)
    _add_common(sp)
    sp.set_defaults(handler=cmd_classify_conic)

    sp = sub.add_parser("stability-band", help="asymptotic stability region grid")
    _add_common(sp)
    sp.add_argument("--cmin", type=float, default=None)
    sp.add_argument("--cmax", type=float, default=None)
    sp.add_argument("--hmin", type=float, default=None)
    sp.add_argument("--hmax", type=float, default=None)
    sp.add_argument("--grid", type=int, default=None, help="grid count per axis (default 400)")
    sp.add_argument("--threads", type=int, default=None)
    sp.add_argument("--boundaries", default=None,
                    help="output path for boundary polylines CSV")
    sp.set_defaults(handler=cmd_stability_band)

    sp = sub.add_parser("scan", help="cycle catalogue over an H grid")
    _add_param_flags(sp)
    _add_common(sp)
    sp.add_argument("--hmin", type=float, default=None)
    sp.add_argument("--hmax", type=float, default=None)
    sp.add_argument("--count", type=int, default=None, help="number of H values (default 20)")
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(handler=cmd_scan)

    return parser


# ---------------------------------------------------------------------------


def _simulate_rows(p: SystemParams, s0, t_max: float, dt: float):
    header = ["t", "x", "y", "z", "field", "event", "region", "saltation_det"]
    rows: list[list] = []
    sample_ts = [k * dt for k in range(int(np.floor(t_max / dt)) + 1)]
    if sample_ts[-1] < t_max - 1e-15:
        sample_ts.append(t_max)

    s = np.asarray(s0, dtype=float).copy()
    ztol = 1e-12 * (1.0 + float(np.max(np.abs(s))))
    if s[2] > ztol:
        field = "X"
    elif s[2] < -ztol:
        field = "Y"
    else:
        cls = classify_point(p, s[:2])
        if cls.kind is not RegionKind.CROSSING:
            rows.append([0.0, s[0], s[1], s[2], "", "terminal", cls.kind.value, ""])
            return header, rows
        field = "X" if cls.lie_x > 0 else "Y"

    t0 = 0.0
    idx = 0
    on_sigma = abs(s[2]) <= ztol
    while t0 < t_max:
        zf, dzf = z_closed_form(p, s, field)
        sign = 1.0 if field == "X" else -1.0
        g = lambda t: sign * zf(t)
        dg = lambda t: sign * dzf(t)
        remaining = t_max - t0
        try:
            tc, _ = returns.first_crossing(
                g, dg, remaining, returns.DEFAULT_SCAN_STEP,
                float(np.max(np.abs(s))), skip_zero_start=on_sigma)
        except NoReturnError:
            tc = None  # orbit stays in its half-space for the rest of the run
        seg_end = t_max if tc is None else t0 + tc
        flow = flow_X if field == "X" else flow_Y
        while idx < len(sample_ts) and sample_ts[idx] <= seg_end + 1e-15:
            ts = sample_ts[idx]
            st = flow(p, s, ts - t0)
            rows.append([ts, st[0], st[1], st[2], field, "", "", ""])
            idx += 1
        if tc is None:
            break
        hit = flow(p, s, tc)
        q = hit[:2]
        cls = classify_point(p, q)
        if field == "X":
            det = cls.lie_y / cls.lie_x if cls.lie_x != 0 else float("nan")
        else:
            det = cls.lie_x / cls.lie_y if cls.lie_y != 0 else float("nan")
        if cls.kind is RegionKind.CROSSING:
            rows.append([t0 + tc, q[0], q[1], 0.0, field, "crossing", cls.kind.value, det])
            field = "Y" if field == "X" else "X"
            s = np.array([q[0], q[1], 0.0])
            t0 = t0 + tc
            on_sigma = True
        else:
            rows.append([t0 + tc, q[0], q[1], 0.0, field, "terminal", cls.kind.value, ""])
            break
    return header, rows


def cmd_simulate(merged: dict) -> int:
    p = _params_from(merged)
    for key in ("x0", "y0", "z0"):
        if merged.get(key) is None:
            raise UsageError(f"missing required initial condition --{key}")
    s0 = [float(merged["x0"]), float(merged["y0"]), float(merged["z0"])]
    t_max = float(merged["t_max"]) if merged.get("t_max") is not None else 20.0
    dt = float(merged["dt"]) if merged.get("dt") is not None else 0.01
    if t_max <= 0 or dt <= 0:
        raise UsageError("t-max and dt must be positive")
    header, rows = _simulate_rows(p, s0, t_max, dt)
    _write_csv(merged["output"], header, rows)
    return 0


def cmd_find_cycle(merged: dict) -> int:
    p = _params_from(merged)
    seed = merged.get("seed")
    if seed is None:
        seed = cycles.asymptotic_seed(p)
    if seed is None:
        raise TwofoldError("series head predicts no cycle; pass --seed explicitly")
    cycle = cycles.find_cycle_newton(p, float(seed))
    report = stability.monodromy(p, cycle)
    _write_json(merged["output"], {
        "p0": [cycle.p0[0], cycle.p0[1]],
        "p1": [cycle.p1[0], cycle.p1[1]],
        "T": cycle.T,
        "t_x": cycle.t_x,
        "t_y": cycle.t_y,
        "residual": cycle.residual,
        "trace": report.trace,
        "det": report.det,
        "multipliers": [[mu.real, mu.imag] for mu in report.multipliers],
        "stable": report.stable,
    })
    return 0


def cmd_verify_series(merged: dict) -> int:
    p = _params_from(merged)
    raw = merged.get("v0") or "1e-3,1e-4,1e-5"
    if isinstance(raw, str):
        v0s = [float(tok) for tok in raw.split(",") if tok.strip()]
    else:
        v0s = [float(v) for v in raw]
    if not v0s or any(v <= 0 for v in v0s):
        raise UsageError("--v0 needs a comma-separated list of positive values")
    table = returns.time_matching_table(p, v0s)
    header = ["v0", "tau_x_numeric", "tau_x_series", "tau_y_numeric", "tau_y_series", "tau"]
    rows = [[row[k] for k in header] for row in table]
    _write_csv(merged["output"], header, rows)
    return 0


def cmd_classify_conic(merged: dict) -> int:
    p = _params_from(merged)
    conic = invariants.gamma1_conic(p)
    _write_json(merged["output"], conic.to_json_dict())
    return 0


def cmd_stability_band(merged: dict) -> int:
    c_lo = float(merged["cmin"]) if merged.get("cmin") is not None else 0.01
    c_hi = float(merged["cmax"]) if merged.get("cmax") is not None else 3.0
    h_lo = float(merged["hmin"]) if merged.get("hmin") is not None else 0.001
    h_hi = float(merged["hmax"]) if merged.get("hmax") is not None else 0.999
    grid = int(merged["grid"]) if merged.get("grid") is not None else 400
    threads = int(merged["threads"]) if merged.get("threads") is not None else 1
    result = stability.stability_band((c_lo, c_hi), (h_lo, h_hi), grid, threads=threads)
    header = ["C", "H", "m2", "tau_inf", "ineq_det", "ineq_upper", "ineq_lower", "inside"]
    rows = [[pt.C, pt.H, pt.m2, pt.tau_inf,
             int(pt.inequalities[0]), int(pt.inequalities[1]), int(pt.inequalities[2]),
             int(pt.inside)] for pt in result.points]
    _write_csv(merged["output"], header, rows)
    boundary_path = merged.get("boundaries") or "band_boundaries.csv"
    brows = [["upper", c, h] for c, h in result.upper]
    brows += [["lower", c, h] for c, h in result.lower]
    brows += [["hcrit", c, h] for c, h in result.hcrit]
    _write_csv(boundary_path, ["curve", "C", "H"], brows)
    return 0


def cmd_scan(merged: dict) -> int:
    if merged.get("C") is None or merged.get("Lambda") is None:
        raise UsageError("scan requires --C and --Lambda")
    # scan varies H itself; the base H is only a placeholder
    base_h = float(merged["H"]) if merged.get("H") is not None else 0.5
    p_base = resonant_system(float(merged["C"]), base_h, float(merged["Lambda"]))
    h_lo = float(merged["hmin"]) if merged.get("hmin") is not None else None
    h_hi = float(merged["hmax"]) if merged.get("hmax") is not None else None
    if h_lo is None or h_hi is None:
        hc = float(stability.critical_h(p_base.C))
        h_lo = h_lo if h_lo is not None else 0.5 * hc
        h_hi = h_hi if h_hi is not None else 0.995 * hc
    count = int(merged["count"]) if merged.get("count") is not None else 20
    threads = int(merged["threads"]) if merged.get("threads") is not None else 1
    grid = np.linspace(h_lo, h_hi, count)
    entries = cycles.scan_cycles(p_base, grid, threads=threads)
    header = ["H", "y0", "T", "mu2_re", "mu2_im", "mu3_re", "mu3_im", "stable"]
    rows = []
    for e in entries:
        if e.error is not None:
            print(f"scan: H={e.H!r} failed: {e.error}", file=sys.stderr)
            continue
        mu2, mu3 = e.monodromy.multipliers[1], e.monodromy.multipliers[2]
        rows.append([e.H, e.cycle.p0[1], e.cycle.T,
                     mu2.real, mu2.imag, mu3.real, mu3.imag, int(e.monodromy.stable)])
    _write_csv(merged["output"], header, rows)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        merged = _merge_config(args)
        return args.handler(merged)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (TwofoldError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
