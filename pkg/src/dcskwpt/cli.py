"""Batch experiment runner.

Reads a JSON config (see the bundled recipes under ``configs/``), evaluates
the closed-form harvested power and a Monte-Carlo estimate over an optional
parameter grid, and writes a CSV results table plus a JSON run manifest.

The CSV body is a pure function of the effective config: re-running with the
same config and seed reproduces it byte for byte, for any worker count.
Timestamps and timings live only in the manifest.

Exit codes: 0 success, 2 unparseable config or overrides, 3 invariant
violation reported by validation.
"""

import argparse
import copy
import csv
import datetime
import importlib.resources
import io
import json
import math
import sys
import time
from pathlib import Path

from ._version import __version__
from .channel import ChannelParams, SystemConfig, pathloss_scales
from .montecarlo import (SWEEP_AXES, McConfig, run_mc, with_axis_value)
from .waveform import WAVEFORM_KINDS, WPT_OPTIMAL, WaveformSpec

__all__ = [
    "CSV_COLUMNS",
    "DEFAULT_CONFIG",
    "load_config",
    "apply_overrides",
    "validate_config",
    "run_experiment",
    "main",
]

DEFAULT_CONFIG = {
    "system": {
        "pt_dbm": 30.0,
        "distance_m": 20.0,
        "pathloss_exp": 4.0,
        "k2": 0.0034,
        "k4": 0.3829,
        "r_ant_ohm": 50.0,
    },
    "channel": {"m": 4.0, "omega1": 0.75, "omega2": 0.25, "tau": 3},
    "waveform": {"beta": 30, "kind": WPT_OPTIMAL, "degree": 2, "psi": None},
    "mc": {"trials": 1_000_000, "mode": "chip", "seed": 1, "chunk": 100_000, "workers": 1},
    "sweep": None,
    "output": {"csv": "results.csv", "manifest": "manifest.json"},
}

CSV_COLUMNS = [
    "row",
    "m", "omega1", "omega2", "tau", "beta", "kind", "degree", "psi",
    "pt_dbm", "distance_m", "pathloss_exp", "k2", "k4", "r_ant_ohm",
    "eps1", "eps2",
    "mode", "trials", "chunk", "seed",
    "cf_m2", "cf_m4", "cf_linear_w", "cf_nonlinear_w", "cf_total_w", "cf_total_dbm",
    "cf_small_delay_total_w",
    "mc_m2", "mc_se2", "mc_m4", "mc_se4",
    "mc_linear_w", "mc_nonlinear_w", "mc_total_w", "mc_total_dbm", "mc_se_total_w",
    "z_m2", "z_m4", "z_total",
    "error",
]


# ---------------------------------------------------------------------------
# Config loading and overrides
# ---------------------------------------------------------------------------

def load_config(name_or_path: str) -> tuple[dict, str]:
    """Read a JSON config from the filesystem, falling back to bundled recipes.

    Returns the merged config (file values over defaults) and the resolved
    source identifier.  Raises ValueError with a field path on malformed
    content.
    """
    path = Path(name_or_path)
    if path.is_file():
        text = path.read_text()
        source = str(path)
    else:
        resource = importlib.resources.files("dcskwpt").joinpath("configs", name_or_path)
        if resource.is_file():
            text = resource.read_text()
            source = f"bundled:{name_or_path}"
        else:
            raise ValueError(f"config file not found: {name_or_path}")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{source}: not valid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise ValueError(f"{source}: top level must be a JSON object")
    return _merge_defaults(raw), source


def _merge_defaults(raw: dict) -> dict:
    merged = copy.deepcopy(DEFAULT_CONFIG)
    for section, value in raw.items():
        if isinstance(value, dict) and isinstance(merged.get(section), dict):
            merged[section].update(value)
        else:
            merged[section] = value
    return merged


def apply_overrides(config: dict, overrides: list[str]) -> dict:
    """Apply ``section.key=value`` assignments; values are parsed as JSON.

    Unknown paths raise ValueError so typos do not silently run the wrong
    experiment.
    """
    out = copy.deepcopy(config)
    for item in overrides:
        if "=" not in item:
            raise ValueError(f"override {item!r} is not of the form key=value")
        dotted, text = item.split("=", 1)
        keys = dotted.split(".")
        try:
            value = json.loads(text)
        except json.JSONDecodeError:
            value = text
        node = out
        for key in keys[:-1]:
            if not isinstance(node, dict) or key not in node:
                raise ValueError(f"override {dotted!r}: unknown key {key!r}")
            if key == "sweep" and node[key] is None:
                node[key] = {"axes": []}
            node = node[key]
        leaf = keys[-1]
        if not isinstance(node, dict) or leaf not in node:
            raise ValueError(f"override {dotted!r}: unknown key {leaf!r}")
        node[leaf] = value
    return out


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

def _is_real(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_config(config: dict) -> list[str]:
    """All invariant checks, reported as field-path diagnostics, without running."""
    diags: list[str] = []
    known = set(DEFAULT_CONFIG)
    for section in config:
        if section not in known:
            diags.append(f"{section}: unknown section")

    sys_cfg = config.get("system", {})
    for key in ("distance_m", "pathloss_exp", "k2", "k4", "r_ant_ohm"):
        value = sys_cfg.get(key)
        if not (_is_real(value) and value > 0):
            diags.append(f"system.{key}: must be a positive real, got {value!r}")
    if not _is_real(sys_cfg.get("pt_dbm")):
        diags.append(f"system.pt_dbm: must be a finite real, got {sys_cfg.get('pt_dbm')!r}")
    for key in sys_cfg:
        if key not in DEFAULT_CONFIG["system"]:
            diags.append(f"system.{key}: unknown key")

    chan = config.get("channel", {})
    m = chan.get("m")
    if not (_is_real(m) and m >= 0.5):
        diags.append(f"channel.m: fading figure must be >= 0.5, got {m!r}")
    o1, o2 = chan.get("omega1"), chan.get("omega2")
    if not (_is_real(o1) and _is_real(o2)):
        diags.append(f"channel.omega1/omega2: must be finite reals, got {o1!r}, {o2!r}")
    else:
        if o2 < 0 or o1 < o2:
            diags.append(
                f"channel.omega1/omega2: need omega1 >= omega2 >= 0, got {o1!r}, {o2!r}")
        if abs(o1 + o2 - 1.0) > 1e-12:
            diags.append(f"channel.omega1/omega2: omega sum != 1 (got {o1 + o2!r})")
    tau = chan.get("tau")
    if not (_is_int(tau) and tau >= 0):
        diags.append(f"channel.tau: must be a non-negative integer, got {tau!r}")
    for key in chan:
        if key not in DEFAULT_CONFIG["channel"]:
            diags.append(f"channel.{key}: unknown key")

    wave = config.get("waveform", {})
    beta = wave.get("beta")
    if not (_is_int(beta) and beta >= 1):
        diags.append(f"waveform.beta: must be an integer >= 1, got {beta!r}")
    kind = wave.get("kind")
    if kind not in WAVEFORM_KINDS:
        diags.append(f"waveform.kind: must be one of {WAVEFORM_KINDS}, got {kind!r}")
    degree = wave.get("degree")
    if not (_is_int(degree) and degree >= 2):
        diags.append(f"waveform.degree: must be an integer >= 2, got {degree!r}")
    psi = wave.get("psi")
    if psi is not None and not (_is_int(psi) and psi >= 1):
        diags.append(f"waveform.psi: must be null or a positive integer, got {psi!r}")
    if _is_int(tau) and _is_int(beta) and kind in WAVEFORM_KINDS:
        symbol_len = 2 * beta if kind != WPT_OPTIMAL else beta + 1
        if kind == WPT_OPTIMAL and tau != 0 and tau > beta - 1:
            diags.append(f"channel.tau: tau={tau} exceeds beta - 1 = {beta - 1}")
        elif tau > symbol_len - 1:
            diags.append(f"channel.tau: tau={tau} exceeds symbol_len - 1 = {symbol_len - 1}")
        if psi is not None and psi > symbol_len:
            diags.append(f"waveform.psi: psi={psi} exceeds the symbol length {symbol_len}")
    for key in wave:
        if key not in DEFAULT_CONFIG["waveform"]:
            diags.append(f"waveform.{key}: unknown key")

    mc = config.get("mc", {})
    if not (_is_int(mc.get("trials")) and mc.get("trials") >= 1):
        diags.append(f"mc.trials: must be a positive integer, got {mc.get('trials')!r}")
    if mc.get("mode") not in ("chip", "moment"):
        diags.append(f"mc.mode: must be 'chip' or 'moment', got {mc.get('mode')!r}")
    if not (_is_int(mc.get("seed")) and 0 <= mc.get("seed") < 2 ** 64):
        diags.append(f"mc.seed: must be an unsigned 64-bit integer, got {mc.get('seed')!r}")
    if not (_is_int(mc.get("chunk")) and mc.get("chunk") >= 1):
        diags.append(f"mc.chunk: must be a positive integer, got {mc.get('chunk')!r}")
    if not (_is_int(mc.get("workers")) and mc.get("workers") >= 1):
        diags.append(f"mc.workers: must be a positive integer, got {mc.get('workers')!r}")
    if mc.get("mode") == "moment" and kind in WAVEFORM_KINDS and kind != WPT_OPTIMAL:
        diags.append("mc.mode: moment mode requires waveform.kind = 'wpt-optimal'")
    for key in mc:
        if key not in DEFAULT_CONFIG["mc"]:
            diags.append(f"mc.{key}: unknown key")

    swp = config.get("sweep")
    if swp is not None:
        if not isinstance(swp, dict) or "axes" not in swp:
            diags.append("sweep: must be null or an object with an 'axes' list")
        else:
            axes = swp.get("axes")
            if not isinstance(axes, list) or not axes:
                diags.append("sweep.axes: must be a non-empty list")
            else:
                for i, ax in enumerate(axes):
                    if not isinstance(ax, dict):
                        diags.append(f"sweep.axes[{i}]: must be an object")
                        continue
                    if ax.get("name") not in SWEEP_AXES:
                        diags.append(
                            f"sweep.axes[{i}].name: must be one of {SWEEP_AXES}, "
                            f"got {ax.get('name')!r}")
                    values = ax.get("values")
                    if not isinstance(values, list) or not values:
                        diags.append(f"sweep.axes[{i}].values: must be a non-empty list")
            for key in swp:
                if key not in ("axes",):
                    diags.append(f"sweep.{key}: unknown key")

    out = config.get("output", {})
    for key in ("csv", "manifest"):
        if not isinstance(out.get(key), str) or not out.get(key):
            diags.append(f"output.{key}: must be a non-empty file name, got {out.get(key)!r}")
    for key in out:
        if key not in DEFAULT_CONFIG["output"]:
            diags.append(f"output.{key}: unknown key")

    return diags


# ---------------------------------------------------------------------------
# Experiment execution
# ---------------------------------------------------------------------------

def _build_objects(config: dict):
    sys_cfg = config["system"]
    system = SystemConfig.from_dbm(
        pt_dbm=sys_cfg["pt_dbm"],
        distance_m=sys_cfg["distance_m"],
        pathloss_exp=sys_cfg["pathloss_exp"],
        k2=sys_cfg["k2"],
        k4=sys_cfg["k4"],
        r_ant_ohm=sys_cfg["r_ant_ohm"],
    )
    chan = config["channel"]
    params = ChannelParams(m=chan["m"], omega1=chan["omega1"],
                           omega2=chan["omega2"], tau=chan["tau"])
    wave = config["waveform"]
    spec = WaveformSpec(beta=wave["beta"], kind=wave["kind"],
                        degree=wave["degree"], correlator_len=wave["psi"])
    mc_cfg = config["mc"]
    mc = McConfig(trials=mc_cfg["trials"], mode=mc_cfg["mode"], seed=mc_cfg["seed"],
                  chunk=mc_cfg["chunk"], workers=mc_cfg["workers"])
    return system, params, spec, mc


def _grid_points(config: dict):
    """Cartesian product of the sweep axes (first axis outermost)."""
    swp = config.get("sweep")
    if not swp:
        return [()]
    axes = [(ax["name"], ax["values"]) for ax in swp["axes"]]
    points = [()]
    for name, values in axes:
        points = [pt + ((name, v),) for pt in points for v in values]
    return points


def _fmt_plain(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _fmt_watt(value) -> str:
    # Powers are printed in scientific notation; the interesting ones are
    # far below a milliwatt.
    return "" if value is None else f"{value:.12e}"


def _dbm(power_w) -> float | None:
    if power_w is None or power_w <= 0:
        return None
    return 10.0 * math.log10(power_w / 1e-3)


def _z(mc_value, cf_value, se) -> float | None:
    if mc_value is None or cf_value is None or not se or se <= 0:
        return None
    return (mc_value - cf_value) / se


def _csv_row(index, config, params, spec, mc, eps, closed, small, result, error):
    system_cfg = config["system"]
    eps1, eps2 = eps
    cells = {
        "row": index,
        "m": _fmt_plain(params.m if params else None),
        "omega1": _fmt_plain(params.omega1 if params else None),
        "omega2": _fmt_plain(params.omega2 if params else None),
        "tau": _fmt_plain(params.tau if params else None),
        "beta": _fmt_plain(spec.beta if spec else None),
        "kind": spec.kind if spec else "",
        "degree": _fmt_plain(spec.degree if spec else None),
        "psi": _fmt_plain(spec.psi if spec else None),
        "pt_dbm": _fmt_plain(float(system_cfg["pt_dbm"])),
        "distance_m": _fmt_plain(float(system_cfg["distance_m"])),
        "pathloss_exp": _fmt_plain(float(system_cfg["pathloss_exp"])),
        "k2": _fmt_plain(float(system_cfg["k2"])),
        "k4": _fmt_plain(float(system_cfg["k4"])),
        "r_ant_ohm": _fmt_plain(float(system_cfg["r_ant_ohm"])),
        "eps1": _fmt_watt(eps1),
        "eps2": _fmt_watt(eps2),
        "mode": mc.mode,
        "trials": mc.trials,
        "chunk": mc.chunk,
        "seed": mc.seed,
        "cf_m2": _fmt_plain(closed.m2 if closed else None),
        "cf_m4": _fmt_plain(closed.m4 if closed else None),
        "cf_linear_w": _fmt_watt(closed.linear_term if closed else None),
        "cf_nonlinear_w": _fmt_watt(closed.nonlinear_term if closed else None),
        "cf_total_w": _fmt_watt(closed.total if closed else None),
        "cf_total_dbm": _fmt_plain(_dbm(closed.total) if closed else None),
        "cf_small_delay_total_w": _fmt_watt(small.total if small else None),
        "mc_m2": _fmt_plain(result.m2_hat if result else None),
        "mc_se2": _fmt_plain(result.se2 if result else None),
        "mc_m4": _fmt_plain(result.m4_hat if result else None),
        "mc_se4": _fmt_plain(result.se4 if result else None),
        "mc_linear_w": _fmt_watt(result.power.linear_term if result else None),
        "mc_nonlinear_w": _fmt_watt(result.power.nonlinear_term if result else None),
        "mc_total_w": _fmt_watt(result.power.total if result else None),
        "mc_total_dbm": _fmt_plain(_dbm(result.power.total) if result else None),
        "mc_se_total_w": _fmt_watt(result.se_power if result else None),
        "z_m2": _fmt_plain(_z(result.m2_hat, closed.m2, result.se2)
                           if result and closed else None),
        "z_m4": _fmt_plain(_z(result.m4_hat, closed.m4, result.se4)
                           if result and closed else None),
        "z_total": _fmt_plain(_z(result.power.total, closed.total, result.se_power)
                              if result and closed else None),
        "error": error or "",
    }
    return [cells[col] for col in CSV_COLUMNS]


def run_experiment(config: dict, out_dir: str = ".",
                   source: str = "<config>", overrides: list[str] | None = None) -> int:
    """Execute the experiment grid and write the CSV table and JSON manifest."""
    from .montecarlo import _closed_forms  # row evaluation shares sweep's logic

    system, base_params, base_spec, mc = _build_objects(config)
    eps = pathloss_scales(system)
    points = _grid_points(config)

    out_path = Path(out_dir)
    out_path.mkdir(parents=True, exist_ok=True)
    csv_file = out_path / config["output"]["csv"]
    manifest_file = out_path / config["output"]["manifest"]

    started = datetime.datetime.now(datetime.timezone.utc)
    row_seconds = []
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for index, point in enumerate(points):
        t0 = time.perf_counter()
        params, spec, closed, small, result, error = base_params, base_spec, None, None, None, None
        try:
            for name, value in point:
                params, spec = with_axis_value(name, value, params, spec)
            closed, small = _closed_forms(system, params, spec)
            result = run_mc(system, params, spec, mc)
        except (ValueError, TypeError) as exc:
            error = str(exc)
            params = spec = closed = small = result = None
        writer.writerow(_csv_row(index, config, params, spec, mc, eps,
                                 closed, small, result, error))
        row_seconds.append(round(time.perf_counter() - t0, 6))

    csv_file.write_text(buffer.getvalue())

    manifest = {
        "tool": "dcsk-wpt",
        "version": __version__,
        "config_source": source,
        "overrides": overrides or [],
        "seed": mc.seed,
        "trials": mc.trials,
        "mode": mc.mode,
        "workers": mc.workers,
        "rows": len(points),
        "csv": csv_file.name,
        "started_utc": started.isoformat(),
        "elapsed_s": round(sum(row_seconds), 6),
        "row_seconds": row_seconds,
        "config": config,
    }
    manifest_file.write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {csv_file} ({len(points)} rows) and {manifest_file.name}")
    return 0


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dcsk-wpt",
        description="Harvested-power experiments: closed forms vs chip-level Monte-Carlo.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a config and write CSV + manifest")
    run_p.add_argument("config", help="config file path or bundled recipe name (e.g. fig2.cfg)")
    run_p.add_argument("--overrides", nargs="*", default=[], metavar="KEY=VALUE",
                       help="dotted-path config overrides, e.g. channel.tau=0")
    run_p.add_argument("--out", default=".", help="output directory (default: .)")
    run_p.add_argument("--seed", type=int, default=None, help="override mc.seed")
    run_p.add_argument("--trials", type=int, default=None, help="override mc.trials")

    val_p = sub.add_parser("validate", help="report config diagnostics without running")
    val_p.add_argument("config")

    args = parser.parse_args(argv)

    try:
        config, source = load_config(args.config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        diags = validate_config(config)
        for diag in diags:
            print(diag)
        return 0 if not diags else 3

    try:
        config = apply_overrides(config, args.overrides)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        config["mc"]["seed"] = args.seed
    if args.trials is not None:
        config["mc"]["trials"] = args.trials

    diags = validate_config(config)
    if diags:
        for diag in diags:
            print(diag, file=sys.stderr)
        return 3

    return run_experiment(config, out_dir=args.out, source=source,
                          overrides=list(args.overrides))


if __name__ == "__main__":
    raise SystemExit(main())
