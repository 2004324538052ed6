"""Command-line interface.

Every subcommand reads a TOML config describing a grid and a multiplier,
runs one operation, prints a deterministic JSON report (byte-identical across
reruns of the same inputs) to stdout or ``--out``, and exits 0 exactly when
every check in the report passed.  Wall-clock timing goes to stderr only, so
it never perturbs report bytes.

Config layout::

    [grid]
    axes = [ { kind = "line", n = 128, spacing = 0.25 },
             { kind = "circle", n = 16, spacing = 0.5 } ]

    [multiplier]
    family = "free_field"        # free_field | lattice_free_field
    mass = 1.0                   # | power | drift_free_field
    # power = 2                  # power family only
    # drift = 0.3                # drift family only
    # drift_axis = 1

    [check]                      # check-rp / charged-check / compactify
    condition = "time"           # time | alt | doubly
    axis = 0
    tol = 1e-10

    [schwinger]
    orders = [2, 4, 6, 8]
    tuples = 10
    seed = 0
    tol = 1e-12

    [quantize]
    rank_tol = 1e-10
    tol = 1e-8

    [compactify]
    axis = 0
    new_extent = 8.0
    decay_tol = 1e-8

    [yngvason]
    seed = 0
    tol = 1e-10
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import measures
from .charged import ChargedField
from .compactify import compactify
from .errors import RPLabError
from .gaussian import GaussianField
from .grid import Axis, Grid
from .multiplier import (
    DriftFreeField,
    FreeField,
    LatticeFreeField,
    PowerCovariance,
    covariance_matrix,
)
from .quantize import QuantizationResult, quantize
from .rp_check import json_bytes, rp_check


def load_config(path: str) -> dict:
    with open(path, "rb") as fh:
        return tomllib.load(fh)


def build_grid(cfg: dict) -> Grid:
    axes = [
        Axis(a["kind"], int(a["n"]), float(a["spacing"]))
        for a in cfg["grid"]["axes"]
    ]
    return Grid(tuple(axes))


def build_multiplier(cfg: dict):
    mcfg = cfg["multiplier"]
    family = mcfg["family"]
    if family == "free_field":
        return FreeField(float(mcfg["mass"]))
    if family == "lattice_free_field":
        return LatticeFreeField(float(mcfg["mass"]))
    if family == "power":
        return PowerCovariance(float(mcfg["mass"]), int(mcfg["power"]))
    if family == "drift_free_field":
        return DriftFreeField(
            float(mcfg["mass"]), float(mcfg["drift"]), int(mcfg.get("drift_axis", 1))
        )
    raise RPLabError(f"unknown multiplier family {family!r}")


def emit(payload: dict, out: str | None) -> None:
    data = json_bytes(payload)
    if out:
        with open(out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def check_section(cfg: dict, args) -> dict:
    sec = dict(cfg.get("check", {}))
    if args.condition is not None:
        sec["condition"] = args.condition
    if args.axis is not None:
        sec["axis"] = args.axis
    if args.tol is not None:
        sec["tol"] = args.tol
    sec.setdefault("condition", "time")
    sec.setdefault("axis", 0)
    sec.setdefault("tol", 1e-10)
    return sec


def cmd_check_rp(cfg: dict, args) -> tuple[dict, bool]:
    grid = build_grid(cfg)
    mult = build_multiplier(cfg)
    sec = check_section(cfg, args)
    matrix = covariance_matrix(grid, mult)
    witness = args.witness_out
    if witness is None and args.out:
        witness = args.out.rsplit(".", 1)[0] + ".witness.json"
    elif witness is None:
        witness = "witness.json"
    report = rp_check(
        matrix, grid, condition=sec["condition"], axis=int(sec["axis"]),
        tol=float(sec["tol"]), witness_path=witness,
    )
    payload = {"grid": grid.describe(), "multiplier": mult.name,
               "report": report.to_dict()}
    return payload, report.passed


def cmd_charged_check(cfg: dict, args) -> tuple[dict, bool]:
    grid = build_grid(cfg)
    mult = build_multiplier(cfg)
    sec = check_section(cfg, args)
    matrix = covariance_matrix(grid, mult)
    field = ChargedField(matrix, grid)
    doubled, phi, phibar = field.rp_check(
        condition=sec["condition"], axis=int(sec["axis"]), tol=float(sec["tol"])
    )
    conjunction = phi.passed and phibar.passed
    consistent = doubled.passed == conjunction
    payload = {
        "grid": grid.describe(),
        "multiplier": mult.name,
        "doubled": doubled.to_dict(),
        "phi_block": phi.to_dict(),
        "phibar_block": phibar.to_dict(),
        "blocks_agree_with_doubled": consistent,
    }
    return payload, doubled.passed and consistent


def cmd_schwinger(cfg: dict, args) -> tuple[dict, bool]:
    grid = build_grid(cfg)
    mult = build_multiplier(cfg)
    sec = dict(cfg.get("schwinger", {}))
    seed = args.seed if args.seed is not None else int(sec.get("seed", 0))
    tol = args.tol if args.tol is not None else float(sec.get("tol", 1e-12))
    orders = [int(x) for x in sec.get("orders", [2, 4, 6, 8])]
    tuples = int(sec.get("tuples", 10))
    matrix = covariance_matrix(grid, mult)
    field = GaussianField(matrix, grid)
    rng = np.random.default_rng(seed)
    records = []
    ok = True
    for n in orders:
        for t in range(tuples):
            fs = [rng.normal(size=grid.nsites) for _ in range(n)]
            value = field.moment(fs)
            # permutation invariance: the recursion must not care about order
            perm = rng.permutation(n)
            value_p = field.moment([fs[p] for p in perm])
            drift = abs(value - value_p) / max(1.0, abs(value))
            odd = field.moment(fs[: n - 1]) if n >= 1 else 0.0
            entry_ok = drift <= tol and abs(odd) == 0.0
            ok = ok and entry_ok
            records.append(
                {
                    "order": n,
                    "tuple": t,
                    "value_re": float(value.real),
                    "value_im": float(value.imag),
                    "permutation_drift": float(drift),
                    "odd_moment": float(abs(odd)),
                    "ok": entry_ok,
                }
            )
    payload = {"grid": grid.describe(), "multiplier": mult.name, "seed": seed,
               "tol": tol, "records": records, "all_ok": ok}
    return payload, ok


def cmd_quantize(cfg: dict, args) -> tuple[dict, bool]:
    grid = build_grid(cfg)
    mult = build_multiplier(cfg)
    sec = dict(cfg.get("quantize", {}))
    rank_tol = float(sec.get("rank_tol", 1e-10))
    tol = args.tol if args.tol is not None else float(sec.get("tol", 1e-8))
    result = quantize(grid, mult, rank_tol=rank_tol, tol=tol)
    if args.csv:
        write_quantize_csv(result, args.csv)
    payload = {"grid": grid.describe(), "multiplier": mult.name,
               "result": result.to_dict()}
    return payload, result.contractive and result.semigroup_ok


def write_quantize_csv(result: QuantizationResult, path: str) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(QuantizationResult.CSV_HEADER)
    for mode in result.modes:
        writer.writerow(mode.csv_row())
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def cmd_compactify(cfg: dict, args) -> tuple[dict, bool]:
    grid = build_grid(cfg)
    mult = build_multiplier(cfg)
    sec = check_section(cfg, args)
    ccfg = dict(cfg.get("compactify", {}))
    axis = args.axis if args.axis is not None else int(ccfg.get("axis", 0))
    new_extent = (
        args.new_extent if args.new_extent is not None else float(ccfg["new_extent"])
    )
    decay_tol = float(ccfg.get("decay_tol", 1e-8))
    before = rp_check(
        covariance_matrix(grid, mult), grid,
        condition=sec["condition"], axis=int(sec["axis"]), tol=float(sec["tol"]),
    )
    folded = compactify(grid, mult, axis, new_extent, decay_tol=decay_tol)
    after = rp_check(
        folded.matrix, folded.grid,
        condition=sec["condition"], axis=int(sec["axis"]), tol=float(sec["tol"]),
    )
    payload = {
        "grid_before": grid.describe(),
        "grid_after": folded.grid.describe(),
        "multiplier": mult.name,
        "folded_axis": axis,
        "edge_ratio": folded.edge_ratio,
        "before": before.to_dict(),
        "after": after.to_dict(),
    }
    return payload, before.passed and after.passed


def cmd_yngvason(cfg: dict, args) -> tuple[dict, bool]:
    grid = build_grid(cfg)
    mult = build_multiplier(cfg)
    sec = dict(cfg.get("yngvason", {}))
    tol = args.tol if args.tol is not None else float(sec.get("tol", 1e-10))
    lam = measures.mode_lambda(grid, mult)
    growth = measures.normalization_growth(lam)
    _, _, defect = measures.decompose(mult.symbol_on(grid))
    m1, m2, m3 = measures.estimate_bounds(grid, mult)
    tz = measures.time_zero_ratio(grid, mult)
    ok = defect <= tol and tz["ratio"] <= 1.0 + tol
    payload = {
        "grid": grid.describe(),
        "multiplier": mult.name,
        "normalization": growth,
        "split_identity_defect": defect,
        "bounds": {"M1": m1, "M2": m2, "M3": m3},
        "time_zero": tz,
        "all_ok": ok,
    }
    return payload, ok


COMMANDS = {
    "check-rp": cmd_check_rp,
    "charged-check": cmd_charged_check,
    "schwinger": cmd_schwinger,
    "quantize": cmd_quantize,
    "compactify": cmd_compactify,
    "yngvason": cmd_yngvason,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rplab",
        description="Reflection-positivity laboratory for lattice covariances",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML config path")
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--axis", type=int, default=None)
        p.add_argument("--condition", choices=("time", "alt", "doubly"), default=None)
        p.add_argument("--witness-out", default=None,
                       help="where to write the witness of a failing check")
        p.add_argument("--csv", default=None, help="per-sector CSV (quantize)")
        p.add_argument("--new-extent", type=float, default=None, dest="new_extent")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = load_config(args.config)
    start = time.perf_counter()
    try:
        payload, ok = COMMANDS[args.command](cfg, args)
    except RPLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    emit(payload, args.out)
    print(f"# wall_time_s={time.perf_counter() - start:.3f}", file=sys.stderr)
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
