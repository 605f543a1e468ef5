"""Command-line surface: verification suites, table dumps, Lagrangian sweeps.

Exit codes: 0 pass, 1 invariant or tolerance failure, 2 usage error,
3 numerical degeneracy encountered.  Output is deterministic for a fixed
(scenario, seed, provider, h): no timestamps, sorted JSON keys, and the
seed fallback chain is flag, then scenario file, then OCTOGRAV_SEED,
then 42.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__, algebra, geometry, lagrangian, scenarios, tables

DEFAULT_SEED = 42
_CROSSCHECK_TOL = {"analytic": 1e-8, "fd": 1e-4}
_FORM_DIMS = {"dd4": 4, "vierbein4": 4, "eh4": 4, "chi8": 8}


class UsageError(Exception):
    pass


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _complex_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _resolve_seed(flag_seed, file_seed):
    if flag_seed is not None:
        return int(flag_seed)
    if file_seed is not None:
        return int(file_seed)
    env = os.environ.get("OCTOGRAV_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as ex:
            raise UsageError(f"OCTOGRAV_SEED must be an integer, got {env!r}") from ex
    return DEFAULT_SEED


def _load_scenario_config(ref: str) -> dict:
    if ref in scenarios.scenario_names():
        return {"name": ref}
    if os.path.exists(ref):
        try:
            with open(ref, "r", encoding="utf-8") as fh:
                config = json.load(fh)
        except (OSError, json.JSONDecodeError) as ex:
            raise UsageError(f"cannot read scenario file {ref!r}: {ex}") from ex
        if not isinstance(config, dict) or "name" not in config:
            raise UsageError(f"scenario file {ref!r} needs a 'name' field")
        return config
    raise UsageError(
        f"unknown scenario {ref!r}: not a catalog name ({', '.join(scenarios.scenario_names())}) "
        "and not a file"
    )


def _build_run(args) -> dict:
    """Merge scenario file and flags; flags win."""
    config = _load_scenario_config(args.scenario)
    try:
        scen = scenarios.scenario(config["name"], **config.get("params", {}))
    except (KeyError, ValueError) as ex:
        raise UsageError(str(ex)) from ex
    seed = _resolve_seed(args.seed, config.get("seed"))
    provider = args.provider or config.get("provider") or "analytic"
    if provider not in ("analytic", "fd"):
        raise UsageError(f"provider must be analytic or fd, got {provider!r}")
    h = args.h if args.h is not None else config.get("h", 1e-5)
    kappa = args.kappa if args.kappa is not None else config.get("kappa", 1.0)
    try:
        constants = lagrangian.CouplingConstants(kappa=float(kappa))
    except ValueError as ex:
        raise UsageError(str(ex)) from ex

    file_points = config.get("points")
    if args.points is not None:
        count, explicit = int(args.points), None
    elif isinstance(file_points, list):
        count, explicit = len(file_points), np.asarray(file_points, dtype=float)
        if explicit.ndim != 2 or explicit.shape[1] != scen.dim:
            raise UsageError(f"explicit points must be rows of {scen.dim} coordinates")
    elif file_points is not None:
        count, explicit = int(file_points), None
    else:
        count, explicit = 20, None

    if explicit is None:
        explicit = scen.sample_points(count, np.random.default_rng(seed))
    frame = scen.frame_field(provider=provider, h=float(h))
    return {
        "scenario": scen,
        "frame": frame,
        "points": explicit,
        "seed": seed,
        "provider": provider,
        "h": float(h),
        "constants": constants,
    }


def _scenario_echo(run) -> dict:
    scen = run["scenario"]
    return {
        "name": scen.name,
        "dim": scen.dim,
        "params": {k: (int(v) if isinstance(v, (int, np.integer)) else float(v)) for k, v in scen.params.items()},
        "provider": run["provider"],
        "h": run["h"],
        "seed": run["seed"],
        "kappa": run["constants"].kappa,
        "n_points": int(run["points"].shape[0]),
    }


# -- verify-algebra ----------------------------------------------------


def cmd_verify_algebra(args) -> int:
    seed = _resolve_seed(args.seed, None)
    checks = algebra.invariant_suite(n=10000, seed=seed)
    current = tables.all_tables()
    if args.corrupt_table:
        corrupted = {k: v.copy() for k, v in current.items()}
        arr = corrupted[args.corrupt_table]
        arr[(0,) * arr.ndim] += 1.0  # diagonal entry must vanish by antisymmetry
        current = corrupted
    checks = checks + tables.table_suite(current)
    ok = all(c["ok"] for c in checks)
    if args.out == "json":
        _emit(json.dumps(
            {"version": __version__, "seed": seed, "pass": ok, "checks": checks},
            sort_keys=True,
        ))
    else:
        for c in checks:
            flag = "ok  " if c["ok"] else "FAIL"
            _emit(f"{flag}  {c['name']:45s} residual {c['max_residual']:.3e}  tol {c['tolerance']:.1e}")
        _emit(f"{'PASS' if ok else 'FAIL'}  ({len(checks)} checks, seed {seed})")
    return 0 if ok else 1


# -- dump-tables -------------------------------------------------------


def cmd_dump_tables(args) -> int:
    entries = tables.nonzero_entries(args.table)
    if args.out == "json":
        _emit(json.dumps(
            {
                "table": args.table,
                "index_base": tables.INDEX_BASE[args.table],
                "entries": entries,
            },
            sort_keys=True,
        ))
    else:
        _emit(tables.entries_to_text(args.table, entries))
    return 0


# -- lagrangian --------------------------------------------------------


def _evaluate_form(run, form: str):
    frame, constants = run["frame"], run["constants"]
    reports, skipped = [], []
    for index, point in enumerate(run["points"]):
        try:
            if form == "dd4":
                rep = lagrangian.lagrangian_double_dual_4d(frame, point, constants)
            elif form == "vierbein4":
                rep = lagrangian.lagrangian_vierbein_4d(frame, point, constants)
            elif form == "chi8":
                rep = lagrangian.lagrangian_chi_dual_8d(frame, point, constants)
            else:
                rep = lagrangian.eh_report(frame, point, constants)
        except geometry.GeometryError as ex:
            skipped.append({"index": index, "point": point.tolist(), "error": str(ex)})
            continue
        reports.append((index, rep))
    return reports, skipped


def cmd_lagrangian(args) -> int:
    run = _build_run(args)
    if run["scenario"].dim != _FORM_DIMS[args.form]:
        raise UsageError(
            f"form {args.form} needs a {_FORM_DIMS[args.form]}D scenario, "
            f"{run['scenario'].name} is {run['scenario'].dim}D"
        )
    reports, skipped = _evaluate_form(run, args.form)
    for s in skipped:
        sys.stderr.write(f"warning: point {s['index']} skipped: {s['error']}\n")

    rows = [
        {
            "index": index,
            "point": rep.point.tolist(),
            "value": _complex_json(rep.value),
            "oracle": rep.oracle,
            "abs_delta": rep.abs_delta,
            "rel_delta": rep.rel_delta,
            "im_magnitude": rep.im_magnitude,
            "orientation_sign": rep.orientation_sign,
        }
        for index, rep in reports
    ]
    summary = {
        "max_abs_delta": max((r["abs_delta"] for r in rows), default=0.0),
        "max_rel_delta": max((r["rel_delta"] for r in rows), default=0.0),
        "max_im_magnitude": max((r["im_magnitude"] for r in rows), default=0.0),
        "evaluated": len(rows),
        "skipped": len(skipped),
    }

    if args.out == "json":
        _emit(json.dumps(
            {
                "version": __version__,
                "form": args.form,
                "scenario": _scenario_echo(run),
                "points": rows,
                "skipped": skipped,
                "summary": summary,
            },
            sort_keys=True,
        ))
    elif args.out == "csv":
        dim = run["scenario"].dim
        header = [f"p{i}" for i in range(dim)]
        header += ["value_re", "value_im", "oracle", "abs_delta", "rel_delta", "im_magnitude", "orientation_sign"]
        lines = [",".join(header)]
        for r in rows:
            cells = [repr(c) for c in r["point"]]
            cells += [
                repr(r["value"]["re"]), repr(r["value"]["im"]), repr(r["oracle"]),
                repr(r["abs_delta"]), repr(r["rel_delta"]), repr(r["im_magnitude"]),
                str(r["orientation_sign"]),
            ]
            lines.append(",".join(cells))
        _emit("\n".join(lines))
    else:
        _emit(f"form {args.form}  scenario {run['scenario'].name}  provider {run['provider']}  "
              f"seed {run['seed']}  kappa {run['constants'].kappa}")
        for r in rows:
            _emit(f"  [{r['index']:3d}] value {r['value']['re']:+.12e} {r['value']['im']:+.3e}j  "
                  f"oracle {r['oracle']:+.12e}  rel {r['rel_delta']:.3e}")
        _emit(f"summary: max_rel_delta {summary['max_rel_delta']:.3e}  "
              f"max_im {summary['max_im_magnitude']:.3e}  skipped {summary['skipped']}")
    return 3 if skipped else 0


# -- crosscheck --------------------------------------------------------


def cmd_crosscheck(args) -> int:
    run = _build_run(args)
    if run["scenario"].dim != 4:
        raise UsageError("crosscheck needs a 4D scenario")
    frame, constants = run["frame"], run["constants"]
    tol = _CROSSCHECK_TOL[run["provider"]]
    kappa = constants.kappa

    rows, skipped = [], []
    for index, point in enumerate(run["points"]):
        try:
            values = {
                "dd4": lagrangian.lagrangian_double_dual_4d(frame, point, constants).value.real,
                "vierbein4": lagrangian.lagrangian_vierbein_4d(frame, point, constants).value.real,
                "eh4": lagrangian.lagrangian_standard_eh(frame, point, constants),
            }
        except geometry.GeometryError as ex:
            skipped.append({"index": index, "point": point.tolist(), "error": str(ex)})
            continue
        # kappa floors the denominator so vacuum scenarios compare absolutely
        pairs = {}
        names = list(values)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                delta = abs(values[a] - values[b])
                pairs[f"{a}-{b}"] = delta / max(abs(values[a]), abs(values[b]), kappa)
        rows.append({"index": index, "point": point.tolist(), "values": values,
                     "pair_deltas": pairs, "worst": max(pairs.values())})

    for s in skipped:
        sys.stderr.write(f"warning: point {s['index']} skipped: {s['error']}\n")

    worst_row = max(rows, key=lambda r: r["worst"], default=None)
    worst = worst_row["worst"] if worst_row else 0.0
    ok = worst <= tol

    if args.out == "json":
        _emit(json.dumps(
            {
                "version": __version__,
                "scenario": _scenario_echo(run),
                "tolerance": tol,
                "points": rows,
                "skipped": skipped,
                "summary": {"max_pair_delta": worst, "pass": ok,
                            "worst_point": worst_row["point"] if worst_row else None},
            },
            sort_keys=True,
        ))
    elif args.out == "csv":
        dim = run["scenario"].dim
        header = [f"p{i}" for i in range(dim)] + ["dd4", "vierbein4", "eh4", "worst_pair_delta"]
        lines = [",".join(header)]
        for r in rows:
            cells = [repr(c) for c in r["point"]]
            cells += [repr(r["values"][f]) for f in ("dd4", "vierbein4", "eh4")]
            cells.append(repr(r["worst"]))
            lines.append(",".join(cells))
        _emit("\n".join(lines))
    else:
        _emit(f"crosscheck {run['scenario'].name}  provider {run['provider']}  tol {tol:.1e}")
        for r in rows:
            _emit(f"  [{r['index']:3d}] dd4 {r['values']['dd4']:+.12e}  "
                  f"vier {r['values']['vierbein4']:+.12e}  eh {r['values']['eh4']:+.12e}  "
                  f"worst {r['worst']:.3e}")
        status = "PASS" if ok else "FAIL"
        _emit(f"{status}: max pair delta {worst:.3e}" + ("" if worst_row is None else f" at point {worst_row['point']}"))
    if not ok:
        return 1
    return 3 if skipped else 0


# -- parser ------------------------------------------------------------


def _add_run_flags(sub, with_form: bool):
    sub.add_argument("--scenario", required=True, help="catalog name or JSON scenario file")
    if with_form:
        sub.add_argument("--form", required=True, choices=sorted(_FORM_DIMS))
    sub.add_argument("--points", type=int, default=None, help="number of sampled points")
    sub.add_argument("--seed", type=int, default=None)
    sub.add_argument("--provider", choices=("analytic", "fd"), default=None)
    sub.add_argument("--h", type=float, default=None, help="finite-difference first-derivative step")
    sub.add_argument("--kappa", type=float, default=None)
    sub.add_argument("--out", choices=("json", "csv", "text"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="octograv")
    parser.add_argument("--version", action="version", version=f"octograv {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    verify = subs.add_parser("verify-algebra", help="run every algebra and table invariant")
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("--out", choices=("json", "text"), default="text")
    verify.add_argument("--corrupt-table", choices=tables.TABLE_NAMES,
                        default=None, help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify_algebra)

    dump = subs.add_parser("dump-tables", help="print the nonzero entries of one table")
    dump.add_argument("--table", required=True, choices=tables.TABLE_NAMES)
    dump.add_argument("--out", choices=("json", "text"), default="text")
    dump.set_defaults(func=cmd_dump_tables)

    lag = subs.add_parser("lagrangian", help="evaluate one Lagrangian form over points")
    _add_run_flags(lag, with_form=True)
    lag.set_defaults(func=cmd_lagrangian)

    cross = subs.add_parser("crosscheck", help="compare the three 4D forms pointwise")
    _add_run_flags(cross, with_form=False)
    cross.set_defaults(func=cmd_crosscheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as ex:
        sys.stderr.write(f"error: {ex}\n")
        return 2
    except geometry.GeometryError as ex:
        sys.stderr.write(f"degeneracy: {ex}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
