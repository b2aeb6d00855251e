"""Command-line interface.

Subcommands: ``constants``, ``simulate``, ``limit``, ``compare``, ``validate``.
Exit codes: 0 ok, 1 validation failure, 2 bad input, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .errors import MaxDistError, RegionError
from .experiment import ExperimentConfig, limit_draws, run_experiment
from .limit_dist import DEFAULT_M
from .region import QUADRANTS, constants, region_from_config, validate
from .rng import MASK64
from .sampling import REGIMES
from .stats import ecdf, ks_distance, quantile

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3
QUANTILE_LEVELS = (0.1, 0.5, 0.9)


class InputError(Exception):
    pass


def _g17(v: float) -> str:
    return "nan" if math.isnan(v) else format(v, ".17g")


def _g6(v: float) -> str:
    return "nan" if math.isnan(v) else format(v, ".6g")


def _sig15(v: float) -> float:
    return float(format(v, ".15g"))


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def _dump_json(obj) -> str:
    return json.dumps(_json_safe(obj), indent=2, sort_keys=True) + "\n"


def _load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise InputError("config must be a JSON object")
    return cfg


def _region_cfg(args, cfg: dict) -> dict:
    """Region from flags, falling back to the config file; flags win."""
    region = dict(cfg.get("region", {}))
    if getattr(args, "a", None) is not None:
        region["a"] = args.a
    b = getattr(args, "b", None)
    if b is not None:
        if len(b) == 1:
            region.update(kind="ellipse", b=b[0])
        elif len(b) == 4:
            region.update(kind="quarter-ellipse", b=list(b))
        else:
            raise InputError("--b takes one value (ellipse) or four (quarter ellipse)")
    if not region:
        raise InputError("no region given: use --a/--b or a config file with a 'region' entry")
    if "kind" not in region:
        region["kind"] = "ellipse"
    for key in ("a", "b"):
        if key not in region:
            raise InputError(f"region is missing field {key!r}")
    if region["kind"] not in ("ellipse", "quarter-ellipse"):
        raise InputError(f"unknown region kind {region['kind']!r}")
    return region


def _pick(args, cfg, name, key=None, default=None):
    v = getattr(args, name, None)
    if v is not None:
        return v
    return cfg.get(key or name, default)


def _experiment_config(args, cfg: dict, regime_default="fixed-n") -> ExperimentConfig:
    region = _region_cfg(args, cfg)
    try:
        seed = int(_pick(args, cfg, "seed", default=0))
        ec = ExperimentConfig(
            region=region,
            n=int(_pick(args, cfg, "n", default=1000)),
            reps=int(_pick(args, cfg, "reps", default=5000)),
            m=int(_pick(args, cfg, "m", default=DEFAULT_M)),
            regime=_pick(args, cfg, "regime", default=regime_default),
            master_seed=seed,
            couple=bool(getattr(args, "couple", True)),
            threads=getattr(args, "threads", None),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    if ec.threads is not None and ec.threads < 1:
        raise InputError("--threads must be >= 1")
    ec.build_region()  # fail on invalid region before any work starts
    return ec


def cmd_constants(args) -> int:
    if args.q is not None or args.p is not None:
        if args.q is None or args.p is None:
            raise InputError("--q and --p must be given together")
        a = 1.0 if args.a is None else args.a
        entries = {i: (args.q, args.p) for i in QUADRANTS}
    else:
        region = region_from_config(_region_cfg(args, {}))
        a = region.a
        entries = {i: (region.q[i - 1], region.p[i - 1]) for i in QUADRANTS}
    out = {}
    for i, (q, p) in entries.items():
        c = constants(q, p, a)
        out[str(i)] = {k: _sig15(v) for k, v in
                       (("q", q), ("p", p), ("c", c.c), ("sigma", c.sigma), ("tau", c.tau))}
    sys.stdout.write(_dump_json(out))
    return EXIT_OK


def _write_csv(path: Path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())


def write_results(result, out_dir) -> None:
    """``samples.csv``, ``ecdf.csv`` and ``summary.json`` for one experiment."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    reps = result.config.reps
    rows = [(r, "empirical", _g17(result.empirical[r])) for r in range(reps)]
    rows += [(r, "limit", _g17(result.limit[r])) for r in range(reps)]
    _write_csv(out / "samples.csv", ("rep_index", "kind", "value"), rows)
    _write_csv(out / "ecdf.csv", ("t", "F_empirical", "F_limit"),
               [(_g6(t), _g6(fe), _g6(fl)) for t, fe, fl in
                zip(result.grid, result.F_empirical, result.F_limit)])
    summary = {
        "ks": result.ks,
        "quantiles": result.quantiles(QUANTILE_LEVELS),
        "dropped": len(result.dropped),
        "dropped_indices": result.dropped,
        "config": result.config.echo(),
        "seed": result.config.master_seed,
    }
    with open(out / "summary.json", "w", encoding="utf-8", newline="") as fh:
        fh.write(_dump_json(summary))


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    ec = _experiment_config(args, cfg)
    out = args.out or cfg.get("out") or "."
    _check_writable(out)
    result = run_experiment(ec)
    try:
        write_results(result, out)
    except OSError as exc:
        print(f"error: cannot write outputs to {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"ks={result.ks:.6g} dropped={len(result.dropped)} "
          f"wall_time={result.wall_time:.2f}s", file=sys.stderr)
    return EXIT_OK


def _check_writable(out):
    p = Path(out)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(p, os.W_OK):
        raise OSError(f"output directory {out} is not writable")


def cmd_limit(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    ec = _experiment_config(args, cfg)
    values = limit_draws(ec)
    rows = [(r, _g17(v)) for r, v in enumerate(values)]
    if args.out:
        try:
            parent = Path(args.out).parent
            parent.mkdir(parents=True, exist_ok=True)
            _write_csv(Path(args.out), ("rep_index", "value"), rows)
        except OSError as exc:
            print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(("rep_index", "value"))
        w.writerows(rows)
    return EXIT_OK


def _read_values(path, kind=None):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not rows or "value" not in rows[0]:
        raise InputError(f"{path} has no 'value' column")
    vals = [float(r["value"]) for r in rows if kind is None or r.get("kind") == kind]
    vals = np.asarray(vals, dtype=float)
    return vals[~np.isnan(vals)]


def cmd_compare(args) -> int:
    """KS distance and quantiles of two sample sets.

    One file: its ``empirical`` rows against its ``limit`` rows (a
    ``samples.csv``). Two files: their ``value`` columns.
    """
    if len(args.files) == 1:
        x = _read_values(args.files[0], "empirical")
        y = _read_values(args.files[0], "limit")
        names = ("empirical", "limit")
    elif len(args.files) == 2:
        x, y = (_read_values(f) for f in args.files)
        names = tuple(args.files)
    else:
        raise InputError("compare takes one samples.csv or two CSV files")
    if x.size == 0 or y.size == 0:
        raise InputError("both sample sets must be non-empty")
    e1, e2 = ecdf(x), ecdf(y)
    out = {
        "ks": ks_distance(e1, e2),
        "count": {names[0]: e1.count, names[1]: e2.count},
        "quantiles": {name: {f"{p:g}": quantile(e, p) for p in QUANTILE_LEVELS}
                      for name, e in zip(names, (e1, e2))},
    }
    sys.stdout.write(_dump_json(out))
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = _load_config(args.config) if args.config else {}
    region_cfg = _region_cfg(args, cfg)
    try:
        region = region_from_config(region_cfg)
    except RegionError as exc:
        print(f"FAIL {exc.assumption or 'region'}: {exc}")
        return EXIT_INVALID
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    report = validate(region)
    for line in report.lines():
        print(line)
    return EXIT_OK if report.ok else EXIT_INVALID


def _uint64(s: str) -> int:
    v = int(s, 0)
    if not 0 <= v <= MASK64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _positive_float(s: str) -> float:
    v = float(s)
    if not (v > 0.0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maxdist",
        description="Limit law of the largest interpoint distance in ellipse-like regions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def region_flags(p):
        p.add_argument("--a", type=_positive_float, help="half major axis")
        p.add_argument("--b", type=_positive_float, nargs="+",
                       help="semi-minor axis, or four per-quadrant values")
        p.add_argument("--config", help="JSON config file; flags override it")

    p = sub.add_parser("constants", help="print per-quadrant constants as JSON")
    p.add_argument("--a", type=_positive_float)
    p.add_argument("--b", type=_positive_float, nargs="+")
    p.add_argument("--q", type=float, help="shape constant (raw mode)")
    p.add_argument("--p", type=float, help="pole density (raw mode)")
    p.set_defaults(func=cmd_constants)

    def run_flags(p, with_n=True):
        region_flags(p)
        if with_n:
            p.add_argument("--n", type=_positive_int, help="nominal sample size / intensity")
            p.add_argument("--regime", choices=REGIMES)
        p.add_argument("--reps", type=_positive_int)
        p.add_argument("--m", type=_positive_int, help="truncation order")
        p.add_argument("--seed", type=_uint64, help="master seed")
        p.add_argument("--threads", type=_positive_int,
                       help="worker processes (default: available CPUs)")

    p = sub.add_parser("simulate", help="finite-n clouds against the truncated limit")
    run_flags(p)
    p.add_argument("--out", help="output directory")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("limit", help="truncated limit draws only")
    run_flags(p, with_n=False)
    p.add_argument("--couple", action="store_true",
                   help="share streams across truncation orders")
    p.add_argument("--out", help="output CSV file (default: stdout)")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("compare", help="KS distance between sample files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("validate", help="check region assumptions")
    region_flags(p)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, MaxDistError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        label = getattr(exc, "assumption", None)
        prefix = f"{label}: " if label else ""
        print(f"error: {prefix}{msg}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
