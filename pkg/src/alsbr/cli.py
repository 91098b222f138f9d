"""Command line entry point: ``alsbr sweep | figure | validate``.

Output files default to the directory named by ``ALSBR_OUTPUT_DIR`` (or the
current directory).  Flags override values read from ``--config``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .errors import DomainError
from .experiments import (
    OUTPUT_DIR_ENV,
    ExperimentConfig,
    default_output_dir,
    load_config,
    parse_snr,
    parse_values,
    reproduce_figure,
    run_sweep,
)


def _add_common(p):
    p.add_argument("--seed", type=int, help="base seed of the simulation streams")
    p.add_argument("--slots", type=int, help="simulated slots per point")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (rows stay in sweep order)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="alsbr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate a geometry sweep and write a CSV")
    sw.add_argument("--config", help="INI-style config file")
    sw.add_argument("--output", "-o", help=f"CSV path (relative paths go under ${OUTPUT_DIR_ENV})")
    sw.add_argument("--gamma-max", help="peak-power SNR, e.g. '30 dB' or '1000 linear'")
    sw.add_argument("--gamma-p", help="interference-limit SNR, e.g. '10 dB'")
    sw.add_argument("--alpha", type=float, help="path-loss exponent")
    sw.add_argument("--d-sp", help="SS-PD distances: list '1,2,4' or range 'start:stop:step'")
    sw.add_argument("--d-rp", help="SR-PD distances")
    sw.add_argument("--schemes", help="comma list out of alsbr,cubr,cbr")
    sw.add_argument("--monte-carlo", action="store_true", default=None, help="add simulated rates")
    sw.add_argument("--rate-tolerance", type=float, help="solver tolerance in bits/slot")
    _add_common(sw)

    fg = sub.add_parser("figure", help="write the dataset behind figure 2, 3, 4 or 5")
    fg.add_argument("figure", type=int, choices=(2, 3, 4, 5))
    fg.add_argument("--output", "-o", help="CSV path (default figN.csv)")
    fg.add_argument("--monte-carlo", action="store_true", default=None, help="add simulated rates")
    _add_common(fg)

    va = sub.add_parser("validate", help="run acceptance checks; exit status 1 on any failure")
    va.add_argument("suite", nargs="?", default="all", choices=("oracle", "montecarlo", "asymptotic", "all"))
    va.add_argument("--output", "-o", help="write the JSON report here instead of stdout")
    va.add_argument("--seed", type=int)
    va.add_argument("--slots", type=int, help="Monte Carlo slots")
    va.add_argument("--oracle-rel-tol", type=float)
    va.add_argument("--mc-rel-tol", type=float)
    va.add_argument("--mc-sigmas", type=float)
    va.add_argument("--ccdf-abs-tol", type=float)
    va.add_argument("--asym-rel-tol", type=float)
    return parser


def _resolve_output(path, fallback):
    path = Path(path or fallback)
    return path if path.is_absolute() else default_output_dir() / path


def _sim_changes(args):
    out = {}
    if args.seed is not None:
        out["seed"] = args.seed
    if args.slots is not None:
        out["slots"] = args.slots
    return out


def _sweep(args) -> int:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    changes = {}
    if args.gamma_max:
        changes["gamma_max_db"] = parse_snr(args.gamma_max)
    if args.gamma_p:
        changes["gamma_p_db"] = parse_snr(args.gamma_p)
    if args.alpha is not None:
        changes["alpha"] = args.alpha
    if args.d_sp:
        changes["d_sp"] = parse_values(args.d_sp)
        changes["d_sp_ratio"] = None
    if args.d_rp:
        changes["d_rp"] = parse_values(args.d_rp)
    if args.schemes:
        changes["schemes"] = tuple(s.strip().lower() for s in args.schemes.split(",") if s.strip())
    if args.monte_carlo is not None:
        changes["monte_carlo"] = True
    if args.rate_tolerance is not None:
        changes["solver"] = dataclasses.replace(cfg.solver, rate_tolerance=args.rate_tolerance)
    sim = _sim_changes(args)
    if sim:
        changes["simulation"] = dataclasses.replace(cfg.simulation, **sim)
    cfg = dataclasses.replace(cfg, **changes)
    out = _resolve_output(args.output or cfg.output, "sweep.csv")
    rows = run_sweep(cfg, jobs=args.jobs, path=out)
    failed = sum(r.status != "ok" for r in rows)
    print(f"wrote {len(rows)} rows to {out}" + (f" ({failed} rows with solver failures)" if failed else ""))
    return 0


def _figure(args) -> int:
    overrides = {}
    if args.monte_carlo:
        overrides["monte_carlo"] = True
    sim = _sim_changes(args)
    if sim:
        overrides["simulation"] = dataclasses.replace(ExperimentConfig().simulation, **sim)
    out = _resolve_output(args.output, f"fig{args.figure}.csv")
    rows = reproduce_figure(args.figure, path=out, jobs=args.jobs, **overrides)
    print(f"wrote {len(rows)} rows to {out}")
    return 0


def _validate(args) -> int:
    from .validation import Settings, validate

    fields = {
        "seed": args.seed, "mc_slots": args.slots, "oracle_rel_tol": args.oracle_rel_tol,
        "mc_rel_tol": args.mc_rel_tol, "mc_sigmas": args.mc_sigmas, "ccdf_abs_tol": args.ccdf_abs_tol,
        "asym_rel_tol": args.asym_rel_tol,
    }
    settings = Settings(**{k: v for k, v in fields.items() if v is not None})
    report = validate(args.suite, settings)
    text = json.dumps(report, indent=2)
    if args.output:
        out = _resolve_output(args.output, "validation.json")
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding="utf-8")
        print(f"wrote report to {out}")
    else:
        print(text)
    for line in report["summary"]:
        print(line, file=sys.stderr)
    return 0 if report["passed"] else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return {"sweep": _sweep, "figure": _figure, "validate": _validate}[args.command](args)
    except (DomainError, OSError) as exc:
        print(f"alsbr: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
