"""Command-line interface: spectrum, potential, perturb, shift, vacuum, sweep-q, check.

Every run resolves a full configuration (defaults < config file < flags),
echoes it into all outputs, and writes CSV and/or JSON.  CSV files start with
a `# config {...}` comment line so any table can be reproduced from itself;
floats are printed with 17 significant digits (round-trip exact).

Exit codes: 0 success, 2 config/validation error (including band-edge
rejections), 3 numerical-tolerance failure, 4 invariant-check failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .basis import ModeLabel, free_mode
from .checks import run_checks
from .config import RunConfig, load_config_file, resolve_config
from .drive import sample_potential
from .errors import ConfigError, FitError, ToleranceError
from .evolution import evolve_mode, record_from_state
from .perturbation import analytic_limit, delta_e2, delta_e2_via_amplitudes, partial_vacuum_sum
from .vacuum import q_scaling_fit, vacuum_shift_analytic, vacuum_shift_numeric

log = logging.getLogger("dirac_vacuum")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_CHECK = 4


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _parse_label(text: str) -> ModeLabel:
    try:
        sign_s, r_s = text.replace("(", "").replace(")", "").split(",")
        label = ModeLabel(int(sign_s), int(r_s))
    except Exception as exc:
        raise ConfigError(f"cannot parse mode label {text!r}; expected SIGN,R like -1,0") from exc
    if label.sign not in (-1, 1):
        raise ConfigError(f"mode label sign must be +1 or -1, got {label.sign}")
    return label


def _config_comment(cfg: RunConfig) -> str:
    return "# config " + json.dumps(cfg.echo(), sort_keys=True, separators=(",", ":"))


def _csv_text(cfg: RunConfig, header: list[str], rows: list[tuple]) -> str:
    lines = [_config_comment(cfg), ",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _envelope(cfg: RunConfig, payload: dict) -> dict:
    return {
        "tool": "dirac-vacuum",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "config": cfg.echo(),
        "payload": payload,
    }


def _emit(cfg: RunConfig, payload: dict, header: list[str] | None, rows: list[tuple] | None) -> None:
    want_json = cfg.format in ("json", "both")
    want_csv = cfg.format in ("csv", "both") and header is not None
    json_text = json.dumps(_envelope(cfg, payload), indent=2) + "\n"
    csv_text = _csv_text(cfg, header, rows) if want_csv else None
    if cfg.output is None:
        if cfg.format == "both" and want_csv:
            raise ConfigError("format=both requires --output to name the files")
        sys.stdout.write(csv_text if cfg.format == "csv" and csv_text else json_text)
        return
    base = Path(cfg.output)
    base.parent.mkdir(parents=True, exist_ok=True)
    if want_json:
        base.with_suffix(".json").write_text(json_text)
        log.info("wrote %s", base.with_suffix(".json"))
    if want_csv:
        base.with_suffix(".csv").write_text(csv_text)
        log.info("wrote %s", base.with_suffix(".csv"))


# ---------------------------------------------------------------- commands


def cmd_spectrum(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    rows = []
    for r in range(-cfg.r_max, cfg.r_max + 1):
        for sign in (-1, 1):
            mode = free_mode(ModeLabel(sign, r), params)
            rows.append((sign, r, mode.p, mode.energy, mode.eps))
    payload = {
        "rows": [
            {"sign": s, "r": r, "p": p, "energy": e, "eps": eps}
            for (s, r, p, e, eps) in rows
        ]
    }
    _emit(cfg, payload, ["sign", "r", "p", "energy", "eps"], rows)
    return EXIT_OK


def cmd_potential(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    t_max = args.t_max if args.t_max is not None else 20.0 / params.m
    zs = np.linspace(-params.L / 2, params.L / 2, args.nz)
    ts = np.linspace(-t_max, t_max, args.nt)
    rows = [
        (float(z), float(t), float(sample_potential(float(z), float(t), params)))
        for z in zs
        for t in ts
    ]
    payload = {"n_rows": len(rows), "t_max": t_max, "nz": args.nz, "nt": args.nt}
    _emit(cfg, payload, ["z", "t", "V"], rows)
    return EXIT_OK


def cmd_perturb(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    rows = []
    for r in range(-cfg.r_max, cfg.r_max + 1):
        label = ModeLabel(-1, r)
        rows.append(
            (
                r,
                delta_e2(label, params),
                delta_e2_via_amplitudes(label, params, cfg.margin),
                partial_vacuum_sum(r, params) if r >= params.w else None,
            )
        )
    payload = {
        "limit_per_q2": analytic_limit(params),
        "limit": params.q**2 * analytic_limit(params),
        "partial_sums_per_q2": [[R, partial_vacuum_sum(R, params)] for R in cfg.r_list],
    }
    _emit(cfg, payload, ["r", "delta_e2", "via_amplitudes", "partial_sum"], rows)
    return EXIT_OK


def cmd_shift(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    base = _parse_label(args.base)
    state = evolve_mode(
        base, params, cfg.grid(), cfg.band, cfg.margin, n_samples=args.series
    )
    record = record_from_state(state)
    payload = asdict(record)
    header = rows = None
    if args.series > 0:
        labels = state.trunc.labels
        header = ["t", "norm"] + [f"prob_{lab.sign}_{lab.r}" for lab in labels]
        probs = np.abs(state.history_c) ** 2
        rows = [
            (float(t), float(probs[:, i].sum()), *(float(p) for p in probs[:, i]))
            for i, t in enumerate(state.history_t)
        ]
    _emit(cfg, payload, header, rows)
    return EXIT_OK


def cmd_vacuum(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    if args.mode == "analytic":
        report = vacuum_shift_analytic(params, cfg.r_list)
    else:
        report = vacuum_shift_numeric(
            params, cfg.r_sum, cfg.grid(), cfg.band, cfg.margin, workers=cfg.workers
        )
    payload = asdict(report)
    limit = report.limit_analytic
    rows = [
        (R, value, limit, abs(value - limit) / abs(limit) if limit != 0.0 else 0.0)
        for (R, value) in report.partial_sums
    ]
    _emit(cfg, payload, ["R", "partial_sum", "limit", "rel_error_vs_limit"], rows)
    return EXIT_OK


def cmd_sweep_q(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    base = _parse_label(args.base)
    fit = q_scaling_fit(
        params, cfg.q_list, base, cfg.grid(), cfg.band, cfg.margin,
        include_negated=not args.no_negated,
    )
    payload = {
        "exponent": fit.exponent,
        "coefficient": fit.coefficient,
        "expected_coefficient": delta_e2(base, params),
        "odd_fraction": fit.odd_fraction,
        "records": [asdict(r) for r in fit.records],
    }
    rows = []
    for i, rec in enumerate(fit.records):
        neg = fit.records_negated[i].delta_e_numeric if fit.records_negated else None
        rows.append((rec.q, rec.delta_e_numeric, rec.delta_e_numeric / rec.q**2, neg))
    _emit(cfg, payload, ["q", "delta_e", "delta_e_per_q2", "delta_e_negated"], rows)
    return EXIT_OK


def cmd_check(cfg: RunConfig, args) -> int:
    params = cfg.physical()
    results = run_checks(params, short_T=args.short_T)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f"  ({r.detail})" if r.detail else ""
        print(f"{status}  {r.name:<{width}}  value={r.value:.3e}  bound={r.bound:.3e}{extra}")
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} invariant checks passed")
    if cfg.output is not None:
        payload = {"results": [asdict(r) for r in results], "n_failed": n_fail}
        rows = [(r.name, int(r.passed), r.value, r.bound) for r in results]
        _emit(cfg, payload, ["name", "passed", "value", "bound"], rows)
    return EXIT_OK if n_fail == 0 else EXIT_CHECK


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (or a previously emitted report)")
    p.add_argument("--L", type=float, help="box length")
    p.add_argument("--m", type=float, help="fermion mass")
    p.add_argument("--q", type=float, help="coupling constant")
    p.add_argument("--w", type=int, help="drive harmonic (k_w = 2*pi*w/L)")
    p.add_argument("--T", type=float, help="integration half-window (default 500/m)")
    p.add_argument("--dt", type=float, help="fixed RK4 step; 0 = contract step; unset = adaptive")
    p.add_argument("--rtol", type=float, help="adaptive relative tolerance")
    p.add_argument("--atol", type=float, help="adaptive absolute tolerance")
    p.add_argument("--band", type=int, help="truncation half-width B in w-hops")
    p.add_argument("--margin", type=float, help="band-edge rejection margin (default 0.05*m)")
    p.add_argument("--r-max", type=int, help="max |r| for tables")
    p.add_argument("--r-sum", type=int, help="mode cutoff for numeric vacuum sums")
    p.add_argument("--r-list", type=lambda s: [int(x) for x in s.split(",")],
                   help="comma-separated cutoffs for analytic partial sums")
    p.add_argument("--q-list", type=lambda s: [float(x) for x in s.split(",")],
                   help="comma-separated couplings for sweep-q")
    p.add_argument("--workers", type=int, help="process fan-out for numeric vacuum sums")
    p.add_argument("--format", choices=["csv", "json", "both"], help="output format")
    p.add_argument("--output", help="output base path (suffixes .json/.csv added)")
    p.add_argument("-v", "--verbose", action="count", default=0, dest="verbosity_flag",
                   help="log progress to stderr (-vv for debug)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac-vacuum",
        description="Vacuum energy extraction from the 1+1D Dirac sea by a bandlimited drive",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="free-mode table (sign, r, p, E, eps)")
    _add_common(sp)
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("potential", help="sample V(z, t) on a grid for plotting")
    _add_common(sp)
    sp.add_argument("--nz", type=int, default=33)
    sp.add_argument("--nt", type=int, default=41)
    sp.add_argument("--t-max", type=float, default=None, help="time half-range (default 20/m)")
    sp.set_defaults(func=cmd_potential)

    sp = sub.add_parser("perturb", help="closed-form shift tables and partial sums")
    _add_common(sp)
    sp.set_defaults(func=cmd_perturb)

    sp = sub.add_parser("shift", help="evolve one mode and measure its energy shift")
    _add_common(sp)
    sp.add_argument("--base", default="-1,0", help="mode label SIGN,R (use --base=-1,0)")
    sp.add_argument("--series", type=int, default=0,
                    help="emit a CSV time series with this many samples")
    sp.set_defaults(func=cmd_shift)

    sp = sub.add_parser("vacuum", help="sum negative-branch shifts into a vacuum report")
    _add_common(sp)
    sp.add_argument("--mode", choices=["analytic", "numeric"], default="analytic")
    sp.set_defaults(func=cmd_vacuum)

    sp = sub.add_parser("sweep-q", help="fit the power law of shift vs coupling")
    _add_common(sp)
    sp.add_argument("--base", default="-1,0", help="mode label SIGN,R (use --base=-1,0)")
    sp.add_argument("--no-negated", action="store_true",
                    help="skip the -q runs used to bound the odd component")
    sp.set_defaults(func=cmd_sweep_q)

    sp = sub.add_parser("check", help="run the invariant suite; nonzero exit on failure")
    _add_common(sp)
    sp.add_argument("--short-T", type=float, default=50.0,
                    help="half-window for the quick unitarity run")
    sp.set_defaults(func=cmd_check)

    return parser


_CONFIG_FLAGS = [
    "L", "m", "q", "w", "T", "dt", "rtol", "atol", "band", "margin",
    "r_max", "r_sum", "r_list", "q_list", "workers", "format", "output",
]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        file_values = load_config_file(args.config) if args.config else None
        overrides = {k: getattr(args, k) for k in _CONFIG_FLAGS}
        if args.verbosity_flag:
            overrides["verbosity"] = args.verbosity_flag
        cfg = resolve_config(file_values, overrides)
        logging.basicConfig(
            stream=sys.stderr,
            level=logging.DEBUG if cfg.verbosity > 1 else logging.INFO if cfg.verbosity else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        return args.func(cfg, args)
    except ConfigError as exc:  # includes BandEdgeError
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ToleranceError, FitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
