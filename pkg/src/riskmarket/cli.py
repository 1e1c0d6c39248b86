"""Command-line interface.

Commands: clear, verify, simulate, sweep, oracle-compare.  CSV outputs are
RFC-4180 (CRLF, header row) with numbers at 9 significant digits, and are
byte-for-byte deterministic given (scenario, flags, seed).  Whenever a
command writes delimited output it also renders a companion PNG next to it.
Every error path exits nonzero after printing a single
``error: <kind>: <reason>`` line on stderr.  Relative --out paths resolve
under $RISKMARKET_OUT_DIR when that variable is set.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path

import numpy as np

from . import oracles
from .equilibrium import (epsilon_sweep, equilibrium_prices, verify_equilibrium)
from .mechanism import BidRejectedError, simulate_runs
from .planner import kkt_residuals, solve_planner
from .risk import cvar_recourse
from .scenario import ScenarioError, load_scenario

KKT_TOLERANCE = 1e-6
EQUILIBRIUM_TOLERANCE = 1e-8
OUT_DIR_ENV = "RISKMARKET_OUT_DIR"


def _fmt(value) -> str:
    return format(float(value), ".9g")


def _resolve_out(raw: str) -> Path:
    path = Path(raw)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    if path.parent:
        path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _write_text(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


def _cmd_clear(args) -> int:
    cfg = load_scenario(args.scenario)
    inst = cfg.to_instance()
    sol = solve_planner(inst)
    prices = equilibrium_prices(sol, inst)
    pairs = [
        ("y_star", sol.y_star),
        ("theta_star", sol.theta_star),
        ("lambda_star", sol.lambda_star),
        ("objective", sol.objective),
        ("p1", prices.p1),
        ("p2_slope", prices.p2_slope),
        ("p2_intercept", prices.p2_intercept),
    ]
    pairs += [(f"x_star_{i + 1}", x) for i, x in enumerate(sol.x_star)]
    for key, value in pairs:
        print(f"{key}={_fmt(value)}")
    if args.out:
        out = _resolve_out(args.out)
        _write_text(out, _csv_text(["field", "value"],
                                   [[k, _fmt(v)] for k, v in pairs]))
        from .figures import render_clearing_figure
        render_clearing_figure(sol, prices, inst, out.with_suffix(".png"))
    return 0


def _cmd_verify(args) -> int:
    cfg = load_scenario(args.scenario)
    inst = cfg.to_instance()
    sol = solve_planner(inst)
    prices = equilibrium_prices(sol, inst)
    from .planner import default_w_grid
    grid = default_w_grid(inst, sol, cfg.w_grid_points)
    kkt = kkt_residuals(sol, inst, grid)
    report = verify_equilibrium(sol, prices, inst, grid)
    for key, value in kkt.as_dict().items():
        print(f"kkt_{key}={_fmt(value)}")
    print(f"kkt_max_residual={_fmt(kkt.max_residual)}")
    print(f"equilibrium_max_stage1_gap={_fmt(report.max_stage1_gap)}")
    print(f"equilibrium_max_stage2_gap={_fmt(report.max_stage2_gap)}")
    print(f"equilibrium_clearing_gap={_fmt(report.clearing_gap)}")
    print(f"equilibrium_stage2_clearing_gap={_fmt(report.stage2_clearing_gap)}")
    print(f"equilibrium_recourse_feasible={int(report.recourse_feasible)}")
    ok = (kkt.max_residual <= KKT_TOLERANCE
          and report.max_stage1_gap <= EQUILIBRIUM_TOLERANCE
          and report.max_stage2_gap <= EQUILIBRIUM_TOLERANCE
          and report.clearing_gap <= EQUILIBRIUM_TOLERANCE
          and report.stage2_clearing_gap <= EQUILIBRIUM_TOLERANCE
          and report.recourse_feasible)
    print(f"verify={'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _cmd_simulate(args) -> int:
    cfg = load_scenario(args.scenario)
    bids = [(g.a, g.a_tilde) for g in cfg.generators]
    rng = np.random.default_rng(args.seed)
    records, summary = simulate_runs(bids, cfg.demand, cfg.risk, cfg.dist,
                                     args.samples, rng)
    n_gen = len(cfg.generators)
    summary_pairs = [
        ("runs", summary.runs),
        ("seed", args.seed),
        ("mean_iso_outlay", summary.mean_iso_outlay),
        ("cvar_iso_outlay", summary.cvar_iso_outlay),
        ("mean_stage2_outlay", summary.mean_stage2_outlay),
    ]
    summary_pairs += [(f"mean_profit_{i + 1}", summary.mean_profit[i])
                      for i in range(n_gen)]
    for key, value in summary_pairs:
        print(f"{key}={_fmt(value)}")
    if args.out:
        out = _resolve_out(args.out)
        header = ["run", "w", "p2"]
        for i in range(1, n_gen + 1):
            header += [f"stage1_qty_{i}", f"stage1_payment_{i}",
                       f"stage2_qty_{i}", f"stage2_payment_{i}", f"profit_{i}"]
        header.append("iso_outlay")
        rows = []
        for run, rec in enumerate(records):
            row = [run, _fmt(rec.realized_w), _fmt(rec.p2_at_w)]
            for i in range(n_gen):
                row += [_fmt(rec.stage1_qty[i]), _fmt(rec.stage1_payment[i]),
                        _fmt(rec.stage2_qty[i]), _fmt(rec.stage2_payment[i]),
                        _fmt(rec.profit[i])]
            row.append(_fmt(rec.iso_outlay))
            rows.append(row)
        _write_text(out, _csv_text(header, rows))
        summary_path = out.with_name(out.stem + "_summary" + out.suffix)
        _write_text(summary_path,
                    _csv_text(["field", "value"],
                              [[k, _fmt(v)] for k, v in summary_pairs]))
        from .figures import render_simulation_figure
        render_simulation_figure(records, out.with_suffix(".png"))
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_scenario(args.scenario)
    inst = cfg.to_instance()
    if not 0.0 <= args.epsilon_from <= args.epsilon_to <= 1.0:
        raise ValueError("epsilon range must satisfy 0 <= from <= to <= 1")
    if args.steps < 2:
        raise ValueError("steps must be >= 2")
    grid = np.linspace(args.epsilon_from, args.epsilon_to, args.steps)
    points = epsilon_sweep(inst, grid)
    text = _csv_text(["epsilon", "y_star", "p1", "p2_slope", "p2_intercept"],
                     [[_fmt(p.epsilon), _fmt(p.y_star), _fmt(p.p1),
                       _fmt(p.p2_slope), _fmt(p.p2_intercept)] for p in points])
    if args.out:
        out = _resolve_out(args.out)
        _write_text(out, text)
        from .figures import render_sweep_figure
        render_sweep_figure(points, out.with_suffix(".png"))
    else:
        sys.stdout.write(text)
    return 0


def _cmd_oracle_compare(args) -> int:
    cfg = load_scenario(args.scenario)
    inst = cfg.to_instance()
    sol = solve_planner(inst)

    step = 1e-4
    reports = [oracles.OracleReport.build(
        "grid_search_y", sol.y_star, oracles.grid_search_y(inst, step),
        size=int(inst.demand / step) + 1)]

    mc = oracles.mc_cvar_recourse(sol.y_star, inst, args.samples,
                                  np.random.default_rng(args.seed))
    reports.append(oracles.OracleReport.build(
        "mc_cvar_recourse", cvar_recourse(sol.y_star, inst), mc,
        size=args.samples, seed=args.seed))

    _, saa_obj = oracles.saa_single_stage(inst, args.samples,
                                          np.random.default_rng(args.seed))
    reports.append(oracles.OracleReport.build(
        "saa_single_stage", sol.objective, saa_obj,
        size=args.samples, seed=args.seed))

    print(f"{'oracle':<18} {'analytic':>16} {'estimate':>16}"
          f" {'abs_gap':>16} {'rel_gap':>16} {'size':>9} {'seed':>6}")
    for rep in reports:
        seed = "-" if rep.seed is None else str(rep.seed)
        print(f"{rep.name:<18} {_fmt(rep.analytic):>16} {_fmt(rep.oracle):>16}"
              f" {_fmt(rep.abs_gap):>16} {_fmt(rep.rel_gap):>16}"
              f" {rep.size:>9} {seed:>6}")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line machine-parsable failures
        self.exit(2, f"error: usage: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="riskmarket",
                     description="Risk-aware two-stage market clearing")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("clear", help="solve the planner problem and price it")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_clear)

    p = sub.add_parser("verify", help="check optimality and equilibrium gaps")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("simulate", help="settle sampled output realizations")
    p.add_argument("--scenario", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="trace the solution along the risk weight")
    p.add_argument("--scenario", required=True)
    p.add_argument("--epsilon-from", type=float, required=True)
    p.add_argument("--epsilon-to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("oracle-compare", help="analytic vs brute-force values")
    p.add_argument("--scenario", required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=_cmd_oracle_compare)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        return _fail("scenario", exc)
    except BidRejectedError as exc:
        return _fail("bids", exc)
    except FileNotFoundError as exc:
        return _fail("io", exc)
    except OSError as exc:
        return _fail("io", exc)
    except ValueError as exc:
        return _fail("invalid", exc)


def _fail(kind: str, exc: Exception) -> int:
    print(f"error: {kind}: {exc}", file=sys.stderr)
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
