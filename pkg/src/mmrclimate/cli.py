"""Command line batch surface.

Subcommands: fit-baseline, solve, regret-table, mmr, tmax, sweep.
Configuration comes from --config, the MMRCLIMATE_CONFIG environment
variable, or the bundled default (which reproduces the published middle
case).  Exit codes: 0 success, 2 usage or configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import report
from .baseline import FormVariant, fit_baseline, load_emissions
from .config import RunConfig, bundled_data_path, load_config, save_config
from .economy import EconParams
from .errors import MmrClimateError, NoPeak, ParseError
from .regret import (
    Policy,
    build_policy_set,
    build_states,
    mmr_select,
    regret_matrix,
    sweep,
    tmax,
)
from .control import solve_optimal


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mmrclimate",
        description="Closed-form climate abatement control and "
                    "minimax-regret policy choice.",
    )
    parser.add_argument("--config", help="config file (default: "
                        "$MMRCLIMATE_CONFIG or the bundled default)")
    parser.add_argument("--output-dir", help="override the configured output directory")
    parser.add_argument("--no-timestamp", action="store_true",
                        help="omit the timestamp header from emitted files")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit-baseline", help="fit the baseline curve to an "
                       "emissions series and write the updated config")
    p.add_argument("--data", help="CSV with header year,emissions_gtc "
                   "(default: the configured series)")
    p.add_argument("--variant", choices=[v.value for v in FormVariant],
                   default=FormVariant.THETA_SCALED.value)
    p.add_argument("--write-config", help="where to write the updated config "
                   "(default: OUTPUT_DIR/fitted_config.ini)")

    p = sub.add_parser("solve", help="closed-form optimal paths for one "
                       "{delta, model} pair")
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--horizon", type=int, default=500, help="years of annual samples")

    p = sub.add_parser("regret-table", help="full regret matrix: CSV, "
                       "three-part table, SVG heatmap")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)

    p = sub.add_parser("mmr", help="print the minimax-regret policy")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)

    p = sub.add_parser("tmax", help="peak temperature of a policy under "
                       "every ensemble model")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--delta", type=float, help="policy provenance rate "
                   "(default: the MMR policy)")
    p.add_argument("--model", help="policy provenance model")
    p.add_argument("--no-abatement", action="store_true",
                   help="evaluate the passive benchmark instead")

    sub.add_parser("sweep", help="MMR selection and peak warming over the "
                   "configured (alpha, beta) grid")
    return parser


def _with_econ(config: RunConfig, alpha, beta):
    if alpha is None and beta is None:
        return config
    econ = EconParams(alpha=alpha if alpha is not None else config.econ.alpha,
                      beta=beta if beta is not None else config.econ.beta)
    from dataclasses import replace
    return replace(config, econ=econ)


def _outdir(args, config) -> str:
    path = args.output_dir or config.output_dir
    os.makedirs(path, exist_ok=True)
    return path


def _write(path: str, content: str):
    with open(path, "w", newline="") as fh:
        fh.write(content)
    print(f"wrote {path}")


def _resolve_data(config: RunConfig, override) -> str:
    path = override or config.data_file
    if os.path.exists(path):
        return path
    bundled = bundled_data_path(path)
    if os.path.exists(bundled):
        return bundled
    raise ParseError(f"no such data file: {path}")


def cmd_fit_baseline(args, config: RunConfig) -> int:
    outdir = _outdir(args, config)
    series = load_emissions(_resolve_data(config, args.data), config.start_year)
    params = fit_baseline(series, FormVariant(args.variant))
    stamp = not args.no_timestamp
    _write(os.path.join(outdir, "fit_report.txt"),
           report.fit_report(params, series, timestamp=stamp))
    target = args.write_config or os.path.join(outdir, "fitted_config.ini")
    save_config(config.with_baseline(params), target)
    print(f"wrote {target}")
    print(f"fit: theta={params.theta:.6g} phi={params.phi:.6g} "
          f"b0={params.b0:.6g} r_squared={params.r_squared:.4f}")
    return 0


def cmd_solve(args, config: RunConfig) -> int:
    outdir = _outdir(args, config)
    model = config.model(args.model)
    scenario = config.to_scenario()
    sol = solve_optimal(args.delta, model, scenario)
    name = f"solution_d{args.delta:g}_{model.name}.csv"
    _write(os.path.join(outdir, name),
           report.solution_csv(sol, scenario, horizon_years=args.horizon,
                               timestamp=not args.no_timestamp))
    print(f"J* = {sol.j_star:.6f} (percent of present value of output)")
    print(f"roots: lam+ = {sol.roots.lam_plus:.6f}, lam- = {sol.roots.lam_minus:.6f}")
    return 0


def _matrix_for(config: RunConfig):
    scenario = config.to_scenario()
    states = build_states(config.deltas, config.ensemble)
    policies = build_policy_set(config.deltas, config.ensemble, scenario)
    return regret_matrix(policies, states, scenario), scenario


def cmd_regret_table(args, config: RunConfig) -> int:
    config = _with_econ(config, args.alpha, args.beta)
    outdir = _outdir(args, config)
    matrix, _ = _matrix_for(config)
    stamp = not args.no_timestamp
    if "csv" in config.formats:
        _write(os.path.join(outdir, "regret_matrix.csv"),
               report.matrix_csv(matrix, timestamp=stamp))
    if "txt" in config.formats:
        _write(os.path.join(outdir, "regret_table.txt"),
               report.matrix_table(matrix, timestamp=stamp))
    if "svg" in config.formats:
        _write(os.path.join(outdir, "regret_heatmap.svg"),
               report.svg_heatmap(matrix, timestamp=stamp))
    policy, value = mmr_select(matrix)
    print(f"minimax regret: {policy.label()} (max regret {value:.3f})")
    return 0


def cmd_mmr(args, config: RunConfig) -> int:
    config = _with_econ(config, args.alpha, args.beta)
    matrix, _ = _matrix_for(config)
    policy, value = mmr_select(matrix)
    print(f"alpha={config.econ.alpha:g} beta={config.econ.beta:g}")
    print(f"minimax-regret policy: {policy.label()}")
    print(f"maximum regret: {value:.6f}")
    return 0


def cmd_tmax(args, config: RunConfig) -> int:
    config = _with_econ(config, args.alpha, args.beta)
    outdir = _outdir(args, config)
    scenario = config.to_scenario()
    if args.no_abatement:
        policy = Policy.no_abatement()
    elif args.delta is not None or args.model is not None:
        if args.delta is None or args.model is None:
            raise ParseError("--delta and --model must be given together")
        sol = solve_optimal(args.delta, config.model(args.model), scenario)
        policy = Policy.from_solution(sol)
    else:
        matrix, _ = _matrix_for(config)
        policy, _ = mmr_select(matrix)
    print(f"policy: {policy.label()}")

    lines = ["model,ccr,years_to_peak,tmax_degc"]
    for model in config.ensemble:
        try:
            years, peak = tmax(policy, model, scenario,
                               root_tol=config.tolerances.root_tol)
            print(f"  {model.name:<6} peak in {years:7.1f} years, "
                  f"Tmax = {peak:.3f} degC")
            lines.append(f"{model.name},{model.ccr!r},{years:.1f},{peak!r}")
        except NoPeak as exc:
            note = ("" if exc.asymptote_degc is None
                    else f" (asymptote {exc.asymptote_degc:.2f} degC)")
            print(f"  {model.name:<6} no peak: emissions keep rising{note}")
            lines.append(f"{model.name},{model.ccr!r},,"
                         + ("" if exc.asymptote_degc is None
                            else repr(exc.asymptote_degc)))
    stamp = "" if args.no_timestamp else report._stamp(True)
    _write(os.path.join(outdir, "tmax.csv"), stamp + "\n".join(lines) + "\n")
    return 0


def cmd_sweep(args, config: RunConfig) -> int:
    outdir = _outdir(args, config)
    scenario = config.to_scenario()
    alpha_grid, beta_grid = config.scaled_grids()
    rep = sweep(alpha_grid, beta_grid, config.deltas,
                config.ensemble, scenario)
    stamp = not args.no_timestamp
    _write(os.path.join(outdir, "sweep_summary.csv"),
           report.sweep_csv(rep, timestamp=stamp))
    _write(os.path.join(outdir, "sweep_mmr.txt"),
           report.sweep_table_mmr(rep, timestamp=stamp))
    _write(os.path.join(outdir, "sweep_tmax.txt"),
           report.sweep_table_tmax(rep, timestamp=stamp))
    chosen = {c.policy_delta for c in rep.cells}
    print(f"MMR discount rate(s) selected across the grid: "
          f"{sorted(chosen)}")
    return 0


_COMMANDS = {
    "fit-baseline": cmd_fit_baseline,
    "solve": cmd_solve,
    "regret-table": cmd_regret_table,
    "mmr": cmd_mmr,
    "tmax": cmd_tmax,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        return _COMMANDS[args.command](args, config)
    except MmrClimateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
