"""Command-line entry point.

    sinkplan validate <config>
    sinkplan solve <config> [--no-sink] [--mps-out DIR]
                   [--solver internal|external --sol-in FILE]
    sinkplan sweep <config> [--grid FILE] [--threads N] [--out DIR] [--mps-only]
    sinkplan convert (--price X | --value X) --efficiency E [--vom V] [--ts T]
    sinkplan curve --annual-load MWH --base-price B [curve options]
    sinkplan certify <mps> <sol>

SINKPLAN_THREADS sets the default worker count for sweep.
"""

import argparse
import sys
from pathlib import Path

from .config_io import ConfigError, config_hash, load_config, load_grid
from .econ import DemandCurveSpec, TechSpec, build_demand_curve, output_value, \
    product_price
from .formulation import assemble
from .metrics import report
from .model import validate
from .mps import parse_mps, read_external_solution, write_mps, \
    write_solution_text
from .lp import certify
from .runner import Solved, solve_scenario
from .sweep import default_parallelism, emit, run_sweep, write_cell_mps


def _print_report(rep):
    for key, val in rep.to_row().items():
        print(f"{key} = {val}")


def cmd_validate(args):
    scenario, _ = load_config(args.config)
    violations = validate(scenario)
    if violations:
        for v in violations:
            print(str(v))
        return 1
    print(f"{scenario.name}: OK ({len(scenario.zones)} zones, "
          f"{len(scenario.clusters)} clusters, {scenario.time.n_hours} hours)")
    return 0


def cmd_solve(args):
    scenario, _ = load_config(args.config)
    if args.no_sink:
        scenario = scenario.without_sink()
    if args.mps_out:
        lp, _ = assemble(scenario)
        out = Path(args.mps_out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{scenario.name}.mps"
        path.write_text(write_mps(lp))
        print(f"wrote {path}")
        if args.mps_only:
            return 0
    if args.solver == "external":
        if not args.sol_in:
            print("--solver external needs --sol-in FILE", file=sys.stderr)
            return 2
        lp, vmap = assemble(scenario)
        solution = read_external_solution(lp, args.sol_in, args.sol_in)
        solved = Solved(scenario, lp, vmap, solution)
    else:
        solved = solve_scenario(scenario)
    if solved.status != "optimal":
        print(f"status = {solved.status}")
        return 1
    rep = report(solved)
    _print_report(rep)
    if args.sol_out:
        Path(args.sol_out).write_text(
            write_solution_text(solved.lp, solved.solution))
        print(f"wrote {args.sol_out}")
    return 0


def cmd_sweep(args):
    scenario, grid = load_config(args.config)
    if args.grid:
        grid = load_grid(args.grid)
    if grid is None:
        print("no sweep grid: add sweep.txt to the config or pass --grid",
              file=sys.stderr)
        return 2
    digest = config_hash(args.config)
    out = Path(args.out or "sweep_out")
    if args.mps_only:
        paths = write_cell_mps(scenario, grid, out)
        print(f"wrote {len(paths)} MPS files under {out / 'mps'}")
        return 0
    threads = args.threads if args.threads else default_parallelism()
    result = run_sweep(scenario, grid, parallelism=threads)
    path = emit(result, out, include_mps=args.mps, scenario=scenario,
                config_digest=digest)
    failed = [c for c in result.cells if c.status != "optimal"]
    print(f"wrote {path} ({len(result.cells)} cells, {len(failed)} failed)")
    return 0 if not failed else 1


def cmd_convert(args):
    tech = TechSpec(efficiency=args.efficiency, vom=args.vom,
                    transport_storage=args.ts)
    if args.price is not None:
        print(f"value_usd_per_mwh = {output_value(args.price, tech)!r}")
    else:
        print(f"price_usd_per_unit = {product_price(args.value, tech)!r}")
    return 0


def cmd_curve(args):
    spec = DemandCurveSpec(
        anchor_price=args.anchor_price,
        anchor_quantity_fraction=args.anchor_fraction,
        elasticity=args.elasticity,
        segment_fraction=args.segment_fraction,
        base_price=args.base_price,
    )
    print("index,max_supply_mwh,value_usd_per_mwh")
    for seg in build_demand_curve(spec, args.annual_load):
        print(f"{seg.index},{seg.max_supply!r},{seg.value!r}")
    return 0


def cmd_certify(args):
    lp = parse_mps(Path(args.mps).read_text())
    solution = read_external_solution(lp, args.sol, args.sol)
    rep = certify(lp, solution)
    print(f"status = {solution.status}")
    print(f"objective = {solution.objective!r}")
    print(f"max_row_residual = {rep.max_row_residual!r}")
    print(f"max_bound_violation = {rep.max_bound_violation!r}")
    print(f"duality_gap = {rep.duality_gap!r}")
    print(f"max_complementarity = {rep.max_complementarity!r}")
    print(f"worst_row = {rep.worst_row_name}")
    return 0 if rep.within(1e-6) else 1


def main(argv=None):
    p = argparse.ArgumentParser(prog="sinkplan", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check a config directory")
    sp.add_argument("config")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("solve", help="solve one scenario and print metrics")
    sp.add_argument("config")
    sp.add_argument("--no-sink", action="store_true")
    sp.add_argument("--mps-out", default=None, metavar="DIR")
    sp.add_argument("--mps-only", action="store_true",
                    help="with --mps-out: write the LP and stop")
    sp.add_argument("--solver", choices=("internal", "external"),
                    default="internal")
    sp.add_argument("--sol-in", default=None, metavar="FILE")
    sp.add_argument("--sol-out", default=None, metavar="FILE")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("sweep", help="run a capex x base-price sweep")
    sp.add_argument("config")
    sp.add_argument("--grid", default=None, metavar="FILE")
    sp.add_argument("--threads", type=int, default=0)
    sp.add_argument("--out", default=None, metavar="DIR")
    sp.add_argument("--mps", action="store_true",
                    help="also write per-cell MPS files")
    sp.add_argument("--mps-only", action="store_true",
                    help="write per-cell MPS files and skip solving")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("convert", help="product price <-> per-MWh value")
    grp = sp.add_mutually_exclusive_group(required=True)
    grp.add_argument("--price", type=float, default=None)
    grp.add_argument("--value", type=float, default=None)
    sp.add_argument("--efficiency", type=float, required=True,
                    help="product units per MWh of input")
    sp.add_argument("--vom", type=float, default=0.0)
    sp.add_argument("--ts", type=float, default=0.0,
                    help="transport and storage cost per unit")
    sp.set_defaults(func=cmd_convert)

    sp = sub.add_parser("curve", help="print the stepwise demand curve")
    sp.add_argument("--annual-load", type=float, required=True, metavar="MWH")
    sp.add_argument("--base-price", type=float, required=True)
    sp.add_argument("--anchor-price", type=float, default=50.0)
    sp.add_argument("--anchor-fraction", type=float, default=0.20)
    sp.add_argument("--elasticity", type=float, default=-0.8)
    sp.add_argument("--segment-fraction", type=float, default=0.01)
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("certify", help="check an external solution file")
    sp.add_argument("mps")
    sp.add_argument("sol")
    sp.set_defaults(func=cmd_certify)

    args = p.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
