"""Solve the bundled one-day system with and without its demand sink.

Shows the full pipeline: ingest, assemble, solve, certify, report.  The sink
consumes cheap midday solar, so the comparison shows extra solar capacity and
a sink electricity price well below the load-weighted average.
"""

from pathlib import Path

from sinkplan import load_config, report, solve_scenario

config = Path(__file__).resolve().parent.parent / "configs" / "tiny"
scenario, _ = load_config(config)

base = solve_scenario(scenario.without_sink())
ref = report(base)
print(f"reference: objective {base.objective:,.0f} $  "
      f"avg price {ref.average_price:.2f} $/MWh")
print(f"  capacity: {ref.capacity_by_group}")

solved = solve_scenario(scenario)
rep = report(solved, reference=ref)
print(f"\nwith sink: objective {solved.objective:,.0f} $  "
      f"avg price {rep.average_price:.2f} $/MWh")
print(f"  sink capacity {rep.sink_capacity_mw:,.1f} MW "
      f"({rep.sink_capacity_fraction_of_peak:.1%} of peak), "
      f"utilization {rep.sink_capacity_factor:.1%}")
print(f"  sink pays {rep.sink_weighted_price:.2f} $/MWh vs "
      f"{rep.average_price:.2f} $/MWh system average")
print(f"  solar capacity delta {rep.delta_capacity_by_group['solar']:,.1f} MW")
print(f"  certification: residual {solved.report_card.max_row_residual:.1e}, "
      f"gap {solved.report_card.duality_gap:.1e}")

print("\nhourly prices with the sink:")
zones, prices = solved.price_matrix()
for t in range(scenario.time.n_hours):
    bar = "#" * int(prices[0, t] / 2)
    print(f"  h{t:02d} {prices[0, t]:8.2f}  {bar}")
