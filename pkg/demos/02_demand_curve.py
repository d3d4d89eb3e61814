"""Build the stepwise product demand curve for a few base prices.

With the default settings (-0.8 elasticity anchored at $50/MWh and 20% of
annual load, 1% segments) adjacent segments are exactly $3.125 apart.  Lower
base prices keep only the positive-value tail.
"""

from sinkplan import DemandCurveSpec, build_demand_curve
from dataclasses import replace

ANNUAL_LOAD = 234e6  # MWh/yr

spec = DemandCurveSpec()
for base in (50.0, 10.0, -15.0):
    segs = build_demand_curve(replace(spec, base_price=base), ANNUAL_LOAD)
    vals = [s.value for s in segs]
    print(f"base price {base:>6.1f}: {len(segs):2d} segments, "
          f"values {vals[0]:.3f} .. {vals[-1]:.3f}, "
          f"each {segs[0].max_supply / 1e6:.2f} TWh/yr")

segs = build_demand_curve(spec, ANNUAL_LOAD)
steps = {round(a.value - b.value, 12) for a, b in zip(segs, segs[1:])}
print("unique steps between segments:", steps)

lower = build_demand_curve(replace(spec, elasticity=-0.6), ANNUAL_LOAD)
print("with -0.6 elasticity the step widens to "
      f"{lower[0].value - lower[1].value:.4f}")
