"""Translate product market prices into per-MWh-input values and back.

Builds the conversion table for the three headline demand-sink candidates:
hydrogen electrolysis, direct air capture, and resistive heating.
"""

from sinkplan import TechSpec, output_value, product_price

TECHS = {
    # 80% electrolyzer efficiency, $1/MWh variable cost, 130 MJ/kg heating value
    "hydrogen ($/kg)": TechSpec(efficiency=0.8 * 3600 / 130, vom=1.0),
    # 1.316 MWh per captured ton, $25/t variable cost
    "captured CO2 ($/t)": TechSpec(efficiency=1 / 1.316, vom=25 / 1.316),
    # 95% heater efficiency, 3.412 MMBtu per MWh
    "process heat ($/MMBtu)": TechSpec(efficiency=0.95 * 3.412),
}

values = list(range(10, 101, 10))

print(f"{'value $/MWh-in':>16}", *(f"{v:>9}" for v in values))
for label, tech in TECHS.items():
    prices = [product_price(v, tech) for v in values]
    print(f"{label:>16}", *(f"{p:9.2f}" for p in prices))

print()
for label, tech, price in [
    ("hydrogen", TECHS["hydrogen ($/kg)"], 1.40),
    ("captured CO2", TECHS["captured CO2 ($/t)"], 120.0),
    ("process heat", TECHS["process heat ($/MMBtu)"], 7.50),
]:
    v = output_value(price, tech)
    print(f"{label}: a market price of {price:g} is worth "
          f"{v:.2f} $/MWh of input electricity")
