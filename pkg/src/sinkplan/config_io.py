"""Plain-text configuration ingestion.

A configuration is a directory of small tabular files with unit-bearing
headers (see docs/formats.md for the frozen schemas):

    scenario.txt   key = value manifest (time structure, sink, curve template)
    resources.csv  one resource cluster per row, Tables-style columns
    load.csv       hour, zone, load_mw (hour is 1-based)
    nse.csv        zone, slope_fraction, size_fraction, voll_usd_per_mwh
    cap_factors.csv   optional: hour, resource, cap_factor
    lines.csv      optional transmission lines
    policies.csv   optional emission caps / energy standards
    deferrable.csv + deferrable_profiles.csv   optional shiftable loads
    segments.csv   optional explicit market segments
    sweep.txt      optional sweep grid (capex and base-price lists)

Unit conversions happen here, not in the formulation: per-MWh fuel cost is
heat rate x fuel price, the emissions rate is heat rate x fuel carbon content,
and start-up fuel folds into the per-start cost.  Malformed cells are
rejected with file/line/column diagnostics.
"""

import csv
import hashlib
from pathlib import Path

import numpy as np

from . import model as M
from .econ import DemandCurveSpec, FinanceSpec
from .model import validate


class ConfigError(ValueError):
    pass


def _parse_manifest(path):
    out = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path.name} line {lineno}: expected 'key = value'")
        key, val = line.split("=", 1)
        out[key.strip()] = val.strip()
    return out


class _Row:
    def __init__(self, path, lineno, data):
        self.path = path
        self.lineno = lineno
        self.data = data

    def _fail(self, column, message):
        raise ConfigError(
            f"{self.path.name} line {self.lineno}, column {column!r}: {message}")

    def text(self, column, default=None):
        v = (self.data.get(column) or "").strip()
        if v == "":
            if default is None:
                self._fail(column, "value required")
            return default
        return v

    def num(self, column, default=None, minimum=None):
        v = (self.data.get(column) or "").strip()
        if v == "":
            if default is None:
                self._fail(column, "value required")
            val = float(default)
        elif v.lower() in ("inf", "+inf", "infinity"):
            val = float("inf")
        else:
            try:
                val = float(v)
            except ValueError:
                self._fail(column, f"not a number: {v!r}")
        if minimum is not None and val < minimum:
            self._fail(column, f"must be >= {minimum:g}, got {val:g}")
        return val

    def integer(self, column, default=None, minimum=None):
        v = self.num(column, default=default, minimum=minimum)
        if v != int(v):
            self._fail(column, f"must be an integer, got {v:g}")
        return int(v)


def _read_table(path, required):
    if not path.exists():
        raise ConfigError(f"missing required file {path.name}")
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise ConfigError(
                f"{path.name}: missing columns {', '.join(missing)}")
        return [_Row(path, i, row) for i, row in enumerate(reader, start=2)]


def _manifest_num(man, key, default=None, path="scenario.txt"):
    if key not in man:
        if default is None:
            raise ConfigError(f"{path}: missing key {key!r}")
        return default
    try:
        return float(man[key])
    except ValueError:
        raise ConfigError(f"{path}: key {key!r} is not a number: {man[key]!r}")


def config_hash(config_dir):
    """Stable digest over every regular file in the configuration directory."""
    h = hashlib.sha256()
    for p in sorted(Path(config_dir).glob("*")):
        if p.is_file():
            h.update(p.name.encode())
            h.update(p.read_bytes())
    return h.hexdigest()


def load_config(config_dir):
    """Read a configuration directory into a validated Scenario and the sweep
    grid defined there (None when the directory has no sweep table)."""
    cdir = Path(config_dir)
    if not cdir.is_dir():
        raise ConfigError(f"config directory not found: {cdir}")
    man_path = cdir / "scenario.txt"
    if not man_path.exists():
        raise ConfigError("missing required file scenario.txt")
    man = _parse_manifest(man_path)

    name = man.get("name", cdir.name)
    W = int(_manifest_num(man, "sub_periods", 1))
    H = int(_manifest_num(man, "hours_per_sub_period"))
    hw = _manifest_num(man, "hour_weight", 1.0)
    time = M.TimeStructure(W, H, hw)
    T = W * H

    # hourly loads
    loads = {}
    for row in _read_table(cdir / "load.csv", ("hour", "zone", "load_mw")):
        hour = row.integer("hour", minimum=1)
        if hour > T:
            row._fail("hour", f"hour {hour} beyond the {T}-hour horizon")
        zid = row.text("zone")
        mw = row.num("load_mw")
        if mw < 0:
            row._fail("load_mw", f"must be nonnegative, got {mw:g}")
        loads.setdefault(zid, np.zeros(T))[hour - 1] = mw

    # curtailable-demand segments
    nse = {}
    for row in _read_table(cdir / "nse.csv",
                           ("zone", "slope_fraction", "size_fraction",
                            "voll_usd_per_mwh")):
        zid = row.text("zone")
        nse.setdefault(zid, []).append(M.NseSegment(
            slope_fraction=row.num("slope_fraction"),
            size_fraction=row.num("size_fraction"),
            voll=row.num("voll_usd_per_mwh"),
        ))

    zones = [M.Zone(zid, loads[zid], tuple(nse.get(zid, ())))
             for zid in sorted(loads)]

    # optional hourly availability profiles
    profiles = {}
    cf_path = cdir / "cap_factors.csv"
    if cf_path.exists():
        for row in _read_table(cf_path, ("hour", "resource", "cap_factor")):
            hour = row.integer("hour", minimum=1)
            if hour > T:
                row._fail("hour", f"hour {hour} beyond the {T}-hour horizon")
            rid = row.text("resource")
            profiles.setdefault(rid, np.ones(T))[hour - 1] = row.num("cap_factor")

    clusters = []
    res_cols = ("id", "zone", "kind", "inv_cost_usd_per_mw_yr",
                "fom_cost_usd_per_mw_yr")
    for row in _read_table(cdir / "resources.csv", res_cols):
        rid = row.text("id")
        kind = row.text("kind")
        heat_rate = row.num("heat_rate_mmbtu_per_mwh", 0.0)
        fuel_price = row.num("fuel_cost_usd_per_mmbtu", 0.0)
        fuel_co2 = row.num("fuel_co2_kg_per_mmbtu", 0.0)
        start_cost = row.num("start_cost_usd_per_start", 0.0)
        start_fuel = row.num("start_fuel_mmbtu_per_start", 0.0)
        cf = row.text("cap_factor", "profile")
        if cf == "profile":
            cap_factor = profiles.get(rid, 1.0)
        else:
            cap_factor = row.num("cap_factor")
        quals = row.text("qualifies_for", "")
        clusters.append(M.ResourceCluster(
            id=rid,
            zone=row.text("zone"),
            kind=kind,
            unit_size=row.num("unit_size_mw", 0.0),
            existing_cap=row.num("existing_cap_mw", 0.0),
            max_new_cap=row.num("max_new_cap_mw", float("inf")),
            inv_cost=row.num("inv_cost_usd_per_mw_yr"),
            fom_cost=row.num("fom_cost_usd_per_mw_yr"),
            vom_cost=row.num("vom_cost_usd_per_mwh", 0.0),
            fuel_cost=heat_rate * fuel_price,
            start_cost=start_cost + start_fuel * fuel_price,
            emissions_rate=heat_rate * fuel_co2 / 1000.0,
            min_stable=row.num("min_stable_fraction", 0.0),
            cap_factor=cap_factor,
            ramp_up=row.num("ramp_up_fraction", 1.0),
            ramp_down=row.num("ramp_down_fraction", 1.0),
            min_up=row.integer("min_up_hr", 0),
            min_down=row.integer("min_down_hr", 0),
            charge_eff=row.num("charge_eff", 0.0),
            discharge_eff=row.num("discharge_eff", 0.0),
            self_discharge=row.num("self_discharge_per_hr", 0.0),
            duration=row.num("duration_hr", 0.0),
            energy_inv_cost=row.num("energy_inv_cost_usd_per_mwh_yr", 0.0),
            energy_fom_cost=row.num("energy_fom_cost_usd_per_mwh_yr", 0.0),
            qualifies_for=frozenset(q.strip() for q in quals.split(";")
                                    if q.strip()),
            metric_group=row.text("metric_group", ""),
        ))

    lines = []
    lines_path = cdir / "lines.csv"
    if lines_path.exists():
        for row in _read_table(lines_path,
                               ("id", "from_zone", "to_zone")):
            lines.append(M.TransmissionLine(
                id=row.text("id"),
                from_zone=row.text("from_zone"),
                to_zone=row.text("to_zone"),
                existing_cap=row.num("existing_cap_mw", 0.0),
                max_new_cap=row.num("max_new_cap_mw", float("inf")),
                inv_cost=row.num("inv_cost_usd_per_mw_yr", 0.0),
            ))

    policies = []
    pol_path = cdir / "policies.csv"
    if pol_path.exists():
        grouped = {}
        for row in _read_table(pol_path, ("kind", "zone", "value")):
            kind = row.text("kind")
            if kind not in M.POLICY_KINDS:
                row._fail("kind", f"unknown policy kind {kind!r}")
            sid = row.text("standard_id", "")
            grouped.setdefault((kind, sid), {})[row.text("zone")] = row.num("value")
        for (kind, sid), values in sorted(grouped.items()):
            if kind in (M.CO2_CAP_ZONAL, M.CO2_CAP_SYSTEM):
                policies.append(M.PolicySpec(kind=kind, rates=values))
            else:
                policies.append(M.PolicySpec(kind=kind, fractions=values,
                                             standard_id=sid))

    deferrables = []
    dr_path = cdir / "deferrable.csv"
    if dr_path.exists():
        dr_profiles = {}
        for row in _read_table(cdir / "deferrable_profiles.csv",
                               ("hour", "id", "base_mw")):
            hour = row.integer("hour", minimum=1)
            if hour > T:
                row._fail("hour", f"hour {hour} beyond the {T}-hour horizon")
            mw = row.num("base_mw", minimum=0.0)
            dr_profiles.setdefault(row.text("id"), np.zeros(T))[hour - 1] = mw
        for row in _read_table(dr_path,
                               ("id", "zone", "defer_fraction", "max_delay_hr")):
            fid = row.text("id")
            if fid not in dr_profiles:
                row._fail("id", f"no profile rows for {fid!r}")
            deferrables.append(M.DeferrableLoad(
                id=fid,
                zone=row.text("zone"),
                base_profile=dr_profiles[fid],
                defer_fraction=row.num("defer_fraction"),
                max_delay=row.integer("max_delay_hr", minimum=1),
            ))

    sink = None
    if "sink_capex_usd_per_kw" in man:
        zones_txt = man.get("sink_zones", "").strip()
        allowed = tuple(z.strip() for z in zones_txt.split(",") if z.strip()) \
            if zones_txt else None
        sink = M.DemandSinkSpec.from_capex(
            capex=_manifest_num(man, "sink_capex_usd_per_kw"),
            wacc=_manifest_num(man, "sink_wacc", 0.071),
            life=_manifest_num(man, "sink_life_yr", 20.0),
            fom_fraction=_manifest_num(man, "sink_fom_fraction", 0.04),
            allowed_zones=allowed,
        )

    segments = []
    seg_path = cdir / "segments.csv"
    if seg_path.exists():
        for row in _read_table(seg_path,
                               ("index", "max_supply_mwh", "value_usd_per_mwh")):
            segments.append(M.MarketSegment(
                index=row.integer("index"),
                max_supply=row.num("max_supply_mwh"),
                value=row.num("value_usd_per_mwh"),
            ))
        segments.sort(key=lambda s: -s.value)

    scenario = M.Scenario(
        name=name,
        time=time,
        zones=zones,
        clusters=clusters,
        lines=lines,
        policies=policies,
        deferrable_loads=deferrables,
        sink=sink,
        segments=segments,
        storage_sizing_mode=man.get("storage_sizing_mode", M.FIXED_RATIO),
    )
    violations = validate(scenario)
    if violations:
        listing = "\n  ".join(str(v) for v in violations[:12])
        raise ConfigError(
            f"configuration fails validation ({len(violations)} violations):\n"
            f"  {listing}")

    grid = None
    sweep_path = cdir / "sweep.txt"
    if sweep_path.exists():
        grid = load_grid(sweep_path, man)
    return scenario, grid


def _num_list(man, key, path):
    if key not in man:
        raise ConfigError(f"{path}: missing key {key!r}")
    try:
        vals = tuple(float(v) for v in man[key].split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"{path}: key {key!r} has a non-numeric entry")
    if not vals:
        raise ConfigError(f"{path}: key {key!r} is empty")
    if len(set(vals)) != len(vals):
        raise ConfigError(f"{path}: key {key!r} has duplicates")
    return vals


def load_grid(path, scenario_manifest=None):
    """Read a sweep grid file (key = value text)."""
    from .sweep import SweepGrid

    path = Path(path)
    if not path.exists():
        raise ConfigError(f"sweep grid file not found: {path}")
    man = _parse_manifest(path)
    sm = scenario_manifest or {}

    def pick(key, default):
        if key in man:
            return _manifest_num(man, key, path=path.name)
        if key in sm:
            return _manifest_num(sm, key, path="scenario.txt")
        return default

    finance = FinanceSpec(
        wacc=pick("wacc", 0.071),
        life=pick("life_yr", 20.0),
        fom_fraction=pick("fom_fraction", 0.04),
    )
    curve = DemandCurveSpec(
        anchor_price=pick("anchor_price", 50.0),
        anchor_quantity_fraction=pick("anchor_quantity_fraction", 0.20),
        elasticity=pick("elasticity", -0.8),
        segment_fraction=pick("segment_fraction", 0.01),
        base_price=50.0,
    )
    return SweepGrid(
        capex_values=_num_list(man, "capex_usd_per_kw", path.name),
        base_prices=_num_list(man, "base_price_usd_per_mwh", path.name),
        finance=finance,
        curve=curve,
    )
