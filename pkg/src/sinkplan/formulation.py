"""Scenario -> sparse LP translation.

Hours are flattened chronologically, t = w*H + h in [0, T); the horizon is a
ring, so the hour preceding t=0 is t=T-1 (no exogenous initial conditions for
storage levels, commitment states, ramps, or deferral backlogs).  Hour weight
multiplies every per-hour operating cost and the annual sink-sales
aggregation, keeping investment/operations ratios meaningful on down-sampled
horizons.

Row/column bookkeeping choices that affect counts: single-variable limits
(max new/retired capacity, line reinforcement caps, per-segment sink supply
caps, per-hour curtailment and deferral caps) are column bounds, not rows;
min-output rows are omitted when the minimum is zero.  The deferrable-load
constraints (backlog balance, nonnegative backlog, rolling-window service
deadline) are this module's own standard formulation: the source material
names only the deferral share and delay parameters, so the equations here are
extrapolated.
"""

from dataclasses import dataclass, field

import numpy as np

from .lp import EQ, GE, INF, LE, LinearProgramBuilder
from . import model as M


class FormulationError(ValueError):
    pass


def _sorted(entities):
    return sorted(entities, key=lambda e: e.id)


@dataclass
class VariableMap:
    """Contiguous column ranges per variable family, with name encodings."""

    n_cols: int = 0
    col_names: list = field(default_factory=list)
    blocks: dict = field(default_factory=dict)   # family -> (start, count)
    new: dict = field(default_factory=dict)      # cluster id -> col
    ret: dict = field(default_factory=dict)
    cap: dict = field(default_factory=dict)
    tnew: dict = field(default_factory=dict)     # line id -> col
    tcap: dict = field(default_factory=dict)
    inj: dict = field(default_factory=dict)      # (cluster, t) -> col
    chg: dict = field(default_factory=dict)      # storage charging
    soc: dict = field(default_factory=dict)      # storage level
    nse: dict = field(default_factory=dict)      # (zone, seg, t) -> col
    flow: dict = field(default_factory=dict)     # (line, t) -> col
    commit: dict = field(default_factory=dict)   # (cluster, t) -> col
    start: dict = field(default_factory=dict)
    shut: dict = field(default_factory=dict)
    ecap: dict = field(default_factory=dict)     # storage energy capacity
    sink_cap: dict = field(default_factory=dict)  # zone -> col
    prod: dict = field(default_factory=dict)     # (zone, t) -> col
    sale: dict = field(default_factory=dict)     # segment index -> col
    dr_out: dict = field(default_factory=dict)   # (load, t) -> col
    dr_in: dict = field(default_factory=dict)
    dr_bkl: dict = field(default_factory=dict)

    def _open(self, family):
        self.blocks[family] = (self.n_cols, 0)

    def _add(self, family, mapping, key, name):
        start, count = self.blocks[family]
        mapping[key] = self.n_cols
        self.col_names.append(name)
        self.n_cols += 1
        self.blocks[family] = (start, count + 1)


def unit_size_eff(cluster):
    """Capacity-variable granularity: MW/unit for committed thermal, 1 MW
    otherwise (continuous resources ignore unit_size)."""
    return cluster.unit_size if cluster.is_uc else 1.0


def index_variables(scenario):
    """Deterministic column map: ordered by family, then entity id, then t."""
    T = scenario.time.n_hours
    vm = VariableMap()
    clusters = _sorted(scenario.clusters)
    zones = _sorted(scenario.zones)
    lines = _sorted(scenario.lines)
    storage = [g for g in clusters if g.is_storage]
    ucs = [g for g in clusters if g.is_uc]
    drs = _sorted(scenario.deferrable_loads)
    sink_zones = scenario.sink.zones(scenario) if scenario.sink else []
    sink_zones = sorted(sink_zones)

    vm._open("new")
    for g in clusters:
        vm._add("new", vm.new, g.id, f"new[{g.id}]")
    vm._open("ret")
    for g in clusters:
        vm._add("ret", vm.ret, g.id, f"ret[{g.id}]")
    vm._open("cap")
    for g in clusters:
        vm._add("cap", vm.cap, g.id, f"cap[{g.id}]")
    vm._open("tnew")
    for ln in lines:
        vm._add("tnew", vm.tnew, ln.id, f"tnew[{ln.id}]")
    vm._open("tcap")
    for ln in lines:
        vm._add("tcap", vm.tcap, ln.id, f"tcap[{ln.id}]")
    vm._open("inj")
    for g in clusters:
        for t in range(T):
            vm._add("inj", vm.inj, (g.id, t), f"inj[{g.id},{t}]")
    vm._open("chg")
    for g in storage:
        for t in range(T):
            vm._add("chg", vm.chg, (g.id, t), f"chg[{g.id},{t}]")
    vm._open("soc")
    for g in storage:
        for t in range(T):
            vm._add("soc", vm.soc, (g.id, t), f"soc[{g.id},{t}]")
    vm._open("nse")
    for z in zones:
        for s in range(len(z.nse_segments)):
            for t in range(T):
                vm._add("nse", vm.nse, (z.id, s, t), f"nse[{z.id},{s},{t}]")
    vm._open("flow")
    for ln in lines:
        for t in range(T):
            vm._add("flow", vm.flow, (ln.id, t), f"flow[{ln.id},{t}]")
    vm._open("commit")
    for g in ucs:
        for t in range(T):
            vm._add("commit", vm.commit, (g.id, t), f"commit[{g.id},{t}]")
    vm._open("start")
    for g in ucs:
        for t in range(T):
            vm._add("start", vm.start, (g.id, t), f"start[{g.id},{t}]")
    vm._open("shut")
    for g in ucs:
        for t in range(T):
            vm._add("shut", vm.shut, (g.id, t), f"shut[{g.id},{t}]")
    if scenario.storage_sizing_mode == M.INDEPENDENT_ENERGY:
        vm._open("ecap")
        for g in storage:
            vm._add("ecap", vm.ecap, g.id, f"ecap[{g.id}]")
    if scenario.sink is not None:
        vm._open("sink_cap")
        for zid in sink_zones:
            vm._add("sink_cap", vm.sink_cap, zid, f"sinkcap[{zid}]")
        vm._open("prod")
        for zid in sink_zones:
            for t in range(T):
                vm._add("prod", vm.prod, (zid, t), f"prod[{zid},{t}]")
        vm._open("sale")
        for seg in scenario.segments:
            vm._add("sale", vm.sale, seg.index, f"sale[{seg.index}]")
    if drs:
        vm._open("dr_out")
        for f in drs:
            for t in range(T):
                vm._add("dr_out", vm.dr_out, (f.id, t), f"drout[{f.id},{t}]")
        vm._open("dr_in")
        for f in drs:
            for t in range(T):
                vm._add("dr_in", vm.dr_in, (f.id, t), f"drin[{f.id},{t}]")
        vm._open("dr_bkl")
        for f in drs:
            for t in range(T):
                vm._add("dr_bkl", vm.dr_bkl, (f.id, t), f"drbkl[{f.id},{t}]")
    return vm


def build_objective(scenario, vmap):
    """Objective vector: investment + fixed O&M + weighted operating costs +
    start costs + sink annuity - sink sales revenue."""
    hw = scenario.time.hour_weight
    T = scenario.time.n_hours
    obj = np.zeros(vmap.n_cols)
    for g in scenario.clusters:
        obj[vmap.new[g.id]] = g.inv_cost * unit_size_eff(g)
        obj[vmap.cap[g.id]] = g.fom_cost
        for t in range(T):
            obj[vmap.inj[(g.id, t)]] = (g.vom_cost + g.fuel_cost) * hw
        if g.is_storage:
            for t in range(T):
                obj[vmap.chg[(g.id, t)]] = g.vom_cost * hw
            if vmap.ecap:
                obj[vmap.ecap[g.id]] = g.energy_inv_cost + g.energy_fom_cost
        if g.is_uc:
            for t in range(T):
                obj[vmap.start[(g.id, t)]] = g.start_cost
    for ln in scenario.lines:
        obj[vmap.tnew[ln.id]] = ln.inv_cost
    for z in scenario.zones:
        for s, seg in enumerate(z.nse_segments):
            for t in range(T):
                obj[vmap.nse[(z.id, s, t)]] = seg.cost * hw
    if scenario.sink is not None:
        for zid, j in vmap.sink_cap.items():
            obj[j] = scenario.sink.annuity
        for seg in scenario.segments:
            obj[vmap.sale[seg.index]] = -seg.value
    return obj


def column_bounds(scenario, vmap):
    """Per-column [lower, upper]; single-variable limits live here."""
    T = scenario.time.n_hours
    lower = np.zeros(vmap.n_cols)
    upper = np.full(vmap.n_cols, INF)
    for g in scenario.clusters:
        du = unit_size_eff(g)
        if g.max_new_cap < INF:
            upper[vmap.new[g.id]] = g.max_new_cap / du
        upper[vmap.ret[g.id]] = g.existing_cap / du
    for ln in scenario.lines:
        if ln.max_new_cap < INF:
            upper[vmap.tnew[ln.id]] = ln.max_new_cap
    for z in scenario.zones:
        for s, seg in enumerate(z.nse_segments):
            for t in range(T):
                upper[vmap.nse[(z.id, s, t)]] = seg.size_fraction * z.load[t]
    for (lid, t), j in vmap.flow.items():
        lower[j] = -INF
    if scenario.storage_sizing_mode == M.INDEPENDENT_ENERGY:
        for g in scenario.clusters:
            if g.is_storage:
                lower[vmap.ecap[g.id]] = g.existing_cap * g.duration
    for seg in scenario.segments:
        upper[vmap.sale[seg.index]] = seg.max_supply
    for f in scenario.deferrable_loads:
        for t in range(T):
            upper[vmap.dr_out[(f.id, t)]] = f.defer_fraction * f.base_profile[t]
    return lower, upper


def new_builder(scenario, vmap=None, name=None):
    """Builder pre-populated with all columns, bounds, and objective."""
    vmap = vmap or index_variables(scenario)
    obj = build_objective(scenario, vmap)
    lower, upper = column_bounds(scenario, vmap)
    b = LinearProgramBuilder(name or scenario.name)
    for j, cname in enumerate(vmap.col_names):
        b.add_col(cname, obj=obj[j], lower=lower[j], upper=upper[j])
    return b, vmap


def add_demand_balance(scenario, vmap, b):
    """One equality per (zone, hour): injections - charging + curtailment
    - line net exports + deferral adjustment - sink consumption = demand."""
    T = scenario.time.n_hours
    for z in _sorted(scenario.zones):
        members = [g for g in scenario.clusters if g.zone == z.id]
        drs = [f for f in scenario.deferrable_loads if f.zone == z.id]
        for t in range(T):
            coeffs = []
            for g in members:
                coeffs.append((vmap.inj[(g.id, t)], 1.0))
                if g.is_storage:
                    coeffs.append((vmap.chg[(g.id, t)], -1.0))
            for s in range(len(z.nse_segments)):
                coeffs.append((vmap.nse[(z.id, s, t)], 1.0))
            for ln in scenario.lines:
                sign = 1.0 if ln.from_zone == z.id else (
                    -1.0 if ln.to_zone == z.id else 0.0)
                if sign:
                    coeffs.append((vmap.flow[(ln.id, t)], -sign))
            for f in drs:
                coeffs.append((vmap.dr_out[(f.id, t)], 1.0))
                coeffs.append((vmap.dr_in[(f.id, t)], -1.0))
            if (z.id, t) in vmap.prod:
                coeffs.append((vmap.prod[(z.id, t)], -1.0))
            b.add_row(f"bal[{z.id},{t}]", EQ, float(z.load[t]), coeffs)


def add_policy_constraints(scenario, vmap, b):
    """Emission caps and clean-energy standards; the demand side counts net
    storage losses, whose variable terms move to the left-hand side."""
    hw = scenario.time.hour_weight
    T = scenario.time.n_hours

    def zone_demand(zid):
        return float(scenario.zone(zid).load.sum())

    def co2_terms(zid, rate):
        coeffs = {}
        for g in scenario.clusters:
            if g.zone != zid:
                continue
            for t in range(T):
                j = vmap.inj[(g.id, t)]
                coeffs[j] = coeffs.get(j, 0.0) + g.emissions_rate * hw
                if g.is_storage:
                    coeffs[j] = coeffs.get(j, 0.0) + rate * hw
                    jc = vmap.chg[(g.id, t)]
                    coeffs[jc] = coeffs.get(jc, 0.0) - rate * hw
        return coeffs

    def std_terms(zid, frac, standard_id):
        coeffs = {}
        for g in scenario.clusters:
            if g.zone != zid:
                continue
            for t in range(T):
                j = vmap.inj[(g.id, t)]
                if standard_id in g.qualifies_for:
                    coeffs[j] = coeffs.get(j, 0.0) + hw
                if g.is_storage:
                    coeffs[j] = coeffs.get(j, 0.0) + frac * hw
                    jc = vmap.chg[(g.id, t)]
                    coeffs[jc] = coeffs.get(jc, 0.0) - frac * hw
        return coeffs

    def emit(name, sense, rhs, coeffs):
        live = {j: v for j, v in coeffs.items() if v != 0.0}
        if live:
            b.add_row(name, sense, rhs, live.items())
            return
        # all-zero left-hand side: a cap is trivially met, a positive
        # requirement is structurally impossible
        if sense == GE and rhs > 0.0:
            raise FormulationError(
                f"policy row {name!r} requires {rhs:g} MWh but no resource "
                "qualifies")

    for k, p in enumerate(scenario.policies):
        known = set(z.id for z in scenario.zones)
        zones = p.rates if p.kind in (M.CO2_CAP_ZONAL, M.CO2_CAP_SYSTEM) else p.fractions
        for zid in zones:
            if zid not in known:
                raise FormulationError(f"policy[{k}] references unknown zone {zid!r}")
        if p.kind == M.CO2_CAP_ZONAL:
            for zid in sorted(p.rates):
                rate = p.rates[zid]
                rhs = rate * hw * zone_demand(zid)
                emit(f"co2[{zid}]", LE, rhs, co2_terms(zid, rate))
        elif p.kind == M.CO2_CAP_SYSTEM:
            coeffs = {}
            rhs = 0.0
            for zid in sorted(p.rates):
                rate = p.rates[zid]
                rhs += rate * hw * zone_demand(zid)
                for j, v in co2_terms(zid, rate).items():
                    coeffs[j] = coeffs.get(j, 0.0) + v
            emit("co2_sys", LE, rhs, coeffs)
        elif p.kind == M.STANDARD_ZONAL:
            for zid in sorted(p.fractions):
                frac = p.fractions[zid]
                rhs = frac * hw * zone_demand(zid)
                emit(f"std[{p.standard_id},{zid}]", GE, rhs,
                     std_terms(zid, frac, p.standard_id))
        elif p.kind == M.STANDARD_SYSTEM:
            coeffs = {}
            rhs = 0.0
            for zid in sorted(p.fractions):
                frac = p.fractions[zid]
                rhs += frac * hw * zone_demand(zid)
                for j, v in std_terms(zid, frac, p.standard_id).items():
                    coeffs[j] = coeffs.get(j, 0.0) + v
            emit(f"std_sys[{p.standard_id}]", GE, rhs, coeffs)


def add_investment_constraints(scenario, vmap, b):
    """Capacity accounting equalities (the max new/retired limits are column
    bounds set in column_bounds)."""
    for g in _sorted(scenario.clusters):
        du = unit_size_eff(g)
        b.add_row(f"captot[{g.id}]", EQ, g.existing_cap,
                  [(vmap.cap[g.id], 1.0),
                   (vmap.new[g.id], -du),
                   (vmap.ret[g.id], du)])
    for ln in _sorted(scenario.lines):
        b.add_row(f"tcaptot[{ln.id}]", EQ, ln.existing_cap,
                  [(vmap.tcap[ln.id], 1.0), (vmap.tnew[ln.id], -1.0)])


def add_dispatch_constraints(scenario, vmap, b):
    """Ramping, min/max output and discharge limits for non-committed
    clusters; min-output rows are omitted when the minimum is zero."""
    T = scenario.time.n_hours
    for g in _sorted(scenario.clusters):
        if g.is_uc:
            continue
        cf = g.cap_factor_series(T)
        for t in range(T):
            tp = (t - 1) % T
            if g.ramp_down < 1.0:
                b.add_row(f"rdn[{g.id},{t}]", LE, 0.0,
                          [(vmap.inj[(g.id, tp)], 1.0),
                           (vmap.inj[(g.id, t)], -1.0),
                           (vmap.cap[g.id], -g.ramp_down)])
            if g.ramp_up < 1.0:
                b.add_row(f"rup[{g.id},{t}]", LE, 0.0,
                          [(vmap.inj[(g.id, t)], 1.0),
                           (vmap.inj[(g.id, tp)], -1.0),
                           (vmap.cap[g.id], -g.ramp_up)])
            if g.min_stable > 0.0:
                b.add_row(f"minout[{g.id},{t}]", GE, 0.0,
                          [(vmap.inj[(g.id, t)], 1.0),
                           (vmap.cap[g.id], -g.min_stable)])
            b.add_row(f"maxout[{g.id},{t}]", LE, 0.0,
                      [(vmap.inj[(g.id, t)], 1.0),
                       (vmap.cap[g.id], -cf[t])])
        if g.is_storage:
            for t in range(T):
                b.add_row(f"dislim[{g.id},{t}]", LE, 0.0,
                          [(vmap.chg[(g.id, t)], 1.0),
                           (vmap.cap[g.id], -1.0)])


def add_storage_constraints(scenario, vmap, b):
    """Ring-wrapped state of charge, energy cap, charge/discharge headroom,
    and the simultaneous-operation limit."""
    T = scenario.time.n_hours
    independent = scenario.storage_sizing_mode == M.INDEPENDENT_ENERGY
    for g in _sorted(scenario.clusters):
        if not g.is_storage:
            continue
        for t in range(T):
            tn = (t + 1) % T
            b.add_row(f"socbal[{g.id},{t}]", EQ, 0.0,
                      [(vmap.soc[(g.id, tn)], 1.0),
                       (vmap.soc[(g.id, t)], -(1.0 - g.self_discharge)),
                       (vmap.chg[(g.id, t)], -g.charge_eff),
                       (vmap.inj[(g.id, t)], 1.0 / g.discharge_eff)])
            if independent:
                energy = [(vmap.ecap[g.id], -1.0)]
            else:
                energy = [(vmap.cap[g.id], -g.duration)]
            b.add_row(f"socmax[{g.id},{t}]", LE, 0.0,
                      [(vmap.soc[(g.id, t)], 1.0)] + energy)
            b.add_row(f"dchlim[{g.id},{t}]", LE, 0.0,
                      [(vmap.inj[(g.id, t)], 1.0),
                       (vmap.soc[(g.id, t)], -g.discharge_eff)])
            b.add_row(f"room[{g.id},{t}]", LE, 0.0,
                      [(vmap.chg[(g.id, t)], 1.0),
                       (vmap.soc[(g.id, t)], 1.0)] + energy)
            b.add_row(f"simul[{g.id},{t}]", LE, 0.0,
                      [(vmap.inj[(g.id, t)], 1.0),
                       (vmap.chg[(g.id, t)], 1.0),
                       (vmap.cap[g.id], -1.0)])


def add_transmission_constraints(scenario, vmap, b):
    """Bidirectional transport-flow limits against total line capacity."""
    T = scenario.time.n_hours
    for ln in _sorted(scenario.lines):
        for t in range(T):
            b.add_row(f"fpos[{ln.id},{t}]", LE, 0.0,
                      [(vmap.flow[(ln.id, t)], 1.0),
                       (vmap.tcap[ln.id], -1.0)])
            b.add_row(f"fneg[{ln.id},{t}]", LE, 0.0,
                      [(vmap.flow[(ln.id, t)], -1.0),
                       (vmap.tcap[ln.id], -1.0)])


def add_uc_constraints(scenario, vmap, b):
    """Linearly relaxed unit commitment: committed-unit limits, commitment
    ramping, output bounds, state transition, and rolling min up/down windows
    (all wrapped across the horizon seam)."""
    T = scenario.time.n_hours
    for g in _sorted(scenario.clusters):
        if not g.is_uc:
            continue
        if g.min_up >= T or g.min_down >= T:
            raise FormulationError(
                f"cluster {g.id}: min up/down window "
                f"({g.min_up}/{g.min_down} h) must be shorter than the "
                f"{T} h horizon")
        du = g.unit_size
        inv_du = 1.0 / du
        cf = g.cap_factor_series(T)
        for t in range(T):
            tp = (t - 1) % T
            b.add_row(f"onlim[{g.id},{t}]", LE, 0.0,
                      [(vmap.commit[(g.id, t)], 1.0),
                       (vmap.cap[g.id], -inv_du)])
            b.add_row(f"stlim[{g.id},{t}]", LE, 0.0,
                      [(vmap.start[(g.id, t)], 1.0),
                       (vmap.cap[g.id], -inv_du)])
            b.add_row(f"shlim[{g.id},{t}]", LE, 0.0,
                      [(vmap.shut[(g.id, t)], 1.0),
                       (vmap.cap[g.id], -inv_du)])
            dn_mix = min(cf[t], max(g.min_stable, g.ramp_down))
            b.add_row(f"ucrdn[{g.id},{t}]", LE, 0.0,
                      [(vmap.inj[(g.id, tp)], 1.0),
                       (vmap.inj[(g.id, t)], -1.0),
                       (vmap.commit[(g.id, t)], -g.ramp_down * du),
                       (vmap.start[(g.id, t)], (g.ramp_down + g.min_stable) * du),
                       (vmap.shut[(g.id, t)], -dn_mix * du)])
            up_mix = min(cf[t], max(g.min_stable, g.ramp_up))
            b.add_row(f"ucrup[{g.id},{t}]", LE, 0.0,
                      [(vmap.inj[(g.id, t)], 1.0),
                       (vmap.inj[(g.id, tp)], -1.0),
                       (vmap.commit[(g.id, t)], -g.ramp_up * du),
                       (vmap.start[(g.id, t)], (g.ramp_up - up_mix) * du),
                       (vmap.shut[(g.id, t)], g.min_stable * du)])
            if g.min_stable > 0.0:
                b.add_row(f"ucmin[{g.id},{t}]", LE, 0.0,
                          [(vmap.commit[(g.id, t)], g.min_stable * du),
                           (vmap.inj[(g.id, t)], -1.0)])
            b.add_row(f"ucmax[{g.id},{t}]", LE, 0.0,
                      [(vmap.inj[(g.id, t)], 1.0),
                       (vmap.commit[(g.id, t)], -cf[t] * du)])
            b.add_row(f"uctrans[{g.id},{t}]", EQ, 0.0,
                      [(vmap.commit[(g.id, t)], 1.0),
                       (vmap.commit[(g.id, tp)], -1.0),
                       (vmap.start[(g.id, t)], -1.0),
                       (vmap.shut[(g.id, t)], 1.0)])
            if g.min_down >= 1:
                coeffs = [(vmap.commit[(g.id, t)], 1.0),
                          (vmap.cap[g.id], -inv_du)]
                for k in range(g.min_down):
                    coeffs.append((vmap.shut[(g.id, (t - k) % T)], 1.0))
                b.add_row(f"mindn[{g.id},{t}]", LE, 0.0, coeffs)
            if g.min_up >= 1:
                coeffs = [(vmap.commit[(g.id, t)], -1.0)]
                for k in range(g.min_up):
                    coeffs.append((vmap.start[(g.id, (t - k) % T)], 1.0))
                b.add_row(f"minup[{g.id},{t}]", LE, 0.0, coeffs)


def add_demand_sink_constraints(scenario, vmap, b):
    """Annual sales bounded by weighted production, and hourly production
    bounded by installed sink capacity (segment caps are column bounds)."""
    if scenario.sink is None:
        return
    hw = scenario.time.hour_weight
    T = scenario.time.n_hours
    coeffs = [(j, 1.0) for _, j in sorted(vmap.sale.items())]
    coeffs += [(j, -hw) for _, j in sorted(vmap.prod.items())]
    if coeffs:
        b.add_row("saletot", LE, 0.0, coeffs)
    for zid in sorted(vmap.sink_cap):
        for t in range(T):
            b.add_row(f"prodcap[{zid},{t}]", LE, 0.0,
                      [(vmap.prod[(zid, t)], 1.0),
                       (vmap.sink_cap[zid], -1.0)])


def add_deferrable_load_constraints(scenario, vmap, b):
    """Backlog balance and rolling service deadline per deferrable load (the
    per-hour deferral cap is a column bound)."""
    T = scenario.time.n_hours
    for f in _sorted(scenario.deferrable_loads):
        win = min(f.max_delay, T)
        for t in range(T):
            tp = (t - 1) % T
            b.add_row(f"drbal[{f.id},{t}]", EQ, 0.0,
                      [(vmap.dr_bkl[(f.id, t)], 1.0),
                       (vmap.dr_bkl[(f.id, tp)], -1.0),
                       (vmap.dr_out[(f.id, t)], -1.0),
                       (vmap.dr_in[(f.id, t)], 1.0)])
            coeffs = [(vmap.dr_bkl[(f.id, t)], 1.0)]
            for k in range(win):
                coeffs.append((vmap.dr_out[(f.id, (t - k) % T)], -1.0))
            b.add_row(f"drwin[{f.id},{t}]", LE, 0.0, coeffs)


_BUILDERS = (
    add_demand_balance,
    add_policy_constraints,
    add_investment_constraints,
    add_dispatch_constraints,
    add_storage_constraints,
    add_transmission_constraints,
    add_uc_constraints,
    add_demand_sink_constraints,
    add_deferrable_load_constraints,
)


def assemble(scenario, name=None):
    """Validate, index, and run every constraint builder; deterministic."""
    violations = M.validate(scenario)
    if violations:
        listing = "; ".join(str(v) for v in violations[:8])
        raise FormulationError(
            f"scenario fails validation ({len(violations)} violations): {listing}")
    b, vmap = new_builder(scenario, name=name)
    for builder in _BUILDERS:
        builder(scenario, vmap, b)
    return b.build(), vmap
