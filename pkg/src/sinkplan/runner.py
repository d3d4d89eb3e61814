"""Scenario-level solve pipeline: assemble, solve, certify, bundle."""

from dataclasses import dataclass, field

import numpy as np

from .formulation import assemble
from .lp import OPTIMAL, certify
from .simplex import SolveOptions, solve


class SolveError(RuntimeError):
    pass


@dataclass
class Solved:
    """A scenario together with its LP, variable map, and certified solution."""

    scenario: object
    lp: object
    vmap: object
    solution: object
    report_card: object = None       # ResidualReport when certified
    _rows: dict = field(default=None, repr=False)

    @property
    def status(self):
        return self.solution.status

    @property
    def objective(self):
        return self.solution.objective

    def row(self, name):
        if self._rows is None:
            object.__setattr__(self, "_rows",
                               {n: i for i, n in enumerate(self.lp.row_names)})
        return self._rows[name]

    def dual(self, name):
        return float(self.solution.duals[self.row(name)])

    def value(self, col_index):
        return float(self.solution.primal[col_index])

    def series(self, mapping, entity_id):
        """Primal series over t for one entity in a (id, t)-keyed family."""
        T = self.scenario.time.n_hours
        return np.array([self.solution.primal[mapping[(entity_id, t)]]
                         for t in range(T)])

    def price(self, zone_id, t):
        """Electricity price, $/MWh: demand-balance dual over hour weight."""
        return self.dual(f"bal[{zone_id},{t}]") / self.scenario.time.hour_weight

    def price_matrix(self):
        """(zones x T) price array in sorted-zone order."""
        T = self.scenario.time.n_hours
        zones = sorted(z.id for z in self.scenario.zones)
        hw = self.scenario.time.hour_weight
        out = np.empty((len(zones), T))
        for k, zid in enumerate(zones):
            for t in range(T):
                out[k, t] = self.solution.duals[self.row(f"bal[{zid},{t}]")] / hw
        return zones, out


def solve_scenario(scenario, options=None, certify_tol=1e-6):
    """Assemble and solve; optimal solutions are certified before returning."""
    lp, vmap = assemble(scenario)
    solution = solve(lp, options or SolveOptions())
    card = None
    if solution.status == OPTIMAL:
        card = certify(lp, solution)
        if certify_tol is not None and not card.within(certify_tol):
            raise SolveError(
                f"certification failed for {scenario.name}: "
                f"row residual {card.max_row_residual:.3g}, "
                f"gap {card.duality_gap:.3g}, "
                f"complementarity {card.max_complementarity:.3g} "
                f"(worst row {card.worst_row_name})")
    return Solved(scenario, lp, vmap, solution, card)
