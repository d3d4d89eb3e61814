"""Sparse standard-form linear program container, solutions, and certification.

A LinearProgram holds min c'x subject to named rows with senses in {<=, =, >=},
per-column bounds defaulting to [0, +inf), and a sparse triplet matrix.  The
container is solver-agnostic: the internal simplex, the MPS reader/writer and
the certifier all consume it unchanged.

Certification conventions: row residuals are measured after row equilibration
(each row divided by its largest absolute coefficient), the duality gap is
relative to max(1, |c'x|), and complementary-slackness products are normalized
the same way.
"""

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csc_matrix

INF = float("inf")

LE = "<="
EQ = "="
GE = ">="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
ITERATION_LIMIT = "iteration_limit"


class LPError(ValueError):
    """Malformed linear program."""


@dataclass
class LinearProgram:
    name: str
    col_names: list
    row_names: list
    obj: np.ndarray      # (n,) $ per unit of each column
    lower: np.ndarray    # (n,)
    upper: np.ndarray    # (n,)
    senses: list         # (m,) of "<=", "=", ">="
    rhs: np.ndarray      # (m,)
    row_idx: np.ndarray  # triplets
    col_idx: np.ndarray
    values: np.ndarray

    @property
    def n_cols(self):
        return len(self.col_names)

    @property
    def n_rows(self):
        return len(self.row_names)

    @property
    def n_nonzeros(self):
        return len(self.values)

    def matrix(self):
        """Sparse CSC view of the constraint matrix (duplicate-free triplets)."""
        return csc_matrix(
            (self.values, (self.row_idx, self.col_idx)),
            shape=(self.n_rows, self.n_cols),
        )

    def row_scales(self):
        """Per-row max |coefficient|, used for equilibration (1.0 for safety)."""
        s = np.zeros(self.n_rows)
        np.maximum.at(s, self.row_idx, np.abs(self.values))
        s[s == 0.0] = 1.0
        return s


class LinearProgramBuilder:
    """Incremental construction with name bookkeeping and triplet hygiene."""

    def __init__(self, name="lp"):
        self.name = name
        self.col_names = []
        self.row_names = []
        self._col_index = {}
        self._row_index = {}
        self.obj = []
        self.lower = []
        self.upper = []
        self.senses = []
        self.rhs = []
        self.row_idx = []
        self.col_idx = []
        self.values = []

    def add_col(self, name, obj=0.0, lower=0.0, upper=INF):
        if not name or any(ch.isspace() for ch in name):
            raise LPError(f"column name {name!r} must be non-empty and "
                          "whitespace-free")
        if name in self._col_index:
            raise LPError(f"duplicate column name {name!r}")
        if not np.isfinite(obj):
            raise LPError(f"non-finite objective coefficient for {name!r}")
        if np.isnan(lower) or np.isnan(upper) or lower > upper:
            raise LPError(f"bad bounds [{lower}, {upper}] for {name!r}")
        j = len(self.col_names)
        self._col_index[name] = j
        self.col_names.append(name)
        self.obj.append(float(obj))
        self.lower.append(float(lower))
        self.upper.append(float(upper))
        return j

    def add_row(self, name, sense, rhs, coeffs):
        """coeffs is an iterable of (col_index, value); duplicates are summed."""
        if not name or any(ch.isspace() for ch in name):
            raise LPError(f"row name {name!r} must be non-empty and "
                          "whitespace-free")
        if name in self._row_index:
            raise LPError(f"duplicate row name {name!r}")
        if sense not in (LE, EQ, GE):
            raise LPError(f"bad sense {sense!r} for row {name!r}")
        if not np.isfinite(rhs):
            raise LPError(f"non-finite rhs for row {name!r}")
        merged = {}
        for j, v in coeffs:
            if not (0 <= j < len(self.col_names)):
                raise LPError(f"row {name!r} references unknown column {j}")
            if not np.isfinite(v):
                raise LPError(f"non-finite coefficient in row {name!r}")
            merged[j] = merged.get(j, 0.0) + float(v)
        entries = [(j, v) for j, v in merged.items() if v != 0.0]
        if not entries:
            raise LPError(f"row {name!r} has no nonzero coefficients")
        i = len(self.row_names)
        self._row_index[name] = i
        self.row_names.append(name)
        self.senses.append(sense)
        self.rhs.append(float(rhs))
        for j, v in entries:
            self.row_idx.append(i)
            self.col_idx.append(j)
            self.values.append(v)
        return i

    def set_bounds(self, j, lower=None, upper=None):
        if lower is not None:
            self.lower[j] = float(lower)
        if upper is not None:
            self.upper[j] = float(upper)
        if np.isnan(self.lower[j]) or np.isnan(self.upper[j]) or (
            self.lower[j] > self.upper[j]
        ):
            raise LPError(f"bad bounds for column {self.col_names[j]!r}")

    def col(self, name):
        return self._col_index[name]

    def build(self):
        return LinearProgram(
            name=self.name,
            col_names=list(self.col_names),
            row_names=list(self.row_names),
            obj=np.asarray(self.obj, dtype=float),
            lower=np.asarray(self.lower, dtype=float),
            upper=np.asarray(self.upper, dtype=float),
            senses=list(self.senses),
            rhs=np.asarray(self.rhs, dtype=float),
            row_idx=np.asarray(self.row_idx, dtype=np.int64),
            col_idx=np.asarray(self.col_idx, dtype=np.int64),
            values=np.asarray(self.values, dtype=float),
        )


@dataclass
class Solution:
    status: str                # optimal | infeasible | unbounded | iteration_limit
    objective: float
    primal: np.ndarray         # value per column
    duals: np.ndarray          # value per row
    reduced_costs: np.ndarray  # value per column
    iterations: int = 0


@dataclass
class ResidualReport:
    max_row_residual: float
    max_bound_violation: float
    duality_gap: float
    worst_row_name: str
    max_complementarity: float = 0.0

    def within(self, tol=1e-6):
        return (
            self.max_row_residual <= tol
            and self.max_bound_violation <= tol
            and self.duality_gap <= tol
            and self.max_complementarity <= tol
        )


def certify(lp, solution):
    """Residuals, duality gap and complementarity for a full primal/dual pair."""
    x = np.asarray(solution.primal, dtype=float)
    y = np.asarray(solution.duals, dtype=float)
    m, n = lp.n_rows, lp.n_cols
    if x.shape != (n,) or y.shape != (m,):
        raise LPError("solution vectors do not match LP dimensions")

    obj = float(lp.obj @ x)
    norm = max(1.0, abs(obj))

    if m == 0:
        bound_viol = float(
            max(0.0, np.max(np.maximum(lp.lower - x, x - lp.upper), initial=0.0))
        )
        return ResidualReport(0.0, bound_viol, 0.0, "", 0.0)

    a = lp.matrix()
    act = a @ x
    scales = lp.row_scales()
    resid = np.zeros(m)
    slack = np.zeros(m)
    for i, sense in enumerate(lp.senses):
        diff = act[i] - lp.rhs[i]
        if sense == EQ:
            resid[i] = abs(diff)
        elif sense == LE:
            resid[i] = max(0.0, diff)
            slack[i] = -diff
        else:
            resid[i] = max(0.0, -diff)
            slack[i] = diff
    resid_scaled = resid / scales
    worst = int(np.argmax(resid_scaled))

    bound_viol = float(
        max(0.0, np.max(np.maximum(lp.lower - x, x - lp.upper), initial=0.0))
    )

    d = lp.obj - (a.T @ y)
    dual_obj = float(lp.rhs @ y)
    comp = 0.0
    tol = 1e-11
    for j in range(n):
        dj = d[j]
        if dj > tol:
            if lp.lower[j] > -INF:
                dual_obj += dj * lp.lower[j]
                comp = max(comp, abs(dj * (x[j] - lp.lower[j])) / norm)
            else:
                comp = max(comp, abs(dj) * (1.0 + abs(x[j])) / norm)
        elif dj < -tol:
            if lp.upper[j] < INF:
                dual_obj += dj * lp.upper[j]
                comp = max(comp, abs(dj * (lp.upper[j] - x[j])) / norm)
            else:
                comp = max(comp, abs(dj) * (1.0 + abs(x[j])) / norm)
    for i, sense in enumerate(lp.senses):
        if sense == LE:
            comp = max(comp, max(0.0, y[i]) / norm)
            comp = max(comp, abs(y[i] * slack[i]) / norm)
        elif sense == GE:
            comp = max(comp, max(0.0, -y[i]) / norm)
            comp = max(comp, abs(y[i] * slack[i]) / norm)

    gap = abs(obj - dual_obj) / norm
    return ResidualReport(
        max_row_residual=float(np.max(resid_scaled)),
        max_bound_violation=bound_viol,
        duality_gap=float(gap),
        worst_row_name=lp.row_names[worst],
        max_complementarity=float(comp),
    )
