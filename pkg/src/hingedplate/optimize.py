"""Iterative density rearrangement minimizing the first plate eigenvalue.

One sweep: solve the eigenproblem for the current density, then replace the
density by the two-material arrangement that puts the light material alpha
on the sublevel set of the eigenfunction whose measure is the fixed
fraction (beta-1)/(beta-alpha) of the plate, lighter where the plate moves
least.  That arrangement maximizes the weighted mass of the current
eigenfunction over all admissible densities, which forces the eigenvalue
sequence to be non increasing; the loop stops at a density fixed point or
when the eigenvalue stagnates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assembly import StiffnessFactor, assemble_stiffness, assemble_weighted_mass
from .basis import SpectralField, build_basis, evaluate_on_grid
from .config import AdmissibleWeightRule, PlateConfig
from .eigensolve import Eigenpair, solve_first
from .grid import GridField, QuadratureGrid

LEFT_DOMINANT = "LEFT_DOMINANT"
RIGHT_DOMINANT = "RIGHT_DOMINANT"
SYMMETRIC = "SYMMETRIC"


class MonotonicityError(RuntimeError):
    """The eigenvalue sequence increased beyond tolerance; the sweep is broken."""


@dataclass(frozen=True)
class DensityField:
    """Admissible density: values in [alpha, beta], quadrature mass = area.

    Bang-bang densities take only the two material values except for at
    most one gray node holding the value that makes the mass exact.
    """

    grid: QuadratureGrid
    values: np.ndarray
    rule: AdmissibleWeightRule

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ValueError("density values do not match the grid")
        object.__setattr__(self, "values", vals)
        lo, hi = self.rule.alpha, self.rule.beta
        if vals.min() < lo - 1e-12 or vals.max() > hi + 1e-12:
            raise ValueError(
                f"density range [{vals.min():.6g}, {vals.max():.6g}] violates "
                f"bounds [{lo}, {hi}]"
            )
        mass = self.grid.integrate(vals)
        if abs(mass - self.rule.target_mass) > 1e-10 * self.rule.target_mass:
            raise ValueError(
                f"density mass {mass!r} misses target {self.rule.target_mass!r}"
            )

    @property
    def mass(self) -> float:
        return self.grid.integrate(self.values)

    def as_grid_field(self) -> GridField:
        return GridField(self.grid, self.values)

    def alpha_assignment(self) -> np.ndarray:
        """Boolean mask of nodes carrying the light material (gray counts as
        alpha when below the midpoint)."""
        return self.values < 0.5 * (self.rule.alpha + self.rule.beta)

    def sublevel_measure(self) -> float:
        return float(np.sum(self.grid.tensor_weights()[self.alpha_assignment()]))

    def gray_nodes(self) -> int:
        strict = (self.values > self.rule.alpha + 1e-12) \
            & (self.values < self.rule.beta - 1e-12)
        return int(np.sum(strict))


def uniform_density(grid: QuadratureGrid, rule: AdmissibleWeightRule) -> DensityField:
    return DensityField(grid, np.ones(grid.shape), rule)


def _quantile_assignment(values_flat, grid: QuadratureGrid, target_measure, order_key=None):
    """Sorted-node assignment filling `target_measure` from the bottom.

    Nodes enter in ascending (value, x, y) order until the cumulative tensor
    weight reaches the target; returns the sorted order, the number of whole
    nodes admitted, and the weight still missing from the last (gray) node.
    """
    nx, ny = grid.shape
    xs = np.repeat(grid.nodes_x, ny)
    ys = np.tile(grid.nodes_y, nx)
    key = values_flat if order_key is None else order_key
    order = np.lexsort((ys, xs, key))
    w = grid.flat_weights()[order]
    cum = np.cumsum(w)
    if not 0.0 < target_measure < cum[-1]:
        raise ValueError("target measure outside the grid total")
    r = int(np.searchsorted(cum, target_measure))
    w_before = float(cum[r - 1]) if r > 0 else 0.0
    return order, r, target_measure - w_before


def _absorb_mass_defect(p_flat, grid: QuadratureGrid, target_mass, node, lo, hi):
    """Retouch one node so the quadrature mass matches the target bitwise.

    The cumulative sums used to place the quantile and the pairwise sum
    used to validate the mass round differently at the few-eps level; two
    or three corrections against the validating sum close the gap.
    """
    w_node = grid.flat_weights()[node]
    for _ in range(3):
        defect = target_mass - float(np.sum(grid.flat_weights() * p_flat))
        if defect == 0.0:
            break
        p_flat[node] = min(hi, max(lo, p_flat[node] + defect / w_node))


def bang_bang_from_values(values: GridField, rule: AdmissibleWeightRule):
    """Two-material density from node values: alpha on the low-value quantile.

    The sublevel set S collects nodes in ascending (value, x, y) order until
    its measure reaches sublevel_fraction * area; the one node straddling
    the target gets the gray value restoring the exact mass.  Returns the
    density and the squared threshold value t.
    """
    grid = values.grid
    flat = values.flat()
    target = rule.sublevel_fraction * rule.target_mass
    order, r, w_gray = _quantile_assignment(flat, grid, target)
    p = np.full(flat.size, rule.beta)
    p[order[:r]] = rule.alpha
    gray_node = order[r]
    w_node = grid.flat_weights()[gray_node]
    p[gray_node] = rule.beta - (rule.beta - rule.alpha) * (w_gray / w_node)
    _absorb_mass_defect(p, grid, rule.target_mass, gray_node, rule.alpha, rule.beta)
    t = float(flat[gray_node]) ** 2
    density = DensityField(grid, p.reshape(grid.shape), rule)
    return density, t


def rearrange(u: SpectralField, rule: AdmissibleWeightRule, grid: QuadratureGrid):
    """Optimal density for the current eigenfunction (one sweep of the loop).

    Demands u strictly positive at every node; the returned density equals
    alpha exactly where u <= sqrt(t) up to the single gray node.
    """
    uvals = evaluate_on_grid(u, grid)
    if uvals.values.min() <= 0.0:
        raise ValueError(
            f"eigenfunction not strictly positive on the grid "
            f"(min {uvals.values.min():.3e}); cannot rearrange"
        )
    return bang_bang_from_values(uvals, rule)


def random_admissible_density(grid: QuadratureGrid, rule: AdmissibleWeightRule,
                              rng: np.random.Generator) -> DensityField:
    """Uniformly random node values shifted and clipped to the exact mass."""
    raw = rng.uniform(rule.alpha, rule.beta, size=grid.shape)
    w = grid.tensor_weights()
    lo, hi = rule.alpha - rule.beta, rule.beta - rule.alpha

    def mass(shift):
        return float(np.sum(w * np.clip(raw + shift, rule.alpha, rule.beta)))

    target = rule.target_mass
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mass(mid) < target:
            lo = mid
        else:
            hi = mid
    vals = np.clip(raw + 0.5 * (lo + hi), rule.alpha, rule.beta).ravel()
    # Bisection leaves a sub-1e-10 mass defect; absorb it in one mid-range node.
    node = int(np.argmin(np.abs(vals - 1.0)))
    _absorb_mass_defect(vals, grid, target, node, rule.alpha, rule.beta)
    return DensityField(grid, vals.reshape(grid.shape), rule)


def strip_density(grid: QuadratureGrid, rule: AdmissibleWeightRule,
                  side: str) -> DensityField:
    """All heavy material packed against one short edge (an asymmetric start).

    The heavy strip gets the measure (1-alpha)/(beta-alpha) * area that the
    mass constraint allows; one gray node makes the mass exact.
    """
    nx, ny = grid.shape
    xs = np.repeat(grid.nodes_x, ny)
    if side == "left":
        key = xs
    elif side == "right":
        key = -xs
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    heavy_measure = (1.0 - rule.alpha) / (rule.beta - rule.alpha) * rule.target_mass
    order, r, w_gray = _quantile_assignment(key, grid, heavy_measure, order_key=key)
    p = np.full(nx * ny, rule.alpha)
    p[order[:r]] = rule.beta
    gray_node = order[r]
    w_node = grid.flat_weights()[gray_node]
    p[gray_node] = rule.alpha + (rule.beta - rule.alpha) * (w_gray / w_node)
    _absorb_mass_defect(p, grid, rule.target_mass, gray_node, rule.alpha, rule.beta)
    return DensityField(grid, p.reshape(grid.shape), rule)


@dataclass(frozen=True)
class TraceRecord:
    iteration: int
    lambda1: float
    threshold_t: float
    sublevel_measure: float
    density_change_measure: float


@dataclass
class OptimizationTrace:
    """Per-sweep records plus the converged state of one minimization run."""

    records: list
    status: str                 # 'fixed_point' | 'lambda_stagnant' | 'max_iter'
    final_density: DensityField
    final_eigenpair: Eigenpair
    densities: list = field(default_factory=list)

    @property
    def lambdas(self):
        return [rec.lambda1 for rec in self.records]

    @property
    def final_lambda(self) -> float:
        return self.records[-1].lambda1

    def assert_monotone(self, tol: float = 1e-10):
        lams = self.lambdas
        for a, b in zip(lams, lams[1:]):
            if b > a * (1.0 + tol):
                raise MonotonicityError(
                    f"eigenvalue increased from {a!r} to {b!r} along the sweep"
                )


class PlateSystem:
    """Assembled operators of one configuration, shared by all sweeps."""

    def __init__(self, cfg: PlateConfig):
        self.cfg = cfg
        self.rule = AdmissibleWeightRule.from_config(cfg)
        self.basis = build_basis(cfg)
        self.grid = QuadratureGrid.from_config(cfg)
        self.K = assemble_stiffness(self.basis, self.grid, cfg.sigma)
        self.factor = StiffnessFactor.build(self.basis, self.grid, cfg.sigma)

    def mass_matrix(self, p: DensityField) -> np.ndarray:
        return assemble_weighted_mass(
            self.basis, self.grid, p.as_grid_field(),
            bounds=(self.rule.alpha, self.rule.beta),
        )

    def solve_density(self, p: DensityField) -> Eigenpair:
        return solve_first(
            self.K, self.mass_matrix(p), self.cfg,
            ksolve=self.factor.solve, grid=self.grid, basis=self.basis,
        )


def minimize(cfg: PlateConfig, initial_p: DensityField, *,
             system: PlateSystem = None, keep_densities: bool = False) -> OptimizationTrace:
    """Run the rearrangement loop from one starting density.

    Each record holds one eigensolve plus the rearrangement computed from
    it; the loop stops at an exact assignment fixed point, at relative
    eigenvalue stagnation below cfg.opt_tol, or after cfg.opt_max_iter
    rearrangement sweeps (so the trace carries at most opt_max_iter + 1
    records and always closes with the eigenvalue of the final density).
    A step that increases the eigenvalue beyond 1e-10 relative aborts: the
    variational chain guarantees decrease, so growth means broken inputs.
    """
    sys_ = system if system is not None else PlateSystem(cfg)
    p = initial_p
    records = []
    densities = []
    prev_assign = None
    prev_lambda = None
    status = None
    pair = None
    for it in range(cfg.opt_max_iter + 1):
        pair = sys_.solve_density(p)
        if prev_lambda is not None and pair.lambda1 > prev_lambda * (1.0 + 1e-10):
            raise MonotonicityError(
                f"sweep {it}: eigenvalue rose from {prev_lambda!r} to {pair.lambda1!r}"
            )
        new_p, t = rearrange(pair.u, sys_.rule, sys_.grid)
        assign = new_p.alpha_assignment()
        if prev_assign is None:
            change = float("nan")  # start density need not be two-material
        else:
            change = float(np.sum(sys_.grid.tensor_weights()[assign != prev_assign]))
        records.append(TraceRecord(
            iteration=it,
            lambda1=pair.lambda1,
            threshold_t=t,
            sublevel_measure=new_p.sublevel_measure(),
            density_change_measure=change,
        ))
        if keep_densities:
            densities.append(new_p)
        if prev_assign is not None and change == 0.0 \
                and np.array_equal(new_p.values, p.values):
            # rearranging reproduced the current density exactly
            status = "fixed_point"
            break
        if prev_lambda is not None and abs(pair.lambda1 - prev_lambda) <= cfg.opt_tol * prev_lambda:
            status = "lambda_stagnant"
            break
        if it == cfg.opt_max_iter:
            status = "max_iter"
            break
        prev_assign = assign
        prev_lambda = pair.lambda1
        p = new_p
    trace = OptimizationTrace(
        records=records, status=status, final_density=p,
        final_eigenpair=pair, densities=densities,
    )
    trace.assert_monotone()
    return trace


def symmetry_classify(u: SpectralField, grid: QuadratureGrid,
                      tol: float = 1e-6) -> str:
    """Which of the three mirror alternatives the field satisfies.

    Compares u at mirror node pairs (x, pi-x).  SYMMETRIC when the largest
    mirror gap stays below tol * max|u|; otherwise the gaps must share one
    strict sign on the whole left half, and a mixed pattern is an error
    because a genuine optimal eigenfunction admits no such state.
    """
    vals = evaluate_on_grid(u, grid).values
    scale = np.abs(vals).max()
    if scale == 0.0:
        raise ValueError("zero field cannot be classified")
    nx = grid.shape[0]
    diff = vals[: nx // 2] - vals[::-1, :][: nx // 2]
    hi, lo = float(diff.max()), float(diff.min())
    if max(abs(hi), abs(lo)) <= tol * scale:
        return SYMMETRIC
    if lo > -tol * scale:
        return LEFT_DOMINANT
    if hi < tol * scale:
        return RIGHT_DOMINANT
    raise ValueError(
        f"mirror gaps of mixed sign beyond tolerance "
        f"(min {lo:.3e}, max {hi:.3e}, scale {scale:.3e})"
    )


@dataclass(frozen=True)
class MidlineSlopeReport:
    verdict: str
    slopes: np.ndarray          # u_x(pi/2, y_k) at every y node
    max_abs_slope: float
    consistent: bool


def midline_slope_check(u: SpectralField, grid: QuadratureGrid,
                        tol: float = 1e-6) -> MidlineSlopeReport:
    """Sign of u_x on the midline x = pi/2, checked against the mirror class.

    A left-dominant field must slope downward across the midline at every y,
    a right-dominant one upward, and a symmetric one must be flat there; any
    disagreement raises.
    """
    verdict = symmetry_classify(u, grid, tol=tol)
    pts = np.column_stack([np.full(grid.shape[1], np.pi / 2), grid.nodes_y])
    slopes = u.coefficients @ u.basis.eval_matrix(pts, dx=1)
    scale = float(np.abs(evaluate_on_grid(u, grid).values).max())
    thr = tol * scale
    if verdict == SYMMETRIC:
        ok = bool(np.all(np.abs(slopes) <= thr))
    elif verdict == LEFT_DOMINANT:
        ok = bool(np.all(slopes < thr))
    else:
        ok = bool(np.all(slopes > -thr))
    if not ok:
        raise ValueError(
            f"midline slopes inconsistent with {verdict}: "
            f"range [{slopes.min():.3e}, {slopes.max():.3e}]"
        )
    return MidlineSlopeReport(
        verdict=verdict, slopes=slopes,
        max_abs_slope=float(np.abs(slopes).max()), consistent=ok,
    )


def gradient_sign_diagnostic(u: SpectralField, grid: QuadratureGrid) -> dict:
    """Observed sign pattern of u_x and u_y over the four quarter-plates.

    Reported, never asserted: the conjectured monotonicity (rising toward
    the midline in x, toward the centerline in y) is an open question, so
    the table only counts violating nodes.
    """
    ux = evaluate_on_grid(u, grid, dx=1).values
    uy = evaluate_on_grid(u, grid, dy=1).values
    X, Y = grid.meshgrid()
    left, right = X < np.pi / 2, X > np.pi / 2
    lower, upper = Y < 0, Y > 0
    return {
        "ux_positive_left": _share(ux > 0, left),
        "ux_negative_right": _share(ux < 0, right),
        "uy_positive_upper": _share(uy > 0, upper),
        "uy_negative_lower": _share(uy < 0, lower),
    }


def _share(good: np.ndarray, region: np.ndarray) -> dict:
    total = int(np.sum(region))
    holds = int(np.sum(good & region))
    return {"nodes": total, "holding": holds, "fraction": holds / total if total else 1.0}
