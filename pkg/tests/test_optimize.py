import math

import numpy as np
import pytest

from hingedplate import (
    DensityField,
    GridField,
    PlateConfig,
    PlateSystem,
    SpectralField,
    bang_bang_from_values,
    midline_slope_check,
    minimize,
    random_admissible_density,
    rearrange,
    strip_density,
    symmetry_classify,
    uniform_density,
)
from hingedplate.optimize import LEFT_DOMINANT, RIGHT_DOMINANT, SYMMETRIC


def _mode_field(system, terms):
    c = np.zeros(system.basis.dimension)
    for (m, j), coeff in terms.items():
        c[system.basis.flat_index(m, j)] = coeff
    return SpectralField(system.basis, c)


def test_rearrange_sine_strip_threshold(small_system):
    # sublevel set of sin(x) at fraction 0.8 is {x < 0.4 pi} U {x > 0.6 pi},
    # so the threshold is sin^2(0.4 pi) up to one quadrature cell
    system = small_system
    u = _mode_field(system, {(1, 0): 1.0})
    density, t = rearrange(u, system.rule, system.grid)
    x0 = 0.4 * math.pi
    cell = np.max(np.diff(system.grid.nodes_x))
    slope = abs(math.sin(2 * x0))  # derivative of sin^2 at the cut
    assert abs(t - math.sin(x0) ** 2) <= slope * cell
    # alpha sits on the two outer strips, beta on the middle
    assign = density.alpha_assignment()
    mid = system.grid.nodes_x[np.argmin(np.abs(system.grid.nodes_x - math.pi / 2))]
    i_mid = int(np.argmin(np.abs(system.grid.nodes_x - mid)))
    assert not assign[i_mid, :].any()
    assert assign[0, :].all() and assign[-1, :].all()


def test_rearrange_constant_tie_break(small_system):
    # all nodes tie: lexicographic order admits whole low-x columns first
    system = small_system
    u = GridField(system.grid, np.ones(system.grid.shape))
    density, t = bang_bang_from_values(u, system.rule)
    assert t == pytest.approx(1.0)
    assign = density.alpha_assignment()
    per_column = assign.all(axis=1) | (~assign).any(axis=1)
    assert per_column.all()
    # columns are filled left to right: once a column holds beta, all later do
    col_has_beta = (~assign).any(axis=1)
    first_beta = int(np.argmax(col_has_beta))
    assert col_has_beta[first_beta:].all()
    assert not col_has_beta[:first_beta].any()


def test_rearrange_requires_positive_field(small_system):
    system = small_system
    u = _mode_field(system, {(2, 0): 1.0})  # sin(2x) changes sign
    with pytest.raises(ValueError, match="strictly positive"):
        rearrange(u, system.rule, system.grid)


def test_rearranged_density_is_admissible(small_system, rng):
    system = small_system
    area = system.rule.target_mass
    for _ in range(10):
        vals = rng.uniform(0.05, 2.0, size=system.grid.shape)
        density, t = bang_bang_from_values(GridField(system.grid, vals), system.rule)
        assert density.mass == pytest.approx(area, rel=1e-12)
        assert density.gray_nodes() <= 1
        target = system.rule.sublevel_fraction * area
        assert abs(density.sublevel_measure() - target) <= system.grid.max_node_weight()


def test_rearrange_maximizes_weighted_mass(small_system, rng):
    # the returned density beats 200 random admissible competitors on int p u^2
    system = small_system
    vals = rng.uniform(0.05, 2.0, size=system.grid.shape)
    density, _ = bang_bang_from_values(GridField(system.grid, vals), system.rule)
    w = system.grid.tensor_weights()
    best = np.sum(w * density.values * vals ** 2)
    for _ in range(200):
        q = random_admissible_density(system.grid, system.rule, rng)
        assert best >= np.sum(w * q.values * vals ** 2) - 1e-10 * best


def test_one_rearrangement_step_decreases_lambda(small_system, rng):
    system = small_system
    p = random_admissible_density(system.grid, system.rule, rng)
    pair = system.solve_density(p)
    p_next, _ = rearrange(pair.u, system.rule, system.grid)
    pair_next = system.solve_density(p_next)
    assert pair_next.lambda1 <= pair.lambda1 * (1 + 1e-12)


def test_minimize_trace_monotone_and_admissible(small_system):
    system = small_system
    trace = minimize(system.cfg, uniform_density(system.grid, system.rule),
                     system=system, keep_densities=True)
    trace.assert_monotone()
    assert trace.status in ("fixed_point", "lambda_stagnant")
    lams = trace.lambdas
    assert all(b <= a * (1 + 1e-10) for a, b in zip(lams, lams[1:]))
    area = system.rule.target_mass
    for density in trace.densities:
        assert density.mass == pytest.approx(area, rel=1e-10)
        assert density.gray_nodes() <= 1
        target = system.rule.sublevel_fraction * area
        assert abs(density.sublevel_measure() - target) <= system.grid.max_node_weight()


def test_minimize_single_iteration_cap(small_system):
    cfg = small_system.cfg.with_overrides(opt_max_iter=1)
    start = strip_density(small_system.grid, small_system.rule, "left")
    trace = minimize(cfg, start, system=small_system)
    assert trace.status == "max_iter"
    assert len(trace.records) == 2  # starting solve plus the capped sweep
    lams = trace.lambdas
    assert lams[1] <= lams[0] * (1 + 1e-10)
    # the closing record carries the eigenvalue of the returned density
    check = small_system.solve_density(trace.final_density)
    assert check.lambda1 == pytest.approx(trace.final_lambda, rel=1e-11)


def test_multistart_reaches_common_limit(rng):
    cfg = PlateConfig(n_modes_x=16, n_basis_y=10, n_quad_x=192, n_quad_y=64)
    system = PlateSystem(cfg)
    starts = [
        uniform_density(system.grid, system.rule),
        strip_density(system.grid, system.rule, "left"),
        strip_density(system.grid, system.rule, "right"),
        random_admissible_density(system.grid, system.rule, rng),
    ]
    finals = [minimize(cfg, p, system=system) for p in starts]
    lams = [tr.final_lambda for tr in finals]
    assert (max(lams) - min(lams)) / min(lams) <= 1e-8
    # heavy material ends in an x-centered region straddling the midline
    assign = finals[0].final_density.alpha_assignment()
    heavy_x = np.repeat(system.grid.nodes_x, system.grid.shape[1])[~assign.ravel()]
    assert heavy_x.min() < math.pi / 2 < heavy_x.max()
    # final assignment symmetric under x -> pi - x within one cell
    asym = int(np.sum(assign != assign[::-1, :]))
    assert asym <= 2


def test_symmetry_classify_modes(small_system):
    system = small_system
    sym = _mode_field(system, {(1, 0): 1.0, (1, 1): 0.2})
    assert symmetry_classify(sym, system.grid) == SYMMETRIC
    left = _mode_field(system, {(1, 0): 1.0, (2, 0): 0.3})
    assert symmetry_classify(left, system.grid) == LEFT_DOMINANT
    right = _mode_field(system, {(1, 0): 1.0, (2, 0): -0.3})
    assert symmetry_classify(right, system.grid) == RIGHT_DOMINANT


def test_symmetry_classify_mixed_sign_errors(small_system):
    system = small_system
    mixed = _mode_field(system, {(1, 0): 1.0, (2, 1): 0.3})  # gap odd in y
    with pytest.raises(ValueError, match="mixed sign"):
        symmetry_classify(mixed, system.grid)


def test_midline_slope_signs(small_system):
    system = small_system
    sym = _mode_field(system, {(1, 0): 1.0, (3, 1): 0.1})
    rep = midline_slope_check(sym, system.grid)
    assert rep.verdict == SYMMETRIC
    assert rep.max_abs_slope <= 1e-6

    left = _mode_field(system, {(1, 0): 1.0, (2, 0): 0.3})
    rep = midline_slope_check(left, system.grid)
    assert rep.verdict == LEFT_DOMINANT
    # u_x(pi/2, y) = cos(pi/2) + 0.6 cos(pi) = -0.6
    assert np.allclose(rep.slopes, -0.6, atol=1e-12)

    right = _mode_field(system, {(1, 0): 1.0, (2, 0): -0.3})
    rep = midline_slope_check(right, system.grid)
    assert rep.verdict == RIGHT_DOMINANT
    assert np.allclose(rep.slopes, 0.6, atol=1e-12)


def test_density_field_validation(small_system):
    system = small_system
    vals = np.ones(system.grid.shape)
    vals[0, 0] = 4.0  # out of bounds
    with pytest.raises(ValueError, match="bounds"):
        DensityField(system.grid, vals, system.rule)
    vals = np.full(system.grid.shape, 1.2)  # wrong mass
    with pytest.raises(ValueError, match="mass"):
        DensityField(system.grid, vals, system.rule)


def test_random_admissible_density_exact(small_system, rng):
    for _ in range(20):
        p = random_admissible_density(small_system.grid, small_system.rule, rng)
        assert p.mass == pytest.approx(small_system.rule.target_mass, rel=1e-12)
        assert p.values.min() >= small_system.rule.alpha - 1e-12
        assert p.values.max() <= small_system.rule.beta + 1e-12


def test_produced_densities_mass_at_machine_precision(default_system, rng):
    # every construction path lands within 10 eps of the exact total mass
    system = default_system
    area = system.rule.target_mass
    tol = 10 * np.finfo(float).eps * area
    produced = [
        uniform_density(system.grid, system.rule),
        strip_density(system.grid, system.rule, "left"),
        strip_density(system.grid, system.rule, "right"),
        random_admissible_density(system.grid, system.rule, rng),
    ]
    for _ in range(10):
        vals = rng.uniform(0.05, 2.0, size=system.grid.shape)
        produced.append(bang_bang_from_values(GridField(system.grid, vals),
                                              system.rule)[0])
    for p in produced:
        assert abs(p.mass - area) <= tol


def test_strip_density_shapes(small_system):
    left = strip_density(small_system.grid, small_system.rule, "left")
    right = strip_density(small_system.grid, small_system.rule, "right")
    assert left.mass == pytest.approx(small_system.rule.target_mass, rel=1e-12)
    assert np.array_equal(left.values, right.values[::-1, :])
    # the heavy side really is heavy
    nx = small_system.grid.shape[0]
    assert left.values[: nx // 4].mean() > left.values[-nx // 4:].mean()
    with pytest.raises(ValueError):
        strip_density(small_system.grid, small_system.rule, "middle")


def test_gradient_sign_diagnostic_reports(small_system):
    from hingedplate.optimize import gradient_sign_diagnostic

    trace = minimize(small_system.cfg,
                     uniform_density(small_system.grid, small_system.rule),
                     system=small_system)
    table = gradient_sign_diagnostic(trace.final_eigenpair.u, small_system.grid)
    assert set(table) == {"ux_positive_left", "ux_negative_right",
                          "uy_positive_upper", "uy_negative_lower"}
    for entry in table.values():
        assert 0.0 <= entry["fraction"] <= 1.0
        assert entry["nodes"] > 0
