import math

import numpy as np
import pytest

from hingedplate import (
    GreenOperator,
    GridField,
    PlateConfig,
    apply,
    evaluate_on_grid,
    green_dx,
    green_matrix,
    quadratic_form,
    reflection_gap,
    uniform_density,
)
from hingedplate.green import certify_green, certify_positivity_preserving, interior_probe_points


@pytest.fixture(scope="module")
def op(default_cfg):
    return GreenOperator.from_config(default_cfg)


def test_apply_linearity(op, rng):
    f = rng.standard_normal(op.grid.shape)
    g = rng.standard_normal(op.grid.shape)
    u_sum = apply(op, GridField(op.grid, f + g)).coefficients
    u_f = apply(op, GridField(op.grid, f)).coefficients
    u_g = apply(op, GridField(op.grid, g)).coefficients
    scale = np.abs(u_sum).max()
    assert np.abs(u_sum - u_f - u_g).max() <= 1e-12 * scale


def test_apply_eigen_fixed_point(op, default_system, default_uniform_pair):
    # the first eigenpair satisfies u = lambda1 * (solution of load p u)
    pair = default_uniform_pair
    u_grid = evaluate_on_grid(pair.u, op.grid)
    back = apply(op, u_grid)  # p = 1
    recovered = pair.lambda1 * back.coefficients
    err = np.abs(recovered - pair.u.coefficients).max() / np.abs(pair.u.coefficients).max()
    assert err <= 1e-9


def test_apply_positive_loads_positive_solutions(op, rng):
    X, Y = op.grid.meshgrid()
    for _ in range(50):
        f = rng.uniform(0.0, 1.0, size=op.grid.shape)
        f[f < 0.3] = 0.0
        u = apply(op, GridField(op.grid, f))
        uvals = evaluate_on_grid(u, op.grid).values
        assert uvals.min() > 0.0


def test_inverse_consistency(op, default_system, rng):
    # energy matrix applied to the solution returns the load
    f = GridField(op.grid, rng.standard_normal(op.grid.shape))
    load = op.load_vector(f)
    u = apply(op, f)
    back = default_system.K @ u.coefficients
    assert np.abs(back - load).max() <= 1e-10 * np.abs(load).max()
    # the kernel quadratic pairing is exactly symmetric in its two loads
    g = GridField(op.grid, rng.standard_normal(op.grid.shape))
    load_g = op.load_vector(g)
    pair_fg = load_g @ op.factor.solve(load)
    pair_gf = load @ op.factor.solve(load_g)
    assert pair_fg == pytest.approx(pair_gf, rel=1e-12)


def test_kernel_symmetry_and_boundary(op, rng):
    pts = interior_probe_points(op.grid, 8, 5)
    G = green_matrix(op, pts, pts)
    assert np.abs(G - G.T).max() <= 1e-13 * np.abs(G).max()
    ys = np.linspace(-op.grid.ell, op.grid.ell, 5)
    for x_edge in (0.0, math.pi):
        edge = np.column_stack([np.full(5, x_edge), ys])
        G_edge = green_matrix(op, pts, edge)
        assert np.abs(G_edge).max() <= 1e-13


def test_kernel_positive_on_probe_lattice(op):
    pts = interior_probe_points(op.grid, 20, 10)
    G = green_matrix(op, pts, pts)
    assert pts.shape[0] >= 200
    assert G.min() > 0.0


def test_green_dx_signs(op):
    probes = interior_probe_points(op.grid, 15, 7)
    ys = np.linspace(-op.grid.ell, op.grid.ell, 5)
    assert green_dx(op, 0.0, ys, probes).min() > 0.0
    assert green_dx(op, math.pi, ys, probes).max() < 0.0
    mid = green_dx(op, math.pi / 2, ys, probes)
    rho = probes[:, 0]
    assert mid[:, rho < math.pi / 2 - 1e-9].max() < 0.0
    assert mid[:, rho > math.pi / 2 + 1e-9].min() > 0.0
    # source on the midline: derivative vanishes there
    on_mid = green_dx(op, math.pi / 2, ys, np.array([[math.pi / 2, 0.1]]))
    assert np.abs(on_mid).max() <= 1e-12


def test_reflection_identities_exact(op):
    pts = interior_probe_points(op.grid, 10, 5)
    mirrored = np.column_stack([math.pi - pts[:, 0], pts[:, 1]])
    G = green_matrix(op, pts, pts)
    G_pair = green_matrix(op, mirrored, mirrored)
    assert np.abs(G - G_pair).max() <= 1e-12 * np.abs(G).max()
    G_src = green_matrix(op, mirrored, pts)
    G_tgt = green_matrix(op, pts, mirrored)
    assert np.abs(G_src - G_tgt).max() <= 1e-12 * np.abs(G).max()


def test_reflection_gap_positive_inside_half(op):
    half = interior_probe_points(op.grid, 12, 6, half_plane=True)
    assert reflection_gap(op, half) > 0.0
    # single interior pair keeps a visible margin
    single = np.array([[math.pi / 4, 0.0]])
    assert reflection_gap(op, single) > 1e-8
    # on the midline the reflection is the identity: gap exactly zero
    mid = np.array([[math.pi / 2, 0.0]])
    G_mid = green_matrix(op, mid, mid).item()
    mirrored = np.array([[math.pi - math.pi / 2, 0.0]])
    G_mirror = green_matrix(op, mid, mirrored).item()
    assert G_mid - G_mirror == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        reflection_gap(op, np.array([[2.0, 0.0]]))


def test_quadratic_form_matches_direct_pairing(op, rng):
    f = GridField(op.grid, rng.standard_normal(op.grid.shape))
    u = apply(op, f)
    w = op.grid.tensor_weights()
    direct = float(np.sum(w * evaluate_on_grid(u, op.grid).values * f.values))
    assert quadratic_form(op, f) == pytest.approx(direct, rel=1e-12)


def test_certify_green_all_pass(default_cfg):
    reports = certify_green(default_cfg)
    ids = [r.claim_id for r in reports]
    assert len(ids) == len(set(ids))
    for r in reports:
        assert r.passed, f"{r.claim_id} failed with margin {r.min_margin}"
        assert r.probe_count >= 200 or r.claim_id.startswith("solution")
        assert "n_modes_x" in r.resolution


def test_certify_green_underresolved_reports(default_cfg):
    cfg = default_cfg.with_overrides(n_modes_x=2, n_basis_y=3)
    reports = certify_green(cfg)
    assert len(reports) == len(certify_green.__defaults__ or ()) or len(reports) > 0
    for r in reports:
        assert "n_modes_x=2" in r.resolution  # failures attributable to resolution


def test_positivity_preserving_certification(default_cfg):
    reports = certify_positivity_preserving(default_cfg, n_loads=50)
    by_id = {r.claim_id: r for r in reports}
    assert by_id["solution-positivity"].passed
    assert by_id["solution-edge-slopes"].passed
    assert by_id["solution-positivity"].min_margin > 0.0
