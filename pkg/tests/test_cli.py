import json
import math
from pathlib import Path

import numpy as np
import pytest

from hingedplate import PlateConfig, QuadratureGrid
from hingedplate.cli import main
from hingedplate.io import write_grid_csv

SMALL = {"n_modes_x": 8, "n_basis_y": 6, "n_quad_x": 32, "n_quad_y": 16}


@pytest.fixture()
def small_config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(SMALL))
    return path


def _result_bytes(root: Path) -> dict:
    out = {}
    for path in sorted(root.rglob("*")):
        if path.is_file() and path.name != "manifest.jsonl":
            out[str(path.relative_to(root))] = path.read_bytes()
    return out


def test_solve_smoke(tmp_path, small_config_file):
    out = tmp_path / "run"
    rc = main(["solve", "--config", str(small_config_file), "--out", str(out)])
    assert rc == 0
    assert (out / "eigenpair.json").exists()
    assert (out / "levelsets.csv").exists()
    assert (out / "manifest.jsonl").exists()
    payload = json.loads((out / "eigenpair.json").read_text())
    assert payload["lambda1"] > 0.0
    manifest = json.loads((out / "manifest.jsonl").read_text().splitlines()[0])
    produced = set(manifest["outputs"])
    on_disk = {str(p.relative_to(out)) for p in out.rglob("*")
               if p.is_file() and p.name != "manifest.jsonl"}
    assert produced == on_disk


def test_solve_rejects_inadmissible_density(tmp_path, small_config_file):
    grid = QuadratureGrid.from_config(PlateConfig(**SMALL))
    vals = np.full(grid.shape, 1.0)
    vals[0, 0] = 0.4  # below alpha
    density_path = tmp_path / "density.csv"
    write_grid_csv(density_path, grid, vals, value_name="p")
    rc = main(["solve", "--config", str(small_config_file),
               "--out", str(tmp_path / "run"), "--density", str(density_path)])
    assert rc == 2


def test_solve_rejects_bad_config(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"alpha": 1.5}))
    rc = main(["solve", "--config", str(cfg), "--out", str(tmp_path / "run")])
    assert rc == 2
    cfg.write_text(json.dumps({"unknown_key": 1}))
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "r2")]) == 2


def test_solve_deterministic_outputs(tmp_path, small_config_file):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert main(["solve", "--config", str(small_config_file), "--out", str(out1)]) == 0
    assert main(["solve", "--config", str(small_config_file), "--out", str(out2)]) == 0
    assert _result_bytes(out1) == _result_bytes(out2)


def test_optimize_multistart(tmp_path, small_config_file):
    out = tmp_path / "opt"
    rc = main(["optimize", "--config", str(small_config_file), "--out", str(out),
               "--starts", "4", "--seed", "3"])
    assert rc == 0
    summary = json.loads((out / "optimize_summary.json").read_text())
    assert len(summary["final_lambda_per_start"]) == 4
    assert summary["cross_start_relative_spread"] >= 0.0
    assert summary["symmetry_verdict"] in ("SYMMETRIC", "LEFT_DOMINANT", "RIGHT_DOMINANT")
    lo, hi = summary["heavy_region_x_range"]
    assert lo < math.pi / 2 < hi
    for start in summary["final_lambda_per_start"]:
        assert (out / start / "trace.csv").exists()
        assert (out / start / "final_density.csv").exists()
        trace_lines = (out / start / "trace.csv").read_text().splitlines()
        lams = [float(line.split(",")[1]) for line in trace_lines[1:]]
        assert all(b <= a * (1 + 1e-10) for a, b in zip(lams, lams[1:]))


def test_optimize_single_named_start(tmp_path, small_config_file):
    out = tmp_path / "opt1"
    rc = main(["optimize", "--config", str(small_config_file), "--out", str(out),
               "--init", "left-heavy"])
    assert rc == 0
    summary = json.loads((out / "optimize_summary.json").read_text())
    assert list(summary["final_lambda_per_start"]) == ["left-heavy"]


def test_optimize_deterministic(tmp_path, small_config_file):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    for out in (out1, out2):
        assert main(["optimize", "--config", str(small_config_file),
                     "--out", str(out), "--starts", "2", "--seed", "11"]) == 0
    assert _result_bytes(out1) == _result_bytes(out2)


def test_certify_series_suite(tmp_path):
    out = tmp_path / "cert"
    rc = main(["certify", "--suite", "series", "--out", str(out)])
    assert rc == 0
    reports = json.loads((out / "certify_series.json").read_text())
    assert all(r["pass"] for r in reports)


def test_certify_all_unique_claims(tmp_path, small_config_file):
    # under-resolved config: the bundle must still be produced, every claim
    # exactly once, failures attributed to the recorded resolution
    cfg = dict(SMALL, n_modes_x=2, n_basis_y=3)
    path = tmp_path / "under.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "cert_all"
    rc = main(["certify", "--suite", "all", "--config", str(path), "--out", str(out)])
    assert rc in (0, 4)
    reports = json.loads((out / "certify_all.json").read_text())
    ids = [r["claim_id"] for r in reports]
    assert len(ids) == len(set(ids))
    from hingedplate.certify import CLAIM_STATEMENTS

    assert set(ids) == set(CLAIM_STATEMENTS)
    if any(not r["pass"] for r in reports):
        assert rc == 4
        for r in reports:
            if not r["pass"]:
                assert r["resolution"]


def test_unknown_suite_rejected(tmp_path):
    with pytest.raises(SystemExit):
        main(["certify", "--suite", "bogus", "--out", str(tmp_path)])


def test_solver_failure_exit_code(tmp_path):
    # an unreachable residual demand must surface as a solver failure
    cfg = dict(SMALL, eig_tol=1e-30)
    path = tmp_path / "strict.json"
    path.write_text(json.dumps(cfg))
    rc = main(["solve", "--config", str(path), "--out", str(tmp_path / "run")])
    assert rc == 3
