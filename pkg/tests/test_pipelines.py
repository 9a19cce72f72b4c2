"""Report builders: structure, determinism, serialization."""

import datetime
import json
import os

import mpmath as mp
import numpy as np
import pytest

from npspectra.geometry import ShapeError
from npspectra import pipelines as pl

ELLIPSE = {"kind": "ellipse", "a": 2.0, "b": 1.0}
SPHERE = {"kind": "sphere", "radius": 1.0, "refinement": 2}


def test_reports_are_deterministic_without_timestamp():
    a = pl.dump_report(pl.spectrum_report(ELLIPSE, n=64, timestamp=False))
    b = pl.dump_report(pl.spectrum_report(ELLIPSE, n=64, timestamp=False))
    assert a == b
    assert "generated_at" not in json.loads(a)
    assert a.endswith("\n")


def test_timestamp_field():
    rep = pl.spectrum_report(ELLIPSE, n=64, timestamp=True)
    stamp = datetime.datetime.fromisoformat(rep["generated_at"])
    assert stamp.tzinfo is not None


def test_spectrum_report_contour():
    rep = pl.spectrum_report(ELLIPSE, n=128, timestamp=False)
    assert rep["schema_version"] == pl.SCHEMA_VERSION
    assert rep["kind"] == "contour" and rep["n_nodes"] == 128
    assert rep["kernel"] == "k2d-deflated"
    assert rep["area"] is None and rep["length"] > 0
    assert rep["robin_error"] < 1e-10
    assert rep["max_pairing_mismatch"] < 1e-8
    lams = [row["lambda"] for row in rep["modes"][:2]]
    assert sorted(abs(l) for l in lams) == pytest.approx([3, 3], abs=1e-6)
    row = rep["modes"][0]
    assert set(row) == {"index", "lambda", "epsilon_ratio",
                        "zero_mean_residual", "pairing_mismatch"}


def test_spectrum_report_plain_kernel():
    rep = pl.spectrum_report(ELLIPSE, n=64, deflate=False, timestamp=False)
    assert rep["kernel"] == "k2d"
    assert rep["robin_error"] < 1e-8


def test_spectrum_report_mesh():
    rep = pl.spectrum_report(SPHERE, timestamp=False)
    assert rep["kind"] == "mesh" and rep["kernel"] == "k3d-adjoint"
    assert rep["length"] is None
    assert rep["area"] == pytest.approx(4 * np.pi, rel=0.05)
    assert rep["max_pairing_mismatch"] is None
    assert rep["modes"][0]["lambda"] == pytest.approx(3.0, rel=0.05)


def test_spectrum_csv_roundtrip():
    rep = pl.spectrum_report(ELLIPSE, n=64, max_modes=6, timestamp=False)
    lines = pl.spectrum_csv(rep).splitlines()
    assert lines[0] == "index,lambda,epsilon_ratio,zero_mean_residual,pairing_mismatch"
    assert len(lines) == 1 + len(rep["modes"])
    cells = lines[1].split(",")
    assert float(cells[1]) == rep["modes"][0]["lambda"]  # repr roundtrips


def test_dump_operator(tmp_path):
    path = tmp_path / "op.bin"
    pl.spectrum_report(ELLIPSE, n=64, timestamp=False,
                       dump_operator=str(path))
    assert os.path.getsize(path) == 64 * 64 * 8


def test_load_descriptor(tmp_path):
    good = tmp_path / "shape.json"
    good.write_text(json.dumps(ELLIPSE))
    assert pl.load_descriptor(str(good)) == ELLIPSE
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    with pytest.raises(ShapeError):
        pl.load_descriptor(str(bad))
    nokind = tmp_path / "nokind.json"
    nokind.write_text('{"a": 2.0}')
    with pytest.raises(ShapeError):
        pl.load_descriptor(str(nokind))
    with pytest.raises(FileNotFoundError):
        pl.load_descriptor(str(tmp_path / "missing.json"))


def test_model_from_params():
    assert pl.model_from_params("drude").kind == "drude"
    lossy = pl.model_from_params("drude-lossy", gamma=0.05)
    assert lossy.gamma == 0.05
    assert pl.model_from_params("silver").omega_unit == "eV"
    with pytest.raises(ValueError):
        pl.model_from_params("lorentz")


def test_resonance_report():
    model = pl.model_from_params("drude")
    rep = pl.resonance_report(ELLIPSE, model, n=128, max_modes=4,
                              timestamp=False)
    assert rep["model"]["kind"] == "drude"
    for row in rep["modes"]:
        assert row["attainable"]
        assert row["closed_form_error"] < 1e-10
        assert row["epsilon_ratio"] < 0
        assert 0 < row["omega"] < model.omega_p


def test_excite_report():
    model = pl.model_from_params("drude-lossy", gamma=0.1)
    rep = pl.excite_report(ELLIPSE, model, field=[1.0, 0.0], n=128,
                           max_modes=6, timestamp=False)
    assert rep["field"] == [1.0, 0.0]
    couplings = np.array([row["coupling"] for row in rep["modes"]])
    assert np.max(np.abs(couplings)) > 0.1   # x-field drives an x-dipole mode
    driven = max(rep["modes"], key=lambda r: abs(r["coupling"]))
    assert driven["amplitude"] > abs(driven["coupling"])
    assert driven["offresonant_gain"] is None  # no drive frequency given


def test_excite_report_with_drive():
    model = pl.model_from_params("drude-lossy", gamma=0.1)
    rep = pl.excite_report(ELLIPSE, model, field=[0.0, 1.0], drive_omega=0.4,
                           n=128, max_modes=4, timestamp=False)
    assert rep["drive_omega"] == 0.4
    assert all(row["offresonant_gain"] > 0 for row in rep["modes"])


def test_fredholm_report():
    rep = pl.fredholm_report(ELLIPSE, n=128, orders=6, timestamp=False)
    assert rep["radius"] == pytest.approx(3.0, abs=1e-6)
    assert rep["q"][0] == pytest.approx(0.25, abs=1e-10)
    assert rep["b"][0] == 1.0
    assert rep["b"][1] == pytest.approx(rep["q"][0], abs=1e-12)
    assert rep["determinant_check"]["max_spread"] < 1e-8
    assert rep["logderiv_lambda"] == pytest.approx(0.9, abs=1e-6)
    with pytest.raises(ShapeError):
        pl.fredholm_report(SPHERE, timestamp=False)


def test_fredholm_csv():
    rep = pl.fredholm_report(ELLIPSE, n=128, orders=4, timestamp=False)
    lines = pl.fredholm_csv(rep).splitlines()
    assert lines[0] == "n,q_2n,b_2n"
    assert len(lines) == 5
    assert lines[1].startswith("1,0.25")


def test_xi_report():
    rep = pl.xi_report(digits=30, orders=6, trace_orders=3, timestamp=False)
    assert len(rep["c"]) == 7 and len(rep["q"]) == 3
    assert rep["c"][0].startswith("0.49712077818831410991")
    assert rep["q"][0].startswith("0.046209986230837941")
    with mp.workdps(40):
        assert mp.mpf(rep["spot_check"]["difference"]) < mp.mpf("1e-20")
    assert rep["zeros"] is None and rep["zeros_to"] is None


def test_xi_report_with_zeros():
    rep = pl.xi_report(digits=30, orders=4, trace_orders=2, zeros_to=15.0,
                       timestamp=False)
    assert len(rep["zeros"]) == 1
    assert rep["zeros"][0].startswith("14.1347251417346")
    lines = pl.zeros_csv(rep).splitlines()
    assert lines[0] == "k,height"
    assert lines[1].startswith("1,14.134725")


def test_xi_csv_layout():
    rep = pl.xi_report(digits=30, orders=4, trace_orders=2, timestamp=False)
    lines = pl.xi_csv(rep).splitlines()
    assert lines[0] == "n,c_2n,q_2n"
    assert len(lines) == 6
    assert lines[1].endswith(",")          # no q_0
    assert not lines[2].endswith(",")


def test_grommer_report():
    rep = pl.grommer_report(N=1, digits=40, timestamp=False)
    assert rep["trace_orders"] == 3
    assert len(rep["hankel"]) == 2
    assert rep["all_positive"]
    assert all(row["positive"] for row in rep["hankel"])
    ce = rep["counterexample"]
    assert ce["first_failing_N"] == 1
    with mp.workdps(50):
        assert mp.mpf(ce["min_eigenvalue"]) < 0


def test_grommer_report_guards():
    from npspectra.riemann import PrecisionError
    with pytest.raises(PrecisionError):
        pl.grommer_report(N=4, digits=31, timestamp=False)
    rep = pl.grommer_report(N=1, digits=40, include_counterexample=False,
                            timestamp=False)
    assert "counterexample" not in rep
