"""Shared fixtures: canonical shapes and their spectra, built once."""

import numpy as np
import pytest

import npspectra as nps

ELLIPSE = {"kind": "ellipse", "a": 2.0, "b": 1.0}
SQUARE = {"kind": "rounded-rectangle", "width": 2.0, "height": 2.0,
          "corner_radius": 0.25}
STAR = {"kind": "fourier-star", "base_radius": 1.0,
        "cos_coeffs": [0.12, 0.08], "sin_coeffs": [0.0, 0.1]}
KITE = {"kind": "kite"}


@pytest.fixture(scope="session")
def ellipse_nodes():
    return nps.sample(nps.make_contour(ELLIPSE), 256)


@pytest.fixture(scope="session")
def ellipse_op(ellipse_nodes):
    return nps.assemble_k2d_deflated(ellipse_nodes)


@pytest.fixture(scope="session")
def ellipse_spectrum(ellipse_op):
    return nps.eigenpairs(ellipse_op)


@pytest.fixture(scope="session")
def ellipse_plain_spectrum(ellipse_nodes):
    return nps.eigenpairs(nps.assemble_k2d(ellipse_nodes))


@pytest.fixture(scope="session")
def circle_nodes():
    return nps.sample(nps.make_contour({"kind": "circle", "r": 1.0}), 128)


@pytest.fixture(scope="session")
def square_spectrum():
    nodes = nps.sample(nps.make_contour(SQUARE), 256)
    return nps.eigenpairs(nps.assemble_k2d_deflated(nodes))


@pytest.fixture(scope="session")
def sphere_op_ref2():
    mesh = nps.make_mesh({"kind": "sphere", "r": 1.0, "refinement": 2})
    return nps.assemble_k3d(mesh, variant="adjoint")


@pytest.fixture(scope="session")
def sphere_spectrum_ref2(sphere_op_ref2):
    return nps.eigenpairs(sphere_op_ref2)


@pytest.fixture(scope="session")
def shape_file(tmp_path_factory):
    import json
    path = tmp_path_factory.mktemp("shapes") / "ellipse.json"
    path.write_text(json.dumps(ELLIPSE))
    return str(path)
