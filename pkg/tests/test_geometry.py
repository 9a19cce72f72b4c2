"""Contour and mesh construction, sampling, and descriptor handling."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import cumulative_trapezoid

from npspectra.geometry import (ShapeError, make_contour, make_mesh,
                                make_sphere_mesh, sample, scale_descriptor)
from conftest import ELLIPSE, KITE, SQUARE, STAR

# Perimeter of the 2:1 ellipse, 8 a E(1/2 ... ) frozen from the complete
# elliptic integral of the second kind: 4 * 2 * E(m = 3/4).
ELLIPSE_21_LENGTH = 9.688448220547675


def test_circle_metrics():
    c = make_contour({"kind": "circle", "r": 1.5})
    assert abs(c.length() - 3.0 * np.pi) < 1e-10
    nodes = sample(c, 64)
    assert np.allclose(nodes.curvatures, 1.0 / 1.5, atol=1e-12)
    assert np.allclose(np.linalg.norm(nodes.normals, axis=1), 1.0, atol=1e-13)
    # outward orientation on a convex curve centered at the origin
    assert np.all(np.einsum("ij,ij->i", nodes.normals, nodes.points) > 0)
    assert np.allclose(nodes.weights, nodes.length / 64)


def test_ellipse_length_matches_elliptic_integral():
    c = make_contour(ELLIPSE)
    assert abs(c.length() - ELLIPSE_21_LENGTH) < 1e-9


def test_sampling_is_constant_arclength():
    contour = make_contour(ELLIPSE)
    nodes = sample(contour, 128)
    # independent cumulative arc length on a dense trapezoid grid
    u = np.linspace(0.0, 2.0 * np.pi, 1 << 18)
    d1 = contour.dgamma(u)
    s = cumulative_trapezoid(np.hypot(d1[0], d1[1]), u, initial=0.0)
    sj = np.interp(nodes.params, u, s)
    segments = np.diff(np.append(sj, s[-1]))
    assert np.max(np.abs(segments - nodes.length / 128)) < 1e-8 * nodes.length


def test_sampling_rejects_odd_and_tiny_n():
    c = make_contour(ELLIPSE)
    with pytest.raises(ShapeError):
        sample(c, 15)
    with pytest.raises(ShapeError):
        sample(c, 8)


def test_kite_is_nonconvex():
    nodes = sample(make_contour(KITE), 128)
    assert nodes.curvatures.min() < 0 < nodes.curvatures.max()


def test_fourier_star_coefficient_budget():
    desc = dict(STAR, cos_coeffs=[0.5, 0.5])
    with pytest.raises(ShapeError):
        make_contour(desc)
    make_contour(STAR)  # within budget


def test_rounded_rectangle_reports_fit():
    c = make_contour(SQUARE)
    desc = c.descriptor()
    assert desc["exponent"] % 2 == 0 and desc["exponent"] >= 4
    actual = desc["actual_corner_radius"]
    nodes = sample(c, 256)
    # tightest curvature matches the reported corner radius
    assert abs(1.0 / nodes.curvatures.max() - actual) < 0.02 * actual
    # footprint is the requested box
    assert abs(nodes.points[:, 0].max() - 1.0) < 1e-3
    assert abs(nodes.points[:, 1].max() - 1.0) < 1e-3


def test_rounded_rectangle_rejects_bad_corners():
    with pytest.raises(ShapeError):
        make_contour(dict(SQUARE, corner_radius=0.0))
    with pytest.raises(ShapeError):
        make_contour(dict(SQUARE, corner_radius=0.005))  # too sharp
    with pytest.raises(ShapeError):
        make_contour(dict(SQUARE, corner_radius=1.2))    # too round


def test_sharp_corner_kinds_are_rejected():
    for kind in ("polygon", "rectangle", "square"):
        with pytest.raises(ShapeError):
            make_contour({"kind": kind})


def test_scale_descriptor():
    scaled = scale_descriptor(ELLIPSE, 2.7)
    assert scaled["a"] == pytest.approx(5.4)
    c = make_contour(scaled)
    assert abs(c.length() - 2.7 * ELLIPSE_21_LENGTH) < 1e-8
    sq = scale_descriptor(make_contour(SQUARE).descriptor(), 2.0)
    assert "exponent" not in sq and "actual_corner_radius" not in sq
    assert sq["corner_radius"] == pytest.approx(0.5)


@settings(max_examples=25, deadline=None)
@given(r=st.floats(0.3, 3.0), s=st.floats(0.5, 2.0))
def test_scaled_circle_curvature(r, s):
    c = make_contour({"kind": "circle", "r": r}).scaled(s)
    nodes = sample(c, 16)
    assert np.allclose(nodes.curvatures, 1.0 / (r * s), rtol=1e-10)


def test_icosphere_refinement_counts():
    m1 = make_sphere_mesh(1.0, 1)
    assert len(m1.triangles) == 80
    m2 = make_sphere_mesh(1.0, 2)
    assert len(m2.triangles) == 320
    with pytest.raises(ShapeError):
        make_sphere_mesh(1.0, 0)


def test_sphere_mesh_geometry():
    m = make_sphere_mesh(2.0, 2)
    assert abs(m.total_area - 4 * np.pi * 4.0) / (16 * np.pi) < 0.02
    assert m.signed_volume > 0
    assert np.all(np.einsum("ij,ij->i", m.normals, m.centroids) > 0)
    assert np.all(m.areas > 0)
    assert np.allclose(np.linalg.norm(m.normals, axis=1), 1.0, atol=1e-12)


def test_ellipsoid_mesh_axes():
    m = make_mesh({"kind": "ellipsoid", "a": 2.0, "b": 1.0, "c": 0.5,
                   "refinement": 2})
    assert abs(np.abs(m.vertices[:, 0]).max() - 2.0) < 1e-12
    assert abs(np.abs(m.vertices[:, 2]).max() - 0.5) < 1e-12


def test_unknown_kinds_raise():
    with pytest.raises(ShapeError):
        make_contour({"kind": "heptagram"})
    with pytest.raises(ShapeError):
        make_mesh({"kind": "torus"})
