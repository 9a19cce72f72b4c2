"""Eigen-analysis: classification, twins, biorthogonality, orthogonality."""

import numpy as np
import pytest

import npspectra as nps
from npspectra.geometry import NodeSet2D
from npspectra.operator import DiscreteOperator, K2D_DEFLATED, log_gram
from npspectra.spectral import (EigenSolverError, EnergyForm,
                                biorthogonality_gram, biorthogonalize,
                                eigenpairs, energy_inner_product, mode_dipole,
                                pair_twins, spectrum_rows,
                                strong_orthogonality_residual)


def test_ellipse_eigenvalues(ellipse_spectrum):
    lams = ellipse_spectrum.lams[:6]
    assert np.allclose(sorted(np.abs(lams)), [3, 3, 9, 9, 27, 27], atol=1e-8)
    assert {1, -1} == set(np.sign(lams[:2]))


def test_modes_indexed_and_sorted(ellipse_spectrum):
    idx = [m.index for m in ellipse_spectrum.modes]
    assert idx == list(range(1, len(idx) + 1))
    mags = np.abs(ellipse_spectrum.lams)
    assert np.all(np.diff(mags) >= 0)


def test_robin_mode_split_off(ellipse_plain_spectrum):
    robin = ellipse_plain_spectrum.robin
    assert robin is not None and robin.index == 0
    assert abs(robin.mu - 1.0) < 1e-10
    assert all(abs(m.mu - 1.0) > 1e-3 for m in ellipse_plain_spectrum.modes)


def test_plasmonic_eigenvalues_exceed_one(ellipse_spectrum, square_spectrum):
    for spec in (ellipse_spectrum, square_spectrum):
        assert np.min(np.abs(spec.lams)) > 1.0 + 1e-6


def test_circle_has_no_finite_resonance(circle_nodes):
    spec = eigenpairs(nps.assemble_k2d(circle_nodes))
    assert spec.robin is not None
    assert len(spec.modes) == 0
    assert spec.n_no_finite == circle_nodes.n - 1


def test_spurious_complex_pairs_are_reported(circle_nodes):
    n = circle_nodes.n
    M = np.zeros((n, n))
    M[0, 1], M[1, 0] = 2.0, -2.0      # eigenvalues +/- 2i
    op = DiscreteOperator(M, circle_nodes, K2D_DEFLATED)
    spec = eigenpairs(op)
    assert len(spec.spurious) == 2
    assert all(abs(z.imag) > 1 for z in spec.spurious)


def test_pair_twins(ellipse_spectrum):
    tw = pair_twins(ellipse_spectrum)
    assert tw.max_mismatch() < 1e-9
    assert tw.mismatch_for(ellipse_spectrum.modes[0].lam) is not None
    assert tw.mismatch_for(123.456) is None
    paired = sorted(lp for lp, _, _ in tw.pairs)
    assert paired[:3] == pytest.approx([3, 9, 27], abs=1e-6)


def test_pair_twins_rejects_3d(sphere_spectrum_ref2):
    with pytest.raises(ValueError):
        pair_twins(sphere_spectrum_ref2)


def test_biorthogonalize_simple(ellipse_spectrum):
    bi = biorthogonalize(ellipse_spectrum, k=10)
    G = biorthogonality_gram(bi, 10)
    assert np.max(np.abs(G - np.eye(10))) < 1e-10


def test_biorthogonalize_degenerate_blocks(square_spectrum):
    """C4 symmetry produces exact doublets; blockwise mixing must fix them."""
    lams = square_spectrum.lams[:8]
    gaps = np.abs(np.diff(sorted(np.abs(lams))))
    assert np.min(gaps) < 1e-9  # genuinely degenerate pair present
    bi = biorthogonalize(square_spectrum, k=8)
    G = biorthogonality_gram(bi, 8)
    assert np.max(np.abs(G - np.eye(8))) < 1e-8


def test_biorthogonalize_robin_scaling(ellipse_plain_spectrum):
    bi = biorthogonalize(ellipse_plain_spectrum, k=6)
    r = bi.robin
    w = bi.weights
    assert r.tau @ (r.sigma * w) == pytest.approx(1.0, abs=1e-12)


def test_energy_inner_product_requires_zero_mean(ellipse_nodes):
    ones = np.ones(ellipse_nodes.n)
    with pytest.raises(ValueError):
        energy_inner_product(ones, ones, ellipse_nodes)


def test_energy_self_adjointness(ellipse_nodes, ellipse_op):
    rng = np.random.default_rng(3)
    form = EnergyForm.build(ellipse_nodes)
    A = ellipse_op.matrix
    w, L = ellipse_nodes.weights, ellipse_nodes.length
    for _ in range(5):
        nu = rng.standard_normal(ellipse_nodes.n)
        nu -= (nu @ w) / L
        sg = rng.standard_normal(ellipse_nodes.n)
        sg -= (sg @ w) / L
        den = np.sqrt(abs(form.inner(nu, nu) * form.inner(sg, sg)))
        assert abs(form.inner(nu, A @ sg) - form.inner(A @ nu, sg)) / den < 1e-10


def test_strong_orthogonality(ellipse_spectrum):
    E = log_gram(ellipse_spectrum.operator.nodes)
    ri, re_ = strong_orthogonality_residual(ellipse_spectrum, 0, 1, gram=E)
    assert ri < 1e-8 and re_ < 1e-8
    si, se = strong_orthogonality_residual(ellipse_spectrum, 2, 2, gram=E)
    assert si > 0 and se > 0


def test_strong_orthogonality_rejects_3d(sphere_spectrum_ref2):
    with pytest.raises(ValueError):
        strong_orthogonality_residual(sphere_spectrum_ref2, 0, 1)


def test_mode_dipole_circle(circle_nodes):
    sigma = np.cos(circle_nodes.params)
    p = mode_dipole(sigma, circle_nodes)
    assert np.allclose(p, [np.pi, 0.0], atol=1e-10)


def test_mode_dipole_mesh(sphere_op_ref2):
    mesh = sphere_op_ref2.nodes
    p = mode_dipole(mesh.centroids[:, 2], mesh)
    assert p[2] > 0.1 and abs(p[0]) < 1e-10 and abs(p[1]) < 1e-10


def test_spectrum_rows(ellipse_spectrum):
    tw = pair_twins(ellipse_spectrum)
    rows = spectrum_rows(ellipse_spectrum, tw)
    assert rows[0]["index"] == 1
    lam = rows[0]["lambda"]
    assert rows[0]["epsilon_ratio"] == pytest.approx((1 + lam) / (1 - lam))
    assert rows[0]["pairing_mismatch"] is not None
    bare = spectrum_rows(ellipse_spectrum, None)
    assert bare[0]["pairing_mismatch"] is None
