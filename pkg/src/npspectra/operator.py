"""Dense Nystrom discretizations of the resonance integral operators.

2D: the operator with kernel (r_MQ . n_Q)/(pi r^2) acting on boundary
densities; its eigenvalues mu give plasmonic eigenvalues lambda = 1/mu.
The kernel is smooth on a C2 curve with diagonal limit kappa/(2 pi), so the
periodic trapezoid rule converges spectrally.  The deflated variant
subtracts 1/L from the kernel/pi, removing the equilibrium (Robin,
lambda = 1) eigenvalue while leaving the rest of the spectrum unchanged.

3D: centroid collocation on a triangle mesh.  The adjoint variant uses the
kernel (r_QM . n_M)/(2 pi r^3); its rows quadrature the Gauss solid-angle
identity, so the diagonal is set to make every row sum exactly one.  That
forces the exact Robin eigenpair (constant eigenvector, eigenvalue one).
The single variant is the literal transpose: identical eigenvalues, column
sums exactly one, and its eigenvectors are area-weighted charge densities
(divide by triangle areas to recover the density at centroids).

Weights are folded into the matrices, so all eigenproblems are standard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .geometry import NodeSet2D, SurfaceMesh3D

K2D = "k2d"
K2D_DEFLATED = "k2d-deflated"
K3D_SINGLE = "k3d-single"
K3D_ADJOINT = "k3d-adjoint"


@dataclass(frozen=True)
class DiscreteOperator:
    """Dense matrix discretization plus the node metadata it was built on."""

    matrix: np.ndarray
    nodes: Union[NodeSet2D, SurfaceMesh3D]
    kernel: str

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_2d(self) -> bool:
        return self.kernel in (K2D, K2D_DEFLATED)

    @property
    def weights(self) -> np.ndarray:
        if self.is_2d:
            return self.nodes.weights
        return self.nodes.areas

    def dump(self, path) -> None:
        """Raw matrix dump: row-major, float64, little-endian."""
        with open(path, "wb") as fh:
            fh.write(np.ascontiguousarray(self.matrix, dtype="<f8").tobytes())


def _k2d_matrix(nodes: NodeSet2D) -> np.ndarray:
    P, nrm, kap, w = nodes.points, nodes.normals, nodes.curvatures, nodes.weights
    dx = P[:, 0][:, None] - P[:, 0][None, :]
    dy = P[:, 1][:, None] - P[:, 1][None, :]
    r2 = dx * dx + dy * dy
    if np.min(r2 + np.eye(len(w))) <= 0.0:
        raise ValueError("coincident nodes")
    np.fill_diagonal(r2, 1.0)
    ker = (dx * nrm[:, 0][:, None] + dy * nrm[:, 1][:, None]) / r2
    np.fill_diagonal(ker, kap / 2.0)
    return ker * w[None, :] / np.pi


def assemble_k2d(nodes: NodeSet2D) -> DiscreteOperator:
    """A[q][m] = (1/pi) (P_q - P_m) . n_q / r^2 * w_m, diag = kappa_q w_q/(2 pi)."""
    return DiscreteOperator(_k2d_matrix(nodes), nodes, K2D)


def assemble_k2d_deflated(nodes: NodeSet2D) -> DiscreteOperator:
    """Deflated kernel: A_defl = A - (1/L) 1 w^T (constant-kernel subtraction)."""
    A = _k2d_matrix(nodes)
    A = A - np.outer(np.ones(nodes.n), nodes.weights) / nodes.length
    return DiscreteOperator(A, nodes, K2D_DEFLATED)


def assemble_k3d(mesh: SurfaceMesh3D, variant: str = "adjoint") -> DiscreteOperator:
    """Centroid-collocation matrix for the 3D kernel, adjoint or single."""
    if variant not in ("single", "adjoint"):
        raise ValueError(f"variant must be 'single' or 'adjoint', got {variant!r}")
    cen, nrm, area = mesh.centroids, mesh.normals, mesh.areas
    d = cen[None, :, :] - cen[:, None, :]          # d[q, m] = c_m - c_q
    r2 = np.einsum("qmi,qmi->qm", d, d)
    np.fill_diagonal(r2, 1.0)
    ker = np.einsum("qmi,mi->qm", d, nrm) / r2**1.5
    np.fill_diagonal(ker, 0.0)
    A = ker * area[None, :] / (2.0 * np.pi)
    np.fill_diagonal(A, 0.0)
    np.fill_diagonal(A, 1.0 - A.sum(axis=1))
    if variant == "adjoint":
        return DiscreteOperator(A, mesh, K3D_ADJOINT)
    return DiscreteOperator(np.ascontiguousarray(A.T), mesh, K3D_SINGLE)


# ---------------------------------------------------------------------------
# Logarithmic-kernel quadrature (energy inner product)
# ---------------------------------------------------------------------------

def _periodic_log_weights(N: int) -> np.ndarray:
    """Circulant quadrature matrix Q for ln(1/|2 sin((t-s)/2)|).

    Built from the exact Fourier symbol of the periodic log kernel:
    (1/2pi) int ln(1/|2 sin(d/2)|) e^{-ikd} dd = 1/(2|k|) for k != 0 and
    0 for k = 0.  Applying the symbol to the DFT basis yields trapezoid
    weights that integrate the singular part exactly for band-limited
    densities.  Rows/columns carry no arc-length factors.
    """
    k = np.fft.fftfreq(N, d=1.0 / N)
    sym = np.zeros(N)
    nz = k != 0
    sym[nz] = np.pi / np.abs(k[nz])
    F = np.fft.fft(np.eye(N), axis=0)
    return np.real(np.fft.ifft(sym[:, None] * F, axis=0))


def log_gram(nodes: NodeSet2D) -> np.ndarray:
    """Gram matrix E of the ln(1/r) pairing: nu^T E sigma ~ <nu, sigma>.

    Splits ln(1/r) into the periodic log singularity (handled by the exact
    circulant weights) plus the smooth remainder -ln(r / |2 sin(dt/2)|),
    whose diagonal limit is -ln(L / 2 pi) for equal arc-length nodes.
    """
    P, w, L = nodes.points, nodes.weights, nodes.length
    N = nodes.n
    t = 2.0 * np.pi * np.arange(N) / N
    dt = t[:, None] - t[None, :]
    dx = P[:, 0][:, None] - P[:, 0][None, :]
    dy = P[:, 1][:, None] - P[:, 1][None, :]
    r = np.hypot(dx, dy)
    ss = np.abs(2.0 * np.sin(dt / 2.0))
    R = np.ones_like(r)
    off = ~np.eye(N, dtype=bool)
    R[off] = r[off] / ss[off]
    np.fill_diagonal(R, L / (2.0 * np.pi))
    Q = _periodic_log_weights(N)
    h = 2.0 * np.pi / N
    return (L / (2.0 * np.pi)) ** 2 * (h * Q + h * h * (-np.log(R)))
