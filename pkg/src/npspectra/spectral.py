"""Eigen-analysis of the discretized operators.

Solves the dense nonsymmetric eigenproblem with left and right vectors,
classifies eigenvalues (Robin / finite plasmonic / no-finite-resonance /
spurious-complex), pairs the 2D twin spectrum, builds biorthogonal
(sigma, tau) mode pairs, and verifies the orthogonality structures:
biorthogonality of the two eigenfunction families, strong orthogonality of
the mode potentials in both interior and exterior domains, and
self-adjointness in the logarithmic energy inner product.

Conventions: mu denotes an eigenvalue of the matrix, lambda = 1/mu the
plasmonic eigenvalue.  Eigenvectors are real, unit 2-norm, with the
largest-magnitude entry made positive; tau vectors are rescaled so the
weighted pairing sum(tau_i * sigma_j * w) is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .geometry import NodeSet2D
from .operator import (DiscreteOperator, K2D, K2D_DEFLATED, K3D_ADJOINT,
                       K3D_SINGLE, log_gram)

ROBIN_TOL = 1e-4          # |mu - 1| window for the Robin eigenvalue
DEGENERACY_RTOL = 1e-6    # relative gap that clusters eigenvalues


class EigenSolverError(RuntimeError):
    """Eigendecomposition failed or produced an unusable structure."""


@dataclass(frozen=True)
class Mode:
    """One retained eigenmode: densities sampled at the nodes."""

    index: int
    lam: float                 # plasmonic eigenvalue, 1/mu
    mu: float
    sigma: np.ndarray          # single-layer (charge) density
    tau: np.ndarray            # double-layer (adjoint) density
    residual: float            # ||A sigma - mu sigma||_2 (2D) / right-vector residual
    zero_mean_residual: float  # |integral sigma| / integral |sigma|


@dataclass(frozen=True)
class PlasmonSpectrum:
    """Finite plasmonic modes sorted by |lambda|, Robin mode kept aside."""

    modes: List[Mode]
    robin: Optional[Mode]
    spurious: List[complex]      # eigenvalues failing the realness test
    n_no_finite: int             # eigenvalues with |lambda| > lambda_max
    operator: DiscreteOperator
    lambda_max: float

    @property
    def lams(self) -> np.ndarray:
        return np.array([m.lam for m in self.modes])

    @property
    def weights(self) -> np.ndarray:
        return self.operator.weights

    @property
    def is_2d(self) -> bool:
        return self.operator.is_2d


@dataclass(frozen=True)
class TwinPairs:
    """Matched (+lambda, -lambda) pairs of a 2D spectrum."""

    pairs: List[Tuple[float, float, float]]   # (lam_pos, lam_neg, mismatch)
    unmatched: List[float]

    def max_mismatch(self) -> float:
        return max((p[2] for p in self.pairs), default=0.0)

    def mismatch_for(self, lam: float) -> Optional[float]:
        for lp, ln, mm in self.pairs:
            if lam in (lp, ln):
                return mm
        return None


def _fix_sign(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def eigenpairs(op: DiscreteOperator, realness_tol: float = 1e-8,
               lambda_max: float = 1e6) -> PlasmonSpectrum:
    """Full eigendecomposition of A (right vectors) and A^T (left vectors).

    Eigenvalues with |Im mu| > realness_tol * |mu| are reported in
    ``spurious`` rather than silently dropped; |lambda| > lambda_max is
    counted as "no finite resonance" (the circle puts its entire plasmonic
    spectrum there).  Densities are recovered per kernel tag: for the 3D
    variants the area weights sit inside the matrix, so the charge density
    is the corresponding eigenvector divided by the triangle areas.
    """
    A = op.matrix
    try:
        mu, vl, vr = scipy.linalg.eig(A, left=True, right=True)
    except Exception as exc:  # LinAlgError and friends
        raise EigenSolverError(f"dense eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(mu)):
        raise EigenSolverError("eigensolver returned non-finite eigenvalues")

    w = op.weights
    robin_expected = op.kernel in (K2D, K3D_ADJOINT, K3D_SINGLE)

    finite: List[Mode] = []
    spurious: List[complex] = []
    robin: Optional[Mode] = None
    robin_dist = np.inf
    n_no_finite = 0

    order = np.argsort(-np.abs(mu))  # descending |mu| = ascending |lambda|
    for idx in order:
        m = mu[idx]
        lam_abs = 1.0 / abs(m) if m != 0 else np.inf
        if lam_abs > lambda_max:
            n_no_finite += 1
            continue
        if abs(m.imag) > realness_tol * abs(m):
            spurious.append(complex(m))
            continue
        mur = float(m.real)
        sigma, tau = _densities(op, vr[:, idx], vl[:, idx])
        v = np.real(vr[:, idx])
        v = v / np.linalg.norm(v)
        residual = float(np.linalg.norm(A @ v - mur * v))
        zmr = float(abs(sigma @ w) / (np.abs(sigma) @ w))
        mode = Mode(index=0, lam=1.0 / mur, mu=mur, sigma=sigma, tau=tau,
                    residual=residual, zero_mean_residual=zmr)
        if robin_expected and abs(mur - 1.0) < ROBIN_TOL and abs(mur - 1.0) < robin_dist:
            if robin is not None:
                finite.append(robin)
            robin, robin_dist = mode, abs(mur - 1.0)
            continue
        finite.append(mode)

    finite.sort(key=lambda md: abs(md.lam))
    finite = [replace(md, index=i) for i, md in enumerate(finite, start=1)]
    if robin is not None:
        robin = replace(robin, index=0)
    return PlasmonSpectrum(modes=finite, robin=robin, spurious=spurious,
                           n_no_finite=n_no_finite, operator=op,
                           lambda_max=lambda_max)


def _densities(op: DiscreteOperator, vr: np.ndarray, vl: np.ndarray):
    vr = np.real(vr)
    vl = np.real(vl)
    if op.kernel in (K2D, K2D_DEFLATED):
        sigma, tau = vr, vl
    elif op.kernel == K3D_ADJOINT:
        sigma, tau = vl / op.nodes.areas, vr
    else:  # K3D_SINGLE
        sigma, tau = vr / op.nodes.areas, vl
    sigma = _fix_sign(sigma / np.linalg.norm(sigma))
    tau = _fix_sign(tau / np.linalg.norm(tau))
    return sigma, tau


def pair_twins(spectrum: PlasmonSpectrum) -> TwinPairs:
    """Greedy +/- pairing by |lambda|; only meaningful for 2D spectra."""
    if not spectrum.is_2d:
        raise ValueError("twin pairing applies to 2D spectra only")
    pos = sorted([m.lam for m in spectrum.modes if m.lam > 0])
    neg = sorted([-m.lam for m in spectrum.modes if m.lam < 0])
    pairs: List[Tuple[float, float, float]] = []
    unmatched: List[float] = []
    used = np.zeros(len(neg), bool)
    for lp in pos:
        free = np.flatnonzero(~used)
        if len(free) == 0:
            unmatched.append(lp)
            continue
        j = free[int(np.argmin([abs(neg[f] - lp) for f in free]))]
        used[j] = True
        pairs.append((lp, -neg[j], abs(neg[j] - lp) / lp))
    unmatched.extend(-neg[j] for j in np.flatnonzero(~used))
    return TwinPairs(pairs=pairs, unmatched=unmatched)


# ---------------------------------------------------------------------------
# Biorthogonality
# ---------------------------------------------------------------------------

def _eigenvalue_clusters(mus: Sequence[float], rtol: float) -> List[List[int]]:
    clusters: List[List[int]] = []
    order = sorted(range(len(mus)), key=lambda i: mus[i])
    for i in order:
        if clusters and abs(mus[i] - mus[clusters[-1][-1]]) <= rtol * max(abs(mus[i]), 1e-300):
            clusters[-1].append(i)
        else:
            clusters.append([i])
    return clusters


def biorthogonalize(spectrum: PlasmonSpectrum, k: Optional[int] = None,
                    cluster_rtol: float = DEGENERACY_RTOL) -> PlasmonSpectrum:
    """Rescale tau's so that sum(tau_i sigma_j w) = delta_ij.

    Simple eigenvalues need a single scale factor; eigenvalues within a
    relative gap of ``cluster_rtol`` are treated as one degenerate block
    whose tau's are mixed jointly by the inverse of the block Gram matrix
    (C4-symmetric shapes produce exact doublets that require this).

    Only the first ``k`` modes (smallest |lambda|) are processed when given:
    the far tail of a dense solve is eigensolver noise whose accidental
    clusters have genuinely singular Gram matrices.
    """
    w = spectrum.weights
    modes = list(spectrum.modes)[:k]
    mus = [m.mu for m in modes]
    new_taus: List[np.ndarray] = [m.tau for m in spectrum.modes]
    for cluster in _eigenvalue_clusters(mus, cluster_rtol):
        S = np.stack([modes[i].sigma for i in cluster], axis=1)
        T = np.stack([modes[i].tau for i in cluster], axis=1)
        G = T.T @ (S * w[:, None])
        if np.linalg.cond(G) > 1e12:
            raise EigenSolverError(
                f"degenerate block at mu~{modes[cluster[0]].mu:.6g} has a "
                "singular biorthogonality Gram matrix")
        T = T @ np.linalg.inv(G).T
        for col, i in enumerate(cluster):
            new_taus[i] = T[:, col]
    modes = [replace(m, tau=new_taus[i])
             for i, m in enumerate(spectrum.modes)]
    robin = spectrum.robin
    if robin is not None:
        scale = robin.tau @ (robin.sigma * w)
        if abs(scale) < 1e-300:
            raise EigenSolverError("Robin mode has degenerate pairing")
        robin = replace(robin, tau=robin.tau / scale)
    return replace(spectrum, modes=modes, robin=robin)


def biorthogonality_gram(spectrum: PlasmonSpectrum, k: int) -> np.ndarray:
    """Pairing matrix G[i][j] = sum(tau_i sigma_j w) for the first k modes."""
    w = spectrum.weights
    k = min(k, len(spectrum.modes))
    S = np.stack([m.sigma for m in spectrum.modes[:k]], axis=1)
    T = np.stack([m.tau for m in spectrum.modes[:k]], axis=1)
    return T.T @ (S * w[:, None])


# ---------------------------------------------------------------------------
# Energy inner product and strong orthogonality
# ---------------------------------------------------------------------------

ZERO_MEAN_TOL = 1e-6


@dataclass(frozen=True)
class EnergyForm:
    """Logarithmic-kernel inner product <nu, sigma> on zero-mean densities."""

    nodes: NodeSet2D
    gram: np.ndarray

    @classmethod
    def build(cls, nodes: NodeSet2D) -> "EnergyForm":
        return cls(nodes=nodes, gram=log_gram(nodes))

    def check_zero_mean(self, density: np.ndarray) -> None:
        w = self.nodes.weights
        rel = abs(density @ w) / (np.abs(density) @ w)
        if rel > ZERO_MEAN_TOL:
            raise ValueError(f"density mean {rel:.2e} is not zero "
                             f"(tolerance {ZERO_MEAN_TOL:g})")

    def inner(self, nu: np.ndarray, sigma: np.ndarray) -> float:
        self.check_zero_mean(nu)
        self.check_zero_mean(sigma)
        return float(nu @ self.gram @ sigma)


def energy_inner_product(nu: np.ndarray, sigma: np.ndarray,
                         nodes: NodeSet2D) -> float:
    """<nu, sigma> = oint nu (oint sigma ln(1/r) dl) dl for zero-mean inputs."""
    return EnergyForm.build(nodes).inner(nu, sigma)


def strong_orthogonality_residual(spectrum: PlasmonSpectrum, i: int, k: int,
                                  gram: Optional[np.ndarray] = None):
    """Interior/exterior Dirichlet cross-energies of mode potentials.

    Green's identity reduces the volume integrals of grad(phi_i).grad(phi_k)
    to boundary integrals of phi_i times the one-sided normal derivatives of
    phi_k.  The single-layer trace phi and the principal value of its normal
    derivative both come from the assembled matrices; the jump relations
    supply the +/- pi sigma terms (interior limit +, exterior limit -).

    For i != k returns residuals normalized by the geometric mean of the
    self-energies; for i == k returns the raw (interior, exterior)
    self-energies, which are positive.  Requires zero-mean (non-Robin)
    modes: the exterior energy of a charged mode diverges in 2D.
    """
    if not spectrum.is_2d:
        raise ValueError("strong orthogonality check applies to 2D spectra")
    modes = spectrum.modes
    nodes = spectrum.operator.nodes
    w, L = nodes.weights, nodes.length
    E = log_gram(nodes) if gram is None else gram

    for j in (i, k):
        md = modes[j]
        if md.zero_mean_residual > ZERO_MEAN_TOL:
            raise ValueError(f"mode {j} (lambda={md.lam:.4g}) is not "
                             "zero-mean; the Robin mode has no exterior energy")

    A = spectrum.operator.matrix

    def one_sided(idx):
        sig = modes[idx].sigma
        phi = (E @ sig) / w
        pv = np.pi * (A @ sig)          # equals pi * mu * sigma on eigenmodes
        dn_int = np.pi * sig - pv
        dn_ext = -np.pi * sig - pv
        return phi, dn_int, dn_ext

    phi_i, _, _ = one_sided(i)
    _, dnm_k, dnp_k = one_sided(k)
    interior = float(phi_i @ (dnm_k * w))
    exterior = float(-(phi_i @ (dnp_k * w)))
    if i == k:
        return interior, exterior

    _, dnm_i, dnp_i = one_sided(i)
    phi_k, _, _ = one_sided(k)
    self_int_i = float(phi_i @ (dnm_i * w))
    self_int_k = float(phi_k @ (dnm_k * w))
    self_ext_i = float(-(phi_i @ (dnp_i * w)))
    self_ext_k = float(-(phi_k @ (dnp_k * w)))
    res_int = abs(interior) / np.sqrt(abs(self_int_i * self_int_k))
    res_ext = abs(exterior) / np.sqrt(abs(self_ext_i * self_ext_k))
    return res_int, res_ext


# ---------------------------------------------------------------------------
# Dipoles and export
# ---------------------------------------------------------------------------

def mode_dipole(sigma: np.ndarray, nodes) -> np.ndarray:
    """p = sum sigma(m) x(m) w(m) over nodes (2D) or centroids (3D)."""
    if hasattr(nodes, "points"):
        pos, w = nodes.points, nodes.weights
    else:
        pos, w = nodes.centroids, nodes.areas
    return (sigma * w) @ pos


def spectrum_rows(spectrum: PlasmonSpectrum,
                  twins: Optional[TwinPairs] = None) -> List[dict]:
    """Export rows: index, lambda, epsilon_ratio, zero_mean_residual,
    pairing_mismatch (blank for 3D spectra and unmatched eigenvalues)."""
    rows = []
    for m in spectrum.modes:
        mismatch = twins.mismatch_for(m.lam) if twins is not None else None
        rows.append({
            "index": m.index,
            "lambda": m.lam,
            "epsilon_ratio": (1.0 + m.lam) / (1.0 - m.lam),
            "zero_mean_residual": m.zero_mean_residual,
            "pairing_mismatch": mismatch,
        })
    return rows
