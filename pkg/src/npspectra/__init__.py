"""Boundary-integral spectra of nanoparticle shapes.

Double precision end: contour/mesh sampling, dense kernel matrices, the
plasmonic eigenvalue spectrum with its twin pairing and orthogonality
structure, dispersion-model resonances, and Fredholm determinants.
Arbitrary precision end (:mod:`npspectra.riemann`): the critical-line
profile, its moment coefficients and trace sequences, and the Hankel
positivity checks.
"""

import os as _os

# BLAS thread pools read these at load time, so they must be set before
# numpy is imported anywhere in the package.
_threads = _os.environ.get("NP_SPECTRA_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                 "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from . import (fredholm, geometry, operator, pipelines, resonance, riemann,
               spectral)
from .geometry import (Contour2D, NodeSet2D, ShapeError, SurfaceMesh3D,
                       make_contour, make_mesh, sample, scale_descriptor)
from .operator import (K2D, K2D_DEFLATED, K3D_ADJOINT, K3D_SINGLE,
                       DiscreteOperator, assemble_k2d, assemble_k2d_deflated,
                       assemble_k3d, log_gram)
from .resonance import DispersionModel, eps_from_lambda, resonance_frequency
from .riemann import PrecisionContext, PrecisionError
from .spectral import (EigenSolverError, Mode, PlasmonSpectrum, TwinPairs,
                       biorthogonalize, eigenpairs, energy_inner_product,
                       pair_twins, strong_orthogonality_residual)

__version__ = "0.1.0"

__all__ = [
    "fredholm", "geometry", "operator", "pipelines", "resonance", "riemann",
    "spectral",
    "Contour2D", "NodeSet2D", "ShapeError", "SurfaceMesh3D", "make_contour",
    "make_mesh", "sample", "scale_descriptor",
    "K2D", "K2D_DEFLATED", "K3D_ADJOINT", "K3D_SINGLE", "DiscreteOperator",
    "assemble_k2d", "assemble_k2d_deflated", "assemble_k3d", "log_gram",
    "DispersionModel", "eps_from_lambda", "resonance_frequency",
    "PrecisionContext", "PrecisionError",
    "EigenSolverError", "Mode", "PlasmonSpectrum", "TwinPairs",
    "biorthogonalize", "eigenpairs", "energy_inner_product", "pair_twins",
    "strong_orthogonality_residual",
    "__version__",
]
