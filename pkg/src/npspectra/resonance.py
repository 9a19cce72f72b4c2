"""Dispersion models and mode excitation dynamics.

Maps plasmonic eigenvalues to resonance permittivities eps_k and, through a
dispersion model, to resonance frequencies omega_k.  Provides the stored
energy density correct in dispersive media, the steady-state resonant
amplitude of a driven mode, and the off-resonance gain factor.

Reduced units throughout: eps0 = 1 and omega in units of omega_p by
default.  SI conversions (eV, nm) happen only at the CLI/service boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

EV_NM = 1239.8419843320026  # photon wavelength(nm) * energy(eV)


@dataclass(frozen=True)
class DispersionModel:
    """Free-electron (Drude) or tabulated complex permittivity.

    kind: "drude" (gamma ignored, lossless), "drude-lossy", or "tabulated".
    For tabulated models ``table`` holds rows (omega, eps_re, eps_im) sorted
    by omega with eps_re strictly increasing (the metal branch); omega_unit
    records the frequency unit ("reduced" or "eV") for report conversions.
    """

    kind: str = "drude"
    eps0: float = 1.0
    omega_p: float = 1.0
    gamma: float = 0.0
    table: Optional[np.ndarray] = None
    omega_unit: str = "reduced"

    def __post_init__(self):
        if self.kind not in ("drude", "drude-lossy", "tabulated"):
            raise ValueError(f"unknown dispersion kind {self.kind!r}")
        if self.omega_p <= 0:
            raise ValueError("omega_p must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be nonnegative")
        if self.kind == "drude-lossy" and self.gamma == 0:
            raise ValueError("drude-lossy requires gamma > 0")
        if self.kind == "tabulated":
            t = np.asarray(self.table, float)
            if t.ndim != 2 or t.shape[1] != 3 or len(t) < 2:
                raise ValueError("tabulated model needs rows (omega, re, im)")
            if np.any(np.diff(t[:, 0]) <= 0):
                raise ValueError("table must be sorted by omega")
            if np.any(np.diff(t[:, 1]) <= 0):
                raise ValueError("tabulated eps' must be strictly monotone")
            object.__setattr__(self, "table", t)

    @property
    def effective_gamma(self) -> float:
        return self.gamma if self.kind == "drude-lossy" else 0.0


def eps_from_lambda(lam: float, eps0: float = 1.0) -> float:
    """Resonance permittivity eps_k = eps0 (1 + lambda) / (1 - lambda)."""
    if lam == 1.0:
        raise ValueError("lambda = 1 is the equilibrium mode: no resonance")
    return eps0 * (1.0 + lam) / (1.0 - lam)


def drude_eps(model: DispersionModel, omega):
    """Complex permittivity at omega > 0 (vectorized)."""
    omega = np.asarray(omega, float)
    if np.any(omega <= 0):
        raise ValueError("omega must be positive")
    if model.kind == "tabulated":
        t = model.table
        re = np.interp(omega, t[:, 0], t[:, 1])
        im = np.interp(omega, t[:, 0], t[:, 2])
        out = re + 1j * im
    else:
        g = model.effective_gamma
        out = model.eps0 * (1.0 - model.omega_p**2 / (omega * (omega + 1j * g)))
    return out if out.ndim else complex(out)


def _branch(model: DispersionModel):
    """Monotone-eps' search interval for resonance_frequency."""
    if model.kind == "tabulated":
        return float(model.table[0, 0]), float(model.table[-1, 0])
    return 1e-12 * model.omega_p, model.omega_p


def resonance_frequency(model: DispersionModel, eps_k: float) -> float:
    """Solve Re eps(omega) = eps_k by bisection on the monotone branch."""
    lo, hi = _branch(model)
    flo = drude_eps(model, lo).real - eps_k
    fhi = drude_eps(model, hi).real - eps_k
    if flo * fhi > 0:
        raise ValueError(f"eps_k = {eps_k:.6g} not attainable on the branch "
                         f"[{lo:.3g}, {hi:.3g}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = drude_eps(model, mid).real - eps_k
        if fm == 0.0 or (hi - lo) < 1e-16 * hi:
            return mid
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def drude_resonance_closed_form(model: DispersionModel, eps_k: float) -> float:
    """Lossless Drude solution omega_k = omega_p / sqrt(1 - eps_k/eps0)."""
    if eps_k >= model.eps0:
        raise ValueError("eps_k must lie below eps0 for a Drude resonance")
    return model.omega_p / np.sqrt(1.0 - eps_k / model.eps0)


def energy_density(model: DispersionModel, omega: float,
                   field_amplitude_sq: float) -> float:
    """Stored electric energy density in a dispersive medium.

    w = (1/4) d[omega eps'(omega)]/domega |E|^2; the derivative is analytic
    for Drude models and a centered finite difference for tables.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    if model.kind == "tabulated":
        h = 1e-6 * omega
        up = (omega + h) * drude_eps(model, omega + h).real
        dn = (omega - h) * drude_eps(model, omega - h).real
        deriv = (up - dn) / (2.0 * h)
    else:
        g = model.effective_gamma
        s = omega * omega + g * g
        deriv = model.eps0 * (1.0 + model.omega_p**2 * (omega * omega - g * g) / s**2)
    return 0.25 * deriv * field_amplitude_sq


def classical_energy_density(model: DispersionModel, omega: float,
                             field_amplitude_sq: float) -> float:
    """Dispersionless formula w = eps'(omega) |E|^2 / 4 (wrong in metals)."""
    return 0.25 * drude_eps(model, omega).real * field_amplitude_sq


@dataclass(frozen=True)
class ModeExcitation:
    """A plasmonic mode driven by an incident field."""

    k: int
    dipole: np.ndarray
    e0: np.ndarray
    omega0: float
    eps_k: float
    omega_k: float

    @property
    def coupling(self) -> float:
        return float(np.dot(np.asarray(self.e0, float),
                            np.asarray(self.dipole, float)))


def resonant_amplitude(excitation: ModeExcitation, model: DispersionModel, t):
    """Steady-state amplitude under resonant drive at omega_k.

    a(t) = -(E0 . p_k) [ (eps'(omega_k) - eps0)/eps''(omega_k) cos(omega_k t)
                         + sin(omega_k t) ].
    The dipole uses the biorthogonality-normalized (unit pairing) mode
    densities.  Lossless resonance (eps'' = 0) is singular and rejected.
    """
    eps = drude_eps(model, excitation.omega_k)
    if eps.imag <= 0:
        raise ValueError("resonant drive requires eps'' > 0 at omega_k")
    ratio = (eps.real - model.eps0) / eps.imag
    t = np.asarray(t, float)
    out = -excitation.coupling * (ratio * np.cos(excitation.omega_k * t)
                                  + np.sin(excitation.omega_k * t))
    return out if out.ndim else float(out)


def amplitude_envelope(excitation: ModeExcitation,
                       model: DispersionModel) -> float:
    """Peak |a(t)| of the resonant steady state."""
    eps = drude_eps(model, excitation.omega_k)
    if eps.imag <= 0:
        raise ValueError("resonant drive requires eps'' > 0 at omega_k")
    ratio = (eps.real - model.eps0) / eps.imag
    return abs(excitation.coupling) * float(np.hypot(ratio, 1.0))


def offresonant_gain(model: DispersionModel, omega0: float,
                     eps_k: float) -> float:
    """Field gain C(omega0) of a mode with resonance permittivity eps_k."""
    if omega0 <= 0:
        raise ValueError("omega0 must be positive")
    eps = drude_eps(model, omega0)
    num = (eps.real - model.eps0) ** 2 + eps.imag**2
    den = (eps_k - eps.real) ** 2 + eps.imag**2
    if den == 0.0:
        raise ValueError("lossless exact resonance: gain is unbounded")
    return float(np.sqrt(num / den))


def expansion_coefficients(sigma_history: np.ndarray,
                           taus: Sequence[np.ndarray],
                           weights: np.ndarray) -> np.ndarray:
    """Biorthogonal expansion a_k(t) = sum_m sigma(m, t) tau_k(m) w(m).

    ``sigma_history`` is (n_nodes,) or (n_times, n_nodes); returns (n_k,)
    or (n_times, n_k) correspondingly.  The tau set must come from
    ``biorthogonalize`` so that the pairing is unit-normalized.
    """
    sig = np.atleast_2d(np.asarray(sigma_history, float))
    T = np.stack([np.asarray(t, float) for t in taus], axis=1)
    if sig.shape[1] != T.shape[0]:
        raise ValueError("sigma history and tau set use different node sets")
    out = (sig * np.asarray(weights, float)[None, :]) @ T
    return out[0] if np.asarray(sigma_history).ndim == 1 else out


def quality_ratio(model: DispersionModel, omega) -> np.ndarray:
    """|eps'| / eps'' — the resonance quality figure across a band."""
    eps = np.atleast_1d(drude_eps(model, omega))
    return np.abs(eps.real) / eps.imag


# Representative room-temperature silver permittivity (literature-shaped:
# interband absorption below ~450 nm, free-electron tail beyond), stored as
# (photon energy eV, eps', eps'') ascending in energy.  The strictly
# monotone eps' branch makes it usable with resonance_frequency.
_SILVER_ROWS_NM = [
    # (wavelength nm, eps', eps'')
    (1400.0, -94.9, 2.03),
    (1300.0, -82.1, 1.62),
    (1200.0, -70.2, 1.26),
    (1100.0, -59.2, 0.96),
    (1000.0, -49.1, 0.71),
    (950.0, -44.3, 0.60),
    (900.0, -39.7, 0.51),
    (850.0, -35.3, 0.43),
    (800.0, -31.1, 0.37),
    (750.0, -27.1, 0.38),
    (700.0, -23.4, 0.40),
    (650.0, -19.6, 0.46),
    (600.0, -16.1, 0.44),
    (550.0, -12.9, 0.43),
    (500.0, -9.77, 0.31),
    (450.0, -6.99, 0.20),
    (400.0, -4.43, 0.21),
    (350.0, -2.03, 0.60),
]


def silver_tabulated() -> DispersionModel:
    """Tabulated silver-like permittivity in eV units (350-1400 nm)."""
    rows = [(EV_NM / nm, re, im) for nm, re, im in _SILVER_ROWS_NM]
    return DispersionModel(kind="tabulated", table=np.array(rows),
                           omega_unit="eV")
