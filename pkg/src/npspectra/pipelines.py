"""Report builders shared by the command-line tool and the HTTP service.

Each builder runs one end-to-end computation (spectrum, resonance,
excitation, determinant, critical-line profile, positivity check) and
returns a plain JSON-serializable dict with a ``schema_version`` field and
an optional UTC timestamp.  With timestamps disabled, identical inputs
produce byte-identical serialized reports.  High-precision values are
rendered as decimal strings; double-precision values stay floats.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
from typing import Dict, List, Optional, Sequence

import mpmath as mp
import numpy as np

from . import fredholm as fred
from . import geometry, operator, resonance, riemann, spectral

SCHEMA_VERSION = 1


def _base_report(timestamp: bool) -> Dict:
    report: Dict = {"schema_version": SCHEMA_VERSION}
    if timestamp:
        report["generated_at"] = datetime.datetime.now(
            datetime.timezone.utc).isoformat(timespec="seconds")
    return report


def load_descriptor(path: str) -> Dict:
    """Read a shape descriptor from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        desc = json.load(fh)
    if not isinstance(desc, dict) or "kind" not in desc:
        raise geometry.ShapeError("shape descriptor must be a JSON object "
                                  "with a 'kind' field")
    return desc


def _mpstr(x, digits: int) -> str:
    return mp.nstr(x, digits)


def dump_report(report: Dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Spectrum
# ---------------------------------------------------------------------------

def _solve_contour(desc: Dict, n: int, deflate: bool):
    contour = geometry.make_contour(desc)
    nodes = geometry.sample(contour, n)
    plain = operator.assemble_k2d(nodes)
    op = operator.assemble_k2d_deflated(nodes) if deflate else plain
    spectrum = spectral.eigenpairs(op)
    robin = spectral.eigenpairs(plain).robin if deflate else spectrum.robin
    robin_err = abs(robin.mu - 1.0) if robin is not None else None
    return nodes, op, spectrum, robin_err


def _solve_mesh(desc: Dict, refinement: Optional[int]):
    if refinement is not None:
        desc = {**desc, "refinement": refinement}
    mesh = geometry.make_mesh(desc)
    op = operator.assemble_k3d(mesh, variant="adjoint")
    spectrum = spectral.eigenpairs(op)
    robin = spectrum.robin
    robin_err = abs(robin.mu - 1.0) if robin is not None else None
    return mesh, op, spectrum, robin_err


def spectrum_report(desc: Dict, n: int = 256, refinement: Optional[int] = None,
                    deflate: bool = True, max_modes: int = 24,
                    timestamp: bool = True,
                    dump_operator: Optional[str] = None) -> Dict:
    """Eigenvalue table for a shape, with pairing and residual diagnostics."""
    report = _base_report(timestamp)
    report["shape"] = desc
    if geometry.is_mesh_descriptor(desc):
        mesh, op, spectrum, robin_err = _solve_mesh(desc, refinement)
        twins = None
        report.update(kind="mesh", n_nodes=len(mesh.centroids),
                      area=float(mesh.total_area), length=None)
    else:
        nodes, op, spectrum, robin_err = _solve_contour(desc, n, deflate)
        twins = spectral.pair_twins(spectrum)
        report.update(kind="contour", n_nodes=nodes.n,
                      area=None, length=float(nodes.length))
    if dump_operator:
        op.dump(dump_operator)
    rows = spectral.spectrum_rows(spectrum, twins)[:max_modes]
    report.update(
        kernel=op.kernel,
        robin_error=None if robin_err is None else float(robin_err),
        lambda_max=float(spectrum.lambda_max),
        n_no_finite_resonance=spectrum.n_no_finite,
        n_spurious=len(spectrum.spurious),
        max_pairing_mismatch=(float(twins.max_mismatch())
                              if twins and twins.pairs else None),
        modes=rows,
    )
    return report


def spectrum_csv(report: Dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "lambda", "epsilon_ratio",
                     "zero_mean_residual", "pairing_mismatch"])
    for row in report["modes"]:
        mism = row["pairing_mismatch"]
        writer.writerow([row["index"], repr(row["lambda"]),
                         repr(row["epsilon_ratio"]),
                         repr(row["zero_mean_residual"]),
                         "" if mism is None else repr(mism)])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Resonance / excitation
# ---------------------------------------------------------------------------

def model_from_params(model: str = "drude", eps0: float = 1.0,
                      omega_p: float = 1.0, gamma: float = 0.02
                      ) -> resonance.DispersionModel:
    if model == "drude":
        return resonance.DispersionModel(kind="drude", eps0=eps0,
                                         omega_p=omega_p)
    if model == "drude-lossy":
        return resonance.DispersionModel(kind="drude-lossy", eps0=eps0,
                                         omega_p=omega_p, gamma=gamma)
    if model == "silver":
        return resonance.silver_tabulated()
    raise ValueError(f"unknown dispersion model '{model}'")


def _model_block(model: resonance.DispersionModel) -> Dict:
    return {"kind": model.kind, "eps0": model.eps0,
            "omega_p": model.omega_p, "gamma": model.gamma,
            "omega_unit": model.omega_unit}


def resonance_report(desc: Dict, model: resonance.DispersionModel,
                     n: int = 256, refinement: Optional[int] = None,
                     max_modes: int = 12, timestamp: bool = True) -> Dict:
    """Resonance frequencies of the leading modes under a dispersion model."""
    report = _base_report(timestamp)
    report["shape"] = desc
    report["model"] = _model_block(model)
    if geometry.is_mesh_descriptor(desc):
        _, _, spectrum, _ = _solve_mesh(desc, refinement)
    else:
        _, _, spectrum, _ = _solve_contour(desc, n, deflate=True)
    rows: List[Dict] = []
    for mode in spectrum.modes[:max_modes]:
        eps_k = resonance.eps_from_lambda(mode.lam, model.eps0)
        row: Dict = {"index": mode.index, "lambda": float(mode.lam),
                     "epsilon_ratio": float(eps_k / model.eps0)}
        try:
            omega = resonance.resonance_frequency(model, eps_k)
            row["attainable"] = True
            row["omega"] = float(omega)
            eps = resonance.drude_eps(model, omega)
            row["quality"] = (float(resonance.quality_ratio(model, omega)[0])
                              if eps.imag > 0 else None)
            if model.kind == "drude":
                closed = resonance.drude_resonance_closed_form(model, eps_k)
                row["closed_form_omega"] = float(closed)
                row["closed_form_error"] = abs(float(closed) - float(omega))
        except ValueError:
            row["attainable"] = False
            row["omega"] = None
            row["quality"] = None
        rows.append(row)
    report["modes"] = rows
    return report


def excite_report(desc: Dict, model: resonance.DispersionModel,
                  field: Sequence[float], drive_omega: Optional[float] = None,
                  n: int = 256, refinement: Optional[int] = None,
                  max_modes: int = 12, timestamp: bool = True) -> Dict:
    """Dipole couplings and resonant amplitudes for a uniform driving field."""
    report = _base_report(timestamp)
    report["shape"] = desc
    report["model"] = _model_block(model)
    if geometry.is_mesh_descriptor(desc):
        mesh, _, spectrum, _ = _solve_mesh(desc, refinement)
        nodes = mesh
    else:
        nodes_2d, _, spectrum, _ = _solve_contour(desc, n, deflate=True)
        nodes = nodes_2d
    spectrum = spectral.biorthogonalize(spectrum, k=max_modes)
    e0 = np.asarray(field, dtype=float)
    report["field"] = [float(c) for c in e0]
    report["drive_omega"] = drive_omega
    rows: List[Dict] = []
    for mode in spectrum.modes[:max_modes]:
        dip = spectral.mode_dipole(mode.sigma, nodes)
        eps_k = resonance.eps_from_lambda(mode.lam, model.eps0)
        row: Dict = {"index": mode.index, "lambda": float(mode.lam),
                     "dipole": [float(c) for c in dip]}
        try:
            omega_k = resonance.resonance_frequency(model, eps_k)
            exc = resonance.ModeExcitation(k=mode.index, dipole=dip, e0=e0,
                                           omega0=(drive_omega if drive_omega
                                                   is not None else omega_k),
                                           eps_k=eps_k, omega_k=omega_k)
            row["coupling"] = float(exc.coupling)
            row["omega"] = float(omega_k)
            eps = resonance.drude_eps(model, omega_k)
            row["amplitude"] = (float(resonance.amplitude_envelope(exc, model))
                                if eps.imag > 0 else None)
            if drive_omega is not None:
                row["offresonant_gain"] = float(
                    resonance.offresonant_gain(model, drive_omega, eps_k))
            else:
                row["offresonant_gain"] = None
        except ValueError:
            row["coupling"] = float(np.dot(e0, dip))
            row["omega"] = None
            row["amplitude"] = None
            row["offresonant_gain"] = None
        rows.append(row)
    report["modes"] = rows
    return report


# ---------------------------------------------------------------------------
# Fredholm determinant
# ---------------------------------------------------------------------------

def fredholm_report(desc: Dict, n: int = 256, orders: int = 8,
                    timestamp: bool = True) -> Dict:
    """Iterated traces and determinant coefficients for a contour."""
    if geometry.is_mesh_descriptor(desc):
        raise geometry.ShapeError("determinant pipeline works on contours")
    report = _base_report(timestamp)
    report["shape"] = desc
    contour = geometry.make_contour(desc)
    nodes = geometry.sample(contour, n)
    op = operator.assemble_k2d_deflated(nodes)
    spectrum = spectral.eigenpairs(op)
    traces = fred.iterated_traces(op, orders)
    radius = abs(spectrum.modes[0].lam)
    coeffs = fred.determinant_coeffs(traces, orders, radius=radius)
    lam_star = 0.3 * radius
    series = coeffs.evaluate(lam_star)
    product = fred.determinant_product(spectrum, lam_star)
    direct = fred.determinant_direct(op, lam_star)
    spread = max(abs(series - product), abs(series - direct),
                 abs(product - direct))
    report.update(
        n_nodes=nodes.n,
        orders=orders,
        radius=float(radius),
        q=[float(traces.q2n(k)) for k in range(1, orders + 1)],
        b=[float(b) for b in coeffs.b],
        logderiv_lambda=float(lam_star),
        logderiv_residual=float(fred.logderiv_residual(coeffs, traces,
                                                       lam_star)),
        determinant_check={"lambda": float(lam_star), "series": float(series),
                           "product": float(product), "direct": float(direct),
                           "max_spread": float(spread)},
    )
    return report


def fredholm_csv(report: Dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "q_2n", "b_2n"])
    for k, qv in enumerate(report["q"], start=1):
        writer.writerow([k, repr(qv), repr(report["b"][k])])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Critical-line profile
# ---------------------------------------------------------------------------

def xi_report(digits: int = 50, orders: int = 16, trace_orders: int = 10,
              zeros_to: Optional[float] = None, spot_lambda: float = 1.0,
              timestamp: bool = True) -> Dict:
    """Moment coefficients, traces, a two-path spot check, optional zeros."""
    ctx = riemann.PrecisionContext(digits=digits)
    report = _base_report(timestamp)
    trace_orders = min(trace_orders, orders)
    coeffs = riemann.xi_coeffs(orders, ctx)
    boosted = riemann.PrecisionContext(
        digits=digits + int(2.4 * trace_orders) + 10)
    traces = riemann.q_from_c(riemann.xi_coeffs(trace_orders, boosted),
                              trace_orders, ctx)
    spot_coeffs = riemann.coeffs_for_radius(max(abs(spot_lambda), 1.0), ctx)
    series = riemann.xi_series(spot_lambda, spot_coeffs, ctx)
    direct = riemann.xi_direct(spot_lambda, ctx)
    with ctx.working(10):
        diff = abs(series - direct)
    report.update(
        digits=digits,
        orders=orders,
        trace_orders=trace_orders,
        c=[_mpstr(coeffs.c2n(k), digits) for k in range(orders + 1)],
        q=[_mpstr(traces.q2n(k), digits) for k in range(1, trace_orders + 1)],
        spot_check={"lambda": spot_lambda,
                    "series": _mpstr(series, digits),
                    "direct": _mpstr(mp.re(direct), digits),
                    "difference": _mpstr(diff, 3)},
    )
    report["zeros_to"] = zeros_to
    if zeros_to is not None:
        zero_coeffs = riemann.coeffs_for_radius(zeros_to, ctx)
        zeros = riemann.xi_zeros(0.0, zeros_to, zero_coeffs, ctx)
        report["zeros"] = [_mpstr(z, digits) for z in zeros]
    else:
        report["zeros"] = None
    return report


def xi_csv(report: Dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "c_2n", "q_2n"])
    for k, cstr in enumerate(report["c"]):
        qstr = report["q"][k - 1] if 1 <= k <= len(report["q"]) else ""
        writer.writerow([k, cstr, qstr])
    return buf.getvalue()


def zeros_csv(report: Dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["k", "height"])
    for k, z in enumerate(report.get("zeros") or [], start=1):
        writer.writerow([k, z])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Positivity checks
# ---------------------------------------------------------------------------

def grommer_report(N: int = 4, digits: int = 50,
                   include_counterexample: bool = True,
                   timestamp: bool = True) -> Dict:
    """Hankel positivity of the trace sequence through order N."""
    floor = riemann.grommer_min_digits(N)
    if digits < floor:
        raise riemann.PrecisionError(
            f"Hankel order N={N} needs at least {floor} working digits, "
            f"got {digits}")
    ctx = riemann.PrecisionContext(digits=digits)
    trace_orders = 2 * N + 1
    boosted = riemann.PrecisionContext(
        digits=digits + int(2.4 * trace_orders) + 10)
    coeffs = riemann.xi_coeffs(trace_orders, boosted)
    traces = riemann.q_from_c(coeffs, trace_orders, ctx)
    report = _base_report(timestamp)
    rows = []
    all_pos = True
    for k in range(N + 1):
        rep = riemann.grommer_hankel(traces, k, ctx)
        rows.append({"N": k, "min_eigenvalue": _mpstr(rep.min_eigenvalue,
                                                      digits),
                     "positive": rep.positive})
        all_pos = all_pos and rep.positive
    report.update(digits=digits, N=N, trace_orders=trace_orders,
                  hankel=rows, all_positive=all_pos)
    if include_counterexample:
        fake = riemann.counterexample_traces(trace_orders, ctx)
        first_bad = None
        bad_eig = None
        for k in range(N + 1):
            rep = riemann.grommer_hankel(fake, k, ctx)
            if not rep.positive:
                first_bad = k
                bad_eig = rep.min_eigenvalue
                break
        report["counterexample"] = {
            "zero": "2+1j",
            "first_failing_N": first_bad,
            "min_eigenvalue": (None if bad_eig is None
                               else _mpstr(bad_eig, digits)),
        }
    return report
