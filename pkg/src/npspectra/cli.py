"""Command-line front end.

Thin client over :mod:`npspectra.pipelines`: every subcommand parses
options, runs one report builder in-process, and serializes the result to
stdout or a file.  Exit codes: 0 success, 2 unusable input (missing file,
bad descriptor, refused precision), 3 numerical failure.
"""

from __future__ import annotations

import functools
import json
import sys
from typing import Optional

import click

from . import pipelines, resonance, riemann
from .geometry import ShapeError
from .spectral import EigenSolverError

EXIT_INPUT = 2
EXIT_NUMERICAL = 3


def _write(text: str, out: Optional[str]) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _guarded(func):
    """Map exception classes to the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (FileNotFoundError, IsADirectoryError, json.JSONDecodeError,
                ShapeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except (EigenSolverError, riemann.PrecisionError,
                FloatingPointError) as exc:
            click.echo(f"numerical failure: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)

    return wrapper


@click.group()
@click.version_option(package_name="artifact", prog_name="np-spectra")
def main():
    """Boundary spectra of nanoparticle shapes and the positivity program
    for the critical-line profile."""


_shape_opt = click.option("--shape", "shape_path", required=True,
                          type=click.Path(), help="Shape descriptor JSON file.")
_n_opt = click.option("--n", default=256, show_default=True,
                      help="Boundary nodes (2D, even, >= 16).")
_refine_opt = click.option("--refinement", default=None, type=int,
                           help="Icosphere refinement level (3D).")
_out_opt = click.option("--out", default="-", show_default=True,
                        help="Output path ('-' = stdout).")
_stamp_opt = click.option("--no-timestamp", is_flag=True,
                          help="Omit the generated_at field "
                               "(byte-reproducible output).")


def _model_opts(func):
    for deco in (
        click.option("--model", default="drude", show_default=True,
                     type=click.Choice(["drude", "drude-lossy", "silver"]),
                     help="Dispersion model."),
        click.option("--eps0", default=1.0, show_default=True,
                     help="Background permittivity."),
        click.option("--omega-p", default=1.0, show_default=True,
                     help="Plasma frequency (reduced units)."),
        click.option("--gamma", default=0.02, show_default=True,
                     help="Collision rate for drude-lossy."),
    ):
        func = deco(func)
    return func


@main.command()
@_shape_opt
@_n_opt
@_refine_opt
@click.option("--no-deflate", is_flag=True,
              help="Keep the equilibrium eigenvalue in the 2D spectrum.")
@click.option("--max-modes", default=24, show_default=True)
@click.option("--format", "fmt", default="json", show_default=True,
              type=click.Choice(["json", "csv"]))
@click.option("--dump-operator", default=None, type=click.Path(),
              help="Write the assembled matrix (row-major float64 LE).")
@_out_opt
@_stamp_opt
@_guarded
def spectrum(shape_path, n, refinement, no_deflate, max_modes, fmt,
             dump_operator, out, no_timestamp):
    """Eigenvalue spectrum of a shape."""
    desc = pipelines.load_descriptor(shape_path)
    report = pipelines.spectrum_report(
        desc, n=n, refinement=refinement, deflate=not no_deflate,
        max_modes=max_modes, timestamp=not no_timestamp,
        dump_operator=dump_operator)
    text = (pipelines.spectrum_csv(report) if fmt == "csv"
            else pipelines.dump_report(report))
    _write(text, out)


@main.command(name="resonance")
@_shape_opt
@_n_opt
@_refine_opt
@_model_opts
@click.option("--max-modes", default=12, show_default=True)
@_out_opt
@_stamp_opt
@_guarded
def resonance_cmd(shape_path, n, refinement, model, eps0, omega_p, gamma,
                  max_modes, out, no_timestamp):
    """Resonance frequencies of the leading modes."""
    desc = pipelines.load_descriptor(shape_path)
    disp = pipelines.model_from_params(model, eps0, omega_p, gamma)
    report = pipelines.resonance_report(
        desc, disp, n=n, refinement=refinement, max_modes=max_modes,
        timestamp=not no_timestamp)
    _write(pipelines.dump_report(report), out)


@main.command()
@_shape_opt
@_n_opt
@_refine_opt
@_model_opts
@click.option("--field", default="1,0",
              show_default=True, help="Uniform field components, "
              "comma-separated (use three for meshes).")
@click.option("--drive-omega", default=None, type=float,
              help="Off-resonant drive frequency for the gain column.")
@click.option("--max-modes", default=12, show_default=True)
@_out_opt
@_stamp_opt
@_guarded
def excite(shape_path, n, refinement, model, eps0, omega_p, gamma, field,
           drive_omega, max_modes, out, no_timestamp):
    """Dipole couplings and resonant amplitudes for a uniform field."""
    desc = pipelines.load_descriptor(shape_path)
    disp = pipelines.model_from_params(model, eps0, omega_p, gamma)
    try:
        e0 = [float(c) for c in field.split(",")]
    except ValueError:
        raise ShapeError(f"cannot parse field components {field!r}")
    report = pipelines.excite_report(
        desc, disp, e0, drive_omega=drive_omega, n=n, refinement=refinement,
        max_modes=max_modes, timestamp=not no_timestamp)
    _write(pipelines.dump_report(report), out)


@main.command()
@_shape_opt
@_n_opt
@click.option("--orders", default=8, show_default=True,
              help="Trace/coefficient orders (q_2 .. q_2n).")
@click.option("--format", "fmt", default="json", show_default=True,
              type=click.Choice(["json", "csv"]))
@_out_opt
@_stamp_opt
@_guarded
def fredholm(shape_path, n, orders, fmt, out, no_timestamp):
    """Iterated traces and determinant coefficients of a contour."""
    desc = pipelines.load_descriptor(shape_path)
    report = pipelines.fredholm_report(desc, n=n, orders=orders,
                                       timestamp=not no_timestamp)
    text = (pipelines.fredholm_csv(report) if fmt == "csv"
            else pipelines.dump_report(report))
    _write(text, out)


@main.command()
@click.option("--digits", default=50, show_default=True,
              help="Working precision (decimal digits, >= 30).")
@click.option("--orders", default=16, show_default=True,
              help="Moment coefficients c_0 .. c_2n.")
@click.option("--trace-orders", default=10, show_default=True,
              help="Trace values q_2 .. q_2n from the recurrence.")
@click.option("--zeros-to", default=None, type=float,
              help="Also locate profile zeros up to this height.")
@click.option("--format", "fmt", default="json", show_default=True,
              type=click.Choice(["json", "csv"]))
@click.option("--zeros-out", default=None, type=click.Path(),
              help="Write located zeros as CSV to this path.")
@_out_opt
@_stamp_opt
@_guarded
def xi(digits, orders, trace_orders, zeros_to, fmt, zeros_out, out,
       no_timestamp):
    """Moment coefficients and traces of the critical-line profile."""
    report = pipelines.xi_report(digits=digits, orders=orders,
                                 trace_orders=trace_orders, zeros_to=zeros_to,
                                 timestamp=not no_timestamp)
    text = (pipelines.xi_csv(report) if fmt == "csv"
            else pipelines.dump_report(report))
    _write(text, out)
    if zeros_out is not None:
        _write(pipelines.zeros_csv(report), zeros_out)


@main.command(name="grommer-check")
@click.option("--digits", default=50, show_default=True,
              help="Working precision (decimal digits).")
@click.option("--grommer", "order", default=4, show_default=True,
              help="Largest Hankel order N to check.")
@click.option("--no-counterexample", is_flag=True,
              help="Skip the synthetic off-axis counterexample block.")
@_out_opt
@_stamp_opt
@_guarded
def grommer_check(digits, order, no_counterexample, out, no_timestamp):
    """Hankel positivity of the trace sequence through order N."""
    floor = riemann.grommer_min_digits(order)
    if digits < floor:
        click.echo(f"error: Hankel order N={order} needs at least {floor} "
                   f"working digits, got {digits}", err=True)
        sys.exit(EXIT_INPUT)
    report = pipelines.grommer_report(
        N=order, digits=digits,
        include_counterexample=not no_counterexample,
        timestamp=not no_timestamp)
    _write(pipelines.dump_report(report), out)


if __name__ == "__main__":
    main()
