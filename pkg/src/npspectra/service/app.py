"""HTTP service exposing the report pipelines.

One POST endpoint per pipeline; request bodies carry the shape descriptor
inline.  Unusable input maps to 422, numerical failure to 500.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import pipelines, riemann
from ..geometry import ShapeError
from ..spectral import EigenSolverError
from . import schemas

app = FastAPI(
    title="np-spectra",
    description="Boundary spectra of nanoparticle shapes, dispersion-model "
                "resonances, Fredholm determinants, and the positivity "
                "program for the critical-line profile.",
    version="0.1.0",
)


def _run(builder, *args, **kwargs):
    try:
        return builder(*args, **kwargs)
    except (ShapeError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    except (EigenSolverError, riemann.PrecisionError,
            FloatingPointError) as exc:
        raise HTTPException(status_code=500, detail=str(exc))


@app.get("/healthz", response_model=schemas.Health)
def healthz():
    return schemas.Health()


@app.post("/spectrum", response_model=schemas.SpectrumResponse)
def spectrum(req: schemas.SpectrumRequest):
    return _run(pipelines.spectrum_report, req.shape, n=req.n,
                refinement=req.refinement, deflate=req.deflate,
                max_modes=req.max_modes, timestamp=req.timestamp)


@app.post("/resonance", response_model=schemas.ResonanceResponse)
def resonance(req: schemas.ResonanceRequest):
    model = _run(pipelines.model_from_params, req.model.kind, req.model.eps0,
                 req.model.omega_p, req.model.gamma)
    return _run(pipelines.resonance_report, req.shape, model, n=req.n,
                refinement=req.refinement, max_modes=req.max_modes,
                timestamp=req.timestamp)


@app.post("/excite", response_model=schemas.ExciteResponse)
def excite(req: schemas.ExciteRequest):
    model = _run(pipelines.model_from_params, req.model.kind, req.model.eps0,
                 req.model.omega_p, req.model.gamma)
    return _run(pipelines.excite_report, req.shape, model, req.field,
                drive_omega=req.drive_omega, n=req.n,
                refinement=req.refinement, max_modes=req.max_modes,
                timestamp=req.timestamp)


@app.post("/fredholm", response_model=schemas.FredholmResponse)
def fredholm(req: schemas.FredholmRequest):
    return _run(pipelines.fredholm_report, req.shape, n=req.n,
                orders=req.orders, timestamp=req.timestamp)


@app.post("/xi", response_model=schemas.XiResponse)
def xi(req: schemas.XiRequest):
    return _run(pipelines.xi_report, digits=req.digits, orders=req.orders,
                trace_orders=req.trace_orders, zeros_to=req.zeros_to,
                timestamp=req.timestamp)


@app.post("/grommer-check", response_model=schemas.GrommerResponse)
def grommer_check(req: schemas.GrommerRequest):
    floor = riemann.grommer_min_digits(req.order)
    if req.digits < floor:
        raise HTTPException(
            status_code=422,
            detail=f"Hankel order N={req.order} needs at least {floor} "
                   f"working digits, got {req.digits}")
    return _run(pipelines.grommer_report, N=req.order, digits=req.digits,
                include_counterexample=req.include_counterexample,
                timestamp=req.timestamp)
