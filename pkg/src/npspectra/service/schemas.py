"""Request/response models for the HTTP service.

Field names mirror the report dicts produced by :mod:`npspectra.pipelines`;
``lambda`` is a Python keyword, so mode rows carry it via an alias.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ModelSpec(BaseModel):
    kind: str = "drude"  # drude | drude-lossy | silver
    eps0: float = 1.0
    omega_p: float = 1.0
    gamma: float = 0.02


class SpectrumRequest(BaseModel):
    shape: Dict
    n: int = 256
    refinement: Optional[int] = None
    deflate: bool = True
    max_modes: int = 24
    timestamp: bool = True


class ResonanceRequest(BaseModel):
    shape: Dict
    model: ModelSpec = ModelSpec()
    n: int = 256
    refinement: Optional[int] = None
    max_modes: int = 12
    timestamp: bool = True


class ExciteRequest(ResonanceRequest):
    field: List[float] = [1.0, 0.0]
    drive_omega: Optional[float] = None


class FredholmRequest(BaseModel):
    shape: Dict
    n: int = 256
    orders: int = 8
    timestamp: bool = True


class XiRequest(BaseModel):
    digits: int = 50
    orders: int = 16
    trace_orders: int = 10
    zeros_to: Optional[float] = None
    timestamp: bool = True


class GrommerRequest(BaseModel):
    order: int = 4
    digits: int = 50
    include_counterexample: bool = True
    timestamp: bool = True


class _Aliased(BaseModel):
    model_config = ConfigDict(populate_by_name=True)


class ModeRow(_Aliased):
    index: int
    lam: float = Field(alias="lambda")
    epsilon_ratio: float
    zero_mean_residual: float
    pairing_mismatch: Optional[float] = None


class SpectrumResponse(_Aliased):
    schema_version: int
    generated_at: Optional[str] = None
    shape: Dict
    kind: str
    kernel: str
    n_nodes: int
    length: Optional[float] = None
    area: Optional[float] = None
    robin_error: Optional[float] = None
    lambda_max: float
    n_no_finite_resonance: int
    n_spurious: int
    max_pairing_mismatch: Optional[float] = None
    modes: List[ModeRow]


class ModelBlock(BaseModel):
    kind: str
    eps0: float
    omega_p: float
    gamma: float
    omega_unit: str


class ResonanceRow(_Aliased):
    index: int
    lam: float = Field(alias="lambda")
    epsilon_ratio: float
    attainable: bool
    omega: Optional[float] = None
    quality: Optional[float] = None
    closed_form_omega: Optional[float] = None
    closed_form_error: Optional[float] = None


class ResonanceResponse(_Aliased):
    schema_version: int
    generated_at: Optional[str] = None
    shape: Dict
    model: ModelBlock
    modes: List[ResonanceRow]


class ExciteRow(_Aliased):
    index: int
    lam: float = Field(alias="lambda")
    dipole: List[float]
    coupling: float
    omega: Optional[float] = None
    amplitude: Optional[float] = None
    offresonant_gain: Optional[float] = None


class ExciteResponse(_Aliased):
    schema_version: int
    generated_at: Optional[str] = None
    shape: Dict
    model: ModelBlock
    field: List[float]
    drive_omega: Optional[float] = None
    modes: List[ExciteRow]


class DeterminantCheck(BaseModel):
    lam: float = Field(alias="lambda")
    series: float
    product: float
    direct: float
    max_spread: float

    model_config = ConfigDict(populate_by_name=True)


class FredholmResponse(BaseModel):
    schema_version: int
    generated_at: Optional[str] = None
    shape: Dict
    n_nodes: int
    orders: int
    radius: float
    q: List[float]
    b: List[float]
    logderiv_lambda: float
    logderiv_residual: float
    determinant_check: DeterminantCheck


class SpotCheck(BaseModel):
    lam: float = Field(alias="lambda")
    series: str
    direct: str
    difference: str

    model_config = ConfigDict(populate_by_name=True)


class XiResponse(BaseModel):
    schema_version: int
    generated_at: Optional[str] = None
    digits: int
    orders: int
    trace_orders: int
    c: List[str]
    q: List[str]
    spot_check: SpotCheck
    zeros_to: Optional[float] = None
    zeros: Optional[List[str]] = None


class HankelRow(BaseModel):
    N: int
    min_eigenvalue: str
    positive: bool


class CounterexampleBlock(BaseModel):
    zero: str
    first_failing_N: Optional[int] = None
    min_eigenvalue: Optional[str] = None


class GrommerResponse(BaseModel):
    schema_version: int
    generated_at: Optional[str] = None
    digits: int
    N: int
    trace_orders: int
    hankel: List[HankelRow]
    all_positive: bool
    counterexample: Optional[CounterexampleBlock] = None


class Health(BaseModel):
    status: str = "ok"
