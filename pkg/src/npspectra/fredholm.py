"""Fredholm determinant of the deflated 2D operator.

Three independent routes to the same entire function D(lambda):

* iterated traces q_2n = tr(A^2n) summed into the log-derivative series,
* even coefficients from the trace recurrences (Newton identities),
* the eigenvalue product / dense determinant of I - lambda A.

Sign convention: with e_2n the even elementary symmetric functions of the
matrix eigenvalues mu_k, D(lambda) = sum_n e_2n lambda^2n and the exported
coefficients are b_2n = (-1)^n (2n)! e_2n, so that
D(lambda) = sum_n (-1)^n b_2n lambda^2n / (2n)! with b_0 = D(0) = 1 and
b_2 = q_2 > 0.  Odd traces vanish for twin spectra and are asserted, then
set to zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Optional, Union

import numpy as np

from .operator import DiscreteOperator, K2D_DEFLATED
from .spectral import PlasmonSpectrum

ODD_TRACE_TOL = 1e-10


@dataclass(frozen=True)
class TraceSequence:
    """q_2, q_4, ..., q_{2 n_max}; q[i] holds q_{2(i+1)}."""

    q: np.ndarray
    source: str  # "discrete-operator" | "zeros" | "recurrence"

    @property
    def n_max(self) -> int:
        return len(self.q)

    def q2n(self, n: int) -> float:
        """Value of q_{2n} (n >= 1)."""
        if not 1 <= n <= self.n_max:
            raise IndexError(f"q_{2 * n} not available (order {self.n_max})")
        return float(self.q[n - 1])


@dataclass(frozen=True)
class DeterminantCoeffs:
    """Even-series coefficients of D; b[0] = D(0) = 1."""

    b: np.ndarray          # b_0, b_2, ..., b_{2 n_max}
    radius: Optional[float] = None   # |lambda_1| when known

    @property
    def n_max(self) -> int:
        return len(self.b) - 1

    def evaluate(self, lam: float) -> float:
        """D(lambda) = sum (-1)^n b_2n lambda^2n / (2n)!."""
        total = 0.0
        for n, bn in enumerate(self.b):
            total += (-1.0) ** n * bn * lam ** (2 * n) / factorial(2 * n)
        return total

    def derivative(self, lam: float) -> float:
        total = 0.0
        for n, bn in enumerate(self.b):
            if n == 0:
                continue
            total += (-1.0) ** n * bn * 2 * n * lam ** (2 * n - 1) / factorial(2 * n)
        return total


def iterated_traces(op: DiscreteOperator, n_max: int) -> TraceSequence:
    """q_2n = tr(A^2n) for n = 1..n_max by repeated multiplication.

    Only defined for the deflated 2D operator: the equilibrium eigenvalue
    of the plain kernel would add 1 to every trace.  Odd traces are checked
    to vanish (twin spectrum) and dropped.
    """
    if op.kernel != K2D_DEFLATED:
        raise ValueError("iterated traces require the deflated 2D operator")
    A = op.matrix
    q = np.empty(n_max)
    B = np.eye(op.n)
    for m in range(1, 2 * n_max + 1):
        B = B @ A
        tr = float(np.trace(B))
        if m % 2:
            if abs(tr) > ODD_TRACE_TOL:
                raise ValueError(f"odd trace tr(A^{m}) = {tr:.3e} does not "
                                 "vanish; spectrum is not twin-symmetric")
        else:
            q[m // 2 - 1] = tr
    return TraceSequence(q=q, source="discrete-operator")


def iterated_trace_quadrature(op: DiscreteOperator, n: int) -> float:
    """Literal iterated-kernel quadrature of q_n (cross-check, n <= 3).

    Builds the n-fold iterated kernel by explicit quadrature over
    intermediate points and integrates its diagonal.  Identical arithmetic
    content to the matrix-power trace; kept as an independent expression of
    the definition.
    """
    if not 1 <= n <= 3:
        raise ValueError("kernel-iteration cross-check supports n <= 3 only")
    if op.kernel != K2D_DEFLATED:
        raise ValueError("iterated traces require the deflated 2D operator")
    w = op.weights
    ker = op.matrix / w[None, :]     # kernel values (weights removed)
    iterated = ker
    for _ in range(n - 1):
        iterated = np.einsum("qp,p,pm->qm", iterated, w, ker)
    return float(np.einsum("qq,q->", iterated, w))


def determinant_coeffs(traces: Union[TraceSequence, DiscreteOperator],
                       n_max: int,
                       radius: Optional[float] = None) -> DeterminantCoeffs:
    """Coefficients b_2n from traces via the Newton-identity recurrence.

    2n e_2n = -sum_{j=1..n} q_2j e_{2n-2j}, then b_2n = (-1)^n (2n)! e_2n.
    """
    if isinstance(traces, DiscreteOperator):
        traces = iterated_traces(traces, n_max)
    if n_max > traces.n_max:
        raise ValueError(f"need traces through q_{2 * n_max}, "
                         f"have q_{2 * traces.n_max}")
    e = np.zeros(n_max + 1)
    e[0] = 1.0
    for n in range(1, n_max + 1):
        acc = 0.0
        for j in range(1, n + 1):
            acc += traces.q2n(j) * e[n - j]
        e[n] = -acc / (2 * n)
    b = np.array([(-1.0) ** n * factorial(2 * n) * e[n]
                  for n in range(n_max + 1)])
    return DeterminantCoeffs(b=b, radius=radius)


def determinant_product(spectrum: PlasmonSpectrum, lam: float) -> float:
    """D(lambda) = prod over retained modes of (1 - lambda / lambda_k).

    Twin pairs contribute (1 - lambda/|l|)(1 + lambda/|l|) = 1 - lambda^2/l^2.
    Requires a deflated spectrum; eigenvalues beyond lambda_max were already
    dropped at eigenpair time (their factors differ from 1 by < lambda *
    1/lambda_max each, and cancel pairwise for twin spectra).
    """
    if spectrum.robin is not None:
        raise ValueError("determinant product needs the deflated spectrum "
                         "(equilibrium eigenvalue removed)")
    out = 1.0
    for m in spectrum.modes:
        out *= 1.0 - lam / m.lam
    return out


def determinant_direct(op: DiscreteOperator, lam: float) -> float:
    """Dense determinant det(I - lambda A) via LU (sign * exp(log|det|))."""
    if op.kernel != K2D_DEFLATED:
        raise ValueError("direct determinant defined for the deflated operator")
    sign, logdet = np.linalg.slogdet(np.eye(op.n) - lam * op.matrix)
    return float(sign * np.exp(logdet))


def trace_series(traces: TraceSequence, lam: float) -> float:
    """sum_n q_2n lambda^(2n-2) — the log-derivative expansion."""
    total = 0.0
    for n in range(1, traces.n_max + 1):
        total += traces.q2n(n) * lam ** (2 * n - 2)
    return total


def logderiv_residual(coeffs: DeterminantCoeffs, traces: TraceSequence,
                      lam: float) -> float:
    """| -D'(lambda)/(lambda D(lambda)) - sum q_2n lambda^(2n-2) |.

    Left side from the coefficient series, right side from the traces.
    Valid inside the trace-series radius; if the coefficient object carries
    the first eigenvalue, |lambda| < 0.5 |lambda_1| is enforced.
    """
    if coeffs.radius is not None and abs(lam) >= 0.5 * coeffs.radius:
        raise ValueError(f"|lambda| = {abs(lam):.4g} outside the declared "
                         f"radius 0.5 * {coeffs.radius:.4g}")
    if lam == 0.0:
        # limit: -D''(0)/D(0) ... leading term q_2
        lhs = coeffs.b[1] if coeffs.n_max >= 1 else 0.0
        return abs(lhs - traces.q2n(1))
    D = coeffs.evaluate(lam)
    Dp = coeffs.derivative(lam)
    return abs(-Dp / (lam * D) - trace_series(traces, lam))
