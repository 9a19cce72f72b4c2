"""Arbitrary-precision program around the completed zeta function.

Everything here works on the critical-line profile Xi(lam), the entire even
real-valued function whose zeros are the heights of the nontrivial zeta
zeros.  Two independent evaluation paths are kept:

* a moment series Xi(lam) = sum (-1)^n c_2n lam^2n / (2n)! whose
  coefficients c_2n = integral_1^inf H(x) (ln sqrt x)^2n dx come from the
  theta-series kernel H, and
* the direct definition Xi(lam) = xi(1/2 + i lam) with
  xi(s) = s(s-1)/2 pi^(-s/2) Gamma(s/2) zeta(s), the zeta factor summed by
  a globally convergent binomial-accelerated alternating series.

On top of the coefficients sit the trace sequences q_2n (power sums of
reciprocal squared zeros), the Hankel positivity checks (necessary for all
zeros to be real), the R-polynomials tying the two sequences together, and
a synthetic off-axis counterexample that the positivity checks must
reject.  All numbers are mpmath reals at a caller-chosen precision; double
precision underflows q_2n by n ~ 9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import mpmath as mp


class PrecisionError(RuntimeError):
    """Requested result cannot be produced at the requested precision."""


@dataclass(frozen=True)
class PrecisionContext:
    """Decimal working precision and series truncation thresholds."""

    digits: int = 50
    term_stop_digits: int = 5    # stop sums when terms drop this far below target

    def __post_init__(self):
        if self.digits < 30:
            raise ValueError("precision context needs at least 30 digits")

    def working(self, extra: int = 0):
        return mp.workdps(self.digits + extra)

    def threshold(self, extra: int = 0) -> mp.mpf:
        return mp.mpf(10) ** (-(self.digits + self.term_stop_digits + extra))


# ---------------------------------------------------------------------------
# Theta series, H kernel, moment coefficients
# ---------------------------------------------------------------------------

def theta_psi(x, ctx: PrecisionContext) -> mp.mpf:
    """psi(x) = sum_{n>=1} exp(-n^2 pi x) for x >= 1."""
    if x < 1:
        raise ValueError("theta series evaluated on x >= 1 only")
    with ctx.working(10):
        x = mp.mpf(x)
        total = mp.mpf(0)
        n = 1
        while True:
            term = mp.exp(-n * n * mp.pi * x)
            total += term
            if term < ctx.threshold():
                return +total
            n += 1


def h_function(x, ctx: PrecisionContext) -> mp.mpf:
    """H(x) = 4 d/dx [x^(3/2) psi'(x)] x^(-1/4), summed termwise.

    Termwise differentiation of the theta series gives
    H(x) = sum_n (4 pi^2 n^4 x^(5/4) - 6 pi n^2 x^(1/4)) exp(-n^2 pi x),
    positive for x >= 1.
    """
    if x < 1:
        raise ValueError("H(x) defined on x >= 1")
    with ctx.working(10):
        x = mp.mpf(x)
        x14 = x ** mp.mpf("0.25")
        x54 = x ** mp.mpf("1.25")
        total = mp.mpf(0)
        n = 1
        while True:
            e = mp.exp(-n * n * mp.pi * x)
            term = (4 * mp.pi**2 * n**4 * x54 - 6 * mp.pi * n**2 * x14) * e
            total += term
            if abs(term) < ctx.threshold() and n >= 3:
                return +total
            n += 1


@dataclass(frozen=True)
class XiCoeffs:
    """Finite prefix c_0, c_2, ..., c_{2 n_max} at a declared precision."""

    values: Tuple[mp.mpf, ...]
    digits: int

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def c2n(self, n: int) -> mp.mpf:
        if not 0 <= n <= self.n_max:
            raise IndexError(f"c_{2 * n} not available (order {self.n_max})")
        return self.values[n]


_COEFF_CACHE: Dict[Tuple[int, int], mp.mpf] = {}
_COEFF_GUARD = 10
# Split points for the t-integral after x = exp(2t); the integrand
# H(e^{2t}) t^{2n} 2 e^{2t} peaks near t with t e^{2t} = n/pi (t < 2 for
# 2n <= 300) and dies like exp(-pi e^{2t}) afterwards.
_QUAD_SPLITS = [0, 1, 2, 3, 5]


def xi_coeff(n: int, ctx: PrecisionContext) -> mp.mpf:
    """c_2n = integral_1^inf H(x) (ln sqrt x)^(2n) dx, positive.

    Substituting x = e^{2t} turns the integrand into
    2 H(e^{2t}) t^{2n} e^{2t} on t in (0, inf), which tanh-sinh panels
    handle at full precision.  Results are cached per (n, working dps).
    """
    if n < 0:
        raise ValueError("coefficient order must be nonnegative")
    dps = ctx.digits + _COEFF_GUARD
    key = (n, dps)
    if key in _COEFF_CACHE:
        return _COEFF_CACHE[key]
    inner = PrecisionContext(digits=dps, term_stop_digits=ctx.term_stop_digits)
    with mp.workdps(dps):
        def integrand(t):
            if t <= 0:
                return mp.mpf(0)
            x = mp.exp(2 * t)
            return 2 * h_function(x, inner) * t ** (2 * n) * mp.exp(2 * t)

        val = mp.quad(integrand, _QUAD_SPLITS)
        if not val > 0:
            raise PrecisionError(f"c_{2 * n} quadrature lost positivity "
                                 f"at {ctx.digits} digits")
        val = +val
    _COEFF_CACHE[key] = val
    return val


def xi_coeffs(n_max: int, ctx: PrecisionContext) -> XiCoeffs:
    """Coefficient table c_0 ... c_{2 n_max}."""
    vals = tuple(xi_coeff(n, ctx) for n in range(n_max + 1))
    return XiCoeffs(values=vals, digits=ctx.digits)


def coeffs_for_radius(lam_max: float, ctx: PrecisionContext,
                      block: int = 10) -> XiCoeffs:
    """Extend the coefficient table until the series tail at |lam| = lam_max
    sits below the context threshold with margin."""
    target = ctx.threshold(5)
    n_max = max(block, int(lam_max))
    while True:
        coeffs = xi_coeffs(n_max, ctx)
        with ctx.working(20):
            lam = mp.mpf(lam_max)
            tail = max(coeffs.c2n(n) * lam ** (2 * n) / mp.factorial(2 * n)
                       for n in range(n_max - 2, n_max + 1))
        if tail < target:
            return coeffs
        n_max += block


# ---------------------------------------------------------------------------
# Series and direct evaluation
# ---------------------------------------------------------------------------

def _series_guard(lam) -> int:
    # cancellation between alternating terms: the largest term exceeds the
    # result by roughly 10^(0.3 |lam|) (measured ~1e8 at lam = 30)
    return int(0.5 * abs(lam)) + 15


def xi_series(lam, coeffs: XiCoeffs, ctx: PrecisionContext) -> mp.mpf:
    """Xi(lam) = sum_n (-1)^n c_2n lam^(2n) / (2n)!.

    Even in lam by construction.  Raises if the available coefficient order
    leaves a tail above 10^(-digits/2) at this |lam|.
    """
    guard = _series_guard(lam)
    with ctx.working(guard):
        lam = abs(mp.mpf(lam))
        total = mp.mpf(0)
        term = mp.mpf(0)
        for n in range(coeffs.n_max + 1):
            term = coeffs.c2n(n) * lam ** (2 * n) / mp.factorial(2 * n)
            total += term if n % 2 == 0 else -term
        if term > mp.mpf(10) ** (-(ctx.digits // 2)):
            raise ValueError(
                f"insufficient coefficient order {coeffs.n_max} for "
                f"|lambda| = {float(lam):.3g}: tail term {mp.nstr(term, 3)}")
        return +total


def xi_series_derivative(lam, coeffs: XiCoeffs, ctx: PrecisionContext) -> mp.mpf:
    """d Xi / d lam from the termwise-differentiated series."""
    guard = _series_guard(lam)
    with ctx.working(guard):
        lam = mp.mpf(lam)
        total = mp.mpf(0)
        for n in range(1, coeffs.n_max + 1):
            term = (coeffs.c2n(n) * 2 * n * lam ** (2 * n - 1)
                    / mp.factorial(2 * n))
            total += term if n % 2 == 0 else -term
        return +total


def zeta_alternating(s, ctx: PrecisionContext) -> mp.mpc:
    """Globally convergent zeta: binomial-accelerated alternating series.

    zeta(s) = 1/(1 - 2^(1-s)) sum_{n>=0} 2^(-n-1)
              sum_{k<=n} (-1)^k C(n, k) (k+1)^(-s).
    Error falls like 2^(-n); the forward differences of (k+1)^(-s) are
    accumulated with cached powers so the cost is O(n^2) multiplies.
    """
    with ctx.working(15):
        s = mp.mpc(s)
        if s == 1:
            raise ValueError("zeta pole at s = 1")
        powers: List[mp.mpc] = [mp.mpc(1)]
        total = mp.mpf(0)
        small_run = 0
        n = 0
        nmax = 8 * (ctx.digits + 15) + 40
        while n <= nmax:
            while len(powers) <= n:
                k = len(powers)
                powers.append(mp.power(k + 1, -s))
            inner = mp.mpf(0)
            for k in range(n + 1):
                term = mp.binomial(n, k) * powers[k]
                inner += term if k % 2 == 0 else -term
            contrib = inner / mp.mpf(2) ** (n + 1)
            total += contrib
            if abs(contrib) < ctx.threshold(10):
                small_run += 1
                if small_run >= 3:
                    break
            else:
                small_run = 0
            n += 1
        else:
            raise PrecisionError("alternating zeta series did not converge "
                                 f"within {nmax} terms")
        return total / (1 - mp.power(2, 1 - s))


def xi_direct(lam, ctx: PrecisionContext) -> mp.mpc:
    """Xi(lam) = xi(1/2 + i lam) from the defining product.

    xi(s) = s(s-1)/2 pi^(-s/2) Gamma(s/2) zeta(s); real for real lam up to
    the working precision.
    """
    with ctx.working(15):
        s = mp.mpf("0.5") + mp.mpc(0, 1) * mp.mpf(lam)
        z = zeta_alternating(s, ctx)
        return +(s * (s - 1) / 2 * mp.power(mp.pi, -s / 2)
                 * mp.gamma(s / 2) * z)


def xi_zeros(lo: float, hi: float, coeffs: XiCoeffs, ctx: PrecisionContext,
             scan_step: float = 0.5) -> List[mp.mpf]:
    """Positive zeros of the series in (lo, hi): sign scan + bisection."""
    lo = max(lo, 0.0)
    with ctx.working(_series_guard(hi)):
        grid = [mp.mpf(lo) + scan_step * j
                for j in range(int((hi - lo) / scan_step) + 2)]
        grid = [g for g in grid if g <= hi]
        vals = [xi_series(g, coeffs, ctx) for g in grid]
        zeros: List[mp.mpf] = []
        tol = mp.mpf(10) ** (-(ctx.digits - 5))
        for a, b, fa, fb in zip(grid, grid[1:], vals, vals[1:]):
            if fa == 0:
                zeros.append(a)
                continue
            if fa * fb >= 0:
                continue
            x0, x1, f0 = a, b, fa
            while x1 - x0 > tol * max(x1, 1):
                mid = (x0 + x1) / 2
                fm = xi_series(mid, coeffs, ctx)
                if fm == 0:
                    x0 = x1 = mid
                    break
                if f0 * fm < 0:
                    x1 = mid
                else:
                    x0, f0 = mid, fm
            zeros.append((x0 + x1) / 2)
        return [+z for z in zeros if z > 0]


# ---------------------------------------------------------------------------
# Trace sequences q_2n
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TraceSequence:
    """q_2, q_4, ..., q_{2 n_max} as mpmath reals; q[i] = q_{2(i+1)}."""

    q: Tuple[mp.mpf, ...]
    source: str  # "recurrence" | "zeros" | "synthetic"
    digits: int = 50

    @property
    def n_max(self) -> int:
        return len(self.q)

    def q2n(self, n: int) -> mp.mpf:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"q_{2 * n} not available (order {self.n_max})")
        return self.q[n - 1]


def q_from_c(coeffs: XiCoeffs, n_max: int, ctx: PrecisionContext) -> TraceSequence:
    """Invert the coefficient recurrence for the traces.

    c_{2n+2} = sum_{k=0..n} (-1)^k (2n+1)!/(2n-2k)! c_{2n-2k} q_{2k+2}
    is solved sequentially for q_{2k+2}.  The division by (2n+1)! c_0
    amplifies absolute error in the c's, so the coefficients must carry
    roughly 2.4 digits per trace order beyond the target precision; a
    cancellation estimate guards the result.
    """
    if coeffs.n_max < n_max:
        raise ValueError(f"need coefficients through c_{2 * n_max}, "
                         f"have c_{2 * coeffs.n_max}")
    needed = ctx.digits + int(2.4 * n_max) + 10
    if coeffs.digits < needed:
        raise PrecisionError(
            f"coefficient table carries {coeffs.digits} digits; trace "
            f"inversion to order {2 * n_max} needs >= {needed}")
    qs: List[mp.mpf] = []
    with mp.workdps(coeffs.digits + _COEFF_GUARD):
        for n in range(n_max):
            # solve for q_{2n+2}
            bracket = coeffs.c2n(n + 1)
            max_term = abs(bracket)
            for k in range(n):
                fac = mp.mpf(math.factorial(2 * n + 1)
                             // math.factorial(2 * n - 2 * k))
                term = (-1) ** k * fac * coeffs.c2n(n - k) * qs[k]
                bracket -= term
                max_term = max(max_term, abs(term))
            lead = (-1) ** n * mp.mpf(math.factorial(2 * n + 1)) * coeffs.c2n(0)
            qn = bracket / lead
            if qn != 0:
                cancel = max_term / abs(bracket)
                rel_err = cancel * mp.mpf(10) ** (-(coeffs.digits))
                if rel_err > mp.mpf(10) ** (-(ctx.digits // 4)):
                    raise PrecisionError(
                        f"catastrophic cancellation inverting q_{2 * n + 2}: "
                        f"relative error estimate {mp.nstr(rel_err, 3)}")
            qs.append(+qn)
    return TraceSequence(q=tuple(qs), source="recurrence", digits=ctx.digits)


def c_from_q(c0: mp.mpf, traces: TraceSequence, n_max: int,
             ctx: PrecisionContext) -> XiCoeffs:
    """Run the recurrence forward: regenerate c_2, ..., c_{2 n_max} from q."""
    if traces.n_max < n_max:
        raise ValueError("trace order too low to regenerate coefficients")
    with ctx.working(20):
        cs = [mp.mpf(c0)]
        for n in range(n_max):
            total = mp.mpf(0)
            for k in range(n + 1):
                fac = mp.mpf(math.factorial(2 * n + 1)
                             // math.factorial(2 * n - 2 * k))
                total += (-1) ** k * fac * cs[n - k] * traces.q2n(k + 1)
            cs.append(+total)
        return XiCoeffs(values=tuple(cs), digits=ctx.digits)


class ZeroSum(NamedTuple):
    """Partial power sum over zeros plus its density-based tail estimate."""

    value: mp.mpf
    tail: mp.mpf


def q_from_zeros(zeros: Sequence, n: int, ctx: PrecisionContext,
                 include_tail: bool = True) -> ZeroSum:
    """q_2n = 2 sum_k zero_k^(-2n), from a finite table plus a tail.

    The tail integrates the smoothed zero-counting density
    dN ~ ln(t / 2 pi) / (2 pi) dt from the last tabulated height T:
    tail = (1/pi) T^(1-2n) [ln(T/2 pi)/(2n-1) + 1/(2n-1)^2].
    The estimate ignores the oscillating part of the counting function,
    so it is an estimate, not a bound certified to all digits.
    """
    if n < 1:
        raise ValueError("trace order n >= 1 required")
    if len(zeros) == 0:
        raise ValueError("need at least one zero")
    with ctx.working(10):
        zs = sorted(mp.mpf(z) for z in zeros)
        partial = 2 * mp.fsum(z ** (-2 * n) for z in zs)
        tail = mp.mpf(0)
        if include_tail:
            T = zs[-1]
            m = 2 * n - 1
            tail = (mp.power(T, -m) / mp.pi
                    * (mp.log(T / (2 * mp.pi)) / m + mp.mpf(1) / m**2))
        return ZeroSum(value=+(partial + tail), tail=+tail)


def counterexample_traces(n_max: int, ctx: PrecisionContext,
                          zero: complex = 2 + 1j) -> TraceSequence:
    """Synthetic traces of a spectrum with one off-axis zero quadruple.

    A real even profile with a zero at lam-hat off the real axis has zeros
    at +-lam-hat and +-conj(lam-hat); the corresponding power sums are
    q_2n = 2 Re(lam-hat^(-2n)).  Feeding these to the Hankel checks must
    break positivity (the checks are only necessary when all zeros are
    real).
    """
    with ctx.working(10):
        z = mp.mpc(zero)
        qs = tuple(+(2 * mp.re(z ** (-2 * n))) for n in range(1, n_max + 1))
    return TraceSequence(q=qs, source="synthetic", digits=ctx.digits)


# ---------------------------------------------------------------------------
# Positivity program
# ---------------------------------------------------------------------------

class HankelReport(NamedTuple):
    min_eigenvalue: mp.mpf
    positive: bool


def _min_eig_sym(H: mp.matrix) -> mp.mpf:
    ev = mp.eigsy(H, eigvals_only=True)
    return min(ev[i] for i in range(H.rows))


def grommer_hankel(traces: TraceSequence, N: int,
                   ctx: PrecisionContext) -> HankelReport:
    """Hankel form H[i][j] = q_{2i+2j+2}, 0 <= i,j <= N: positive?"""
    if traces.n_max < 2 * N + 1:
        raise ValueError(f"Hankel order N={N} needs traces through "
                         f"q_{2 * (2 * N + 1)}")
    with ctx.working(10):
        H = mp.matrix(N + 1)
        for i in range(N + 1):
            for j in range(N + 1):
                H[i, j] = traces.q2n(i + j + 1)
        mn = _min_eig_sym(H)
        return HankelReport(min_eigenvalue=+mn, positive=bool(mn > 0))


def c_hankel_check(coeffs: XiCoeffs, N: int, m: int,
                   ctx: PrecisionContext) -> HankelReport:
    """Moment Hankel form with entries c_{2i+2j+2m}, 0 <= i,j <= N."""
    if m < 0:
        raise ValueError("shift m must be nonnegative")
    if coeffs.n_max < 2 * N + m:
        raise ValueError(f"c-Hankel (N={N}, m={m}) needs coefficients "
                         f"through c_{2 * (2 * N + m)}")
    with ctx.working(10):
        H = mp.matrix(N + 1)
        for i in range(N + 1):
            for j in range(N + 1):
                H[i, j] = coeffs.c2n(i + j + m)
        mn = _min_eig_sym(H)
        return HankelReport(min_eigenvalue=+mn, positive=bool(mn > 0))


@dataclass(frozen=True)
class EvenPolynomial:
    """p(z) = sum_k p_2k z^(2k); coeffs[k] = p_2k."""

    coeffs: Tuple[mp.mpf, ...]

    @property
    def degree2(self) -> int:
        """Half-degree: number of even coefficients minus one."""
        return len(self.coeffs) - 1

    def p2k(self, k: int) -> mp.mpf:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else mp.mpf(0)

    def __add__(self, other: "EvenPolynomial") -> "EvenPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return EvenPolynomial(tuple(self.p2k(k) + other.p2k(k)
                                    for k in range(n)))

    def scaled(self, a) -> "EvenPolynomial":
        return EvenPolynomial(tuple(mp.mpf(a) * c for c in self.coeffs))


def functional_f(traces: TraceSequence, p: EvenPolynomial) -> mp.mpf:
    """f(p) = sum_i q_{2i+2} p_{2i} — the trace pairing on even polynomials."""
    if traces.n_max < p.degree2 + 1:
        raise ValueError(f"polynomial degree {2 * p.degree2} exceeds trace "
                         f"order {2 * traces.n_max}")
    with mp.workdps(traces.digits + 2 * _COEFF_GUARD):
        return +mp.fsum(traces.q2n(i + 1) * p.p2k(i)
                        for i in range(p.degree2 + 1))


def r_polynomial(n: int, coeffs: XiCoeffs) -> EvenPolynomial:
    """R_2n(z) with r_2k = (-1)^k (2n+1)!/(2n-2k)! c_{2n-2k}, k = 0..n."""
    if coeffs.n_max < n:
        raise ValueError(f"R_{2 * n} needs coefficients through c_{2 * n}")
    cs = []
    with mp.workdps(coeffs.digits + 2 * _COEFF_GUARD):
        for k in range(n + 1):
            fac = mp.mpf(math.factorial(2 * n + 1)
                         // math.factorial(2 * n - 2 * k))
            cs.append(+((-1) ** k * fac * coeffs.c2n(n - k)))
    return EvenPolynomial(tuple(cs))


def extended_positivity_experiment(coeffs: XiCoeffs, traces: TraceSequence,
                                   N: int, m: int, a: Sequence) -> mp.mpf:
    """f applied to the Hankel-shifted square sum_{ij} a_i a_j R_{2i+2j+2m-2}.

    Builds the combined even polynomial explicitly and applies the trace
    functional once; equals sum_{ij} c_{2i+2j+2m} a_i a_j when the
    coefficient identity f(R_2n) = c_{2n+2} holds.
    """
    if m < 1:
        raise ValueError("shift m >= 1 required (R_{-2} undefined)")
    if len(a) != N + 1:
        raise ValueError(f"need N+1 = {N + 1} weights, got {len(a)}")
    with mp.workdps(coeffs.digits + 2 * _COEFF_GUARD):
        av = [mp.mpf(x) for x in a]
        combined = EvenPolynomial((mp.mpf(0),))
        for i in range(N + 1):
            for j in range(N + 1):
                r = r_polynomial(i + j + m - 1, coeffs)
                combined = combined + r.scaled(av[i] * av[j])
        return functional_f(traces, combined)


def grommer_min_digits(N: int) -> int:
    """Feasibility floor for the Grommer check at Hankel order N."""
    return math.ceil(1.2 * (4 * N + 2)) + 10
