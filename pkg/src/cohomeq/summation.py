"""Summation machinery over orbit-indexed series.

Given a dynamical system and a right-hand side gamma, the series attached to
a point x is gamma(x) + gamma(Fx) + gamma(F^2 x) + ...; its partial sums
drive every solvability verdict in the package.  This module provides the
probes (partial sums, Cesaro means, running sup of the negated sums), the
sup/limsup solution formulas, the regularized tail limit, boundedness and
equicontinuity diagnostics, and the linear summation of geometric series.

Series come in exact flavors (Fraction terms from finite systems or
hand-built fixtures) and float flavors (rotation and power-map orbits);
verdicts at a finite horizon are heuristic and labeled as such.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import NotSummable, SumsUnbounded
from .functional_graph import FiniteSystem, decompose
from .rotation import RotationNumber, fractional_multiples
from .trigpoly import TrigPoly

# ---------------------------------------------------------------------------
# series backends
# ---------------------------------------------------------------------------


class OrbitSeries:
    """Terms gamma(F^k x) for a fixed x; deterministic and reproducible.

    Subclasses implement term(k); terms(lo, hi) may be overridden with a
    vectorized path.  `exact` marks Fraction-valued backends, `minimal`
    marks backends whose underlying system is minimal (dense orbits).
    """

    exact = False
    minimal = False

    def term(self, k: int):
        raise NotImplementedError

    def terms(self, lo: int, hi: int):
        if self.exact:
            return [self.term(k) for k in range(lo, hi)]
        return np.array([self.term(k) for k in range(lo, hi)], dtype=np.float64)

    def shifted(self, steps: int = 1) -> "OrbitSeries":
        """The series based at F^steps x."""
        return _OffsetSeries(self, steps)


class _OffsetSeries(OrbitSeries):
    def __init__(self, base: OrbitSeries, offset: int):
        self.base = base
        self.offset = offset
        self.exact = base.exact
        self.minimal = base.minimal

    def term(self, k: int):
        return self.base.term(k + self.offset)

    def terms(self, lo: int, hi: int):
        return self.base.terms(lo + self.offset, hi + self.offset)


class FiniteOrbitSeries(OrbitSeries):
    """gamma along the orbit of a finite-system state; exact rationals."""

    exact = True

    def __init__(self, sys: FiniteSystem, gamma: Sequence[Fraction], x: int):
        if len(gamma) != sys.n:
            raise ValueError("gamma length mismatch")
        dec = decompose(sys)
        l = dec.preperiod[x]
        p = dec.period[x]
        orbit = [x]
        for _ in range(l + p - 1):
            orbit.append(sys.succ[orbit[-1]])
        self.sys = sys
        self.x = x
        self._gamma = [Fraction(g) for g in gamma]
        self._head = [self._gamma[s] for s in orbit[:l]]
        self._cycle = [self._gamma[s] for s in orbit[l:]]
        self._l, self._p = l, p

    def term(self, k: int):
        if k < self._l:
            return self._head[k]
        return self._cycle[(k - self._l) % self._p]


class SequenceSeries(OrbitSeries):
    """Generic fixture backend: term(k) from a callable."""

    def __init__(self, fn: Callable[[int], object], exact: bool = False,
                 minimal: bool = False):
        self._fn = fn
        self.exact = exact
        self.minimal = minimal

    def term(self, k: int):
        return self._fn(k)


class RotationSeries(OrbitSeries):
    """h(x + k*alpha) along a circle-rotation orbit (float backend).

    Vectorized and numerically uniform in k: the orbit angles are reduced in
    64-bit fixed point, so s_n keeps full double accuracy out to large n.
    """

    def __init__(self, h, alpha: RotationNumber, x0: float):
        self.h = h
        self.alpha = alpha
        self.x0 = float(x0)
        self._aval = alpha.value(96)
        self.minimal = alpha.is_rational() is False

    def _h_eval(self, angles):
        if isinstance(self.h, TrigPoly):
            return np.asarray(self.h.eval(angles), dtype=np.float64)
        return np.vectorize(self.h, otypes=[np.float64])(angles)

    def term(self, k: int):
        return float(self.terms(k, k + 1)[0])

    def terms(self, lo: int, hi: int):
        ang = fractional_multiples(self._aval, lo, hi, x0=self.x0)
        return self._h_eval(ang)


class RotationCoboundarySeries(RotationSeries):
    """gamma = f(. + alpha) - f along a rotation orbit, evaluated as stated
    (two f evaluations per term, no telescoping shortcuts)."""

    def __init__(self, f, alpha: RotationNumber, x0: float):
        super().__init__(f, alpha, x0)

    def terms(self, lo: int, hi: int):
        ang = fractional_multiples(self._aval, lo, hi + 1, x0=self.x0)
        vals = self._h_eval(ang)
        return vals[1:] - vals[:-1]


# ---------------------------------------------------------------------------
# probes and verdicts
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SummationSpec:
    """Knobs for verdict declaration.

    Convergence requires `window` consecutive indices within `tolerance`
    (orbit averages oscillate, so a single-step test misfires).  The
    unboundedness trip point is `unbounded_factor` times the largest |term|
    seen; there is no finite certificate, so the verdict stays heuristic.
    """

    method: str = "SUP"  # CESARO | SUP | LIMSUP | REGULARIZED | EXPONENTIAL
    tolerance: float = 1e-9
    window: int = 32
    unbounded_factor: float = 1e6

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.window < 2:
            raise ValueError("window must be >= 2")
        if self.method not in {"CESARO", "SUP", "LIMSUP", "REGULARIZED", "EXPONENTIAL"}:
            raise ValueError(f"unknown method {self.method}")


DEFAULT_SPEC = SummationSpec()


@dataclass(frozen=True)
class BoundedVerdict:
    kind: str                 # BOUNDED | UNBOUNDED_AT | INCONCLUSIVE
    bound: Optional[float] = None
    index: Optional[int] = None


@dataclass(frozen=True)
class CesaroVerdict:
    kind: str                 # CONVERGED | DIVERGENT | INCONCLUSIVE
    value: Optional[object] = None
    start: Optional[int] = None


@dataclass
class SeriesProbe:
    """Materialized statistics of one orbit series up to index N."""

    s: object                      # partial sums s_0..s_N (ndarray or list)
    sigma: Optional[object]        # Cesaro means, same indexing
    sup_neg_s: object              # running max of -s_n
    bounded: BoundedVerdict
    cesaro: Optional[CesaroVerdict]
    exact: bool

    @property
    def horizon(self) -> int:
        return len(self.s) - 1


_CHUNK = 1 << 14


def partial_sums(series: OrbitSeries, N: int, spec: SummationSpec = DEFAULT_SPEC) -> SeriesProbe:
    """Prefix sums s_0..s_N with the running sup of -s_n and a bounded verdict."""
    return probe(series, N, spec, with_sigma=False)


def cesaro(series: OrbitSeries, N: int, spec: SummationSpec = DEFAULT_SPEC) -> SeriesProbe:
    """Partial sums plus Cesaro means sigma_0..sigma_N and a convergence verdict.

    CONVERGED is declared when the last `spec.window` means stay within
    `spec.tolerance` of each other; the negated final mean is then the
    candidate solution value at the base point.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    return probe(series, N, spec, with_sigma=True)


def probe(series: OrbitSeries, N: int, spec: SummationSpec = DEFAULT_SPEC,
          with_sigma: bool = True) -> SeriesProbe:
    if N < 0:
        raise ValueError("N must be >= 0")
    if series.exact:
        return _probe_exact(series, N, spec, with_sigma)
    return _probe_float(series, N, spec, with_sigma)


def _probe_exact(series, N, spec, with_sigma):
    s = []
    acc = Fraction(0)
    for k in range(N + 1):
        acc += series.term(k)
        s.append(acc)
    sup_neg = []
    best = None
    for v in s:
        best = -v if best is None else max(best, -v)
        sup_neg.append(best)
    scale = max((abs(series.term(k)) for k in range(N + 1)), default=Fraction(0))
    bounded = _bounded_verdict([abs(v) for v in s], scale, spec)
    sigma = None
    ces = None
    if with_sigma:
        sigma = []
        total = Fraction(0)
        for n, v in enumerate(s):
            total += v
            sigma.append(total / (n + 1))
        ces = _cesaro_verdict(sigma, spec)
    return SeriesProbe(s, sigma, sup_neg, bounded, ces, exact=True)


def _probe_float(series, N, spec, with_sigma):
    s = np.empty(N + 1)
    acc = 0.0
    scale = 0.0
    for lo in range(0, N + 1, _CHUNK):
        hi = min(lo + _CHUNK, N + 1)
        t = np.asarray(series.terms(lo, hi), dtype=np.float64)
        scale = max(scale, float(np.max(np.abs(t))) if t.size else 0.0)
        np.cumsum(t, out=s[lo:hi])
        s[lo:hi] += acc
        acc = s[hi - 1]
    sup_neg = np.maximum.accumulate(-s)
    bounded = _bounded_verdict_np(s, scale, spec)
    sigma = None
    ces = None
    if with_sigma:
        sigma = np.cumsum(s) / np.arange(1, N + 2)
        ces = _cesaro_verdict(sigma, spec)
    return SeriesProbe(s, sigma, sup_neg, bounded, ces, exact=False)


def _bounded_verdict(abs_s, scale, spec):
    if not abs_s:
        return BoundedVerdict("INCONCLUSIVE")
    trip = spec.unbounded_factor * max(float(scale), 1e-300)
    for n, v in enumerate(abs_s):
        if float(v) > trip:
            return BoundedVerdict("UNBOUNDED_AT", index=n)
    return BoundedVerdict("BOUNDED", bound=float(max(abs_s)))


def _bounded_verdict_np(s, scale, spec):
    trip = spec.unbounded_factor * max(scale, 1e-300)
    a = np.abs(s)
    over = np.nonzero(a > trip)[0]
    if over.size:
        return BoundedVerdict("UNBOUNDED_AT", index=int(over[0]))
    return BoundedVerdict("BOUNDED", bound=float(a.max()))


def _cesaro_verdict(sigma, spec):
    n = len(sigma)
    if n < spec.window:
        return CesaroVerdict("INCONCLUSIVE")
    tail = sigma[n - spec.window:]
    lo, hi = min(tail), max(tail)
    if float(hi - lo) <= spec.tolerance:
        return CesaroVerdict("CONVERGED", value=sigma[-1], start=n - spec.window)
    if abs(float(sigma[-1])) > spec.unbounded_factor:
        return CesaroVerdict("DIVERGENT")
    return CesaroVerdict("INCONCLUSIVE")


def finite_cesaro_limit(sys: FiniteSystem, gamma: Sequence[Fraction], x: int) -> Fraction:
    """Exact Cesaro sum of the resolving series at a finite-system state.

    Once the orbit is on its cycle the partial sums are periodic in n (the
    cycle sum of gamma must vanish, else there is no limit), so the Cesaro
    limit is the plain average of one period block of partial sums, starting
    at n = l - 1 with the convention s_(-1) = 0.
    """
    dec = decompose(sys)
    l, p = dec.preperiod[x], dec.period[x]
    series = FiniteOrbitSeries(sys, gamma, x)
    s = []
    acc = Fraction(0)
    for k in range(l + 2 * p):
        acc += series.term(k)
        s.append(acc)

    def s_at(n):
        return Fraction(0) if n < 0 else s[n]

    if s_at(l - 1 + p) != s_at(l - 1):
        raise ValueError("cycle sum of gamma does not vanish; no Cesaro limit")
    block = [s_at(n) for n in range(l - 1, l - 1 + p)]
    return sum(block, Fraction(0)) / p


# ---------------------------------------------------------------------------
# identity utilities (used heavily by tests, cheap enough for callers too)
# ---------------------------------------------------------------------------


def shift_covariance_defect(series: OrbitSeries, N: int) -> float:
    """max_n |s_n(Fx) - (s_{n+1}(x) - gamma(x))|; zero in exact arithmetic."""
    base = probe(series, N + 1, with_sigma=False)
    reb = probe(series.shifted(1), N, with_sigma=False)
    g0 = series.term(0)
    if series.exact:
        return float(max(abs(reb.s[n] - (base.s[n + 1] - g0)) for n in range(N + 1)))
    return float(np.max(np.abs(np.asarray(reb.s) - (np.asarray(base.s[1:]) - g0))))


def cesaro_rebase_defect(series: OrbitSeries, N: int) -> float:
    """max over steps of the Cesaro rebasing identity
    sigma_{N-1}(Fx) = ((N+1)/N) (sigma_N(x) - gamma(x))."""
    base = cesaro(series, N)
    reb = cesaro(series.shifted(1), N - 1)
    g0 = series.term(0)
    worst = 0.0
    for M in range(1, N + 1):
        lhs = reb.sigma[M - 1]
        rhs = (base.sigma[M] - g0) * Fraction(M + 1, M) if series.exact \
            else (base.sigma[M] - g0) * (M + 1) / M
        worst = max(worst, abs(float(lhs - rhs)))
    return worst


def sita_defect(series: OrbitSeries, N: int, phi_seq) -> float:
    """Defect of sigma_N(x) = ((N+2)/(N+1)) (tau_{N+1}(x) - phi(x)) for a
    known solution phi given along the orbit (phi_seq[n] = phi(F^n x))."""
    pr = cesaro(series, N)
    if series.exact:
        tau = sum(phi_seq[: N + 2], Fraction(0)) / (N + 2)
        rhs = Fraction(N + 2, N + 1) * (tau - phi_seq[0])
    else:
        tau = float(np.sum(np.asarray(phi_seq[: N + 2], dtype=np.float64))) / (N + 2)
        rhs = (N + 2) / (N + 1) * (tau - phi_seq[0])
    return abs(float(pr.sigma[N] - rhs))


def sup_defect(series: OrbitSeries, N: int):
    """Residual delta(x) = gamma(x) + phi(x) - phi(Fx) of the truncated sup
    formula, computed from one materialized orbit.

    Returns (delta, stabilized): delta equals
    max_{0<=n<=N}(-s_n) - max_{1<=m<=N+1}(-s_m) and is guaranteed
    nonnegative when the running sup stabilized before the horizon.
    """
    pr = probe(series, N + 1, with_sigma=False)
    if series.exact:
        left = max(-v for v in pr.s[: N + 1])
        right = max(-v for v in pr.s[1: N + 2])
        first_argmax = min(n for n in range(N + 1) if -pr.s[n] == left)
    else:
        neg = -np.asarray(pr.s)
        left = float(np.max(neg[: N + 1]))
        right = float(np.max(neg[1: N + 2]))
        first_argmax = int(np.argmax(neg[: N + 1]))
    stabilized = first_argmax < N
    return left - right, stabilized


# ---------------------------------------------------------------------------
# solution formulas
# ---------------------------------------------------------------------------


@dataclass
class SupSolutionReport:
    values: object                 # phi(x) per sample point
    last_increase: list[int]       # last index where the running sup rose
    stabilized: list[bool]
    bounds: list[float]            # max |s_n| per sample
    minimal_backend: bool
    sign_min: Optional[float]      # min phi over samples (sign property data)

    def value_list(self) -> list:
        return list(self.values)


def sup_solution(series_family: Callable[[object], OrbitSeries], sample_points,
                 N: int, spec: SummationSpec = DEFAULT_SPEC) -> SupSolutionReport:
    """phi(x) = max_{n <= N} (-s_n(x)) at each sample point.

    Raises SumsUnbounded when any sample trips the unboundedness heuristic;
    the truncated sup is only a solution formula when the sums are bounded
    (and the system minimal), so no solution claim is made otherwise.
    """
    values, last_inc, stab, bounds = [], [], [], []
    minimal = True
    for x in sample_points:
        series = series_family(x)
        minimal = minimal and series.minimal
        pr = probe(series, N, spec, with_sigma=False)
        if pr.bounded.kind == "UNBOUNDED_AT":
            raise SumsUnbounded(
                "partial sums tripped the unboundedness heuristic",
                x=float(x) if not isinstance(x, Fraction) else x,
                index=pr.bounded.index,
            )
        if series.exact:
            phi = max(-v for v in pr.s)
            arg = min(n for n, v in enumerate(pr.s) if -v == phi)
        else:
            neg = -np.asarray(pr.s)
            arg = int(np.argmax(neg))
            phi = float(neg[arg])
        values.append(phi)
        last_inc.append(arg)
        stab.append(arg < N)
        bounds.append(pr.bounded.bound)
    sign_min = min((float(v) for v in values), default=None)
    return SupSolutionReport(values, last_inc, stab, bounds, minimal, sign_min)


def linearized_solution(series_family, base_point, sample_points, N: int,
                        spec: SummationSpec = DEFAULT_SPEC):
    """phi0(x) = sup-value(x) - sup-value(base_point); exactly zero at the base.

    Subtracting the sup at a pinned base point turns the nonlinear sup
    formula into a linear map gamma -> phi0 (tested by additivity).
    """
    base_rep = sup_solution(series_family, [base_point], N, spec)
    base_val = base_rep.values[0]
    rep = sup_solution(series_family, sample_points, N, spec)
    if isinstance(rep.values, list) and rep.values and isinstance(rep.values[0], Fraction):
        return [v - base_val for v in rep.values]
    return [float(v) - float(base_val) for v in rep.values]


def limsup_solution(series_family, sample_points, N: int, burn: float = 0.5,
                    spec: SummationSpec = DEFAULT_SPEC):
    """Truncated upper-limit variant: max of -s_n over the tail n >= burn*N."""
    out = []
    for x in sample_points:
        series = series_family(x)
        pr = probe(series, N, spec, with_sigma=False)
        if pr.bounded.kind == "UNBOUNDED_AT":
            raise SumsUnbounded("partial sums tripped the unboundedness heuristic",
                                index=pr.bounded.index)
        start = int(burn * N)
        if series.exact:
            out.append(max(-v for v in pr.s[start:]))
        else:
            out.append(float(np.max(-np.asarray(pr.s[start:]))))
    return out


def solve_by_method(series_family, sample_points, N: int,
                    spec: SummationSpec = DEFAULT_SPEC) -> list:
    """Candidate solution values at the sample points, per spec.method.

    SUP is the default resolving functional (the solution formulas for
    minimal systems build on it); LIMSUP sits behind its flag, CESARO
    negates the Cesaro value, REGULARIZED takes the tail-sup candidate.
    EXPONENTIAL operates on coefficient data, not orbit samples, and is not
    dispatchable here.
    """
    if spec.method == "SUP":
        return list(sup_solution(series_family, sample_points, N, spec).values)
    if spec.method == "LIMSUP":
        return limsup_solution(series_family, sample_points, N, spec=spec)
    if spec.method == "CESARO":
        out = []
        for x in sample_points:
            pr = cesaro(series_family(x), N, spec)
            out.append(-pr.sigma[-1])
        return out
    if spec.method == "REGULARIZED":
        return [regularized_limit(series_family(x), N // 2, tail=N // 2).candidate
                for x in sample_points]
    raise ValueError("EXPONENTIAL summation takes (coefficient, base) pairs; "
                     "use exponential_summation directly")


@dataclass
class RegularizedReport:
    d: object                  # d_0..d_N
    candidate: object          # d_N, the declared limit candidate
    monotone: bool             # nonincreasing over the computed range
    increases: int             # count of tail-truncation slack violations


def regularized_limit(series: OrbitSeries, N: int, tail: Optional[int] = None,
                      stride: int = 1) -> RegularizedReport:
    """d_N(x) = max_{n <= tail} (-s_n(F^(N+1) x)) - s_N(x), for N' = 0..N.

    By the shift recurrence this equals the windowed tail sup
    max_{m in [N'+1, N'+1+tail]} (-s_m(x)), so one materialized orbit serves
    every N'.  The sequence is nonincreasing up to the slack of admitting a
    new element at the window's right edge (counted in `increases`).
    The default tail horizon matches the outer budget; `stride` subsamples
    the inner sup.
    """
    tail = N if tail is None else tail
    spec = DEFAULT_SPEC
    pr = probe(series, N + 1 + tail, spec, with_sigma=False)
    if pr.bounded.kind == "UNBOUNDED_AT":
        raise SumsUnbounded("partial sums tripped the unboundedness heuristic",
                            index=pr.bounded.index)
    if series.exact:
        neg = [-v for v in pr.s]
        d = []
        for j in range(N + 1):
            window = neg[j + 1: j + 2 + tail: stride]
            d.append(max(window))
    else:
        neg = -np.asarray(pr.s)
        if stride == 1:
            d = _sliding_max(neg, N, tail)
        else:
            d = [float(np.max(neg[j + 1: j + 2 + tail: stride])) for j in range(N + 1)]
    increases = sum(1 for j in range(1, len(d)) if d[j] > d[j - 1])
    return RegularizedReport(d, d[-1], increases == 0, increases)


def _sliding_max(neg: np.ndarray, N: int, tail: int) -> list[float]:
    """Windowed maxima of neg over [j+1, j+1+tail] for j = 0..N (deque scan)."""
    out = []
    dq: deque[int] = deque()
    hi = 0
    for j in range(N + 1):
        lo = j + 1
        top = min(j + 1 + tail, len(neg) - 1)
        while hi <= top:
            while dq and neg[dq[-1]] <= neg[hi]:
                dq.pop()
            dq.append(hi)
            hi += 1
        while dq and dq[0] < lo:
            dq.popleft()
        out.append(float(neg[dq[0]]))
    return out


# ---------------------------------------------------------------------------
# boundedness and equicontinuity diagnostics
# ---------------------------------------------------------------------------


@dataclass
class EquicontinuityReport:
    B: float
    rows: list[tuple[float, float, tuple, int]]  # (delta, omega, pair, argmax n)
    verdict: str                                 # EQUICONTINUOUS_LIKELY | FAILS
    failure: Optional[tuple] = None              # (delta, n, pair) when FAILS


def boundedness_and_equicontinuity(series_family, grid, N: int, tolerance: float,
                                   metric: Optional[Callable] = None,
                                   deltas: Optional[Sequence[float]] = None,
                                   fail_ratio: float = 0.25) -> EquicontinuityReport:
    """Empirical uniform bound B and equicontinuity modulus over a sample grid.

    omega(delta) = max over sorted-adjacent grid pairs within delta of
    max_n |s_n(x) - s_n(y)|.  The verdict FAILS when the modulus at the
    finest populated delta exceeds max(tolerance, fail_ratio * B): bounded
    sums whose modulus does not decay signal a missing continuous solution.
    """
    metric = metric or (lambda x, y: abs(x - y))
    pts = sorted(grid)
    probes = []
    for x in pts:
        pr = probe(series_family(x), N, with_sigma=False)
        probes.append(np.asarray(pr.s, dtype=np.float64))
    S = np.vstack(probes)
    B = float(np.max(np.abs(S)))

    gaps = [metric(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    if deltas is None:
        base = {0.1, 0.03, 0.01, 0.003, 0.001}
        if gaps:
            base.add(max(gaps))
        deltas = sorted(base, reverse=True)
    rows = []
    for delta in deltas:
        omega, pair, n_at = 0.0, None, -1
        for i, g in enumerate(gaps):
            if g <= delta:
                diff = np.abs(S[i] - S[i + 1])
                n = int(np.argmax(diff))
                if diff[n] > omega:
                    omega, pair, n_at = float(diff[n]), (pts[i], pts[i + 1]), n
        if pair is not None:
            rows.append((float(delta), omega, pair, n_at))
    if not rows:
        return EquicontinuityReport(B, [], "EQUICONTINUOUS_LIKELY")
    finest = rows[-1]
    threshold = max(tolerance, fail_ratio * max(B, 1e-300))
    if finest[1] > threshold:
        return EquicontinuityReport(B, rows, "FAILS",
                                    failure=(finest[0], finest[3], finest[2]))
    return EquicontinuityReport(B, rows, "EQUICONTINUOUS_LIKELY")


def circle_metric(x: float, y: float) -> float:
    d = abs(x - y) % 1.0
    return min(d, 1.0 - d)


# ---------------------------------------------------------------------------
# linear summation of geometric series
# ---------------------------------------------------------------------------


def exponential_summation(terms):
    """Sum sum_j c_j/(1 - lambda_j) for the series with n-th entry
    sum_j c_j lambda_j^n (|lambda| <= 1, lambda != 1).

    This is the canonical linear summation on the shift-invariant span of
    geometric sequences: the shift axiom sigma[xi] - sigma[tau xi] = xi_0
    holds identically, exactly so over exact scalars.  A base lambda = 1
    with nonzero coefficient is the all-ones direction, which no summation
    can accommodate.
    """
    total = None
    for c, lam in terms:
        if _is_one(lam):
            if not _is_zero(c):
                raise NotSummable("the all-ones series admits no summation",
                                  coefficient=repr(c))
            continue
        if isinstance(lam, (int, float, complex)) and abs(lam) > 1 + 1e-12:
            raise NotSummable("geometric base outside the closed unit disk",
                              base=repr(lam))
        part = c / (1 - lam)
        total = part if total is None else total + part
    if total is None:
        total = 0
    return total


def _is_one(lam) -> bool:
    try:
        return lam == 1
    except Exception:
        return False


def _is_zero(c) -> bool:
    z = getattr(c, "is_zero", None)
    if callable(z):
        return c.is_zero()
    return c == 0


# ---------------------------------------------------------------------------
# emission helpers (CLI artifacts)
# ---------------------------------------------------------------------------


def probe_rows(x, pr: SeriesProbe):
    """Rows (x, n, s_n, sigma_n, sup_neg_s_n) for CSV emission."""
    rows = []
    for n in range(len(pr.s)):
        sig = pr.sigma[n] if pr.sigma is not None else ""
        rows.append((x, n, pr.s[n], sig, pr.sup_neg_s[n]))
    return rows


def verdict_summary(pr: SeriesProbe,
                    equicontinuity: Optional[EquicontinuityReport] = None) -> dict:
    out = {
        "bounded": pr.bounded.kind,
        "B": pr.bounded.bound,
        "unbounded_at": pr.bounded.index,
        "equicontinuity": [],
    }
    if pr.cesaro is not None:
        out["cesaro"] = pr.cesaro.kind
        out["cesaro_value"] = None if pr.cesaro.value is None else float(pr.cesaro.value)
        out["cesaro_start"] = pr.cesaro.start
    if equicontinuity is not None:
        out["equicontinuity"] = [
            {"delta": d, "omega": w, "pair": list(pair), "n": n}
            for d, w, pair, n in equicontinuity.rows
        ]
        out["equicontinuity_verdict"] = equicontinuity.verdict
    return out
