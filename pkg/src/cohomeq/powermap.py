"""The expanding circle map theta -> q*theta (mod 2*pi), q >= 2.

Preperiodic points live on the rational sublattice of the circle and are
handled in exact fraction-of-turn arithmetic; generic orbits lose about
log2(q) bits per step, so the probes either run on the exact lattice or
carry an explicit worst-case error estimate and truncate reporting where it
exceeds tolerance.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from mpmath import mp

from .errors import PreperiodicPointHit
from .summation import OrbitSeries, SummationSpec, DEFAULT_SPEC, cesaro
from .trigpoly import TWO_PI, TrigPoly


@dataclass(frozen=True)
class PowerMapProblem:
    """f(q*theta) - f(theta) = h(theta) in 2*pi-periodic functions."""

    q: int
    h: TrigPoly

    def __post_init__(self):
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if not self.h.real_flag:
            raise ValueError("angular data must be real (cos/sin form)")


@dataclass(frozen=True)
class PreperiodicPoint:
    """x = 2*pi*n/(q^l (q^p - 1)), satisfying F^(l+p) x = F^l x exactly.

    `angle_frac` stores the angle as an exact fraction of a full turn.
    """

    n: int
    l: int
    p: int
    angle_frac: Fraction

    @property
    def radians(self) -> float:
        return TWO_PI * float(self.angle_frac)


def _turn_step(t: Fraction, q: int) -> Fraction:
    u = q * t
    return u - math.floor(u)


def preperiodic_points(q: int, l_max: int, p_max: int,
                       per_cell_limit: int = 64) -> list[PreperiodicPoint]:
    """Enumerate angles 2*pi*n/(q^l (q^p - 1)) with l <= l_max, p <= p_max.

    Each candidate is verified by exact iteration of its turn fraction and
    deduplicated across (n, l, p) aliases by the reduced fraction.
    """
    if q < 2 or l_max < 0 or p_max < 1:
        raise ValueError("need q >= 2, l_max >= 0, p_max >= 1")
    seen: set[Fraction] = set()
    out = []
    for l in range(l_max + 1):
        for p in range(1, p_max + 1):
            den = q**l * (q**p - 1)
            for n in range(min(per_cell_limit, den)):
                t = Fraction(n, den)
                t -= math.floor(t)
                if t in seen:
                    continue
                a = t
                for _ in range(l):
                    a = _turn_step(a, q)
                b = a
                for _ in range(p):
                    b = _turn_step(b, q)
                assert b == a, "preperiodicity identity failed"
                seen.add(t)
                out.append(PreperiodicPoint(n, l, p, t))
    return out


@dataclass
class OrbitSolutionReport:
    angles: list            # angle per orbit index (Fraction turns or mpf radians)
    phi: np.ndarray         # phi(F^k x0), phi(x0) = 0
    residual_max: float
    trusted_n: int          # last index with rounding below tolerance


def orbit_solution(problem: PowerMapProblem, x0, N: int,
                   precision_bits: int = 256, tol: float = 1e-11) -> OrbitSolutionReport:
    """phi along the forward orbit of x0: phi(F^k x0) = s_{k-1}(x0), phi(x0) = 0.

    x0 may be an exact Fraction (fraction of a full turn; orbit closure is
    then detected exactly and raises PreperiodicPointHit) or a float in
    radians (assumed non-preperiodic; iterated at `precision_bits`).
    """
    q, h = problem.q, problem.h
    if isinstance(x0, Fraction):
        t = x0 - math.floor(x0)
        seen = {t: 0}
        angles = [t]
        for k in range(1, N + 1):
            t = _turn_step(t, q)
            if t in seen:
                raise PreperiodicPointHit(
                    "orbit closed on itself", k=seen[t], step=k,
                )
            seen[t] = k
            angles.append(t)
        vals = np.array([float(h.eval(float(a))) for a in angles])
        trusted = N
    else:
        with mp.workprec(precision_bits + 16):
            theta = mp.mpf(x0)
            two_pi = 2 * mp.pi
            angles = []
            for _ in range(N + 1):
                angles.append(theta)
                theta = (q * theta) % two_pi
        vals = np.array([float(h.eval(float(a) / TWO_PI)) for a in angles])
        # angle error after k steps ~ q^k * 2^-precision; trust while the
        # propagated term error stays below tol
        lip = max(h.lip_angle(), 1e-300)
        trusted = int((precision_bits - math.log2(lip / tol + 1)) / math.log2(q))
        trusted = max(0, min(N, trusted))
    phi = np.concatenate(([0.0], np.cumsum(vals[:-1])))
    resid = np.abs(np.diff(phi) - vals[:-1])
    return OrbitSolutionReport(angles, phi, float(resid.max()) if resid.size else 0.0, trusted)


def frequency_ratio_predicate(frequencies: Sequence[int], q: int):
    """True iff no ratio nu_k/nu_j of distinct frequencies is a power of q.

    Exact integer arithmetic; on failure returns the witnessing pair and the
    exponent.  Truth of the predicate is the hypothesis under which the
    equation's solutions escape measurability; the probe reports the
    implication, it cannot verify nonmeasurability itself.
    """
    freqs = [int(v) for v in frequencies]
    if len(set(freqs)) != len(freqs) or any(v <= 0 for v in freqs):
        raise ValueError("frequencies must be distinct positive integers")
    for i, a in enumerate(freqs):
        for j, b in enumerate(freqs):
            if i == j:
                continue
            if a % b == 0:
                ratio = a // b
                e = 0
                while ratio % q == 0:
                    ratio //= q
                    e += 1
                if ratio == 1 and e >= 1:
                    return False, (a, b, e)
    return True, None


@dataclass
class KolmogorovReport:
    grid: int
    N: int
    precision_bits: int
    overall_max: float                     # max_{x, n <= N} |s_n(x)|
    growth: list[tuple[int, float]]        # ladder (N', G(N'))
    per_point_max: np.ndarray
    cesaro: list[tuple[int, str]]          # sampled Cesaro verdicts (j, kind)
    truncated_at: Optional[int] = None     # None on the exact lattice

    def growth_dict(self) -> dict:
        return {str(k): v for k, v in self.growth}


class PowerLatticeSeries(OrbitSeries):
    """h(q^k theta) for theta = 2*pi*j/grid: exact integer angle reduction."""

    def __init__(self, q: int, h: TrigPoly, grid: int, j: int):
        self.q, self.h, self.grid, self.j = q, h, grid, j
        self._table = np.asarray(h.eval(np.arange(grid) / grid), dtype=np.float64)

    def term(self, k: int):
        return float(self._table[pow(self.q, k, self.grid) * self.j % self.grid])

    def terms(self, lo: int, hi: int):
        m = pow(self.q, lo, self.grid) * self.j % self.grid
        out = np.empty(hi - lo)
        for i in range(hi - lo):
            out[i] = self._table[m]
            m = (m * self.q) % self.grid
        return out


def kolmogorov_probe(q: int, h: TrigPoly, grid: int, N: int,
                     precision_bits: int = 256,
                     ladder: Optional[Sequence[int]] = None,
                     spec: SummationSpec = DEFAULT_SPEC,
                     threads: Optional[int] = None) -> KolmogorovReport:
    """Scan |s_n(x)| for the resolving series of h under theta -> q*theta.

    The grid is the exact sublattice {2*pi*j/grid}: angle reduction is pure
    modular integer arithmetic, and partial sums accumulate in fixed-point
    integers with `precision_bits` fractional bits, so no trajectory noise
    enters at any n.  Reports the growth curve G(N') = max_{x, n<=N'} |s_n|
    and Cesaro verdicts on a small sample of grid points.  Grid points are
    independent; `threads` (or COHOM_THREADS) caps the worker pool.
    """
    if grid < 1 or N < 1:
        raise ValueError("grid and N must be positive")
    scale = 1 << precision_bits
    with mp.workprec(precision_bits + 32):
        table = [int(mp.nint(h.eval_mp(Fraction(m, grid), mp) * scale))
                 for m in range(grid)]
    if ladder is None:
        ladder = sorted({10**k for k in range(2, 10) if 10**k < N} | {N})
    ladder = sorted(set(ladder))
    checkpoints = {n: i for i, n in enumerate(ladder)}

    workers = threads if threads is not None else thread_cap()
    ranges = [range(j0, min(j0 + max(1, grid // max(workers, 1)), grid))
              for j0 in range(0, grid, max(1, grid // max(workers, 1)))]
    if workers > 1 and len(ranges) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(
                lambda js: _scan_lattice(q, table, grid, js, N, checkpoints), ranges))
    else:
        parts = [_scan_lattice(q, table, grid, range(grid), N, checkpoints)]

    g_at = [0] * len(ladder)
    per_point = np.zeros(grid)
    for g_part, pp_part in parts:
        for i, v in enumerate(g_part):
            g_at[i] = max(g_at[i], v)
        for j, v in pp_part:
            per_point[j] = v
    per_point /= scale
    growth = [(n, g_at[i] / scale) for n, i in sorted(checkpoints.items())]
    sample = np.linspace(0, grid - 1, num=min(8, grid), dtype=int)
    ces = []
    for j in sample:
        pr = cesaro(PowerLatticeSeries(q, h, grid, int(j)), min(N, 4096), spec)
        ces.append((int(j), pr.cesaro.kind))
    return KolmogorovReport(
        grid=grid, N=N, precision_bits=precision_bits,
        overall_max=float(per_point.max()), growth=growth,
        per_point_max=per_point, cesaro=ces, truncated_at=None,
    )


def _scan_lattice(q, table, grid, js, N, checkpoints):
    ladder = sorted(checkpoints)
    g_at = [0] * len(ladder)
    per_point = []
    for j in js:
        m = j
        s = 0
        best = 0
        cpi = 0
        next_cp = ladder[0]
        for n in range(N + 1):
            s += table[m]
            a = -s if s < 0 else s
            if a > best:
                best = a
            if n == next_cp:
                if best > g_at[cpi]:
                    g_at[cpi] = best
                cpi += 1
                next_cp = ladder[cpi] if cpi < len(ladder) else -1
            m = (m * q) % grid
        per_point.append((j, best))
    return g_at, per_point


def thread_cap() -> int:
    """Worker cap from COHOM_THREADS; 0 or unset means auto (single worker:
    the exact integer scans are CPU-bound in pure Python)."""
    raw = os.environ.get("COHOM_THREADS", "0")
    try:
        v = int(raw)
    except ValueError:
        return 1
    return v if v > 0 else 1


class PowerOrbitSeries(OrbitSeries):
    """h(q^k x0) for a generic angle x0 (radians), iterated at high precision.

    The worst-case angle error after k steps is about q^k * 2^-prec; terms
    past `trusted_n(tol)` are still produced but flagged by the caller-side
    truncation policy.
    """

    def __init__(self, q: int, h: TrigPoly, x0: float, precision_bits: int = 256):
        self.q, self.h, self.x0 = q, h, float(x0)
        self.precision_bits = precision_bits
        self._angles: list = []
        self._extend(1)

    def _extend(self, upto: int):
        with mp.workprec(self.precision_bits + 16):
            two_pi = 2 * mp.pi
            if not self._angles:
                self._angles.append(mp.mpf(self.x0) % two_pi)
            while len(self._angles) < upto:
                self._angles.append((self.q * self._angles[-1]) % two_pi)

    def trusted_n(self, tol: float = 1e-9) -> int:
        lip = max(self.h.lip_angle(), 1e-300)
        n = (self.precision_bits - math.log2(lip / tol + 1)) / math.log2(self.q)
        return max(0, int(n))

    def term(self, k: int):
        self._extend(k + 1)
        return float(self.h.eval(float(self._angles[k]) / TWO_PI))

    def terms(self, lo: int, hi: int):
        self._extend(hi)
        ang = np.array([float(a) for a in self._angles[lo:hi]]) / TWO_PI
        return np.asarray(self.h.eval(ang), dtype=np.float64)
