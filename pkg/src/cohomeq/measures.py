"""Invariant measures and ergodic averaging.

Cycle measures are the ergodic invariant measures of a finite system; the
mean condition against them is the trivial necessary condition for
solvability, and the mean-ergodic projector realizes the Cesaro limit of
Koopman powers exactly.  Rotation backends check Birkhoff averages against
the space average (the zeroth Fourier coefficient).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import NotErgodic, ToleranceExceeded
from .functional_graph import FiniteSystem, decompose
from .rotation import RotationNumber, fractional_multiples
from .trigpoly import TrigPoly


@dataclass(frozen=True)
class CycleMeasure:
    """Uniform probability measure on one cycle: weight 1/p per support state."""

    support: tuple[int, ...]

    @property
    def weight(self) -> Fraction:
        return Fraction(1, len(self.support))

    def is_invariant(self, sys: FiniteSystem) -> bool:
        mass = {y: Fraction(0) for y in range(sys.n)}
        for x in self.support:
            mass[sys.succ[x]] += self.weight
        return all(
            mass[y] == (self.weight if y in set(self.support) else 0)
            for y in range(sys.n)
        )

    def to_json(self) -> dict:
        return {"support": list(self.support),
                "weight": f"{self.weight.numerator}/{self.weight.denominator}"}


def cycle_measures(sys: FiniteSystem) -> list[CycleMeasure]:
    """One uniform measure per cycle; these are exactly the ergodic ones."""
    dec = decompose(sys)
    return [CycleMeasure(cyc) for cyc in dec.cycle_lists]


def tnc_check(gamma: Sequence[Fraction], measure: CycleMeasure) -> Fraction:
    """Integral of gamma against the measure; must vanish for solvability."""
    if max(measure.support) >= len(gamma):
        raise ValueError("measure support outside gamma's index range")
    return sum((Fraction(gamma[x]) for x in measure.support), Fraction(0)) * measure.weight


@dataclass(frozen=True)
class KoopmanMatrix:
    """0/1 matrix T with T[x][y] = 1 iff y = F(x), so (T phi)(x) = phi(Fx)."""

    rows: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.rows)

    def apply(self, phi: Sequence[Fraction]) -> list[Fraction]:
        return [sum(Fraction(t) * Fraction(v) for t, v in zip(row, phi)) for row in self.rows]


def koopman_matrix(sys: FiniteSystem) -> KoopmanMatrix:
    rows = []
    for x in range(sys.n):
        row = [0] * sys.n
        row[sys.succ[x]] = 1
        rows.append(tuple(row))
    return KoopmanMatrix(tuple(rows))


# ---------------------------------------------------------------------------
# Birkhoff averages
# ---------------------------------------------------------------------------


def birkhoff_average(step: Callable, gamma_at: Callable, x, N: int,
                     exact: bool = True, check: bool = True,
                     check_tol: float = 1e-12) -> list:
    """Running averages tau_n = (1/(n+1)) sum_{k<=n} gamma(F^k x), n = 0..N.

    The full prefix is exposed so convergence-rate plots come from one pass.
    With check=True the rebasing identity
    tau_{M-1}(Fx) = ((M+1)/M) tau_M(x) - (1/M) gamma(x) is asserted at every
    step (exactly for exact backends, to check_tol otherwise); both sides
    come from the same prefix sums.
    """
    vals = []
    y = x
    for _ in range(N + 1):
        vals.append(gamma_at(y))
        y = step(y)
    if exact:
        prefix = []
        acc = Fraction(0)
        for v in vals:
            acc += Fraction(v)
            prefix.append(acc)
        taus = [prefix[n] / (n + 1) for n in range(N + 1)]
        if check:
            g0 = Fraction(vals[0])
            for M in range(1, N + 1):
                lhs = (prefix[M] - g0) / M          # tau_{M-1}(Fx)
                rhs = Fraction(M + 1, M) * taus[M] - g0 / M
                assert lhs == rhs
        return taus
    arr = np.asarray(vals, dtype=np.float64)
    prefix = np.cumsum(arr)
    taus = prefix / np.arange(1, N + 2)
    if check:
        g0 = arr[0]
        Ms = np.arange(1, N + 1)
        lhs = (prefix[1:] - g0) / Ms
        rhs = (Ms + 1) / Ms * taus[1:] - g0 / Ms
        defect = float(np.max(np.abs(lhs - rhs))) if len(Ms) else 0.0
        assert defect <= check_tol, f"rebasing identity defect {defect}"
    return list(taus)


def birkhoff_average_rotation(h: TrigPoly, alpha: RotationNumber, x: float, N: int) -> np.ndarray:
    """Vectorized running averages of h along a rotation orbit."""
    ang = fractional_multiples(alpha.value(96), 0, N + 1, x0=float(x))
    vals = np.asarray(h.eval(ang), dtype=np.float64)
    return np.cumsum(vals) / np.arange(1, N + 2)


def ergodic_average_check(target, gamma, samples, N: int, tol) -> list:
    """Assert |tau_N(x) - space average| <= tol at every sample.

    target: a single-cycle FiniteSystem (gamma: rationals; exact arithmetic)
    or an irrational RotationNumber (gamma: TrigPoly; space average = h_0).
    Anything without a unique ergodic measure is refused.
    """
    if isinstance(target, FiniteSystem):
        dec = decompose(target)
        if dec.num_components != 1:
            raise NotErgodic("finite backend needs exactly one cycle",
                             cycles=dec.num_components)
        cyc = dec.cycle_lists[0]
        avg = sum((Fraction(gamma[s]) for s in cyc), Fraction(0)) / len(cyc)
        out = []
        for x in samples:
            taus = birkhoff_average(target.step, lambda s: Fraction(gamma[s]), x, N)
            err = abs(taus[N] - avg)
            if err > tol:
                raise ToleranceExceeded("Birkhoff average misses the space average",
                                        sample=x, error=err)
            out.append((x, taus[N], err))
        return out
    if isinstance(target, RotationNumber):
        if target.is_rational() is not False:
            raise NotErgodic("rotation backend needs a certified irrational angle",
                             kind=target.kind)
        avg = float(gamma.h0.real)
        out = []
        for x in samples:
            taus = birkhoff_average_rotation(gamma, target, x, N)
            err = abs(float(taus[N]) - avg)
            if err > tol:
                raise ToleranceExceeded("Birkhoff average misses the space average",
                                        sample=float(x), error=err)
            out.append((float(x), float(taus[N]), err))
        return out
    raise TypeError("target must be a FiniteSystem or RotationNumber")


# ---------------------------------------------------------------------------
# mean-ergodic projector
# ---------------------------------------------------------------------------


@dataclass
class ProjectorReport:
    P: tuple[tuple[Fraction, ...], ...]
    C: int                        # a priori rate constant, 2*(l + p)
    measured_C: Fraction           # max over checked n of n * ||S_n - P||_inf
    rate_rows: list[tuple[int, float]]
    rank: int

    def to_json(self) -> dict:
        return {
            "P": [[f"{v.numerator}/{v.denominator}" for v in row] for row in self.P],
            "C": self.C,
            "measured_C": f"{self.measured_C.numerator}/{self.measured_C.denominator}",
            "rank": self.rank,
        }


def mean_ergodic_projector(sys: FiniteSystem, n_max: int = 200) -> ProjectorReport:
    """The limit projector P of the Koopman averages S_n = (1/n) sum_{k<n} T^k.

    P is assembled structurally from the orbit decomposition, (P phi)(x) =
    cycle average of phi over the cycle reached from x, which is exact and
    O(n * p).  The report carries the uniform rate ||S_n - P||_inf <= C/n
    with the a priori constant C = 2 (l + p) and its measured counterpart.
    Verifies exactly: P^2 = P, PT = TP = P, and rank(P) = number of cycles.
    """
    dec = decompose(sys)
    n = sys.n
    rows = []
    for x in range(n):
        row = [Fraction(0)] * n
        cyc = dec.cycle_lists[dec.component_id[x]]
        w = Fraction(1, len(cyc))
        for y in cyc:
            row[y] = w
        rows.append(tuple(row))
    P = tuple(rows)

    T = koopman_matrix(sys)
    assert _mat_eq(_mat_mul(P, P), P), "P is not idempotent"
    PT = _mat_mul(P, _int_rows(T.rows))
    TP = _mat_mul(_int_rows(T.rows), P)
    assert _mat_eq(PT, P) and _mat_eq(TP, P), "P does not commute with T onto itself"

    C = 2 * (dec.global_preperiod + dec.global_period)
    rate_rows, measured = _rate_scan(sys, dec, n_max)
    assert measured <= C, "rate constant violated"

    rank = _rank_fraction_matrix(P)
    assert rank == dec.num_components, "rank(P) != number of cycles"
    return ProjectorReport(P, C, measured, rate_rows, rank)


def _rate_scan(sys, dec, n_max):
    """||S_n - P||_inf for n = 1..n_max via exact visit counts.

    Row x of S_n is the empirical distribution of the first n orbit states;
    row x of P is uniform on the reached cycle.  The row sum of the
    difference, scaled by n * p_x, is a plain integer, so the scan is exact
    without Fraction churn in the inner loop.
    """
    n = sys.n
    per_x_counts: list[dict[int, int]] = [dict() for _ in range(n)]
    pos = list(range(n))
    cyc_sets = [set(dec.cycle_lists[dec.component_id[x]]) for x in range(n)]
    rows = []
    measured = Fraction(0)
    for step in range(1, n_max + 1):
        worst = Fraction(0)
        for x in range(n):
            counts = per_x_counts[x]
            counts[pos[x]] = counts.get(pos[x], 0) + 1
            pos[x] = sys.succ[pos[x]]
            cyc = cyc_sets[x]
            p_x = dec.period[x]
            scaled = sum(abs(p_x * c - step * (1 if st in cyc else 0))
                         for st, c in counts.items())
            scaled += step * sum(1 for st in cyc if st not in counts)
            worst = max(worst, Fraction(scaled, step * p_x))
        rows.append((step, float(worst)))
        measured = max(measured, step * worst)
    return rows, measured


def _int_rows(rows):
    return tuple(tuple(Fraction(v) for v in row) for row in rows)


def _mat_mul(A, B):
    n = len(A)
    Bt = list(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in Bt)
        for row in A
    )


def _mat_eq(A, B):
    return all(ra == rb for ra, rb in zip(A, B))


def _rank_fraction_matrix(P) -> int:
    rows = [list(r) for r in P]
    n_cols = len(rows[0]) if rows else 0
    rank = 0
    for c in range(n_cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / pv
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# invariant-measure polytope (brute-force vertex search, small n only)
# ---------------------------------------------------------------------------


def invariant_measure_vertices(sys: FiniteSystem) -> list[tuple[Fraction, ...]]:
    """All vertices of {mu >= 0, sum mu = 1, mu invariant}, by support search.

    A support set S yields a vertex iff the invariance equalities restricted
    to S pin the measure uniquely, the solution is positive on S, and zero
    elsewhere is consistent.  Exponential in n; intended for n <= 5 checks.
    """
    n = sys.n
    verts = set()
    for mask in range(1, 1 << n):
        S = [x for x in range(n) if mask >> x & 1]
        sol = _solve_invariant_on_support(sys, S)
        if sol is not None:
            verts.add(sol)
    return sorted(verts)


def _solve_invariant_on_support(sys, S):
    idx = {x: i for i, x in enumerate(S)}
    m = len(S)
    rows = []
    # invariance: sum_{x in S, Fx = y} mu_x = mu_y * [y in S], for every y
    for y in range(sys.n):
        row = [Fraction(0)] * (m + 1)
        for x in S:
            if sys.succ[x] == y:
                row[idx[x]] += 1
        if y in idx:
            row[idx[y]] -= 1
        rows.append(row)
    rows.append([Fraction(1)] * m + [Fraction(1)])  # normalization

    # gaussian elimination over Q
    rank = 0
    piv_cols = []
    for c in range(m):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        pv = rows[rank][c]
        rows[rank] = [v / pv for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        piv_cols.append(c)
    for i in range(rank, len(rows)):
        if rows[i][m] != 0:
            return None  # inconsistent
    if rank < m:
        return None  # not unique on this support: not a vertex candidate
    mu = [Fraction(0)] * m
    for r, c in enumerate(piv_cols):
        mu[c] = rows[r][m]
    if any(v <= 0 for v in mu):
        return None  # support not exact or infeasible
    full = [Fraction(0)] * sys.n
    for x, i in idx.items():
        full[x] = mu[i]
    return tuple(full)
