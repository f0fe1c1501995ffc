"""Exact solvers for phi(Fx) - phi(x) = gamma(x) on finite systems.

All arithmetic in this module is exact rational: the solvability criterion is
an exact identity (every cycle sum of gamma must vanish) and floating point
would blur the solvable/unsolvable boundary.  Three closed forms are
implemented (anchored orbit accumulation, the preperiodic formula, the purely
periodic formula) plus an independent linear-algebra oracle used by tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import NoPeriodicPoints, NotPeriodic, NotSolvable
from .functional_graph import FiniteSystem, OrbitDecomposition, decompose


@dataclass(frozen=True)
class CoboundaryProblem:
    """A finite system together with exact rational right-hand side gamma."""

    sys: FiniteSystem
    gamma: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "gamma", tuple(Fraction(g) for g in self.gamma))
        if len(self.gamma) != self.sys.n:
            raise ValueError("gamma length must equal the state count")

    def to_json(self) -> dict:
        return {
            "system": self.sys.to_json(),
            "gamma": [format_rational(g) for g in self.gamma],
        }

    @staticmethod
    def from_json(obj: dict) -> "CoboundaryProblem":
        extra = set(obj) - {"system", "gamma"}
        if extra:
            raise ValueError(f"unknown fields in problem description: {sorted(extra)}")
        sys = FiniteSystem.from_json(obj["system"])
        gamma = tuple(parse_rational(s) for s in obj["gamma"])
        return CoboundaryProblem(sys, gamma)


@dataclass(frozen=True)
class DiscreteSolution:
    """An exact solution phi plus the structure of the full solution set.

    kernel_dim is the dimension of the invariant functions, i.e. the number
    of orbit-equivalence classes: two solutions always differ by a function
    constant on each class.
    """

    phi: tuple[Fraction, ...]
    kernel_dim: int
    method_tag: str

    def to_json(self) -> dict:
        return {
            "phi": [format_rational(v) for v in self.phi],
            "kernel_dim": self.kernel_dim,
            "method": self.method_tag,
        }


@dataclass(frozen=True)
class SolvabilityReport:
    solvable: bool
    violating_cycle: Optional[tuple[int, ...]]
    cycle_sum: Optional[Fraction]


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, str):
        return Fraction(s)
    return Fraction(s)


def cycle_integrals(problem: CoboundaryProblem, dec: OrbitDecomposition | None = None):
    """Integral of gamma against each cycle's uniform invariant measure.

    Returns [(cycle states in orbit order, (1/p) * sum of gamma over them)].
    """
    dec = dec or decompose(problem.sys)
    out = []
    for cyc in dec.cycle_lists:
        total = sum((problem.gamma[x] for x in cyc), Fraction(0))
        out.append((cyc, total / len(cyc)))
    return out


def check_solvable(problem: CoboundaryProblem, dec: OrbitDecomposition | None = None) -> SolvabilityReport:
    """Cycle-sum criterion: solvable iff gamma sums to zero around every cycle.

    Checking each cycle once at its minimal period suffices; any other period
    is a multiple and scales the sum by an integer.
    """
    dec = dec or decompose(problem.sys)
    for cyc in dec.cycle_lists:
        total = sum((problem.gamma[x] for x in cyc), Fraction(0))
        if total != 0:
            return SolvabilityReport(False, cyc, total)
    return SolvabilityReport(True, None, None)


def solver_anchors(dec: OrbitDecomposition) -> tuple[int, ...]:
    """One distinguished state per component: the smallest state index.

    These anchor the orbit-accumulation solver; the map from anchor values to
    solutions is a bijection onto the solution set.  (The anchor need not lie
    on the cycle; the decomposition's own transversal is the on-cycle
    variant.)
    """
    anchors = [None] * dec.num_components
    for x in range(len(dec.component_id) - 1, -1, -1):
        anchors[dec.component_id[x]] = x
    return tuple(anchors)


def solve_transversal(
    problem: CoboundaryProblem,
    initial: Optional[dict[int, Fraction]] = None,
) -> DiscreteSolution:
    """Solve by forward accumulation from one anchor state per component.

    On the anchor's orbit, phi(F^j x0) = phi(x0) + s_{j-1}(x0); the last
    orbit state before the cycle closes needs no separate case because the
    wrap-around equation is exactly the vanishing cycle sum.  States off the
    distinguished orbit are filled backward via phi(x) = phi(Fx) - gamma(x).
    `initial` maps anchor states to their phi values (default all zeros).
    """
    sys, gamma = problem.sys, problem.gamma
    dec = decompose(sys)
    report = check_solvable(problem, dec)
    if not report.solvable:
        raise NotSolvable(
            "a cycle integral is nonzero",
            cycle=list(report.violating_cycle),
            cycle_sum=report.cycle_sum,
        )
    anchors = solver_anchors(dec)
    init = {a: Fraction(0) for a in anchors}
    if initial:
        unknown = set(initial) - set(anchors)
        if unknown:
            raise ValueError(f"initial values must be keyed by anchor states {anchors}, got {sorted(unknown)}")
        for a, v in initial.items():
            init[a] = Fraction(v)

    phi: list[Optional[Fraction]] = [None] * sys.n
    for x0 in anchors:
        # walk the anchor orbit until it closes (preperiod + period states)
        steps = dec.preperiod[x0] + dec.period[x0]
        acc = init[x0]
        x = x0
        for _ in range(steps):
            if phi[x] is None:
                phi[x] = acc
            acc += gamma[x]
            x = sys.succ[x]

    # backward fill: predecessors of assigned states
    preds: list[list[int]] = [[] for _ in range(sys.n)]
    for x in range(sys.n):
        preds[sys.succ[x]].append(x)
    stack = [x for x in range(sys.n) if phi[x] is not None]
    while stack:
        y = stack.pop()
        for x in preds[y]:
            if phi[x] is None:
                phi[x] = phi[sys.succ[x]] - gamma[x]
                stack.append(x)

    phit = tuple(phi)  # type: ignore[arg-type]
    _assert_zero_residual(sys, gamma, phit)
    return DiscreteSolution(phit, dec.num_components, "transversal")


def solve_preperiodic(problem: CoboundaryProblem) -> DiscreteSolution:
    """Closed form for preperiodic F (always applicable on finite systems).

    With the global pair F^(l+p) = F^l, requires the shifted window sums
    sum_{k=0..p-1} gamma(F^(k+l) x) to vanish at every state, and returns

        phi(x) = -sum_{k<l} gamma(F^k x) + (1/p) sum_{k=1..p-1} k*gamma(F^(k+l) x).
    """
    sys, gamma = problem.sys, problem.gamma
    dec = decompose(sys)
    l, p = dec.global_preperiod, dec.global_period

    orbits = [_orbit_prefix(sys, x, l + p) for x in range(sys.n)]
    for x, orb in enumerate(orbits):
        window = sum((gamma[orb[k + l]] for k in range(p)), Fraction(0))
        if window != 0:
            raise NotSolvable(
                "shifted window sum is nonzero", state=x, window_sum=window,
                preperiod=l, period=p,
            )
    phi = []
    for x, orb in enumerate(orbits):
        head = sum((gamma[orb[k]] for k in range(l)), Fraction(0))
        tail = sum((k * gamma[orb[k + l]] for k in range(1, p)), Fraction(0))
        phi.append(-head + Fraction(tail, p))
    phit = tuple(phi)
    _assert_zero_residual(sys, gamma, phit)
    return DiscreteSolution(phit, dec.num_components, "preperiodic")


def solve_periodic(problem: CoboundaryProblem) -> DiscreteSolution:
    """Closed form for periodic F (F^p = identity).

    phi(x) = (1/p) sum_{k=1..p-1} k*gamma(F^k x), which also equals
    -(1/p) sum_{n=0..p-1} s_n(x); both forms are computed and compared.
    """
    sys, gamma = problem.sys, problem.gamma
    dec = decompose(sys)
    if dec.global_preperiod != 0:
        raise NotPeriodic("map has transient states", preperiod=dec.global_preperiod)
    report = check_solvable(problem, dec)
    if not report.solvable:
        raise NotSolvable(
            "a cycle integral is nonzero",
            cycle=list(report.violating_cycle),
            cycle_sum=report.cycle_sum,
        )
    p = dec.global_period
    phi = []
    for x in range(sys.n):
        orb = _orbit_prefix(sys, x, p)
        first = sum((k * gamma[orb[k]] for k in range(1, p)), Fraction(0))
        value = Fraction(first, p)
        # second form: -(1/p) * sum of partial sums s_0..s_{p-1}
        s = Fraction(0)
        total = Fraction(0)
        for n in range(p):
            s += gamma[orb[n]]
            total += s
        assert value == -Fraction(total, p), "the two closed forms disagree"
        phi.append(value)
    phit = tuple(phi)
    _assert_zero_residual(sys, gamma, phit)
    return DiscreteSolution(phit, dec.num_components, "periodic")


def residual(sys: FiniteSystem, gamma: Sequence[Fraction], phi: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """delta(x) = gamma(x) + phi(x) - phi(Fx); identically zero iff phi solves."""
    if len(gamma) != sys.n or len(phi) != sys.n:
        raise ValueError("length mismatch")
    return tuple(
        Fraction(gamma[x]) + Fraction(phi[x]) - Fraction(phi[sys.succ[x]])
        for x in range(sys.n)
    )


def _assert_zero_residual(sys, gamma, phi):
    assert all(d == 0 for d in residual(sys, gamma, phi)), "solver produced nonzero residual"


def _orbit_prefix(sys: FiniteSystem, x: int, k: int) -> list[int]:
    out = [x]
    for _ in range(k):
        x = sys.succ[x]
        out.append(x)
    return out


def solve_linear_oracle(problem: CoboundaryProblem) -> Optional[DiscreteSolution]:
    """Independent oracle: solve (T_F - I) phi = gamma by exact elimination.

    The n x n integer system is reduced by fraction-free Bareiss elimination
    (keeps intermediate entries integral, controlling coefficient blowup);
    free variables are pinned to zero.  Returns None when inconsistent.
    Intended for tests and cross-checks, not as a production solver.
    """
    sys, gamma = problem.sys, problem.gamma
    n = sys.n
    # row x encodes phi(F x) - phi(x) = gamma(x), scaled to integers
    rows = []
    for x in range(n):
        row = [0] * (n + 1)
        row[sys.succ[x]] += 1
        row[x] -= 1
        den = gamma[x].denominator
        row = [v * den for v in row]
        row[n] = gamma[x].numerator
        rows.append(row)

    piv_cols = _bareiss(rows, n)
    if piv_cols is None:
        return None

    # back substitution with free variables = 0
    phi = [Fraction(0)] * n
    for r in range(len(piv_cols) - 1, -1, -1):
        c = piv_cols[r]
        acc = Fraction(rows[r][n])
        for c2 in range(c + 1, n):
            if rows[r][c2]:
                acc -= rows[r][c2] * phi[c2]
        phi[c] = acc / rows[r][c]

    dec = decompose(sys)
    sol = DiscreteSolution(tuple(phi), dec.num_components, "linear_oracle")
    _assert_zero_residual(sys, gamma, sol.phi)
    return sol


def _bareiss(rows: list[list[int]], ncols: int) -> Optional[list[int]]:
    """Fraction-free elimination in place; returns pivot columns or None.

    rows are integer lists with one extra right-hand-side column; on exit the
    first r rows are in echelon form.  None signals 0 = nonzero.
    """
    m = len(rows)
    piv_cols = []
    r = 0
    prev = 1
    for c in range(ncols):
        p = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        for i in range(r + 1, m):
            if all(v == 0 for v in rows[i]):
                continue
            for j in range(ncols + 1):
                if j == c:
                    continue
                rows[i][j] = (rows[r][c] * rows[i][j] - rows[i][c] * rows[r][j]) // prev
            rows[i][c] = 0
        prev = rows[r][c]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if rows[i][ncols] != 0 and all(v == 0 for v in rows[i][:ncols]):
            return None
    return piv_cols


def abel_distance_lowerbound(sys: FiniteSystem, phi: Sequence[Fraction]) -> Fraction:
    """max_x |1 - (phi(Fx) - phi(x))|, always >= 1 on a system with a cycle.

    Telescoping around any p-cycle forces some increment phi(Fx) - phi(x) to
    be <= 0, so the distance of the constant 1 from coboundaries is exactly 1
    and no phi can beat it.
    """
    if not periodic_points_exist(sys):
        raise NoPeriodicPoints("system has no periodic points")
    if len(phi) != sys.n:
        raise ValueError("length mismatch")
    return max(
        abs(1 - (Fraction(phi[sys.succ[x]]) - Fraction(phi[x])))
        for x in range(sys.n)
    )


def periodic_points_exist(sys: FiniteSystem) -> bool:
    # every finite system has a cycle; kept for API symmetry with
    # orbit-restricted infinite backends
    return sys.n > 0
