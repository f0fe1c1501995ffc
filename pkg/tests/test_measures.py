import itertools
import random
from fractions import Fraction

import pytest

from cohomeq.discrete_solver import CoboundaryProblem, cycle_integrals
from cohomeq.errors import NotErgodic, ToleranceExceeded
from cohomeq.functional_graph import FiniteSystem, decompose
from cohomeq.measures import (
    birkhoff_average,
    birkhoff_average_rotation,
    cycle_measures,
    ergodic_average_check,
    invariant_measure_vertices,
    koopman_matrix,
    mean_ergodic_projector,
    tnc_check,
)
from cohomeq.rotation import RotationNumber, partial_sum_sup
from cohomeq.trigpoly import TrigPoly

F = Fraction
GOLDEN = RotationNumber.golden()


def rand_system(rng, n_max=10):
    n = rng.randint(1, n_max)
    return FiniteSystem.from_succ([rng.randrange(n) for _ in range(n)])


# -- cycle measures ------------------------------------------------------------


def test_cycle_measures_permutation():
    sys = FiniteSystem.from_succ([1, 0, 2])
    ms = cycle_measures(sys)
    assert [m.support for m in ms] == [(0, 1), (2,)]
    assert all(m.is_invariant(sys) for m in ms)


def test_cycle_measures_single_cycle_and_rho():
    assert cycle_measures(FiniteSystem.from_succ([1, 2, 3, 0]))[0].support == (0, 1, 2, 3)
    ms = cycle_measures(FiniteSystem.from_succ([1, 2, 1]))
    assert [m.support for m in ms] == [(1, 2)]


def test_tnc_abel_and_coboundary():
    sys = FiniteSystem.from_succ([1, 2, 0])
    m = cycle_measures(sys)[0]
    assert tnc_check((F(1), F(1), F(1)), m) == 1
    phi = (F(3), F(-1), F(2, 7))
    gamma = tuple(phi[sys.succ[x]] - phi[x] for x in range(3))
    assert tnc_check(gamma, m) == 0


def test_tnc_matches_cycle_integrals():
    rng = random.Random(0)
    for _ in range(100):
        sys = rand_system(rng)
        gamma = tuple(F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(sys.n))
        problem = CoboundaryProblem(sys, gamma)
        integrals = {cyc: val for cyc, val in cycle_integrals(problem)}
        for m in cycle_measures(sys):
            assert tnc_check(gamma, m) == integrals[m.support]


def test_solvable_implies_every_tnc_vanishes():
    # cross-module consistency: a solvable problem integrates to zero against
    # every ergodic invariant measure
    from cohomeq.discrete_solver import check_solvable
    rng = random.Random(7)
    for _ in range(100):
        sys = rand_system(rng)
        phi = [F(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(sys.n)]
        gamma = tuple(phi[sys.succ[x]] - phi[x] for x in range(sys.n))
        assert check_solvable(CoboundaryProblem(sys, gamma)).solvable
        assert all(tnc_check(gamma, m) == 0 for m in cycle_measures(sys))


def test_projector_rank_equals_kernel_dim():
    from cohomeq.discrete_solver import solve_transversal
    rng = random.Random(8)
    for _ in range(30):
        sys = rand_system(rng, 7)
        phi = [F(rng.randint(-5, 5)) for _ in range(sys.n)]
        gamma = tuple(phi[sys.succ[x]] - phi[x] for x in range(sys.n))
        sol = solve_transversal(CoboundaryProblem(sys, gamma))
        rep = mean_ergodic_projector(sys, n_max=20)
        assert rep.rank == sol.kernel_dim


# -- Birkhoff averages ----------------------------------------------------------


def test_birkhoff_constant():
    sys = FiniteSystem.from_succ([1, 0])
    taus = birkhoff_average(sys.step, lambda x: F(5), 0, 20)
    assert all(t == 5 for t in taus)


def test_birkhoff_hits_cycle_average_exactly_on_full_blocks():
    sys = FiniteSystem.from_succ([1, 2, 3, 1])  # preperiod 1, cycle {1,2,3}
    gamma = (F(7), F(1), F(2), F(-3))
    avg = F(0)
    taus = birkhoff_average(sys.step, lambda x: gamma[x], 0, 40)
    l, p = 1, 3
    for m in range(1, 13):
        N = l + m * p - 1
        want = (F(7) + m * F(0)) / (N + 1)  # head + full cycle blocks summing to 0
        assert taus[N] == want


def test_birkhoff_rotation_rate():
    h = TrigPoly.from_cos_sin([(1, F(1), F(0))])
    x, N = 0.2, 10**5
    taus = birkhoff_average_rotation(h, GOLDEN, x, N)
    C = partial_sum_sup(h, GOLDEN, grid=1, N=N)  # max |s_n| at a grid point
    # tau_N = s_N/(N+1), so |tau_N| <= max_n |s_n| / (N+1) pointwise in N
    assert abs(taus[N]) <= C / (N + 1) + 1e-12


def test_ergodic_average_finite_four_cycle():
    sys = FiniteSystem.from_succ([1, 2, 3, 0])
    gamma = (F(1), F(2), F(3), F(-6))
    rows = ergodic_average_check(sys, gamma, samples=[0, 1, 2, 3], N=39, tol=F(0))
    assert all(err == 0 for _, _, err in rows)


def test_ergodic_average_refuses_two_cycles():
    sys = FiniteSystem.from_succ([1, 0, 3, 2])
    with pytest.raises(NotErgodic):
        ergodic_average_check(sys, (F(0),) * 4, [0], 10, F(1))


def test_ergodic_average_rotation_golden():
    h = TrigPoly.from_cos_sin([(1, F(1), F(0))])
    rows = ergodic_average_check(GOLDEN, h, samples=[0.0, 0.3, 0.71], N=10**5, tol=1e-3)
    assert all(err <= 1e-3 for _, _, err in rows)


def test_ergodic_average_refuses_rational_rotation():
    h = TrigPoly.from_cos_sin([(1, F(1), F(0))])
    with pytest.raises(NotErgodic):
        ergodic_average_check(RotationNumber.rational(1, 3), h, [0.0], 100, 1e-3)


def test_ergodic_average_tolerance_exceeded():
    sys = FiniteSystem.from_succ([1, 2, 3, 0])
    gamma = (F(1), F(2), F(3), F(-6))
    with pytest.raises(ToleranceExceeded):
        ergodic_average_check(sys, gamma, samples=[0], N=5, tol=F(1, 100))


# -- mean-ergodic projector -------------------------------------------------------


def test_projector_swap():
    rep = mean_ergodic_projector(FiniteSystem.from_succ([1, 0]))
    assert rep.P == ((F(1, 2), F(1, 2)), (F(1, 2), F(1, 2)))


def test_projector_collapse():
    rep = mean_ergodic_projector(FiniteSystem.from_succ([1, 1]))
    assert rep.P == ((F(0), F(1)), (F(0), F(1)))
    # annihilates the coboundary direction (1, 0) - wait: T(1,0) - (1,0)
    phi = (F(1), F(0))
    T = koopman_matrix(FiniteSystem.from_succ([1, 1]))
    cob = tuple(a - b for a, b in zip(T.apply(phi), phi))
    img = [sum(r * v for r, v in zip(row, cob)) for row in rep.P]
    assert all(v == 0 for v in img)


def test_projector_identity_map():
    rep = mean_ergodic_projector(FiniteSystem.from_succ([0, 1, 2]))
    assert rep.P == tuple(tuple(F(1 if i == j else 0) for j in range(3)) for i in range(3))
    assert rep.rank == 3


def test_projector_random_properties():
    rng = random.Random(1)
    for _ in range(60):
        sys = rand_system(rng, 8)
        rep = mean_ergodic_projector(sys, n_max=60)
        dec = decompose(sys)
        assert rep.rank == dec.num_components
        assert rep.measured_C <= rep.C
        for n, norm in rep.rate_rows:
            assert norm <= rep.C / n + 1e-12


def test_koopman_matrix_rows():
    T = koopman_matrix(FiniteSystem.from_succ([1, 2, 1]))
    assert all(sum(row) == 1 for row in T.rows)
    phi = (F(1), F(2), F(3))
    assert T.apply(phi) == [F(2), F(3), F(2)]


# -- invariant-measure polytope ------------------------------------------------------


def test_vertices_are_cycle_measures_exhaustive_small():
    for n in (1, 2, 3, 4):
        for succ in itertools.product(range(n), repeat=n):
            sys = FiniteSystem.from_succ(succ)
            verts = set(invariant_measure_vertices(sys))
            expected = set()
            for m in cycle_measures(sys):
                vec = [F(0)] * n
                for x in m.support:
                    vec[x] = m.weight
                expected.add(tuple(vec))
            assert verts == expected


def test_vertices_random_n5():
    rng = random.Random(2)
    for _ in range(50):
        sys = FiniteSystem.from_succ([rng.randrange(5) for _ in range(5)])
        verts = set(invariant_measure_vertices(sys))
        expected = set()
        for m in cycle_measures(sys):
            vec = [F(0)] * 5
            for x in m.support:
                vec[x] = m.weight
            expected.add(tuple(vec))
        assert verts == expected
