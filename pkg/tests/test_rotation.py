import math
import random
from fractions import Fraction

import numpy as np
import pytest

from cohomeq.errors import (
    ConditionFailed,
    NotBadlyApproximable,
    PrecisionExhausted,
    ResonantFrequency,
    TNCViolated,
)
from cohomeq.rotation import (
    RotationNumber,
    badly_approximable,
    closed_form_partial_sums,
    continued_fraction,
    dirichlet_convergent_check,
    exact_cyclotomic_residual_is_zero,
    fractional_multiples,
    l2_solution_bound,
    lower_distance_constant,
    normal_solvability_classify,
    parseval_coboundary_bound,
    partial_sum_sup,
    residual_on_grid,
    small_denominator_profile,
    solve_rational_rotation,
    solve_trig_poly,
)
from cohomeq.summation import RotationSeries, partial_sums
from cohomeq.trigpoly import TrigPoly

F = Fraction
GOLDEN = RotationNumber.golden()
SQRT2M1 = RotationNumber.quadratic(-1, 1, 1, 2)


def cos_poly():
    return TrigPoly.from_cos_sin([(1, F(1), F(0))])  # cos(2 pi x)


def rand_real_poly(rng, degree=20, avoid_multiples_of=None):
    terms = []
    for nu in range(1, degree + 1):
        if avoid_multiples_of and nu % avoid_multiples_of == 0:
            continue
        if rng.random() < 0.4:
            terms.append((nu, F(rng.randint(-8, 8), rng.randint(1, 4)),
                          F(rng.randint(-8, 8), rng.randint(1, 4))))
    if not terms:
        terms = [(1, F(1), F(0))]
    return TrigPoly.from_cos_sin(terms)


# -- Fourier division ---------------------------------------------------------


def test_single_frequency_quarter_turn():
    h = TrigPoly({1: 1.0}, real_flag=False, exact_coeffs={1: (F(1), F(0))})
    sol = solve_trig_poly(h, RotationNumber.rational(1, 4))
    assert sol.exact is not None
    assert abs(sol.coeffs[1] - (-0.5 - 0.5j)) < 1e-15


def test_cos_golden_residual():
    sol = solve_trig_poly(cos_poly(), GOLDEN)
    assert residual_on_grid(cos_poly(), GOLDEN, sol, grid=10**4) < 1e-10


def test_tnc_violation():
    h = TrigPoly({0: 1.0}, exact_coeffs={0: (F(1), F(0))})
    with pytest.raises(TNCViolated):
        solve_trig_poly(h, GOLDEN)


def test_resonant_frequency_rational_angle():
    h = TrigPoly.from_cos_sin([(7, F(1), F(0))])
    with pytest.raises(ResonantFrequency):
        solve_trig_poly(h, RotationNumber.rational(1, 7))


def test_cyclotomic_backend_exact_residual():
    rng = random.Random(0)
    alpha = RotationNumber.rational(1, 7)
    for _ in range(5):
        h = rand_real_poly(rng, degree=12, avoid_multiples_of=7)
        sol = solve_trig_poly(h, alpha)
        assert sol.exact is not None
        assert exact_cyclotomic_residual_is_zero(h, alpha, sol)
        assert residual_on_grid(h, alpha, sol, grid=2000) < 1e-12


def test_division_identity_double():
    rng = random.Random(1)
    h = rand_real_poly(rng, degree=10)
    sol = solve_trig_poly(h, SQRT2M1)
    from cohomeq.rotation import _unit_root_denominators
    dens = _unit_root_denominators(sol.poly.spectrum, SQRT2M1)
    for l in sol.poly.spectrum:
        assert abs(sol.coeffs[l] * dens[l] - h.coeffs[l]) < 1e-14


# -- closed-form partial sums ---------------------------------------------------


def test_closed_form_n0_is_h():
    h = cos_poly()
    x = 0.37
    assert abs(closed_form_partial_sums(h, GOLDEN, x, 0) - float(h.eval(x))) < 1e-13


def test_closed_form_matches_loop():
    rng = random.Random(2)
    alphas = [GOLDEN, SQRT2M1, RotationNumber.rational(2, 9)]
    for _ in range(100):
        h = rand_real_poly(rng, degree=6, avoid_multiples_of=9)
        alpha = rng.choice(alphas)
        x = rng.random()
        n = rng.randint(0, 400)
        loop = partial_sums(RotationSeries(h, alpha, x), n).s[n]
        closed = closed_form_partial_sums(h, alpha, x, n)
        assert abs(loop - closed) < 1e-11


def test_coboundary_telescoping_at_large_n():
    h = cos_poly()
    sol = solve_trig_poly(h, GOLDEN)
    x = 0.123
    for n in (10, 10**3, 10**5):
        s = closed_form_partial_sums(h, GOLDEN, x, n)
        a = fractional_multiples(GOLDEN.value(96), n + 1, n + 2, x0=x)[0]
        want = float(sol.eval(a)) - float(sol.eval(x))
        assert abs(s - want) < 1e-10


def test_partial_sum_sup_agrees_with_direct_scan():
    h = cos_poly()
    sup_fast = partial_sum_sup(h, GOLDEN, grid=50, N=400)
    xs = np.arange(50) / 50
    direct = 0.0
    for x in xs:
        vals = closed_form_partial_sums(h, GOLDEN, float(x), np.arange(401))
        direct = max(direct, float(np.max(np.abs(vals))))
    assert abs(sup_fast - direct) < 1e-9


# -- rational rotation ----------------------------------------------------------


def test_half_turn_cosine():
    sol = solve_rational_rotation(cos_poly(), 2, 1)
    xs = np.linspace(0, 1, 10**4, endpoint=False)
    want = -0.5 * np.cos(2 * np.pi * xs)
    assert np.max(np.abs(sol.eval(xs) - want)) < 1e-12
    resid = sol.eval(np.mod(xs + 0.5, 1.0)) - sol.eval(xs) - np.cos(2 * np.pi * xs)
    assert np.max(np.abs(resid)) < 1e-12


def test_rational_rotation_zero():
    sol = solve_rational_rotation(TrigPoly({}, real_flag=True), 3, 1)
    assert float(sol.eval(0.2)) == 0.0


def test_rational_rotation_condition_failure():
    h = TrigPoly.from_cos_sin([(2, F(1), F(0))])  # cos(4 pi x), period 1/2
    with pytest.raises(ConditionFailed) as ei:
        solve_rational_rotation(h, 2, 1)
    assert abs(abs(ei.value.payload["sum"]) - 2.0) < 1e-9


def test_rational_rotation_callable_backend():
    g = lambda x: math.sin(2 * math.pi * x) ** 3
    p, r = 5, 2
    alpha = r / p
    h = lambda x: g((x + alpha) % 1.0) - g(x)
    sol = solve_rational_rotation(h, p, r)
    xs = np.linspace(0, 1, 500, endpoint=False)
    resid = sol.eval(np.mod(xs + alpha, 1.0)) - sol.eval(xs) - np.array([h(x) for x in xs])
    assert np.max(np.abs(resid)) < 1e-12


# -- continued fractions ----------------------------------------------------------


def test_cf_reference_expansions():
    assert continued_fraction(RotationNumber.quadratic(1, 1, 2, 5), 6).quotients == (1,) * 6
    assert continued_fraction(RotationNumber.quadratic(0, 1, 1, 2), 6).quotients == (1, 2, 2, 2, 2, 2)
    assert continued_fraction(RotationNumber.rational(355, 113), 4).quotients == (3, 7, 15, 1)


def test_cf_determinant_invariant():
    for alpha in (GOLDEN, RotationNumber.quadratic(0, 1, 1, 2), RotationNumber.rational(355, 113)):
        cf = continued_fraction(alpha, 40)
        for k in range(1, len(cf.convergents)):
            (p1, q1), (p0, q0) = cf.convergents[k], cf.convergents[k - 1]
            assert abs(p1 * q0 - p0 * q1) == 1


def test_cf_decimal_interval_certification():
    # 0.333333 +- 1e-6 straddles 1/3, so only a_0 is determined
    lit = RotationNumber.decimal("0.333333", 6)
    assert continued_fraction(lit, 1).quotients == (0,)
    with pytest.raises(PrecisionExhausted):
        continued_fraction(lit, 2)
    # a long literal away from CF boundaries certifies a healthy prefix
    lit2 = RotationNumber.decimal("0.618033988749894848204586834366", 28)
    assert continued_fraction(lit2, 8).quotients == (0, 1, 1, 1, 1, 1, 1, 1)


def test_cf_decimal_precision_exhausted():
    # the interval [0.9, 1.1] contains the integer boundary: nothing certified
    with pytest.raises(PrecisionExhausted):
        continued_fraction(RotationNumber.decimal("1.0", 1), 1)


# -- Diophantine classification ----------------------------------------------------


def test_badly_approximable_exact_bounds():
    assert badly_approximable(GOLDEN).bound == 1
    assert badly_approximable(RotationNumber.quadratic(0, 1, 1, 2)).bound == 2
    assert badly_approximable(RotationNumber.rational(3, 7)).kind == "FALSE"


def test_badly_approximable_liouville_style_literal():
    # CF [0; 10, 100, 1000, 1, ...] written out as an exact decimal
    x = F(0)
    for a in reversed([10, 100, 1000, 1, 1, 1]):
        x = 1 / (a + x)
    lit = RotationNumber.decimal(f"{float(x):.15f}", 13)
    verdict = badly_approximable(lit, inspect_terms=4, quotient_bound=50)
    assert verdict.kind == "FALSE"
    assert verdict.witness in (2, 3)


def test_lower_distance_constant():
    assert lower_distance_constant(GOLDEN) == F(1, 3)
    with pytest.raises(NotBadlyApproximable):
        lower_distance_constant(RotationNumber.rational(1, 2))


def test_small_denominator_profile_golden():
    prof = small_denominator_profile(GOLDEN, 10**4)
    assert prof.identity_defect < 1e-14
    assert prof.c_hat >= 0.38  # approaching 1/sqrt(5) ~ 0.447
    # certified lower bound c = 1/3 really is a lower bound here
    assert prof.c_hat > 1 / 3


def test_small_denominator_profile_rational_resonance():
    prof = small_denominator_profile(RotationNumber.rational(3, 7), 20)
    assert prof.dist[6] < 1e-15  # n = 7
    assert prof.denom[6] < 1e-14


def test_dirichlet_convergent_property():
    for alpha in (GOLDEN, RotationNumber.quadratic(0, 1, 1, 2)):
        rows = dirichlet_convergent_check(alpha, N=10**4)
        assert rows
        for q_k, q_k1, dist, bound in rows:
            assert dist <= bound + 1e-15


def test_l2_bound_trig_poly_and_decaying():
    h = {l: 1.0 / l**2 for l in range(1, 1001)}
    h.update({-l: 1.0 / l**2 for l in range(1, 1001)})
    rep = l2_solution_bound(h, GOLDEN)
    assert rep.holds and rep.lhs <= rep.rhs
    rep0 = l2_solution_bound({}, GOLDEN)
    assert rep0.lhs == rep0.rhs == 0.0


def test_parseval_bound_small():
    lhs, rhs, ok = parseval_coboundary_bound(cos_poly(), GOLDEN, n_sup=2000, grid=200)
    assert ok and lhs <= rhs + 1e-9


def test_normal_solvability_classification():
    assert normal_solvability_classify(RotationNumber.rational(3, 7)) == "NORMALLY_SOLVABLE"
    assert normal_solvability_classify(SQRT2M1) == "NOT_NORMALLY_SOLVABLE"
    assert normal_solvability_classify(RotationNumber.decimal("0.333333", 6)) == "UNDECIDED"


def test_convergent_resonance_profile_shape():
    # measured diagnostic, reported not asserted: check the report shape and
    # that convergent denominators hitting the spectrum report exact zeros
    from cohomeq.rotation import convergent_resonance_profile
    h = TrigPoly.from_cos_sin([(1, F(1), F(0)), (5, F(0), F(1))])
    rows = convergent_resonance_profile(h, GOLDEN, terms=10)
    assert len(rows) == 10
    assert all(v >= 0 for _, v in rows)
    by_q = {q: v for (p, q), v in rows}
    assert by_q[1] == 0.0 and by_q[5] == 0.0     # q | some frequency
    assert all(v > 0 for (p, q), v in rows if q > 5)
