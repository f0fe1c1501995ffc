"""Solvers, diagnostics and falsifiers for phi(Fx) - phi(x) = gamma(x).

Three concrete regimes: finite dynamical systems in exact rational
arithmetic, circle rotations through Fourier and continued-fraction
analysis, and expanding power maps of the circle, together with the
summation machinery (Cesaro means, sup formulas, regularized limits,
geometric-series summation) and invariant-measure checks tying them
together.
"""

from .functional_graph import FiniteSystem, OrbitDecomposition, decompose, periodic_points, total_attractor
from .discrete_solver import (
    CoboundaryProblem,
    DiscreteSolution,
    abel_distance_lowerbound,
    check_solvable,
    cycle_integrals,
    residual,
    solve_linear_oracle,
    solve_periodic,
    solve_preperiodic,
    solve_transversal,
)
from .trigpoly import TrigPoly
from .rotation import (
    FourierSolution,
    RotationNumber,
    badly_approximable,
    closed_form_partial_sums,
    continued_fraction,
    l2_solution_bound,
    normal_solvability_classify,
    parseval_coboundary_bound,
    small_denominator_profile,
    solve_rational_rotation,
    solve_trig_poly,
)
from .summation import (
    FiniteOrbitSeries,
    OrbitSeries,
    RotationCoboundarySeries,
    RotationSeries,
    SequenceSeries,
    SeriesProbe,
    SummationSpec,
    boundedness_and_equicontinuity,
    cesaro,
    exponential_summation,
    finite_cesaro_limit,
    limsup_solution,
    linearized_solution,
    partial_sums,
    regularized_limit,
    solve_by_method,
    sup_defect,
    sup_solution,
)
from .powermap import (
    PowerMapProblem,
    PreperiodicPoint,
    frequency_ratio_predicate,
    kolmogorov_probe,
    orbit_solution,
    preperiodic_points,
)
from .measures import (
    CycleMeasure,
    KoopmanMatrix,
    birkhoff_average,
    cycle_measures,
    ergodic_average_check,
    koopman_matrix,
    mean_ergodic_projector,
    tnc_check,
)

__version__ = "0.1.0"
