"""Domain errors raised by the solvers and probes.

Every error carries a machine-readable payload so the CLI can emit it as
structured JSON instead of prose.
"""
from __future__ import annotations


class CohomeqError(Exception):
    """Base class; `module` and `payload` feed the CLI error JSON."""

    module = "cohomeq"

    def __init__(self, message: str, **payload):
        super().__init__(message)
        self.payload = payload

    def to_json(self) -> dict:
        return {
            "error": type(self).__name__,
            "module": self.module,
            "message": str(self),
            "payload": _jsonable(self.payload),
        }


def _jsonable(obj):
    from fractions import Fraction

    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    return obj


class NotSolvable(CohomeqError):
    module = "discrete_solver"


class NotPeriodic(CohomeqError):
    module = "discrete_solver"


class NoPeriodicPoints(CohomeqError):
    module = "discrete_solver"


class SumsUnbounded(CohomeqError):
    module = "summation_engine"


class NotSummable(CohomeqError):
    module = "summation_engine"


class TNCViolated(CohomeqError):
    module = "rotation_solver"


class ResonantFrequency(CohomeqError):
    module = "rotation_solver"


class ConditionFailed(CohomeqError):
    module = "rotation_solver"


class PrecisionExhausted(CohomeqError):
    module = "rotation_solver"


class NotBadlyApproximable(CohomeqError):
    module = "rotation_solver"


class PreperiodicPointHit(CohomeqError):
    module = "power_map"


class ToleranceExceeded(CohomeqError):
    module = "invariant_measures"


class NotErgodic(CohomeqError):
    module = "invariant_measures"
