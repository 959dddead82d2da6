"""Exact polynomial arithmetic, Groebner bases, Hilbert series, syzygies."""
from .field import DEFAULT_PRIME, CoefficientError, FieldSpec
from .groebner import Budget, BudgetExceeded
from .hilbert import HilbertData
from .ideal import Ideal, eliminate, hilbert, ideal_equal, intersect, quotient, saturation
from .orders import MonomialOrder
from .poly import ParseError, Polynomial, UnknownVariableError, parse_polynomial
from .ring import RingSpec


def groebner_basis(ideal: Ideal, order: MonomialOrder | None = None, budget: Budget | None = None):
    """Reduced Groebner basis of ``ideal`` for ``order`` (grevlex by default)."""
    return ideal.groebner_basis(order or MonomialOrder.grevlex(), budget)


def quotient_saturation(ideal: Ideal, f: Polynomial, budget: Budget | None = None):
    """Both I : f and I : f^infinity."""
    return quotient(ideal, f, budget), saturation(ideal, f, budget)


__all__ = [
    "DEFAULT_PRIME", "Budget", "BudgetExceeded", "CoefficientError", "FieldSpec",
    "HilbertData", "Ideal", "MonomialOrder", "ParseError", "Polynomial", "RingSpec",
    "UnknownVariableError", "eliminate", "groebner_basis", "hilbert", "ideal_equal",
    "intersect", "parse_polynomial", "quotient", "quotient_saturation", "saturation",
]
