"""Exact p-adic differential modules on annuli: radii, breaks, Frobenius structures."""

from .coeff import CoeffField, FieldElem, field_arith
from .errors import (BudgetError, FieldMismatchError, HypothesisError, IterationError,
                     NotInvertibleError, PadicError, ParseError, PrecisionError,
                     PreconditionError, UnknownCoefficientError)
from .extended import INF, NEG_INF, as_rational, format_rational
from .laurent import GaussValue, LaurentSeries, hensel_lift, hensel_steps, invert, newton_iterates

__version__ = "0.1.0"
