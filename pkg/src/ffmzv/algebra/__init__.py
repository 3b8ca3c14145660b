"""Exact and precision-tracked arithmetic over F_q, A, k and k_inf."""

from .field import FieldConfig, FieldElement
from .poly import Poly, RationalFunction, format_poly, format_rational
from .laurent import (
    EQUAL, INDETERMINATE, UNEQUAL, IndeterminateError, LaurentNumber, format_laurent,
    laurent_from_json,
)
from .graded import GradedNumber, minus_theta_power
from .tpoly import TPoly, format_tpoly
from .tseries import TSeries
from .parse import ParseError, parse_coefficient, parse_expr
from .linalg import nullspace, rref, solve


def laurent_add(a, b):
    return a + b


def laurent_mul(a, b, prec=None):
    return a.mul(b, prec)


def laurent_inv(a, prec=None):
    return a.inv(prec)


def frobenius_power(a, n: int, prec=None):
    return a.frobenius(n, prec)


def tseries_twist(f, n: int, prec=None):
    return f.twist(n, prec)


def graded_mul(a, b, prec=None):
    return a.mul(b, prec)
