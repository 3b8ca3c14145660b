"""The theta~-graded extension of k_inf.

theta~ is a formal (q-1)-th root of -theta: the only relation used is
theta~^(q-1) = -theta.  A :class:`GradedNumber` is ``unit * theta~^grade``
with ``0 <= grade < q-1``; it lies in k_inf iff the grade is 0.
"""

from __future__ import annotations

from .field import FieldConfig
from .laurent import LaurentNumber


def minus_theta_power(F: FieldConfig, m: int) -> LaurentNumber:
    """(-theta)^m as an exact monomial."""
    c = 1 if m % 2 == 0 else F.neg(1)
    return LaurentNumber.monomial(F, m, c)


class GradedNumber:
    __slots__ = ("unit", "grade")

    def __init__(self, unit: LaurentNumber, grade: int = 0):
        F = unit.field
        n = F.q - 1
        carry, g = divmod(grade, n)
        if carry:
            unit = unit.mul(minus_theta_power(F, carry))
        self.unit = unit
        self.grade = g

    @classmethod
    def theta_tilde_power(cls, F: FieldConfig, m: int) -> "GradedNumber":
        return cls(LaurentNumber.one(F), m)

    @property
    def field(self):
        return self.unit.field

    def in_k_infinity(self) -> bool:
        return self.grade == 0

    def mul(self, other, prec=None) -> "GradedNumber":
        if isinstance(other, LaurentNumber):
            other = GradedNumber(other, 0)
        n = self.field.q - 1
        carry, g = divmod(self.grade + other.grade, n)
        unit = self.unit.mul(other.unit, None if prec is None else prec - carry)
        if carry:
            unit = unit.mul(minus_theta_power(self.field, carry))
        out = GradedNumber.__new__(GradedNumber)
        out.unit = unit
        out.grade = g
        return out

    __mul__ = mul

    def inv(self, prec=None) -> "GradedNumber":
        u = self.unit.inv(prec)
        return GradedNumber(u, -self.grade)

    def pow(self, n: int, prec=None) -> "GradedNumber":
        if n < 0:
            return self.inv(prec).pow(-n, prec)
        F = self.field
        result = GradedNumber(LaurentNumber.one(F), 0)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, prec)
            n >>= 1
            if n:
                base = base.mul(base, prec)
        return result

    def frobenius(self, n: int = 1, prec=None) -> "GradedNumber":
        """(u theta~^g)^(q^n) = u^(q^n) theta~^g (-theta)^(g (q^n - 1)/(q - 1))."""
        F = self.field
        shift = self.grade * (F.q ** n - 1) // (F.q - 1)
        u = self.unit.frobenius(n, None if prec is None else prec - shift)
        return GradedNumber(u.mul(minus_theta_power(F, shift)), self.grade)

    def _check_grade(self, other):
        if isinstance(other, LaurentNumber):
            other = GradedNumber(other, 0)
        if other.grade != self.grade:
            raise ValueError(f"grade mismatch: {self.grade} vs {other.grade}")
        return other

    def __add__(self, other):
        other = self._check_grade(other)
        return GradedNumber(self.unit + other.unit, self.grade)

    def __sub__(self, other):
        other = self._check_grade(other)
        return GradedNumber(self.unit - other.unit, self.grade)

    def __neg__(self):
        return GradedNumber(-self.unit, self.grade)

    def scale(self, c: int):
        return GradedNumber(self.unit.scale(c), self.grade)

    def compare(self, other) -> str:
        other = self._check_grade(other)
        return self.unit.compare(other.unit)

    def truncate(self, err):
        return GradedNumber(self.unit.truncate(err), self.grade)

    def to_json(self):
        return self.unit.to_json(self.grade)

    def __repr__(self):
        if self.grade == 0:
            return repr(self.unit)
        return f"({self.unit!r}) * theta~^{self.grade}"
