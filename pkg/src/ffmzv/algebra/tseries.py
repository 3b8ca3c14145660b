"""Truncated power series in t with precision-tracked coefficients."""

from __future__ import annotations

from .field import FieldConfig
from .laurent import LaurentNumber
from .poly import Poly
from .tpoly import TPoly


class TSeries:
    """``sum_{n <= t_trunc} coeffs[n] t^n``; each coefficient carries its own err."""

    __slots__ = ("field", "coeffs", "t_trunc")

    def __init__(self, field: FieldConfig, coeffs, t_trunc: int):
        cs = list(coeffs)[: t_trunc + 1]
        while len(cs) < t_trunc + 1:
            cs.append(LaurentNumber.zero(field))
        self.field = field
        self.coeffs = cs
        self.t_trunc = t_trunc

    @classmethod
    def zero(cls, F, t_trunc):
        return cls(F, [], t_trunc)

    @classmethod
    def one(cls, F, t_trunc):
        return cls(F, [LaurentNumber.one(F)], t_trunc)

    @classmethod
    def from_tpoly(cls, f: TPoly, t_trunc: int):
        return cls(f.field, [LaurentNumber.from_poly(c) for c in f.coeffs], t_trunc)

    @classmethod
    def from_laurent(cls, a: LaurentNumber, t_trunc: int):
        return cls(a.field, [a], t_trunc)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __add__(self, other):
        return TSeries(self.field, [a + b for a, b in zip(self.coeffs, other.coeffs)],
                       min(self.t_trunc, other.t_trunc))

    def __sub__(self, other):
        return TSeries(self.field, [a - b for a, b in zip(self.coeffs, other.coeffs)],
                       min(self.t_trunc, other.t_trunc))

    def __neg__(self):
        return TSeries(self.field, [-a for a in self.coeffs], self.t_trunc)

    def mul(self, other, prec=None) -> "TSeries":
        T = min(self.t_trunc, other.t_trunc)
        F = self.field
        a = [x if not (x.is_exact() and x.is_zero_within_precision()) else None for x in self.coeffs[: T + 1]]
        b = [x if not (x.is_exact() and x.is_zero_within_precision()) else None for x in other.coeffs[: T + 1]]
        out = []
        for n in range(T + 1):
            acc = None
            for i in range(n + 1):
                x, y = a[i], b[n - i]
                if x is None or y is None:
                    continue
                term = x.mul(y, prec)
                acc = term if acc is None else acc + term
            out.append(acc if acc is not None else LaurentNumber.zero(F))
        return TSeries(F, out, T)

    __mul__ = mul

    def scale(self, x: LaurentNumber, prec=None) -> "TSeries":
        return TSeries(self.field, [c.mul(x, prec) for c in self.coeffs], self.t_trunc)

    def mul_tpoly(self, f: TPoly, prec=None) -> "TSeries":
        return self.mul(TSeries.from_tpoly(f, self.t_trunc), prec)

    def twist(self, n: int = 1, prec=None) -> "TSeries":
        """Coefficient-wise q^n-power.  n = -1 only for exact q-th powers."""
        if n == -1:
            return TSeries(self.field, [c.inverse_frobenius() for c in self.coeffs], self.t_trunc)
        if n < 0:
            raise ValueError("only n >= -1 supported")
        return TSeries(self.field, [c.frobenius(n, prec) for c in self.coeffs], self.t_trunc)

    def truncate(self, err) -> "TSeries":
        return TSeries(self.field, [c.truncate(err) for c in self.coeffs], self.t_trunc)

    def with_t_trunc(self, T: int) -> "TSeries":
        return TSeries(self.field, self.coeffs, T)

    def max_err(self):
        """Coarsest error degree among coefficients (None if all exact)."""
        errs = [c.err for c in self.coeffs if c.err is not None]
        return max(errs) if errs else None

    def is_zero_within_precision(self) -> bool:
        return all(c.is_zero_within_precision() for c in self.coeffs)

    def sup_degree(self):
        """Largest exponent present in any coefficient window."""
        his = [c.hi for c in self.coeffs if c.hi is not None]
        return max(his) if his else None

    def evaluate_poly(self, x: Poly, prec: int) -> LaurentNumber:
        """Finite evaluation sum_n coeffs[n] x^n (the truncated polynomial only)."""
        acc = LaurentNumber.zero(self.field)
        xl = LaurentNumber.from_poly(x)
        power = LaurentNumber.one(self.field)
        for c in self.coeffs:
            acc = acc + c.mul(power, prec)
            power = power.mul(xl)
        return acc

    def __repr__(self):
        parts = []
        for n, c in enumerate(self.coeffs):
            if c.is_zero_within_precision() and c.is_exact():
                continue
            parts.append(f"({c!r})*t^{n}")
        return " + ".join(parts) + f" + O(t^{self.t_trunc + 1})"
