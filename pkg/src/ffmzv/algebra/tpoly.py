"""Polynomials in t with coefficients in A = F_q[theta] (elements of A[t])."""

from __future__ import annotations

from .field import FieldConfig
from .poly import Poly, format_poly


class TPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldConfig, coeffs=()):
        cs = [c if isinstance(c, Poly) else Poly.constant(field, c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.field = field
        self.coeffs = cs

    @classmethod
    def constant(cls, c: Poly):
        return cls(c.field, [c])

    @classmethod
    def one(cls, F):
        return cls(F, [Poly.one(F)])

    @classmethod
    def t(cls, F):
        return cls(F, [Poly.zero(F), Poly.one(F)])

    @classmethod
    def t_minus(cls, a: Poly):
        """The linear polynomial t - a."""
        return cls(a.field, [-a, Poly.one(a.field)])

    def deg_t(self) -> int:
        return len(self.coeffs) - 1

    def norm_degree(self):
        """max_i deg_theta of the coefficients (log_q of the sup norm); None for 0."""
        degs = [c.degree() for c in self.coeffs if not c.is_zero()]
        return max(degs) if degs else None

    def is_zero(self):
        return not self.coeffs

    def __getitem__(self, j):
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Poly.zero(self.field)

    def _coerce(self, other):
        if isinstance(other, TPoly):
            return other
        if isinstance(other, Poly):
            return TPoly.constant(other)
        if isinstance(other, int):
            return TPoly(self.field, [Poly.constant(self.field, self.field.from_int(other))])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return TPoly(self.field, [self[j] + o[j] for j in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return TPoly(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return TPoly(self.field)
        out = [Poly.zero(self.field)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return TPoly(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = TPoly.one(self.field)
        for _ in range(n):
            result = result * self
        return result

    def twist(self, n: int = 1) -> "TPoly":
        return TPoly(self.field, [c.twist(n) for c in self.coeffs])

    def evaluate(self, x: Poly) -> Poly:
        """Value at t = x (x in A)."""
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_linear(self, a: Poly):
        """Divide by (t - a): returns (quotient, remainder in A)."""
        if self.is_zero():
            return TPoly(self.field), Poly.zero(self.field)
        n = len(self.coeffs)
        quot = [None] * (n - 1)
        acc = self.coeffs[-1]
        for j in range(n - 2, -1, -1):
            quot[j] = acc
            acc = self.coeffs[j] + acc * a
        return TPoly(self.field, quot), acc

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return len(self.coeffs) == len(o.coeffs) and all(a == b for a, b in zip(self.coeffs, o.coeffs))

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __repr__(self):
        return format_tpoly(self)


def format_tpoly(f: TPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for j, c in enumerate(f.coeffs):
        if c.is_zero():
            continue
        cs = format_poly(c)
        if j == 0:
            parts.append(cs)
            continue
        mono = "t" if j == 1 else f"t^{j}"
        if cs == "1":
            parts.append(mono)
        else:
            parts.append(f"({cs})*{mono}")
    return "+".join(parts)
