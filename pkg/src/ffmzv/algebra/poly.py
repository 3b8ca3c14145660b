"""Exact polynomials in A = F_q[theta] and rational functions in k = F_q(theta)."""

from __future__ import annotations

import numpy as np

from .field import FieldConfig

_EMPTY = np.zeros(0, dtype=np.int64)


def _strip(c):
    nz = np.flatnonzero(c)
    if len(nz) == 0:
        return _EMPTY
    return c[: nz[-1] + 1]


class Poly:
    """Element of F_q[theta]; ``coeffs[i]`` is the code of the theta^i coefficient."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldConfig, coeffs=()):
        c = np.asarray(coeffs, dtype=np.int64)
        if c.ndim != 1:
            c = c.reshape(-1)
        self.field = field
        self.coeffs = _strip(c)
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, F):
        return cls(F)

    @classmethod
    def one(cls, F):
        return cls(F, [1])

    @classmethod
    def constant(cls, F, c: int):
        return cls(F, [c])

    @classmethod
    def monomial(cls, F, n: int, c: int = 1):
        a = np.zeros(n + 1, dtype=np.int64)
        a[n] = c
        return cls(F, a)

    @classmethod
    def theta(cls, F):
        return cls.monomial(F, 1)

    # -- queries ------------------------------------------------------------
    def degree(self) -> int:
        """Degree in theta; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    def leading(self) -> int:
        return int(self.coeffs[-1]) if len(self.coeffs) else 0

    def is_monic(self) -> bool:
        return self.leading() == 1

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def __getitem__(self, i: int) -> int:
        return int(self.coeffs[i]) if 0 <= i < len(self.coeffs) else 0

    def terms(self):
        return [(int(i), int(self.coeffs[i])) for i in np.flatnonzero(self.coeffs)]

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly(self.field, [self.field.from_int(other)])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = a.copy()
        out[: len(b)] = self.field.vadd(out[: len(b)], b)
        return Poly(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, self.field.vneg(self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Poly(self.field, self.field.conv(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def scale(self, c: int) -> "Poly":
        return Poly(self.field, self.field.vscale(self.coeffs, c))

    def shift(self, n: int) -> "Poly":
        """Multiply by theta^n (n >= 0)."""
        if self.is_zero():
            return self
        return Poly(self.field, np.concatenate([np.zeros(n, dtype=np.int64), self.coeffs]))

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = self.coeffs.copy()
        db = other.degree()
        b = other.coeffs
        inv_lead = F.inv(other.leading())
        if len(r) - 1 < db:
            return Poly(F), Poly(F, r)
        if db > 64 and len(r) - db > 64:
            return self._divmod_newton(other)
        quot = np.zeros(len(r) - db, dtype=np.int64)
        for i in range(len(r) - 1, db - 1, -1):
            c = int(r[i])
            if c:
                c = F.mul(c, inv_lead)
                quot[i - db] = c
                seg = r[i - db: i + 1]
                r[i - db: i + 1] = F.vsub(seg, F.vscale(b, c))
        return Poly(F, quot), Poly(F, r[:db])

    def _divmod_newton(self, other):
        """Division through a reversed power-series inverse (fast for large degrees)."""
        from .laurent import _series_inverse

        F = self.field
        n, m = self.degree(), other.degree()
        k = n - m + 1
        ra = self.coeffs[::-1][:k]
        rb = other.coeffs[::-1]
        inv = _series_inverse(F, rb[:k] if len(rb) >= k else np.concatenate(
            [rb, np.zeros(k - len(rb), dtype=np.int64)]), k)
        rq = F.conv(ra, inv)[:k]
        quot = Poly(F, rq[::-1])
        return quot, self - quot * other

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading()))

    def gcd(self, other) -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def twist(self, n: int = 1) -> "Poly":
        """The n-fold twist: theta -> theta^(q^n); F_q coefficients are fixed."""
        if n < 0:
            Q = self.field.q ** (-n)
            nz = np.flatnonzero(self.coeffs)
            if np.any(nz % Q):
                raise ValueError("not a q-th power")
            return Poly(self.field, self.coeffs[::Q])
        if n == 0 or self.degree() <= 0:
            return self
        Q = self.field.q ** n
        out = np.zeros((len(self.coeffs) - 1) * Q + 1, dtype=np.int64)
        out[::Q] = self.coeffs
        return Poly(self.field, out)

    def __call__(self, x):
        """Evaluate at x (a Poly or anything supporting + and *), by Horner."""
        acc = None
        for c in reversed(self.coeffs.tolist()):
            acc = Poly(self.field, [c]) if acc is None else acc * x + Poly(self.field, [c])
        return acc if acc is not None else Poly(self.field)

    # -- comparison / formatting -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = self._coerce(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.q, tuple(self.coeffs.tolist())))
        return self._hash

    def __repr__(self):
        return format_poly(self)

    def __bool__(self):
        return not self.is_zero()


def format_poly(f: Poly, var: str = "x") -> str:
    """Canonical text form, lowest exponent first: ``1+x+x^3``."""
    if f.is_zero():
        return "0"
    F = f.field
    parts = []
    for i, c in f.terms():
        cs = F.format_element(c)
        if i == 0:
            parts.append(cs)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            parts.append(mono if c == 1 else f"{cs}*{mono}")
    return "+".join(parts)


class RationalFunction:
    """Element of k = F_q(theta) in lowest terms with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        F = num.field
        if den is None:
            den = Poly.one(F)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = num.gcd(den)
        if g.degree() > 0:
            num = num // g
            den = den // g
        lead = den.leading()
        if lead != 1:
            inv = F.inv(lead)
            num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Poly):
            return RationalFunction(other)
        if isinstance(other, int):
            return RationalFunction(Poly.constant(self.field, self.field.from_int(other)))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def is_zero(self):
        return self.num.is_zero()

    def is_polynomial(self):
        return self.den.degree() == 0

    def degree(self) -> int:
        """deg num - deg den (the -log_q of |.|_inf); undefined for zero."""
        if self.num.is_zero():
            raise ValueError("degree of zero")
        return self.num.degree() - self.den.degree()

    def twist(self, n: int = 1):
        return RationalFunction(self.num.twist(n), self.den.twist(n))

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, RationalFunction) else other
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return format_rational(self)


def format_rational(r: RationalFunction, var: str = "x") -> str:
    if r.is_polynomial():
        return format_poly(r.num, var)
    num = format_poly(r.num, var)
    if len(r.num.terms()) > 1:
        num = f"({num})"
    return f"{num}/({format_poly(r.den, var)})"
