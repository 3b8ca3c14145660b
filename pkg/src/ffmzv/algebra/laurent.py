"""Precision-tracked elements of k_inf = F_q((1/theta)).

A :class:`LaurentNumber` is a finite window of theta-exponents plus an error
degree ``err``: the represented value is ``sum(window) + eps`` with
``deg eps < err``.  Every coefficient at an exponent ``>= err`` is certified
(exponents inside ``[err, hi]`` missing from the window are certified zero).
``err is None`` means the value is exact.

Error propagation is ultrametric and conservative; see the individual
operations.
"""

from __future__ import annotations

import numpy as np

from .field import FieldConfig
from .poly import Poly, RationalFunction

_EMPTY = np.zeros(0, dtype=np.int64)

EQUAL = "equal"
UNEQUAL = "unequal"
INDETERMINATE = "indeterminate"


class IndeterminateError(ArithmeticError):
    """A query needs a coefficient below the tracked precision."""


def _max_err(*errs):
    vals = [e for e in errs if e is not None]
    return max(vals) if vals else None


class LaurentNumber:
    __slots__ = ("field", "lo", "c", "err")

    def __init__(self, field: FieldConfig, lo: int, coeffs, err: int | None = None):
        c = np.asarray(coeffs, dtype=np.int64)
        if err is not None and len(c) and lo < err:
            c = c[err - lo:]
            lo = err
        nz = np.flatnonzero(c)
        if len(nz) == 0:
            c = _EMPTY
            lo = 0
        else:
            lo = lo + int(nz[0])
            c = c[nz[0]: nz[-1] + 1]
        self.field = field
        self.lo = lo
        self.c = c
        self.err = err

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, F, err=None):
        return cls(F, 0, _EMPTY, err)

    @classmethod
    def one(cls, F):
        return cls(F, 0, [1])

    @classmethod
    def monomial(cls, F, n: int, c: int = 1):
        return cls(F, n, [c])

    @classmethod
    def from_poly(cls, P: Poly):
        return cls(P.field, 0, P.coeffs)

    @classmethod
    def from_terms(cls, F, terms, err=None):
        """From ``{exponent: code}`` (or pairs)."""
        items = dict(terms).items()
        items = [(e, c) for e, c in items if c]
        if not items:
            return cls.zero(F, err)
        lo = min(e for e, _ in items)
        hi = max(e for e, _ in items)
        arr = np.zeros(hi - lo + 1, dtype=np.int64)
        for e, c in items:
            arr[e - lo] = c
        return cls(F, lo, arr, err)

    @classmethod
    def from_rational(cls, r, prec: int):
        """Embed an element of A or k; exact whenever the expansion terminates."""
        if isinstance(r, Poly):
            return cls.from_poly(r)
        num = cls.from_poly(r.num)
        if len(r.den.terms()) == 1:
            d, c = r.den.terms()[0]
            return num.shift(-d).scale(r.field.inv(c))
        if r.num.is_zero():
            return cls.zero(r.field)
        target = prec - r.num.degree()
        return num.mul(cls.from_poly(r.den).inv(target), prec)

    # -- properties ---------------------------------------------------------
    @property
    def hi(self):
        """Top window exponent, or None when the window is empty."""
        return self.lo + len(self.c) - 1 if len(self.c) else None

    def is_exact(self) -> bool:
        return self.err is None

    def is_zero_within_precision(self) -> bool:
        return len(self.c) == 0

    def degree(self) -> int:
        if len(self.c) == 0:
            if self.err is None:
                raise ValueError("degree of exact zero")
            raise IndeterminateError("leading term below precision")
        return self.hi

    def valuation(self) -> int:
        """Lowest exponent present (exact numbers only carry a well-defined one)."""
        if len(self.c) == 0:
            raise IndeterminateError("zero within precision")
        return self.lo

    def leading(self) -> int:
        self.degree()
        return int(self.c[-1])

    def coefficient(self, e: int) -> int:
        if self.err is not None and e < self.err:
            raise IndeterminateError(f"coefficient of theta^{e} is below precision {self.err}")
        if len(self.c) == 0 or e < self.lo or e > self.hi:
            return 0
        return int(self.c[e - self.lo])

    def terms(self):
        return [(self.lo + int(i), int(self.c[i])) for i in np.flatnonzero(self.c)]

    # -- precision ----------------------------------------------------------
    def truncate(self, err):
        """Forget everything below ``err`` (a no-op if already coarser)."""
        if err is None or (self.err is not None and self.err >= err):
            return self
        return LaurentNumber(self.field, self.lo, self.c, err)

    def relative_truncate(self, depth: int):
        """Keep ``depth`` coefficients below the leading one."""
        if len(self.c) == 0:
            return self
        return self.truncate(self.hi - depth)

    # -- arithmetic ---------------------------------------------------------
    def _combine(self, other, op):
        F = self.field
        err = _max_err(self.err, other.err)
        a, b = self, other
        if err is not None:
            a, b = a.truncate(err), b.truncate(err)
        if len(a.c) == 0:
            return LaurentNumber(F, b.lo, b.c if op == "add" else F.vneg(b.c), err)
        if len(b.c) == 0:
            return LaurentNumber(F, a.lo, a.c, err)
        lo = min(a.lo, b.lo)
        hi = max(a.hi, b.hi)
        out = np.zeros(hi - lo + 1, dtype=np.int64)
        out[a.lo - lo: a.lo - lo + len(a.c)] = a.c
        seg = slice(b.lo - lo, b.lo - lo + len(b.c))
        out[seg] = F.vadd(out[seg], b.c) if op == "add" else F.vsub(out[seg], b.c)
        return LaurentNumber(F, lo, out, err)

    def __add__(self, other):
        other = self._coerce(other)
        return self._combine(other, "add")

    def __sub__(self, other):
        other = self._coerce(other)
        return self._combine(other, "sub")

    def __radd__(self, other):
        return self._coerce(other) + self

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return LaurentNumber(self.field, self.lo, self.field.vneg(self.c), self.err)

    def _coerce(self, other):
        if isinstance(other, LaurentNumber):
            return other
        if isinstance(other, Poly):
            return LaurentNumber.from_poly(other)
        if isinstance(other, int):
            return LaurentNumber(self.field, 0, [self.field.from_int(other)])
        raise TypeError(f"cannot combine LaurentNumber with {type(other).__name__}")

    def scale(self, c: int):
        return LaurentNumber(self.field, self.lo, self.field.vscale(self.c, c), self.err)

    def shift(self, n: int):
        """Multiply by theta^n."""
        return LaurentNumber(self.field, self.lo + n, self.c, None if self.err is None else self.err + n)

    def _bound(self):
        """Exclusive degree bound: deg(value) < bound (None for exact zero)."""
        if self.hi is not None:
            return self.hi + 1 if self.err is None else max(self.hi + 1, self.err)
        return self.err

    def mul(self, other, prec=None):
        """Product; ``prec`` caps the result error degree from below (cheaper).

        With deg a < A and deg b < B: err = max(err_a + B - 1, A - 1 + err_b,
        err_a + err_b), never above A + B - 1 (the whole product is smaller).
        """
        other = self._coerce(other)
        F = self.field
        A, B = self._bound(), other._bound()
        if A is None or B is None:
            return LaurentNumber(F, 0, _EMPTY, None)
        a, b = self, other
        if prec is not None:
            a = a.truncate(prec - (B - 1))
            b = b.truncate(prec - (A - 1))
        cands = []
        if a.err is not None:
            cands.append(a.err + B - 1)
            if b.err is not None:
                cands.append(a.err + b.err)
        if b.err is not None:
            cands.append(A - 1 + b.err)
        err = min(max(cands), A + B - 1) if cands else None
        if prec is not None:
            err = prec if err is None else max(err, prec)
        if len(a.c) == 0 or len(b.c) == 0:
            return LaurentNumber(F, 0, _EMPTY, err)
        if err is not None:
            # only coefficients of the product at exponents >= err are needed
            da = max(0, err - b.hi - a.lo)
            db = max(0, err - a.hi - b.lo)
            ca, cb = a.c[da:], b.c[db:]
            if len(ca) == 0 or len(cb) == 0:
                return LaurentNumber(F, 0, _EMPTY, err)
            return LaurentNumber(F, a.lo + da + b.lo + db, F.conv(ca, cb), err)
        return LaurentNumber(F, a.lo + b.lo, F.conv(a.c, b.c), err)

    def __mul__(self, other):
        if isinstance(other, (LaurentNumber, Poly, int)):
            return self.mul(other)
        return NotImplemented

    def __rmul__(self, other):
        return self.mul(other)

    def inv(self, prec=None):
        """Multiplicative inverse by power-series inversion in 1/theta.

        Result err = max(err_a - 2 deg a, prec).  Exact inputs need ``prec``
        unless they are monomials.
        """
        F = self.field
        if len(self.c) == 0:
            raise IndeterminateError("indeterminate leading term")
        h = self.hi
        if len(self.c) == 1:
            mono = LaurentNumber(F, -h, [F.inv(int(self.c[0]))])
            if self.err is None:
                return mono
        target = None if self.err is None else self.err - 2 * h
        if prec is not None:
            target = prec if target is None else max(target, prec)
        if target is None:
            raise ValueError("working precision required to invert an exact non-monomial")
        n = -h - target + 1
        if n <= 0:
            return LaurentNumber(F, 0, _EMPTY, target)
        f = self.c[::-1][:n]
        g = _series_inverse(F, f, n)
        return LaurentNumber(F, -h - n + 1, g[::-1], target)

    def __truediv__(self, other):
        raise TypeError("use .inv(prec) for division at a working precision")

    def pow(self, n: int, prec=None):
        if n < 0:
            return self.inv(None if prec is None else prec).pow(-n, prec)
        result = LaurentNumber.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, prec)
            n >>= 1
            if n:
                base = base.mul(base, prec)
        return result

    def frobenius(self, n: int = 1, prec=None):
        """The q^n-th power map: exponents and err scale by q^n."""
        if n < 0:
            raise ValueError("use twist(-1) on exact values only")
        F = self.field
        if n == 0:
            return self.truncate(prec)
        Q = F.q ** n
        err = None if self.err is None else self.err * Q
        if prec is not None:
            err = prec if err is None else max(err, prec)
        if len(self.c) == 0:
            return LaurentNumber(F, 0, _EMPTY, err)
        c = self.c
        lo = self.lo
        if err is not None:
            # keep window indices k with (lo + k) * Q >= err
            kmin = max(0, -((-err) // Q) - lo) if err > lo * Q else 0
            c = c[kmin:]
            lo = lo + kmin
            if len(c) == 0:
                return LaurentNumber(F, 0, _EMPTY, err)
        out = np.zeros((len(c) - 1) * Q + 1, dtype=np.int64)
        out[::Q] = c
        return LaurentNumber(F, lo * Q, out, err)

    def inverse_frobenius(self):
        """q-th root, defined only for exact values with exponents divisible by q."""
        if self.err is not None:
            raise ValueError("not a q-th power: inexact value")
        q = self.field.q
        if len(self.c) == 0:
            return self
        if self.lo % q or np.any(np.flatnonzero(self.c) % q):
            raise ValueError("not a q-th power")
        return LaurentNumber(self.field, self.lo // q, self.c[::q])

    # -- comparison ---------------------------------------------------------
    def compare(self, other) -> str:
        """Three-valued equality: equal / unequal / indeterminate."""
        d = self - self._coerce(other)
        if len(d.c):
            return UNEQUAL
        return EQUAL if d.err is None else INDETERMINATE

    def agrees_with(self, other) -> bool:
        return self.compare(other) != UNEQUAL

    def margin(self, other):
        """(agree, margin) for a certification report.

        When the values agree, margin counts the certified exponents from the
        larger leading degree down to err.  Otherwise it is the distance from
        the leading discrepancy down to err (how far the failure is above noise).
        """
        other = self._coerce(other)
        d = self - other
        floor = d.err
        if len(d.c):
            return False, (d.hi - floor + 1) if floor is not None else None
        if floor is None:
            return True, None
        tops = [x.hi for x in (self, other) if x.hi is not None]
        top = max(tops) if tops else floor - 1
        return True, top - floor + 1

    def __eq__(self, other):
        if not isinstance(other, (LaurentNumber, Poly, int)):
            return NotImplemented
        o = self._coerce(other)
        return (self.err == o.err and self.lo == o.lo and np.array_equal(self.c, o.c)) or (
            len(self.c) == 0 and len(o.c) == 0 and self.err == o.err)

    __hash__ = None

    def __repr__(self):
        return format_laurent(self)

    # -- serialization ------------------------------------------------------
    def to_json(self, grade: int = 0):
        F = self.field
        return {
            "q": F.q,
            "coeffs": [[e, F.format_element(c)] for e, c in sorted(self.terms(), reverse=True)],
            "err_deg": self.err,
            "grade": grade,
        }


def laurent_from_json(F: FieldConfig, obj) -> LaurentNumber:
    from .parse import parse_coefficient

    terms = {int(e): parse_coefficient(s, F) for e, s in obj["coeffs"]}
    return LaurentNumber.from_terms(F, terms, obj.get("err_deg"))


def format_laurent(a: LaurentNumber, var: str = "x") -> str:
    """Highest exponent first, with an explicit ``O(x^err)`` marker."""
    F = a.field
    parts = []
    for e, c in sorted(a.terms(), reverse=True):
        cs = F.format_element(c)
        if e == 0:
            parts.append(cs)
            continue
        mono = var if e == 1 else f"{var}^{e}"
        parts.append(mono if c == 1 else f"{cs}*{mono}")
    if a.err is not None:
        parts.append(f"O({var}^{a.err})")
    return " + ".join(parts) if parts else "0"


def _series_inverse(F: FieldConfig, f, n: int):
    """1/f mod x^n for a power series f with f[0] != 0 (Newton iteration)."""
    g = np.array([F.inv(int(f[0]))], dtype=np.int64)
    m = 1
    while m < n:
        m = min(2 * m, n)
        fg = F.conv(f[:m], g)[:m]
        # e = f g - 1 (mod x^m), g <- g - g e
        fg = fg.copy()
        if len(fg) < m:
            fg = np.concatenate([fg, np.zeros(m - len(fg), dtype=np.int64)])
        fg[0] = F.sub(int(fg[0]), 1)
        corr = F.conv(g, fg)[:m]
        gg = np.zeros(m, dtype=np.int64)
        gg[: len(g)] = g
        g = F.vsub(gg, corr[:m] if len(corr) >= m else np.concatenate(
            [corr, np.zeros(m - len(corr), dtype=np.int64)]))
    return g[:n]
