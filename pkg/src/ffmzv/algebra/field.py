"""Finite fields F_q, q = p^e, in a polynomial basis over F_p.

Elements are stored as integer codes ``0 <= c < q``: the code of
``a_0 + a_1 x + ... + a_{e-1} x^{e-1}`` (mod the defining modulus) is
``a_0 + a_1 p + ... + a_{e-1} p^{e-1}``.  For e = 1 the code is the residue
itself.  Vectors of elements are numpy int64 arrays of codes, and ``conv``
multiplies coefficient sequences (polynomials over F_q).
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

# monic irreducible moduli over F_p, coefficients low -> high (leading 1 included)
DEFAULT_MODULI = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (3, 2): (1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (5, 2): (2, 0, 1),
    (3, 3): (1, 2, 0, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n ** 0.5) + 1))


def _pmod(a, m, p):
    """Remainder of a modulo monic m over F_p (lists, low -> high)."""
    a = [x % p for x in a]
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i]
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * m[j]) % p
    a = a[:dm]
    while a and a[-1] == 0:
        a.pop()
    return a


def is_irreducible_fp(modulus, p: int) -> bool:
    """Trial factorization of a monic polynomial over F_p."""
    e = len(modulus) - 1
    if e < 1 or modulus[-1] % p != 1:
        return False
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            if not _pmod(modulus, list(tail) + [1], p):
                return False
    return True


class FieldConfig:
    """The finite field F_q with q = p^e.

    >>> F = FieldConfig.from_q(4)
    >>> F.mul(2, 2)  # x * x = x + 1
    3
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if e < 1 or e > 8:
            raise ValueError("extension degree must be between 1 and 8")
        if modulus is None:
            try:
                modulus = DEFAULT_MODULI[(p, e)]
            except KeyError:
                raise ValueError(f"no built-in modulus for q={p}^{e}; pass one") from None
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != e + 1 or not is_irreducible_fp(modulus, p):
            raise ValueError(f"modulus {modulus} is not a monic irreducible of degree {e} over F_{p}")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus
        self._build_tables()

    @classmethod
    def from_q(cls, q: int, modulus=None) -> "FieldConfig":
        for p in range(2, q + 1):
            if q % p == 0:
                break
        e = 0
        n = q
        while n % p == 0:
            n //= p
            e += 1
        if n != 1:
            raise ValueError(f"{q} is not a prime power")
        return _cached_config(p, e, None if modulus is None else tuple(modulus))

    # -- tables -------------------------------------------------------------
    def digits(self, c: int):
        out = []
        for _ in range(self.e):
            out.append(c % self.p)
            c //= self.p
        return out

    def from_digits(self, ds) -> int:
        c = 0
        for d in reversed(list(ds)):
            c = c * self.p + int(d) % self.p
        return c

    def _build_tables(self):
        q, p = self.q, self.p
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        digs = [self.digits(c) for c in range(q)]
        for a in range(q):
            for b in range(q):
                add[a, b] = self.from_digits([(x + y) % p for x, y in zip(digs[a], digs[b])])
                prod = [0] * (2 * self.e - 1)
                for i, x in enumerate(digs[a]):
                    for j, y in enumerate(digs[b]):
                        prod[i + j] += x * y
                mul[a, b] = self.from_digits(_pmod(prod, self.modulus, p) + [0] * self.e)
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([self.from_digits([(-x) % p for x in digs[a]]) for a in range(q)],
                                  dtype=np.int64)
        self.sub_table = add[:, self.neg_table]
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_table = inv
        self.digit_array = np.array(digs, dtype=np.int64).reshape(q, self.e)
        self.prime = self.e == 1

    # -- scalar ops ---------------------------------------------------------
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def sub(self, a: int, b: int) -> int:
        return int(self.sub_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return int(self.inv_table[a])

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        while n:
            if n & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            n >>= 1
        return r

    def from_int(self, n: int) -> int:
        """Image of the integer n in the prime field."""
        return n % self.p

    # -- vector ops ---------------------------------------------------------
    def vadd(self, a, b):
        if self.prime:
            return (a + b) % self.p
        return self.add_table[a, b]

    def vsub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        return self.sub_table[a, b]

    def vneg(self, a):
        if self.prime:
            return (-a) % self.p
        return self.neg_table[a]

    def vscale(self, a, c: int):
        if self.prime:
            return (a * c) % self.p
        return self.mul_table[a, c]

    def vmul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        return self.mul_table[a, b]

    def conv(self, a, b):
        """Product of coefficient sequences a, b (numpy code arrays)."""
        if len(a) == 0 or len(b) == 0:
            return np.zeros(0, dtype=np.int64)
        if self.prime:
            if len(a) > 64 and len(b) > 64 and self.p ** 2 * min(len(a), len(b)) < 2 ** 40:
                return _fft_conv(a, b) % self.p
            return np.convolve(a, b) % self.p
        p, e = self.p, self.e
        da = self.digit_array[a]
        db = self.digit_array[b]
        n = len(a) + len(b) - 1
        acc = np.zeros((2 * e - 1, n), dtype=np.int64)
        for i in range(e):
            for j in range(e):
                acc[i + j] += np.convolve(da[:, i], db[:, j])
        acc %= p
        m = self.modulus
        for k in range(2 * e - 2, e - 1, -1):
            row = acc[k]
            for j in range(e):
                acc[k - e + j] = (acc[k - e + j] - row * m[j]) % p
        out = np.zeros(n, dtype=np.int64)
        for k in range(e - 1, -1, -1):
            out = out * p + acc[k]
        return out

    def __repr__(self):
        return f"FieldConfig(q={self.q})"

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and (self.p, self.e, self.modulus) == (
            other.p, other.e, other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    def __reduce__(self):
        return (FieldConfig, (self.p, self.e, self.modulus))

    # -- formatting ---------------------------------------------------------
    def format_element(self, c: int) -> str:
        if self.e == 1:
            return str(int(c))
        return "[" + ",".join(str(d) for d in self.digits(int(c))) + "]"

    def elements(self):
        return range(self.q)


def _fft_conv(a, b):
    n = len(a) + len(b) - 1
    size = 1 << (n - 1).bit_length()
    fa = np.fft.rfft(a.astype(np.float64), size)
    fb = np.fft.rfft(b.astype(np.float64), size)
    return np.rint(np.fft.irfft(fa * fb, size)[:n]).astype(np.int64)


@functools.lru_cache(maxsize=None)
def _cached_config(p, e, modulus):
    return FieldConfig(p, e, modulus)


class FieldElement:
    """An element of F_q with operator overloading (a thin wrapper over codes)."""

    __slots__ = ("field", "code")

    def __init__(self, field: FieldConfig, code: int):
        self.field = field
        self.code = int(code)

    def _lift(self, other):
        if isinstance(other, FieldElement):
            return other.code
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.code))

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is NotImplemented else FieldElement(
            self.field, self.field.mul(self.code, self.field.inv(o)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.code))

    def __pow__(self, n: int):
        return FieldElement(self.field, self.field.pow(self.code, n))

    def __eq__(self, other):
        o = self._lift(other)
        return o is not NotImplemented and o == self.code

    def __hash__(self):
        return hash((self.field, self.code))

    def __repr__(self):
        return self.field.format_element(self.code)
