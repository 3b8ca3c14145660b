"""Carlitz constants: D_i, L_i, the Carlitz factorial, Omega and pi~.

Infinite products are cut at an index chosen by an explicit inequality:

* Omega product part ``prod_{i>=1} (1 - t/theta^(q^i))``: the factors with
  i > I change every t-coefficient by terms of degree <= -q^(I+1), so I is
  the least index with q^(I+1) > -err.
* At t = theta the omitted factors change the value by degree <= 1 - q^(I+1),
  so I is the least index with q^(I+1) > 1 - err.
"""

from __future__ import annotations

import functools
import threading

from .algebra import FieldConfig, GradedNumber, LaurentNumber, Poly, TSeries


def _theta_power(F: FieldConfig, n: int) -> Poly:
    return Poly.monomial(F, n)


def omega_cutoff(q: int, err: int, shift: int = 0) -> int:
    """Least I >= 0 with q^(I+1) > shift - err."""
    I = 0
    while q ** (I + 1) <= shift - err:
        I += 1
    return I


class CarlitzCache:
    """Memo tables for one field.  Lookups never change numerical results."""

    def __init__(self, F: FieldConfig):
        self.F = F
        self._lock = threading.Lock()
        self._D = {0: Poly.one(F)}
        self._L = {0: Poly.one(F)}
        self._gamma = {}
        self._pi = None
        self._omega_theta = None
        self._omega = {}

    # -- exact constants ----------------------------------------------------
    def big_d(self, i: int) -> Poly:
        """D_i = prod_{j<i} (theta^(q^i) - theta^(q^j)); deg D_i = i q^i."""
        if i < 0:
            raise ValueError("index must be >= 0")
        with self._lock:
            if i in self._D:
                return self._D[i]
        F, q = self.F, self.F.q
        top = _theta_power(F, q ** i)
        val = Poly.one(F)
        for j in range(i):
            val = val * (top - _theta_power(F, q ** j))
        with self._lock:
            self._D[i] = val
        return val

    def little_l(self, i: int) -> Poly:
        """L_i = prod_{j=1}^{i} (theta - theta^(q^j)); L_0 = 1."""
        if i < 0:
            raise ValueError("index must be >= 0")
        with self._lock:
            if i in self._L:
                return self._L[i]
        prev = self.little_l(i - 1)
        F = self.F
        val = prev * (Poly.theta(F) - _theta_power(F, F.q ** i))
        with self._lock:
            self._L[i] = val
        return val

    def carlitz_factorial(self, n: int) -> Poly:
        """Gamma_n = prod_i D_i^(m_i), where n - 1 = sum m_i q^i in base q."""
        if n < 1:
            raise ValueError("Carlitz factorial Gamma_n needs n >= 1")
        with self._lock:
            if n in self._gamma:
                return self._gamma[n]
        m = n - 1
        val = Poly.one(self.F)
        i = 0
        while m:
            m, digit = divmod(m, self.F.q)
            if digit:
                val = val * self.big_d(i) ** digit
            i += 1
        with self._lock:
            self._gamma[n] = val
        return val

    # -- Omega and pi~ ------------------------------------------------------
    def omega_prefactor(self) -> GradedNumber:
        """theta~^(-q)."""
        return GradedNumber.theta_tilde_power(self.F, -self.F.q)

    def omega_product(self, t_trunc: int, err: int) -> TSeries:
        """prod_{i>=1}(1 - t/theta^(q^i)) up to t^t_trunc, every coefficient to ``err``."""
        key = (t_trunc, err)
        with self._lock:
            if key in self._omega:
                return self._omega[key]
        F, q = self.F, self.F.q
        I = omega_cutoff(q, err)
        prod = TSeries.one(F, t_trunc)
        for i in range(1, I + 1):
            factor = TSeries(F, [LaurentNumber.one(F), LaurentNumber.monomial(F, -q ** i, F.neg(1))], t_trunc)
            prod = prod.mul(factor, err)
        prod = prod.truncate(err)
        with self._lock:
            self._omega[key] = prod
        return prod

    def omega_series(self, t_trunc: int, err: int):
        """(product part as a TSeries, graded prefactor theta~^(-q))."""
        return self.omega_product(t_trunc, err), self.omega_prefactor()

    def omega_product_at_theta(self, err: int) -> LaurentNumber:
        """prod_{i>=1}(1 - theta^(1-q^i)) to ``err``."""
        with self._lock:
            cached = self._omega_theta
        if cached is not None and cached.err <= err:
            return cached.truncate(err)
        F, q = self.F, self.F.q
        I = omega_cutoff(q, err, shift=1)
        val = LaurentNumber.one(F)
        for i in range(1, I + 1):
            val = val.mul(LaurentNumber.from_terms(F, {0: 1, 1 - q ** i: F.neg(1)}), err)
        val = val.truncate(err)
        with self._lock:
            if self._omega_theta is None or self._omega_theta.err > err:
                self._omega_theta = val
        return val

    def omega_at_theta(self, err: int) -> GradedNumber:
        """Omega(theta) = theta~^(-q) prod(1 - theta^(1-q^i)); unit accurate to ``err``."""
        pre = self.omega_prefactor()
        shift = -pre.unit.degree()
        unit = self.omega_product_at_theta(err + shift).mul(pre.unit, err)
        return GradedNumber(unit, pre.grade)

    def pi_tilde(self, err: int) -> GradedNumber:
        """pi~ = 1/Omega(theta), with grade 1 mod (q-1)."""
        with self._lock:
            cached = self._pi
        if cached is not None and cached.unit.err <= err:
            return cached.truncate(err)
        om = self.omega_at_theta(err - 8)
        h = om.unit.degree()
        om = self.omega_at_theta(err + 2 * h - 2)
        val = om.inv(err)
        val = val.truncate(err)
        with self._lock:
            if self._pi is None or self._pi.unit.err > err:
                self._pi = val
        return val

    def is_even_weight(self, w: int) -> bool:
        return w % (self.F.q - 1) == 0


@functools.lru_cache(maxsize=None)
def carlitz(F: FieldConfig) -> CarlitzCache:
    return CarlitzCache(F)


def big_d(F, i):
    return carlitz(F).big_d(i)


def little_l(F, i):
    return carlitz(F).little_l(i)


def carlitz_factorial(F, n):
    return carlitz(F).carlitz_factorial(n)


def omega_series(F, t_trunc, err):
    return carlitz(F).omega_series(t_trunc, err)


def pi_tilde(F, err):
    return carlitz(F).pi_tilde(err)


def is_even_weight(F, w):
    return carlitz(F).is_even_weight(w)
