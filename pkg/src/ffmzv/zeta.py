"""Power sums S_d(s) and Thakur multizeta values as precision-tracked numbers.

Tail bound: the monic polynomials of degree d are theta^d + b with b running
over the F_q-space V of polynomials of degree < d.  Since the power sums
sum_{b in V} b^K vanish for K < q^d - 1, expanding (theta^d + b)^(-s) in b
gives deg S_d(s) <= -s*d - (q^d - 1).  The multizeta enumeration keeps
exactly the degree tuples whose product bound can reach the target error.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import FieldConfig, LaurentNumber, Poly

ENUMERATION_LIMIT = 10 ** 7
DEFAULT_GUARD = 8

Composition = tuple


def as_composition(parts) -> tuple:
    comp = tuple(int(s) for s in parts)
    if not comp or any(s < 1 for s in comp):
        raise ValueError(f"composition parts must be positive integers: {parts!r}")
    return comp


def mzv_weight(c) -> int:
    return sum(c)


def mzv_depth(c) -> int:
    return len(c)


def compositions(weight: int, depth: int | None = None):
    """All compositions of ``weight`` (optionally of fixed depth), in lexicographic order."""
    out = []

    def rec(rest, prefix):
        if rest == 0:
            if depth is None or len(prefix) == depth:
                out.append(tuple(prefix))
            return
        if depth is not None and len(prefix) >= depth:
            return
        for s in range(1, rest + 1):
            rec(rest - s, prefix + [s])

    rec(weight, [])
    return sorted(out, reverse=True)


def power_sum_degree_bound(q: int, s: int, d: int) -> int:
    """Upper bound -(s*d + q^d - 1) for deg S_d(s)."""
    return -(s * d + q ** d - 1)


@dataclass(frozen=True)
class MzvRequest:
    composition: tuple
    err_deg: int
    config: FieldConfig

    def __post_init__(self):
        object.__setattr__(self, "composition", as_composition(self.composition))
        if self.err_deg >= 0:
            raise ValueError("err_deg must be negative")


def _monic_tails(F: FieldConfig, d: int, start: int, stop: int):
    """Coefficient vectors (low to high, length d) for indices [start, stop), lexicographic."""
    q = F.q
    for idx in range(start, stop):
        digits = []
        for _ in range(d):
            idx, r = divmod(idx, q)
            digits.append(r)
        yield digits[::-1]


def _partial_power_sum(F, s, d, prec, start, stop):
    acc = LaurentNumber.zero(F, prec)
    for tail in _monic_tails(F, d, start, stop):
        a = Poly(F, list(reversed(tail)) + [1]) if d else Poly.one(F)
        acc = acc + LaurentNumber.from_poly(a ** s).inv(prec)
    return acc


class ZetaEngine:
    """Memoizing evaluator for one field."""

    def __init__(self, F: FieldConfig, guard: int = DEFAULT_GUARD, threads: int = 1):
        self.F = F
        self.guard = guard
        self.threads = max(1, threads)
        self._lock = threading.Lock()
        self._sums = {}

    def power_sum(self, s: int, d: int, err: int) -> LaurentNumber:
        if s < 1 or d < 0:
            raise ValueError("need s >= 1 and d >= 0")
        F, q = self.F, self.F.q
        if q ** d > ENUMERATION_LIMIT:
            raise ValueError(f"enumeration guard exceeded: q^d = {q ** d} > {ENUMERATION_LIMIT}")
        key = (s, d)
        with self._lock:
            hit = self._sums.get(key)
        if hit is not None and hit.err is not None and hit.err <= err:
            return hit.truncate(err)
        bound = power_sum_degree_bound(q, s, d)
        if d == 0:
            val = LaurentNumber.one(F)
        elif bound < err:
            val = LaurentNumber.zero(F, err)
        else:
            prec = err - self.guard
            n = q ** d
            if self.threads == 1 or n < 64:
                val = _partial_power_sum(F, s, d, prec, 0, n)
            else:
                cuts = np.linspace(0, n, self.threads + 1).astype(int)
                with ThreadPoolExecutor(self.threads) as pool:
                    parts = list(pool.map(
                        lambda ij: _partial_power_sum(F, s, d, prec, int(ij[0]), int(ij[1])),
                        zip(cuts[:-1], cuts[1:])))
                val = LaurentNumber.zero(F, prec)
                for part in parts:
                    val = val + part
            val = val.truncate(err)
        if not val.is_zero_within_precision():
            assert val.degree() <= -s * d, "power sum violates the ultrametric bound"
            assert val.degree() <= bound, "power sum violates the tail bound"
        with self._lock:
            self._sums[key] = val
        return val

    def degree_tuples(self, comp, err: int):
        """Strictly decreasing (d_1 > ... > d_r >= 0) whose combined bound is >= err."""
        q = self.F.q
        budget = -err
        r = len(comp)
        out = []

        def cost(s, d):
            return s * d + q ** d - 1

        def rec(pos, upper, spent, prefix):
            if pos == r:
                out.append(tuple(prefix))
                return
            # positions after pos need at least degrees r-pos-1, ..., 0
            rest = sum(cost(comp[j], r - 1 - j) for j in range(pos + 1, r))
            d = r - 1 - pos
            while d <= upper and spent + cost(comp[pos], d) + rest <= budget:
                rec(pos + 1, d - 1, spent + cost(comp[pos], d), prefix + [d])
                d += 1

        rec(0, 10 ** 9, 0, [])
        return out

    def multizeta(self, comp, err: int) -> LaurentNumber:
        comp = as_composition(comp)
        if err >= 0:
            raise ValueError("err_deg must be negative")
        F = self.F
        prec = err - self.guard
        total = LaurentNumber.zero(F, prec)
        for ds in self.degree_tuples(comp, err):
            term = LaurentNumber.one(F)
            for s, d in zip(comp, ds):
                term = term.mul(self.power_sum(s, d, prec), prec)
            total = total + term
        return total.truncate(err)


_engines = {}
_engines_lock = threading.Lock()


def engine(F: FieldConfig, guard: int = DEFAULT_GUARD, threads: int = 1) -> ZetaEngine:
    key = (F, guard, threads)
    with _engines_lock:
        if key not in _engines:
            _engines[key] = ZetaEngine(F, guard, threads)
        return _engines[key]


def power_sum(F: FieldConfig, s: int, d: int, err: int, guard: int = DEFAULT_GUARD, threads: int = 1):
    return engine(F, guard, threads).power_sum(s, d, err)


def multizeta(req_or_F, comp=None, err=None, guard: int = DEFAULT_GUARD, threads: int = 1):
    """ζ_A(comp) to absolute precision ``err``; accepts an MzvRequest or (F, comp, err)."""
    if isinstance(req_or_F, MzvRequest):
        F, comp, err = req_or_F.config, req_or_F.composition, req_or_F.err_deg
    else:
        F = req_or_F
    return engine(F, guard, threads).multizeta(comp, err)
