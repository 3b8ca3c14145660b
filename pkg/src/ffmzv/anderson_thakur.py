"""Anderson-Thakur polynomials H_n and the multizeta to polylog decomposition.

H_n = sum_j h_j t^j is recovered by solving the exact identities

    H_n^(d)(theta) = Gamma_s S_d(s) L_d^s,   s = n + 1,

for the F_q-coefficients c_{jm} of h_j = sum_m c_{jm} theta^m.  Twisting fixes
F_q, so the left side is sum c_{jm} theta^(m q^d + j), which is linear in the
unknowns.

The right sides come from two independent exact routes:

* brute force: sum over monic a of degree d of L_d^s / a^s (each a divides L_d);
* additive polynomial: e_d(X) = prod_{deg b < d}(X - b) is F_q-linear with
  linear coefficient c, so sum_b 1/(X + Y - b) = c / (e_d(X) + e_d(Y)).
  Reading off the Y^(s-1) coefficient at X = theta^d gives S_d(s) as an
  exact quotient with denominator e_d(theta^d)^s.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np

from .algebra import FieldConfig, LaurentNumber, Poly, RationalFunction, TPoly, solve
from .carlitz import carlitz
from .cmpl import CmplPoint, _evaluate, in_small_polydisc
from .report import VerificationReport
from .zeta import DEFAULT_GUARD, ENUMERATION_LIMIT, as_composition, multizeta


class SearchError(RuntimeError):
    pass


def theta_degree_bound(q: int, n: int) -> int:
    return n * q // (q - 1)


def _monic_polys(F: FieldConfig, d: int):
    for tail in itertools.product(range(F.q), repeat=d):
        yield Poly(F, list(reversed(tail)) + [1])


def rhs_brute_force(F: FieldConfig, s: int, d: int) -> Poly:
    """Gamma_s * sum_{a monic, deg d} L_d^s / a^s, computed exactly."""
    if F.q ** d > ENUMERATION_LIMIT:
        raise ValueError("enumeration guard exceeded")
    cc = carlitz(F)
    Ls = cc.little_l(d) ** s
    total = Poly.zero(F)
    rational = None
    for a in _monic_polys(F, d):
        quo, rem = divmod(Ls, a ** s)
        if rem.is_zero():
            total = total + quo
        else:
            piece = RationalFunction(Ls, a ** s)
            rational = piece if rational is None else rational + piece
    val = RationalFunction(total) if rational is None else rational + RationalFunction(total)
    val = val * RationalFunction(cc.carlitz_factorial(s))
    if not val.is_polynomial():
        raise ArithmeticError("RHS not integral")
    return val.num


def additive_coefficients(F: FieldConfig, d: int):
    """Coefficients alpha_i (of X^(q^i)) of e_d(X) = prod_{deg b < d}(X - b)."""
    q = F.q
    alpha = [Poly.one(F)]
    for k in range(d):
        beta = Poly.zero(F)
        for i, a in enumerate(alpha):
            beta = beta + a * Poly.monomial(F, k * q ** i)
        b = beta ** (q - 1)
        nxt = [Poly.zero(F)] * (len(alpha) + 1)
        for i, a in enumerate(alpha):
            nxt[i + 1] = nxt[i + 1] + a ** q
            nxt[i] = nxt[i] - b * a
        alpha = nxt
    return alpha


def power_sum_exact_parts(F: FieldConfig, s: int, d: int):
    """(N, E^s) with S_d(s) = N / E^s, via the additive polynomial e_d (not reduced)."""
    q = F.q
    alpha = additive_coefficients(F, d)
    E = Poly.zero(F)
    for i, a in enumerate(alpha):
        E = E + a * Poly.monomial(F, d * q ** i)
    c = alpha[0]
    # e(Y) truncated at Y^(s-1), as {exponent: Poly}
    eY = {q ** i: a for i, a in enumerate(alpha) if q ** i <= s - 1}
    powered = {0: Poly.one(F)}
    N = Poly.zero(F)
    for n in range(s):
        if s - 1 in powered:
            term = powered[s - 1] * E ** (s - 1 - n) * c
            N = N + term if n % 2 == 0 else N - term
        nxt = {}
        for e1, p1 in powered.items():
            for e2, p2 in eY.items():
                if e1 + e2 <= s - 1:
                    nxt[e1 + e2] = nxt.get(e1 + e2, Poly.zero(F)) + p1 * p2
        powered = nxt
    if (s - 1) % 2:
        N = -N
    return N, E ** s


def power_sum_exact(F: FieldConfig, s: int, d: int) -> RationalFunction:
    """S_d(s) in lowest terms (gcd reduction: keep d small)."""
    return RationalFunction(*power_sum_exact_parts(F, s, d))


def rhs_additive(F: FieldConfig, s: int, d: int):
    """(num, den) with Gamma_s S_d(s) L_d^s = num / den."""
    cc = carlitz(F)
    N, den = power_sum_exact_parts(F, s, d)
    return N * cc.little_l(d) ** s * cc.carlitz_factorial(s), den


def rhs_additive_poly(F: FieldConfig, s: int, d: int) -> Poly:
    num, den = rhs_additive(F, s, d)
    quo, rem = divmod(num, den)
    if not rem.is_zero():
        raise ArithmeticError("RHS not integral")
    return quo


@dataclass
class AtPolynomial:
    n: int
    value: TPoly
    certified_d_range: int
    t_degree_searched: list = field(default_factory=list)

    @property
    def coefficients(self):
        """t-coefficients h_0, h_1, ... as Poly."""
        return list(self.value.coeffs)

    def theta_degree(self) -> int:
        return max((h.degree() for h in self.value.coeffs), default=-1)


def twisted_value(H: TPoly, d: int) -> Poly:
    """H^(d)(theta)."""
    return H.twist(d).evaluate(Poly.theta(H.field))


class AtSolver:
    def __init__(self, F: FieldConfig, b_cap=None):
        self.F = F
        self.b_cap = b_cap
        self._brute = {}
        self._additive = {}
        self._polys = {}
        self._lock = threading.Lock()

    def rhs(self, s, d):
        key = (s, d)
        if key not in self._brute:
            self._brute[key] = rhs_brute_force(self.F, s, d)
        return self._brute[key]

    def rhs_alt(self, s, d):
        key = (s, d)
        if key not in self._additive:
            self._additive[key] = rhs_additive(self.F, s, d)
        return self._additive[key]

    def matches_alt(self, P: Poly, s, d) -> bool:
        """P == Gamma_s S_d(s) L_d^s, checked as P * den == num (no division)."""
        num, den = self.rhs_alt(s, d)
        return P * den == num

    def _system(self, s, M, B, D):
        """Equations over F_q: one per (d, exponent)."""
        F, q = self.F, self.F.q
        ncols = (B + 1) * (M + 1)
        rows, rhs = [], []
        for d in range(D + 1):
            R = self.rhs(s, d)
            where = {}
            for j in range(B + 1):
                for m in range(M + 1):
                    where.setdefault(m * q ** d + j, []).append(j * (M + 1) + m)
            exps = set(where) | {e for e, _ in R.terms()}
            for e in sorted(exps):
                row = np.zeros(ncols, dtype=np.int64)
                for col in where.get(e, []):
                    row[col] = 1
                rows.append(row)
                rhs.append(R[e] if 0 <= e <= R.degree() else 0)
        return np.array(rows, dtype=np.int64).reshape(len(rows), ncols), np.array(rhs, dtype=np.int64)

    def solve(self, n: int) -> AtPolynomial:
        if n < 0:
            raise ValueError("n must be >= 0")
        with self._lock:
            if n in self._polys:
                return self._polys[n]
        F, q = self.F, self.F.q
        s = n + 1
        M = theta_degree_bound(q, n)
        cap = self.b_cap if self.b_cap is not None else 4 * n + 4
        log = []
        for B in range(cap + 1):
            d0 = 0
            while q ** d0 <= B:
                d0 += 1
            D = max(1, d0) + 1
            A, b = self._system(s, M, B, D)
            x, nullity = solve(F, A, b)
            if x is None:
                log.append((B, "inconsistent"))
                continue
            assert nullity == 0, "solution not unique within the degree box"
            coeffs = []
            for j in range(B + 1):
                coeffs.append(Poly(F, x[j * (M + 1): (j + 1) * (M + 1)]))
            H = TPoly(F, coeffs)
            ok = True
            for d in range(D + 1):
                if not self.matches_alt(self.rhs(s, d), s, d):
                    raise ArithmeticError("independent RHS routes disagree")
            for d in range(2 * D + 3):
                if not self.matches_alt(twisted_value(H, d), s, d):
                    ok = False
                    break
            if not ok:
                log.append((B, "failed over-verification"))
                continue
            log.append((B, "solved"))
            res = AtPolynomial(n, H, 2 * D + 2, log)
            with self._lock:
                self._polys[n] = res
            return res
        raise SearchError(f"no solution within search bounds (t-degree cap {cap})")


_solvers = {}
_solvers_lock = threading.Lock()


def solver(F: FieldConfig) -> AtSolver:
    with _solvers_lock:
        if F not in _solvers:
            _solvers[F] = AtSolver(F)
        return _solvers[F]


def at_poly(F: FieldConfig, n: int) -> AtPolynomial:
    return solver(F).solve(n)


# -- decomposition ------------------------------------------------------------

@dataclass
class Decomposition:
    composition: tuple
    terms: list  # (exponent of theta in a_u, point as tuple of Poly)
    gamma_factor: Poly

    def to_json(self):
        from .algebra import format_poly
        return {
            "composition": list(self.composition),
            "gamma_factor": format_poly(self.gamma_factor),
            "terms": [{"a_exponent": m, "point": [format_poly(u) for u in pt]} for m, pt in self.terms],
        }


def decompose_mzv(F: FieldConfig, composition) -> Decomposition:
    comp = as_composition(composition)
    cc = carlitz(F)
    lists = []
    gamma = Poly.one(F)
    for s in comp:
        H = at_poly(F, s - 1)
        lists.append([(m, h) for m, h in enumerate(H.value.coeffs) if not h.is_zero()])
        gamma = gamma * cc.carlitz_factorial(s)
    terms = []
    for combo in itertools.product(*lists):
        terms.append((sum(m for m, _ in combo), tuple(h for _, h in combo)))
    return Decomposition(comp, terms, gamma)


def verify_decomposition(F: FieldConfig, composition, err: int, guard: int = DEFAULT_GUARD,
                         corrupt: bool = False) -> VerificationReport:
    """Gamma-product * zeta(s) against sum_u a_u Li_s(u), both evaluated independently.

    ``corrupt`` spoils the dominant term (negated a_u in odd characteristic,
    a_u * theta in characteristic 2) as a negative control.
    """
    comp = as_composition(composition)
    q = F.q
    dec = decompose_mzv(F, comp)
    E = err - guard
    g = dec.gamma_factor.degree()
    lhs = LaurentNumber.from_poly(dec.gamma_factor).mul(multizeta(F, comp, E - g), E)
    values = []
    for m, pt in dec.terms:
        P = CmplPoint.make(F, comp, pt)
        assert in_small_polydisc(P, q), "decomposition point outside the small polydisc"
        values.append(_evaluate(F, P, E - m, guard).shift(m))
    if corrupt and values:
        k = max(range(len(values)), key=lambda i: values[i].hi if values[i].hi is not None else -10 ** 9)
        values[k] = -values[k] if F.p != 2 else values[k].shift(1)
    rhs = LaurentNumber.zero(F, E)
    for v in values:
        rhs = rhs + v.truncate(E)
    lhs, rhs = lhs.truncate(err), rhs.truncate(err)
    agree, margin = lhs.margin(rhs)
    return VerificationReport(f"decomposition {comp}", agree, margin, err,
                              {"terms": len(dec.terms), "corrupted": corrupt})
