"""Carlitz multiple polylogarithms at points of k, and stuffle products.

Li_s(u) = sum_{i_1 > ... > i_r >= 0} prod_j u_j^(q^i_j) / L_{i_j}^(s_j).

For u in k the q^i-th power is the i-fold twist, so every term is an exact
rational function.  The term degree is sum_j f_j(i_j) with
f_j(i) = q^i deg u_j - s_j deg L_i, and deg L_i = q(q^i - 1)/(q - 1).
On the small polydisc ((q-1) deg u_j < s_j q for all j) each f_j is strictly
decreasing, which bounds the enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import FieldConfig, LaurentNumber, Poly, RationalFunction
from .carlitz import carlitz
from .report import VerificationReport, compare_report
from .zeta import DEFAULT_GUARD, as_composition


class DomainError(ValueError):
    """Point outside the guaranteed-convergence polydisc."""


def _as_rational(F: FieldConfig, u) -> RationalFunction:
    if isinstance(u, RationalFunction):
        return u
    if isinstance(u, Poly):
        return RationalFunction(u)
    if isinstance(u, int):
        return RationalFunction(Poly.constant(F, F.from_int(u)))
    raise TypeError(f"unsupported coordinate {u!r}")


@dataclass(frozen=True)
class CmplPoint:
    composition: tuple
    coords: tuple

    @classmethod
    def make(cls, F, composition, coords):
        comp = as_composition(composition)
        pts = tuple(_as_rational(F, u) for u in coords)
        if len(pts) != len(comp):
            raise ValueError("point depth does not match composition depth")
        return cls(comp, pts)

    @property
    def depth(self):
        return len(self.composition)

    def has_zero(self) -> bool:
        return any(u.is_zero() for u in self.coords)


def little_l_degree(q: int, i: int) -> int:
    return q * (q ** i - 1) // (q - 1)


def in_small_polydisc(pt: CmplPoint, q: int) -> bool:
    """(q-1) deg u_j < s_j q for every j; zero coordinates count as inside."""
    for s, u in zip(pt.composition, pt.coords):
        if u.is_zero():
            continue
        if (q - 1) * u.degree() >= s * q:
            return False
    return True


def term_degree(q: int, s: int, du: int, i: int) -> int:
    return q ** i * du - s * little_l_degree(q, i)


def general_term_degree(q: int, comp, degs, idx) -> int:
    """Exact degree of the term with index tuple ``idx`` (raw degree arithmetic)."""
    return sum(term_degree(q, s, du, i) for s, du, i in zip(comp, degs, idx))


def general_term_degree_normalized(q: int, comp, degs, idx) -> Fraction:
    """Same degree written as sum_j q^i_j (deg u_j - s_j q/(q-1)) + sum_j s_j q/(q-1)."""
    total = Fraction(0)
    for s, du, i in zip(comp, degs, idx):
        c = Fraction(s * q, q - 1)
        total += q ** i * (du - c) + c
    return total


def top_degree(pt: CmplPoint, q: int) -> int:
    """Degree of the (r-1, ..., 0) term, an upper bound for deg Li on the small polydisc."""
    r = pt.depth
    degs = [u.degree() for u in pt.coords]
    return general_term_degree(q, pt.composition, degs, [r - 1 - k for k in range(r)])


def index_tuples(q: int, comp, degs, err: int, cap: int | None = None):
    """Index tuples i_1 > ... > i_r >= 0 whose term degree is >= err.

    Uses that each f_j is decreasing: for position k the later positions
    contribute at most f_j(r-1-j).  With ``cap`` (unsafe mode) indices are
    bounded by cap instead and no decay is assumed.
    """
    r = len(comp)
    best_rest = [0] * (r + 1)
    for k in range(r - 1, -1, -1):
        best_rest[k] = best_rest[k + 1] + term_degree(q, comp[k], degs[k], r - 1 - k)
    out = []

    def rec(k, upper, acc, prefix):
        if k == r:
            out.append(tuple(prefix))
            return
        i = r - 1 - k
        while upper is None or i <= upper:
            f = term_degree(q, comp[k], degs[k], i)
            if cap is None:
                if acc + f + best_rest[k + 1] < err:
                    break
            elif i > cap:
                break
            rec(k + 1, i - 1, acc + f, prefix + [i])
            i += 1

    rec(0, None, 0, [])
    return out


class _TermFactory:
    """g_j(i) = u_j^(q^i) / L_i^(s_j) as LaurentNumbers at a fixed relative depth."""

    def __init__(self, F, pt: CmplPoint, depth: int):
        self.F = F
        self.pt = pt
        self.depth = depth
        self._memo = {}
        self._cc = carlitz(F)

    def __call__(self, j: int, i: int) -> LaurentNumber:
        key = (j, i)
        if key in self._memo:
            return self._memo[key]
        F, q = self.F, self.F.q
        s, u = self.pt.composition[j], self.pt.coords[j]
        num = u.num.twist(i)
        den = u.den.twist(i) * self._cc.little_l(i) ** s
        f = num.degree() - den.degree()
        if den.degree() == 0:
            val = LaurentNumber.from_poly(num.scale(F.inv(den.leading())))
        else:
            prec = f - self.depth - num.degree()
            val = LaurentNumber.from_poly(den).inv(prec).mul(LaurentNumber.from_poly(num), f - self.depth)
        self._memo[key] = val
        return val


def _evaluate(F, pt: CmplPoint, err: int, guard: int, cap=None) -> LaurentNumber:
    q = F.q
    if pt.has_zero():
        return LaurentNumber.zero(F)
    degs = [u.degree() for u in pt.coords]
    E = err - guard
    tuples = index_tuples(q, pt.composition, degs, E, cap)
    if not tuples:
        return LaurentNumber.zero(F, err)
    top = max(general_term_degree(q, pt.composition, degs, t) for t in tuples)
    g = _TermFactory(F, pt, top - E)
    total = LaurentNumber.zero(F, E)
    for t in tuples:
        term = g(0, t[0])
        for j in range(1, len(t)):
            term = term.mul(g(j, t[j]), E)
        total = total + term
    return total.truncate(err)


def cmpl_eval(F: FieldConfig, composition, coords, err: int, guard: int = DEFAULT_GUARD) -> LaurentNumber:
    """Li_s(u) to absolute precision ``err``; the point must lie in the small polydisc."""
    pt = coords if isinstance(coords, CmplPoint) else CmplPoint.make(F, composition, coords)
    if not in_small_polydisc(pt, F.q):
        raise DomainError(
            f"point outside the small polydisc for {pt.composition}: need (q-1) deg u_j < s_j q")
    return _evaluate(F, pt, err, guard)


def cmpl_eval_unsafe(F: FieldConfig, composition, coords, err: int, index_cap: int,
                     guard: int = DEFAULT_GUARD):
    """Partial sum over indices <= index_cap, for points outside the small polydisc.

    The result carries no convergence certificate; the second return value says so.
    """
    pt = CmplPoint.make(F, composition, coords)
    return _evaluate(F, pt, err, guard, cap=index_cap), "non-rigorous: index-capped partial sum"


def carlitz_polylog(F: FieldConfig, n: int, z, err: int, guard: int = DEFAULT_GUARD) -> LaurentNumber:
    return cmpl_eval(F, (n,), (z,), err, guard)


# -- stuffle -----------------------------------------------------------------

@dataclass(frozen=True)
class StuffleTerm:
    composition: tuple
    recipe: tuple  # per position: ("L", j) | ("R", l) | ("M", j, l), 0-based

    def point(self, F, z, zp):
        coords = []
        for tag in self.recipe:
            if tag[0] == "L":
                coords.append(_as_rational(F, z[tag[1]]))
            elif tag[0] == "R":
                coords.append(_as_rational(F, zp[tag[1]]))
            else:
                coords.append(_as_rational(F, z[tag[1]]) * _as_rational(F, zp[tag[2]]))
        return CmplPoint(self.composition, tuple(coords))


def stuffle_expand(s, sp):
    """All stuffings of two compositions, ordered by length then lexicographically."""
    s, sp = as_composition(s), as_composition(sp)
    r, rp = len(s), len(sp)
    terms = []
    for n in range(max(r, rp), r + rp + 1):
        for left in itertools.combinations(range(n), r):
            lset = set(left)
            # the right positions must cover everything the left ones miss
            missing = [p for p in range(n) if p not in lset]
            extra = rp - len(missing)
            if extra < 0:
                continue
            for shared in itertools.combinations(left, extra):
                right = sorted(missing + list(shared))
                lpos = {p: j for j, p in enumerate(left)}
                rpos = {p: l for l, p in enumerate(right)}
                comp, recipe = [], []
                for p in range(n):
                    if p in lpos and p in rpos:
                        comp.append(s[lpos[p]] + sp[rpos[p]])
                        recipe.append(("M", lpos[p], rpos[p]))
                    elif p in lpos:
                        comp.append(s[lpos[p]])
                        recipe.append(("L", lpos[p]))
                    else:
                        comp.append(sp[rpos[p]])
                        recipe.append(("R", rpos[p]))
                terms.append(StuffleTerm(tuple(comp), tuple(recipe)))
    terms.sort(key=lambda t: (len(t.composition), t.composition, t.recipe))
    return terms


def stuffle_verify(F: FieldConfig, s, sp, z, zp, err: int, guard: int = DEFAULT_GUARD,
                   drop_term: int | None = None) -> VerificationReport:
    """Compare Li_s(z) Li_s'(z') against the stuffle sum.

    ``drop_term`` removes one RHS term (negative control).
    """
    q = F.q
    A = CmplPoint.make(F, s, z)
    B = CmplPoint.make(F, sp, zp)
    terms = stuffle_expand(s, sp)
    pts = [t.point(F, A.coords, B.coords) for t in terms]
    for p in [A, B] + pts:
        if not in_small_polydisc(p, q):
            raise DomainError(f"stuffle term {p.composition} leaves the small polydisc")
    topA = 0 if A.has_zero() else max(0, top_degree(A, q))
    topB = 0 if B.has_zero() else max(0, top_degree(B, q))
    E = err - guard
    lhs = _evaluate(F, A, E - topB, guard).mul(_evaluate(F, B, E - topA, guard), E)
    rhs = LaurentNumber.zero(F, E)
    for k, p in enumerate(pts):
        if k == drop_term:
            continue
        rhs = rhs + _evaluate(F, p, E, guard)
    return compare_report(
        f"stuffle {s} x {sp}", lhs.truncate(err), rhs.truncate(err), err,
        terms=len(terms) - (drop_term is not None))
