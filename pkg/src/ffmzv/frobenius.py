"""Frobenius difference systems attached to polylog-type series.

For s = (s_1, ..., s_d) and Q = (Q_1, ..., Q_d) in A[t] the system is
psi^(-1) = Phi psi with Phi lower bidiagonal (diagonal (t - theta)^(s_j+...+s_d),
subdiagonal Q_j^(-1) (t - theta)^(s_j+...+s_d), last entry 1) and
psi = (Omega^W, Omega^(s_2+...+s_d) L_2, ..., L_{d+1}).

Conventions used throughout:

* Only forward twists are computed.  The identity checked is the one-fold
  twist psi = Phi^(1) psi^(1), whose entries involve Q_j itself, never a q-th root.
* Omega = theta~^(-q) P(t) with P(t) = prod_{i>=1}(1 - t/theta^(q^i)).  Every psi
  entry is theta~^m U_j with one common exponent m and a t-series U_j over
  k_inf.  With theta~^(q-1) = -theta the twisted identity becomes
  U = (-theta)^m Phi^(1) U^(1), an identity between t-series over k_inf.
* Omega^(i) = Omega / prod_{n=1}^{i}(t - theta^(q^n)) and
  P = prod_{n<=i}(-theta^(q^n)) * P_i(t) * P^(i) with P_i = prod_{n<=i}(1 - t/theta^(q^n)),
  so (Omega^s Q)^(i) = theta~^(-qs) c_i^s Q^(i) (P^(i))^s with
  c_i = prod_{n=1}^{i}(-theta^(q^n))^(-1); no power-series division is needed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    FieldConfig, GradedNumber, LaurentNumber, Poly, TPoly, TSeries, format_tpoly,
    minus_theta_power,
)
from .carlitz import carlitz
from .cmpl import CmplPoint, _evaluate, little_l_degree
from .report import VerificationReport
from .zeta import DEFAULT_GUARD, as_composition


class DecayError(ValueError):
    """Q violates the decay hypothesis (q-1)||Q_j|| < s_j q."""


def _as_tpoly(F, Q) -> TPoly:
    if isinstance(Q, TPoly):
        return Q
    if isinstance(Q, Poly):
        return TPoly.constant(Q)
    if isinstance(Q, int):
        return TPoly(F, [Poly.constant(F, F.from_int(Q))])
    raise TypeError(f"unsupported Q entry {Q!r}")


def tail_sums(comp):
    """sigma_j = s_j + ... + s_d for j = 1..d, then 0."""
    out = []
    acc = 0
    for s in reversed(comp):
        acc += s
        out.append(acc)
    return out[::-1] + [0]


def norm_degree(Q: TPoly) -> int | None:
    return Q.norm_degree()


def check_decay(q: int, comp, Qs):
    for s, Q in zip(comp, Qs):
        n = Q.norm_degree()
        if n is not None and (q - 1) * n >= s * q:
            raise DecayError(f"decay hypothesis violated: (q-1)*{n} >= {s}*q")


# -- Phi ---------------------------------------------------------------------

@dataclass(frozen=True)
class PhiEntry:
    """factor^(twist) * (t - theta)^power, with twist in {0, -1}."""
    factor: TPoly
    power: int
    twist: int = 0

    def forward(self) -> TPoly:
        """The entry of Phi^(1)."""
        F = self.factor.field
        lin = TPoly.t_minus(Poly.monomial(F, F.q))
        return self.factor.twist(self.twist + 1) * lin ** self.power

    def symbolic(self) -> str:
        base = "" if self.power == 0 else f"(t-x)^{self.power}"
        one = self.factor == TPoly.one(self.factor.field)
        fac = "" if one else f"({format_tpoly(self.factor)})" + ("^(-1)" if self.twist else "")
        return "*".join(p for p in (fac, base) if p) or "1"


def build_phi(F: FieldConfig, comp, Qs):
    """Phi as a matrix of PhiEntry (None for zero); subdiagonal entries carry twist -1."""
    comp = as_composition(comp)
    Qs = [_as_tpoly(F, Q) for Q in Qs]
    if len(Qs) != len(comp):
        raise ValueError("dimension mismatch between composition and Q tuple")
    d = len(comp)
    sig = tail_sums(comp)
    one = TPoly.one(F)
    phi = [[None] * (d + 1) for _ in range(d + 1)]
    for j in range(d + 1):
        phi[j][j] = PhiEntry(one, sig[j])
        if j >= 1:
            phi[j][j - 1] = PhiEntry(Qs[j - 1], sig[j - 1], -1)
    return phi


def forward_phi(phi):
    F = None
    for row in phi:
        for e in row:
            if e is not None:
                F = e.factor.field
    return [[TPoly(F) if e is None else e.forward() for e in row] for row in phi]


def is_lower_triangular(M) -> bool:
    return all(M[i][j].is_zero() for i in range(len(M)) for j in range(i + 1, len(M)))


def det_shape(phi1):
    """(c, s) with det Phi^(1) = c (t - theta^q)^s, via the triangular diagonal.

    Raises if the matrix is not lower triangular or the determinant has another shape.
    """
    if not is_lower_triangular(phi1):
        raise ValueError("determinant shape check needs a lower triangular matrix")
    F = phi1[0][0].field
    det = TPoly.one(F)
    for i in range(len(phi1)):
        det = det * phi1[i][i]
    root = Poly.monomial(F, F.q)
    s = 0
    while det.deg_t() > 0:
        quo, rem = det.divmod_linear(root)
        if not rem.is_zero():
            raise ValueError("det Phi is not a unit times a power of (t - theta)")
        det, s = quo, s + 1
    c = det[0]
    if c.is_zero() or c.degree() != 0:
        raise ValueError("det Phi is not a unit times a power of (t - theta)")
    return c, s


# -- the t-series part of psi --------------------------------------------------

def _c_power(F, i: int, s: int) -> LaurentNumber:
    """c_i^s = (prod_{n=1}^{i} (-theta^(q^n)))^(-s)."""
    deg = little_l_degree(F.q, i)
    sign = 1 if (i * s) % 2 == 0 else F.neg(1)
    return LaurentNumber.monomial(F, -s * deg, sign)


def _first_index_cap(q, comp, Qs, E):
    """Least I such that every term with i_1 > I has norm degree < E."""
    rest = sum(max(0, Q.norm_degree() or 0) for Q in Qs[1:])
    n1 = Qs[0].norm_degree()
    if n1 is None:
        return -1
    I = len(comp) - 1
    while q ** (I + 1) * n1 - comp[0] * little_l_degree(q, I + 1) + rest >= E:
        I += 1
    return I


def build_psi(F: FieldConfig, comp, Qs, t_trunc: int, err: int, guard: int = DEFAULT_GUARD):
    """(U, m): psi = theta~^m (U_1, ..., U_{d+1}) with U_1 = P^W, U_{j+1} = P^W R_{j+1}.

    Every coefficient of every U_j is certified to absolute degree ``err``.
    """
    comp = as_composition(comp)
    Qs = [_as_tpoly(F, Q) for Q in Qs]
    q = F.q
    check_decay(q, comp, Qs)
    d = len(comp)
    W = sum(comp)
    T = t_trunc
    E = err - guard
    pos = sum(max(0, Q.norm_degree() or 0) for Q in Qs)
    eP = E - pos
    cc = carlitz(F)
    P = cc.omega_product(T, eP)
    Ppow = {0: TSeries.one(F, T)}

    def ppow(n):
        if n not in Ppow:
            Ppow[n] = ppow(n - 1).mul(P, eP)
        return Ppow[n]

    U = [ppow(W)]
    zero = TSeries.zero(F, T)
    first_zero = next((j for j, Q in enumerate(Qs) if Q.is_zero()), d)
    I = _first_index_cap(q, comp[:first_zero], Qs[:first_zero], E) if first_zero else -1
    # G_k(i) = Q_k^(i) c_i^s (P^(i))^s
    G = {}

    def g(k, i):
        if (k, i) not in G:
            s = comp[k]
            Qi = TSeries.from_tpoly(Qs[k].twist(i), T)
            Pi = ppow(s).twist(i, eP)
            G[(k, i)] = Qi.mul(Pi, eP).scale(_c_power(F, i, s), eP)
        return G[(k, i)]

    prev = None  # prev[i] = sum over tuples ending with index i at position k-1
    for k in range(d):
        if k >= first_zero:
            U.append(zero)
            continue
        cur = {}
        if k == 0:
            for i in range(0, I + 1):
                cur[i] = g(0, i)
        else:
            tail = None
            idx = sorted(prev, reverse=True)
            suffix = {}
            for i in idx:
                tail = prev[i] if tail is None else tail + prev[i]
                suffix[i] = tail
            for i in range(0, I + 1 - k):
                above = suffix.get(i + 1)
                if above is None:
                    continue
                cur[i] = g(k, i).mul(above, eP)
        total = TSeries.zero(F, T)
        for i in sorted(cur):
            total = total + cur[i]
        prefix = sum(comp[: k + 1])
        U.append(ppow(W - prefix).mul(total, eP).truncate(err))
        prev = cur
    U[0] = U[0].truncate(err)
    return U, -q * W


# -- difference systems -------------------------------------------------------

@dataclass
class DifferenceSystem:
    field: FieldConfig
    phi1: list               # Phi^(1) as a matrix of TPoly
    U: list                  # t-series parts of psi
    m: int                   # common theta~ exponent of psi
    weight: int
    t_trunc: int
    err: int
    kind: str = "cmpl"
    composition: tuple = ()
    Q: tuple = ()
    phi: list | None = None  # symbolic Phi with twist markers (cmpl systems)
    parts: list = field(default_factory=list)
    psi_theta: object = None     # err -> list of GradedNumber (psi(theta))
    last_at_theta_q: object = None  # err -> GradedNumber (direct value at theta^q)
    orders_q: list = field(default_factory=list)  # lower bounds of order at theta^(q^N), N >= 1

    @property
    def dim(self):
        return len(self.U)

    def recipe(self):
        if self.kind == "cmpl":
            return {
                "kind": "cmpl",
                "composition": list(self.composition),
                "Q": [format_tpoly(Q) for Q in self.Q],
                "weight": self.weight,
            }
        return {"kind": self.kind, "weight": self.weight,
                "parts": [[p.recipe(), mult] for p, mult in self.parts]}

    def to_json(self):
        out = {"recipe": self.recipe(), "dim": self.dim, "t_trunc": self.t_trunc, "err_deg": self.err}
        if self.phi is not None:
            out["phi"] = [[None if e is None else e.symbolic() for e in row] for row in self.phi]
        else:
            out["phi_forward"] = [[format_tpoly(e) for e in row] for row in self.phi1]
        return out


def _nested_sum(r, bound, factor, E, i_min=0):
    """sum over i_1 > ... > i_r >= i_min of prod_k factor(k, i_k).

    ``bound(k, i)`` is an upper bound for deg factor(k, i), strictly decreasing in i.
    ``factor(k, i, err)`` returns the factor with absolute error degree <= err.
    """
    best = [0] * (r + 1)
    for k in range(r - 1, -1, -1):
        best[k] = best[k + 1] + bound(k, i_min + r - 1 - k)
    tuples = []

    def rec(k, upper, acc, prefix):
        if k == r:
            tuples.append((tuple(prefix), acc))
            return
        i = i_min + r - 1 - k
        while upper is None or i <= upper:
            f = bound(k, i)
            if acc + f + best[k + 1] < E:
                break
            rec(k + 1, i - 1, acc + f, prefix + [i])
            i += 1

    rec(0, None, 0, [])
    if not tuples:
        return None
    top = max(a for _, a in tuples)
    depth = top - E
    memo = {}

    def fac(k, i):
        if (k, i) not in memo:
            memo[(k, i)] = factor(k, i, bound(k, i) - depth)
        return memo[(k, i)]

    total = None
    for idx, _ in tuples:
        term = fac(0, idx[0])
        for k in range(1, r):
            term = term.mul(fac(k, idx[k]), E)
        total = term if total is None else total + term
    return total.truncate(E)


def series_at_theta(F, comp, Qs, err, guard=DEFAULT_GUARD) -> LaurentNumber:
    """R(theta) = sum_{i_1>...>i_r} prod_k Q_k^(i_k)(theta) / L_{i_k}^(s_k), from the rational form."""
    q = F.q
    Qs = [_as_tpoly(F, Q) for Q in Qs]
    if not comp:
        return LaurentNumber.one(F)
    if any(Q.is_zero() for Q in Qs):
        return LaurentNumber.zero(F)
    cc = carlitz(F)
    theta = Poly.theta(F)

    def bound(k, i):
        return q ** i * Qs[k].norm_degree() + Qs[k].deg_t() - comp[k] * little_l_degree(q, i)

    def factor(k, i, e):
        num = Qs[k].twist(i).evaluate(theta)
        den = cc.little_l(i) ** comp[k]
        if num.is_zero():
            return LaurentNumber.zero(F, e)
        return LaurentNumber.from_poly(den).inv(e - num.degree()).mul(LaurentNumber.from_poly(num), e)

    val = _nested_sum(len(comp), bound, factor, err - guard)
    return LaurentNumber.zero(F, err) if val is None else val.truncate(err)


def series_above_at_theta_q(F, comp, Qs, err, guard=DEFAULT_GUARD) -> GradedNumber:
    """L^{>=1}(theta^q) = sum_{i_1>...>i_r>=1} prod_k Q_k^(i_k)(theta^q) Omega^(i_k)(theta^q)^(s_k).

    Omega^(i)(theta^q) = theta~^(-q^(i+1)) prod_{n>i}(1 - theta^(q - q^n)) is evaluated
    directly from its product (no Frobenius law involved).
    """
    q = F.q
    Qs = [_as_tpoly(F, Q) for Q in Qs]
    r = len(comp)
    n = q - 1
    # theta~^(-s q^(i+1)) = theta~^g (-theta)^c with g fixed by s alone
    grades = [(-s) % n for s in comp]

    def carry(k, i):
        return (-comp[k] * q ** (i + 1) - grades[k]) // n

    at = Poly.monomial(F, q)

    def prod_part(i, e):
        val = LaurentNumber.one(F)
        m = i + 1
        while q ** m - q <= -e:
            val = val.mul(LaurentNumber.from_terms(F, {0: 1, q - q ** m: F.neg(1)}), e)
            m += 1
        return val.truncate(e)

    def bound(k, i):
        return q ** i * (Qs[k].norm_degree() or 0) + q * Qs[k].deg_t() + carry(k, i)

    def factor(k, i, e):
        num = Qs[k].twist(i).evaluate(at)
        if num.is_zero():
            return LaurentNumber.zero(F, e)
        c = carry(k, i)
        base = LaurentNumber.from_poly(num).mul(minus_theta_power(F, c))
        return base.mul(prod_part(i, e - num.degree() - c).pow(comp[k], e - num.degree() - c), e)

    E = err - guard
    val = _nested_sum(r, bound, factor, E, i_min=1)
    unit = LaurentNumber.zero(F, err) if val is None else val.truncate(err)
    return GradedNumber(unit, sum(grades))


def cmpl_system(F: FieldConfig, comp, Qs, t_trunc: int = 10, err: int = -40,
                guard: int = DEFAULT_GUARD) -> DifferenceSystem:
    """The system attached to (s, Q); Q entries in A or A[t]."""
    comp = as_composition(comp)
    Qs = tuple(_as_tpoly(F, Q) for Q in Qs)
    phi = build_phi(F, comp, Qs)
    U, m = build_psi(F, comp, Qs, t_trunc, err, guard)
    W = sum(comp)
    sig = tail_sums(comp)

    def psi_theta(e):
        cc = carlitz(F)
        om = cc.omega_at_theta(e - 4 * W - guard).pow(W, e - 2 * W)
        out = [om.truncate(e)]
        for j in range(1, len(comp) + 1):
            R = series_at_theta(F, comp[:j], Qs[:j], e - 4 * W - guard)
            out.append(om.mul(GradedNumber(R, 0), e).truncate(e))
        return out

    def last_q(e):
        return series_above_at_theta_q(F, comp, Qs, e, guard)

    orders = [sig[j] for j in range(len(comp))] + [0]
    return DifferenceSystem(F, forward_phi(phi), U, m, W, t_trunc, err, "cmpl", comp, Qs, phi,
                            psi_theta=psi_theta, last_at_theta_q=last_q, orders_q=orders)


def corrupt_phi(sys: DifferenceSystem) -> DifferenceSystem:
    """Negative control: flip the sign of the first subdiagonal entry of Phi^(1).

    In characteristic 2 a sign flip is invisible, so the entry is multiplied by theta instead.
    """
    F = sys.field
    phi1 = [list(row) for row in sys.phi1]
    i, j = (1, 0) if len(phi1) > 1 else (0, 0)
    phi1[i][j] = phi1[i][j] * (Poly.theta(F) if F.p == 2 else Poly.constant(F, F.neg(1)))
    out = DifferenceSystem(**{**sys.__dict__, "phi1": phi1, "phi": None})
    out.kind = sys.kind + "+corrupted"
    return out


def check_difference_equation(sys: DifferenceSystem) -> VerificationReport:
    """Residual U - (-theta)^m Phi^(1) U^(1), coefficient by coefficient.

    Checked for t-degrees <= t_trunc - (max t-degree of Phi^(1)).  The margin
    is the smallest, over entries, of (largest exponent in U_j) - (residual
    error degree) + 1: the number of exponents over which cancellation is certified.
    """
    F = sys.field
    T = sys.t_trunc
    shift = max(e.deg_t() for row in sys.phi1 for e in row if not e.is_zero())
    limit = T - shift
    scale = minus_theta_power(F, sys.m)
    Ut = [u.twist(1, sys.err) for u in sys.U]
    passed = True
    margins = []
    worst = None
    res_err = None
    for j, row in enumerate(sys.phi1):
        rhs = TSeries.zero(F, T)
        for k, entry in enumerate(row):
            if entry.is_zero():
                continue
            rhs = rhs + Ut[k].mul_tpoly(entry, sys.err - sys.m)
        rhs = rhs.scale(scale, sys.err)
        top = None
        floor = None
        for n in range(limit + 1):
            diff = sys.U[j][n] - rhs[n]
            if not diff.is_zero_within_precision():
                passed = False
                worst = (j, n, diff.hi - diff.err + 1)
            floor = diff.err if floor is None else max(floor, diff.err)
            h = sys.U[j][n].hi
            if h is not None:
                top = h if top is None else max(top, h)
        if top is not None and floor is not None:
            margins.append(top - floor + 1)
        if floor is not None:
            res_err = floor if res_err is None else max(res_err, floor)
    margin = min(margins) if margins else 0
    if not passed:
        margin = worst[2]
    return VerificationReport(f"difference equation ({sys.kind})", passed, margin, sys.err,
                              {"checked_t_degree": limit, "failure": worst, "residual_err": res_err})


# -- orders at theta^(q^N) -----------------------------------------------------

def order_of_tpoly(f: TPoly, a: Poly) -> int:
    """Exact order of vanishing of f at t = a."""
    if f.is_zero():
        raise ValueError("order of the zero polynomial")
    n = 0
    while True:
        quo, rem = f.divmod_linear(a)
        if not rem.is_zero():
            return n
        f, n = quo, n + 1


def exact_order(F: FieldConfig, omega_power: int, num: TPoly, den: TPoly, N: int) -> int:
    """ord at t = theta^(q^N) of Omega^a num/den; Omega has a simple zero there for N >= 1."""
    a = Poly.monomial(F, F.q ** N)
    om = omega_power if N >= 1 else 0
    return om + order_of_tpoly(num, a) - order_of_tpoly(den, a)


def _shift_tpoly(f: TPoly, a: Poly):
    """Coefficients of f(a + x) in x (exact)."""
    F = f.field
    out = []
    g = f
    while not g.is_zero():
        quo, rem = g.divmod_linear(a)
        out.append(rem)
        g = quo
    return out or [Poly.zero(F)]


def numeric_order(F: FieldConfig, omega_power: int, num: TPoly, den: TPoly, N: int, err: int = -60) -> int:
    """Same order read off numerically: expand in x = t - theta^(q^N) and locate the
    first coefficient with a certified nonzero leading term."""
    q = F.q
    a = Poly.monomial(F, q ** N)
    X = omega_power + num.deg_t() + 2
    # Omega(a + x) up to the theta~ prefactor: prod_i ((1 - a/theta^(q^i)) - x/theta^(q^i))
    ser = TSeries.one(F, X)
    I = 1
    while q ** I <= q ** N - err + 1:
        I += 1
    for i in range(1, I + 1):
        # the i = N factor has vanishing constant term (the simple zero of Omega)
        c0 = (LaurentNumber.zero(F) if i == N
              else LaurentNumber.from_terms(F, {0: 1, q ** N - q ** i: F.neg(1)}))
        c1 = LaurentNumber.monomial(F, -q ** i, F.neg(1))
        ser = ser.mul(TSeries(F, [c0, c1], X), err)
    powered = TSeries.one(F, X)
    for _ in range(omega_power):
        powered = powered.mul(ser, err)
    numx = TSeries(F, [LaurentNumber.from_poly(c) for c in _shift_tpoly(num, a)], X)
    top = powered.mul(numx, err)
    first_top = next(n for n in range(X + 1) if not top[n].is_zero_within_precision())
    denx = _shift_tpoly(den, a)
    first_den = next(n for n, c in enumerate(denx) if not c.is_zero())
    return first_top - first_den


def lower_part_orders(comp, N: int):
    """For L^{<N}_{j+1}: (p, zero order, pole bound, net) per pattern p = #{k : i_k >= N}.

    Terms with i_j < N can only have i_1, ..., i_p >= N with p <= j - 1, and
    (t - theta^(q^N)) divides P_i exactly when i >= N.
    """
    comp = as_composition(comp)
    j = len(comp)
    zero = sum(comp)
    rows = []
    for p in range(0, j):
        pole = sum(comp[:p])
        rows.append((p, zero, pole, zero - pole))
    return rows


def specialize_L(sys: DifferenceSystem, j: int, N: int, err: int) -> VerificationReport:
    """L_{j+1} at theta^(q^N) against (Li/pi~^w)^(q^N), for N in {0, 1}.

    N = 0: rational form at t = theta against independently evaluated Li and pi~.
    N = 1: L^{<1} vanishes by order bookkeeping; L^{>=1}(theta^q) is evaluated
    directly and compared with the q-th power of the N = 0 value (grades matched).
    """
    if sys.kind != "cmpl":
        raise ValueError("specialization is defined for polylog systems")
    if N not in (0, 1):
        raise ValueError("unsupported N (only 0 and 1)")
    F = sys.field
    comp, Qs = sys.composition[:j], sys.Q[:j]
    w = sum(comp)
    cc = carlitz(F)
    om = cc.omega_at_theta(err - 4 * w - 16).pow(w, err - 2 * w - 8)
    R = series_at_theta(F, comp, Qs, err - 4 * w - 16)
    L0 = om.mul(GradedNumber(R, 0), err).truncate(err)
    # independent: Li via the polylog evaluator (expanded over t-coefficients), pi~ separately
    pi_w = cc.pi_tilde(err - 4 * w - 16).pow(w, err - 2 * w - 8).inv(err - 4 * w - 8)
    lists = [[(m, h) for m, h in enumerate(Q.coeffs) if not h.is_zero()] for Q in Qs]
    Li = LaurentNumber.zero(F, err - 4 * w - 16)
    for combo in itertools.product(*lists):
        mexp = sum(m for m, _ in combo)
        pt = CmplPoint.make(F, comp, [h for _, h in combo])
        Li = Li + _evaluate(F, pt, err - 4 * w - 16 - mexp, DEFAULT_GUARD).shift(mexp)
    indep = pi_w.mul(GradedNumber(Li, 0), err).truncate(err)
    if N == 0:
        ok, margin = (L0.unit.margin(indep.unit) if L0.grade == indep.grade else (False, None))
        return VerificationReport(f"specialization N=0 j={j}", ok, margin, err,
                                  {"grade": L0.grade})
    rows = lower_part_orders(comp, N)
    orders_ok = all(net > 0 for _, _, _, net in rows)
    e1 = F.q * err
    powered = indep.frobenius(1, e1).truncate(e1)
    direct = series_above_at_theta_q(F, comp, Qs, e1)
    same_grade = powered.grade == direct.grade
    ok, margin = powered.unit.margin(direct.unit) if same_grade else (False, None)
    return VerificationReport(f"specialization N=1 j={j}", ok and orders_ok, margin, e1,
                              {"order_rows": rows, "orders_ok": orders_ok})


# -- MZ property ---------------------------------------------------------------

@dataclass
class MzReport:
    conditions: dict           # label -> VerificationReport
    tested_N: list
    c: object = None           # recovered constant (RationalFunction) or None
    note: str = ("entireness of psi is not certified by finite truncations; "
                 "conditions are checked on the computed windows")

    @property
    def passed(self):
        return all(r.passed for r in self.conditions.values())

    def lines(self):
        return [f"({k}) {r.line()}" for k, r in sorted(self.conditions.items())]

    def to_json(self):
        from .algebra import format_rational
        return {
            "passed": self.passed,
            "conditions": {str(k): r.to_json() for k, r in self.conditions.items()},
            "tested_N": self.tested_N,
            "c": None if self.c is None else format_rational(self.c),
            "note": self.note,
        }


def _graded_margin(a: GradedNumber, b: GradedNumber):
    if a.grade != b.grade:
        return False, None
    return a.unit.margin(b.unit)


def check_mz_property(sys: DifferenceSystem, Z, w: int, err: int = -40, c_degree: int = 8) -> MzReport:
    """Conditions (1)-(4) on the finite windows; Z is the value whose property is tested.

    (3) compares psi_1(theta) with 1/pi~^w and psi_last(theta) with c Z/pi~^w,
    c recovered by rational reconstruction; (4) is checked at N = 1.
    """
    from .relations import InsufficientPrecision, rational_reconstruct

    F = sys.field
    cc = carlitz(F)
    conds = {}
    # (1)
    res = check_difference_equation(sys)
    try:
        c0, s0 = det_shape(sys.phi1)
        det_ok = True
    except ValueError as exc:
        det_ok, s0 = False, str(exc)
    conds[1] = VerificationReport("difference equation and det shape", res.passed and det_ok,
                                  res.margin, res.err_deg, {"det_power": s0})
    # (2)
    n = len(sys.phi1)
    one = TPoly.one(F)
    last_col = [sys.phi1[i][n - 1] for i in range(n)]
    ok2 = all(e.is_zero() for e in last_col[:-1]) and last_col[-1] == one
    conds[2] = VerificationReport("last column (0,...,0,1)", ok2)
    # (3)
    vals = sys.psi_theta(err)
    inv_pi_w = cc.pi_tilde(err - 4 * w - 16).pow(w, err - 2 * w - 8).inv(err - 4 * w - 8)
    first_ok, first_margin = _graded_margin(vals[0], inv_pi_w.truncate(err))
    Zg = Z if isinstance(Z, GradedNumber) else GradedNumber(Z, 0)
    last = vals[-1]
    c = None
    last_ok = False
    last_margin = None
    if first_ok:
        pw = cc.pi_tilde(err - 4 * w - 16).pow(w, err - 4 * w - 8)
        scaled = last.mul(pw, err - 2 * w)
        if scaled.grade == Zg.grade and not Zg.unit.is_zero_within_precision():
            h = Zg.unit.degree()
            ratio = scaled.unit.mul(Zg.unit.inv(err - 2 * w - 2 * h), err - 2 * w - h)
            c = None
            for D in range(c_degree, -1, -1):
                try:
                    c = rational_reconstruct(ratio, D)
                    break
                except InsufficientPrecision:
                    continue  # shallow windows only support smaller degree bounds
            if c is not None and not c.is_zero():
                cz = Zg.unit.mul(LaurentNumber.from_rational(c, err - 4 * w - 100), err - 2 * w)
                target = inv_pi_w.mul(GradedNumber(cz, Zg.grade), err).truncate(err)
                last_ok, last_margin = _graded_margin(last.truncate(err), target)
    m3 = None if not (first_ok and last_ok) else min(first_margin, last_margin)
    conds[3] = VerificationReport("psi(theta) = (1/pi~^w, ..., cZ/pi~^w)", first_ok and last_ok, m3, err,
                                  {"first": first_ok, "last": last_ok})
    # (4) at N = 1
    orders_ok = all(o >= 1 for o in sys.orders_q[:-1])
    e1 = F.q * err
    powered = last.frobenius(1, e1).truncate(e1)
    direct = sys.last_at_theta_q(e1)
    ok4, m4 = _graded_margin(powered, direct)
    conds[4] = VerificationReport("psi(theta^q) = (0, ..., 0, (cZ/pi~^w)^q)", ok4 and orders_ok, m4, e1,
                                  {"orders": list(sys.orders_q)})
    return MzReport(conds, [1], c)


# -- combinations ----------------------------------------------------------------

def _kron2(A: DifferenceSystem, B: DifferenceSystem) -> DifferenceSystem:
    F = A.field
    T = min(A.t_trunc, B.t_trunc)
    err = max(A.err, B.err)
    na, nb = A.dim, B.dim
    phi1 = [[A.phi1[i][j] * B.phi1[k][l] for j in range(na) for l in range(nb)]
            for i in range(na) for k in range(nb)]
    tops = [u.sup_degree() or 0 for u in A.U + B.U]
    prec = err - max(0, max(tops))
    U = [A.U[i].mul(B.U[k], prec).truncate(err) for i in range(na) for k in range(nb)]

    def psi_theta(e):
        va, vb = A.psi_theta(e - 8), B.psi_theta(e - 8)
        return [x.mul(y, e).truncate(e) for x in va for y in vb]

    def last_q(e):
        return A.last_at_theta_q(e - 8).mul(B.last_at_theta_q(e - 8), e).truncate(e)

    orders = [oa + ob for oa in A.orders_q for ob in B.orders_q]
    return DifferenceSystem(F, phi1, U, A.m + B.m, A.weight + B.weight, T, err, "kronecker",
                            parts=[(A, 1), (B, 1)], psi_theta=psi_theta, last_at_theta_q=last_q,
                            orders_q=orders)


def kronecker_system(systems) -> DifferenceSystem:
    """Kronecker product of [(system, multiplicity), ...] (or plain systems)."""
    flat = []
    parts = []
    for item in systems:
        sys_, mult = item if isinstance(item, tuple) else (item, 1)
        flat.extend([sys_] * mult)
        parts.append((sys_, mult))
    if not flat:
        raise ValueError("empty product")
    out = flat[0]
    for nxt in flat[1:]:
        out = _kron2(out, nxt)
    if len(flat) > 1:
        out.parts = parts
    return out


def lifted_block_system(groups) -> DifferenceSystem:
    """Block-diagonal system from [(weight, [systems])], lower weights lifted by Omega^(w1 - w_i)."""
    groups = [(w, list(ss)) for w, ss in groups]
    members = [(w, s) for w, ss in groups for s in ss]
    if len(members) == 1:
        return members[0][1]
    F = members[0][1].field
    q = F.q
    w1 = max(w for w, _ in members)
    T = min(s.t_trunc for _, s in members)
    err = max(s.err for _, s in members)
    P = carlitz(F).omega_product(T, err - DEFAULT_GUARD)
    lin = TPoly.t_minus(Poly.monomial(F, q))
    n = sum(s.dim for _, s in members)
    phi1 = [[TPoly(F) for _ in range(n)] for _ in range(n)]
    U = []
    orders = []
    off = 0
    blocks = []
    for w, s in members:
        if s.m != -q * w:
            raise ValueError("member system is not normalized to its weight")
        lift = w1 - w
        factor = lin ** lift
        for i in range(s.dim):
            for j in range(s.dim):
                phi1[off + i][off + j] = s.phi1[i][j] * factor
        Pl = TSeries.one(F, T)
        for _ in range(lift):
            Pl = Pl.mul(P, err - DEFAULT_GUARD)
        U.extend(Pl.mul(u, err - DEFAULT_GUARD).truncate(err) for u in s.U)
        orders.extend(o + lift for o in s.orders_q)
        blocks.append((off, s.dim, lift))
        off += s.dim

    def psi_theta(e):
        cc = carlitz(F)
        out = []
        for (w, s) in members:
            lift = w1 - w
            om = cc.omega_at_theta(e - 4 * lift - 16).pow(lift, e - 2 * lift - 8)
            out.extend(om.mul(v, e).truncate(e) for v in s.psi_theta(e - 2 * lift - 8))
        return out

    out = DifferenceSystem(F, phi1, U, -q * w1, w1, T, err, "lifted",
                           parts=[(s, 1) for _, s in members], psi_theta=psi_theta,
                           orders_q=orders)
    out.blocks = blocks
    return out
