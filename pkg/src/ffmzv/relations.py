"""Linear relations among precision-tracked values.

A relation sum_i a_i v_i = 0 with a_i in F_p, F_q or A_{<=D} is found as
the nullspace of the F_q-linear system given by the theta-exponent
coefficients of the combined window.  Only exponents where every v_i is
certified (e >= max err + D) produce rows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    FieldConfig, GradedNumber, LaurentNumber, Poly, RationalFunction, nullspace as _nullspace,
)

SAFETY_ROWS = 10


class InsufficientPrecision(ValueError):
    pass


@dataclass
class RelationCertificate:
    coefficients: list  # Poly per value
    precision_used: int
    margin: int
    reverified_at: int | None = None

    def to_json(self):
        from .algebra import format_poly
        return {
            "coefficients": [format_poly(c) for c in self.coefficients],
            "precision_used": self.precision_used,
            "margin": self.margin,
            "reverified_at": self.reverified_at,
        }


def nullspace_fq(F: FieldConfig, matrix, ncols: int | None = None):
    """Basis of the right nullspace over F_q (pivot-normalized, deterministic)."""
    return _nullspace(F, matrix, ncols)


def _units(values):
    grades = set()
    units = []
    for v in values:
        if isinstance(v, GradedNumber):
            grades.add(v.grade)
            units.append(v.unit)
        else:
            grades.add(0)
            units.append(v)
    if len(grades) > 1:
        raise ValueError("values of mixed grade: a vanishing sum must vanish gradewise")
    return units


def _parse_ring(ring):
    """('Fp'|'Fq', 0) or ('A', D)."""
    if isinstance(ring, tuple):
        return ring
    if ring in ("Fp", "Fq"):
        return ring, 0
    if isinstance(ring, str) and ring.startswith("A"):
        return "A", int(ring.split("<=")[-1]) if "<=" in ring else int(ring[1:])
    raise ValueError(f"unknown coefficient ring {ring!r}")


def residual(values, coeffs, prec=None) -> LaurentNumber:
    units = _units(values)
    F = units[0].field
    acc = None
    for a, v in zip(coeffs, units):
        if a.is_zero():
            continue
        term = v.mul(LaurentNumber.from_poly(a), prec)
        acc = term if acc is None else acc + term
    return acc if acc is not None else LaurentNumber.zero(F)


def relation_margin(values, coeffs) -> tuple:
    """(zero within precision?, certified depth below the largest term)."""
    units = _units(values)
    tops = [a.degree() + v.hi for a, v in zip(coeffs, units) if not a.is_zero() and v.hi is not None]
    r = residual(values, coeffs)
    if not r.is_zero_within_precision():
        return False, r.hi - r.err + 1 if r.err is not None else None
    if r.err is None:
        return True, None
    top = max(tops) if tops else r.err - 1
    return True, top - r.err + 1


def _build_system(units, kind, D):
    F = units[0].field
    errs = [v.err for v in units if v.err is not None]
    if not errs:
        raise InsufficientPrecision("all values exact: nothing to certify against")
    lo = max(errs) + D
    his = [v.hi for v in units if v.hi is not None]
    hi = (max(his) if his else lo) + D
    n = len(units)
    ncols = n * (D + 1)
    rows = []
    for e in range(lo, hi + 1):
        row = np.zeros(ncols, dtype=np.int64)
        for i, v in enumerate(units):
            for k in range(D + 1):
                row[i * (D + 1) + k] = v.coefficient(e - k) if v.err is None or e - k >= v.err else 0
        rows.append(row)
    M = np.array(rows, dtype=np.int64).reshape(len(rows), ncols)
    if kind == "Fp" and F.e > 1:
        # split each F_q entry into its e digits over F_p
        digits = F.digit_array[M]  # shape rows x cols x e
        M = digits.transpose(0, 2, 1).reshape(len(rows) * F.e, ncols)
        return M, FieldConfig.from_q(F.p), ncols
    return M, F, ncols


def _vector_to_coeffs(F, vec, n, D, solve_field):
    coeffs = []
    for i in range(n):
        block = vec[i * (D + 1): (i + 1) * (D + 1)]
        if solve_field is not F:
            block = [F.from_int(int(c)) for c in block]
        coeffs.append(Poly(F, block))
    return coeffs


def find_relations(values, ring="Fq", err: int | None = None, recompute=None, require=None):
    """Certified relations among ``values``.

    ``ring`` is "Fp", "Fq" or ("A", D).  ``recompute(err2)`` must return the
    same values at precision err2; each certificate is re-checked at twice the
    working precision.  ``require`` (an index) keeps only relations with a
    nonzero coefficient at that position.
    """
    kind, D = _parse_ring(ring)
    units = _units(values)
    if err is not None:
        units = [u.truncate(err) for u in units]
    F = units[0].field
    M, SF, ncols = _build_system(units, kind, D)
    if M.shape[0] < ncols + SAFETY_ROWS:
        raise InsufficientPrecision(
            f"insufficient precision: {M.shape[0]} rows for {ncols} unknowns (+{SAFETY_ROWS})")
    basis = nullspace_fq(SF, M, ncols)
    used = max(u.err for u in units if u.err is not None)
    certs = []
    for vec in basis:
        coeffs = _vector_to_coeffs(F, vec, len(units), D, SF)
        if require is not None and coeffs[require].is_zero():
            continue
        ok, margin = relation_margin(units, coeffs)
        if not ok:
            continue
        cert = RelationCertificate(coeffs, used, margin)
        if recompute is not None:
            stricter = 2 * used
            again = recompute(stricter)
            ok2, margin2 = relation_margin(again, coeffs)
            if not ok2:
                continue
            cert.reverified_at = stricter
        certs.append(cert)
    # a basis vector vanishing at ``require`` stays so in every combination,
    # so filtering the basis loses nothing
    return certs


def rational_reconstruct(Z, D: int, err: int | None = None):
    """a/b in lowest terms with b Z = a, deg a, deg b <= D; None when absent within bounds."""
    unit = Z.unit if isinstance(Z, GradedNumber) else Z
    F = unit.field
    if unit.is_exact() and err is None:
        top = unit.hi if unit.hi is not None else 0
        err = top - 4 * D - 2 * SAFETY_ROWS
    one = LaurentNumber.one(F)
    certs = find_relations([one, unit], ("A", D), err)
    for cert in certs:
        a, b = cert.coefficients
        if b.is_zero():
            continue
        r = RationalFunction(-a, b)
        check = unit.mul(LaurentNumber.from_poly(r.den)) - LaurentNumber.from_poly(r.num)
        if check.is_zero_within_precision():
            return r
    return None


def product_relation_search(F: FieldConfig, s, sp, err: int, guard: int | None = None,
                            corrupt: bool = False):
    """F_p-relation expressing zeta(s) zeta(s') through MZVs of weight w + w'.

    Candidates: all compositions of weight w + w' with depth <= depth(s) + depth(s').
    Returns (certificate, candidate list) or (None, candidates).  ``corrupt``
    perturbs the product by theta^(-w-w'-3) (negative control).
    """
    from .zeta import as_composition, compositions, multizeta

    s, sp = as_composition(s), as_composition(sp)
    w = sum(s) + sum(sp)
    cands = [c for c in compositions(w) if len(c) <= len(s) + len(sp)]

    def values_at(e):
        a = multizeta(F, s, e - 2)
        b = multizeta(F, sp, e - 2)
        prod = a.mul(b, e).truncate(e)
        if corrupt:
            prod = prod + LaurentNumber.monomial(F, -w - 3)
        return [prod] + [multizeta(F, c, e) for c in cands]

    certs = find_relations(values_at(err), "Fp", err, recompute=values_at, require=0)
    return (certs[0] if certs else None), cands
