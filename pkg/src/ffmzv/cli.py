"""Command-line entry point: ``ffmzv <command> [options]``.

Exit status: 0 on success or a passing check, 1 on a failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .algebra import (
    FieldConfig, GradedNumber, LaurentNumber, ParseError, Poly, RationalFunction, format_laurent,
    format_poly, format_rational, format_tpoly, parse_expr,
)

SCHEMA = 1


class UsageError(ValueError):
    pass


# -- argument helpers --------------------------------------------------------

def parse_composition(text: str) -> tuple:
    try:
        parts = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise UsageError(f"bad composition {text!r}; expected s1,s2,...") from None
    if not parts or any(p < 1 for p in parts):
        raise UsageError(f"bad composition {text!r}; entries must be positive")
    return parts


def parse_point(text: str, F: FieldConfig):
    return [parse_expr(p.strip(), F) for p in text.split(";")]


def field_from_args(args) -> FieldConfig:
    modulus = None
    if args.modulus:
        modulus = tuple(int(c) for c in args.modulus.split(","))
    return FieldConfig.from_q(args.q, modulus)


def _fmt(x):
    if isinstance(x, RationalFunction):
        return format_rational(x)
    if isinstance(x, Poly):
        return format_poly(x)
    return str(x)


def _graded_text(g: GradedNumber) -> str:
    body = format_laurent(g.unit)
    return body if g.grade == 0 else f"theta~^{g.grade} * ({body})"


def _series_json(ts):
    return [c.to_json() for c in ts.coeffs]


# -- value tokens for the relation commands -----------------------------------

def value_from_token(token: str, F: FieldConfig, err: int):
    """``zeta:S``, ``pi:N``, ``cmpl:S:POINT`` or ``one``, as a graded number."""
    from .carlitz import pi_tilde
    from .cmpl import cmpl_eval
    from .zeta import multizeta

    kind, _, rest = token.partition(":")
    if kind == "one":
        return GradedNumber(LaurentNumber.one(F), 0)
    if kind == "zeta":
        return GradedNumber(multizeta(F, parse_composition(rest), err), 0)
    if kind == "pi":
        n = int(rest)
        return pi_tilde(F, err - 4 * n - 8).pow(n, err).truncate(err)
    if kind == "cmpl":
        comp, _, point = rest.partition(":")
        return GradedNumber(cmpl_eval(F, parse_composition(comp), parse_point(point, F), err), 0)
    raise UsageError(f"unknown value token {token!r}")


def parse_ring(text: str):
    if text in ("Fp", "Fq"):
        return text
    if text.startswith("A:"):
        return ("A", int(text[2:]))
    raise UsageError(f"bad ring {text!r}; use Fp, Fq or A:D")


# -- commands ----------------------------------------------------------------
# each returns (json result, text lines, passed) where passed is None for pure computations

def cmd_zeta(F, args):
    from .zeta import multizeta
    comp = parse_composition(args.s)
    val = multizeta(F, comp, -args.prec, threads=args.threads)
    return ({"composition": list(comp), "value": val.to_json()},
            [f"zeta{comp} = {format_laurent(val)}"], None)


def cmd_powersum(F, args):
    from .zeta import power_sum
    val = power_sum(F, args.s, args.d, -args.prec, threads=args.threads)
    return ({"s": args.s, "d": args.d, "value": val.to_json()},
            [f"S_{args.d}({args.s}) = {format_laurent(val)}"], None)


def cmd_cmpl(F, args):
    from .cmpl import cmpl_eval
    comp = parse_composition(args.s)
    pt = parse_point(args.z, F)
    val = cmpl_eval(F, comp, pt, -args.prec)
    return ({"composition": list(comp), "point": [_fmt(u) for u in pt], "value": val.to_json()},
            [f"Li{comp}({'; '.join(_fmt(u) for u in pt)}) = {format_laurent(val)}"], None)


def _stuffle_label(term, r, rp):
    """Render a stuffle term with symbolic exponents s_j, s'_l and arguments z_j, z'_l."""
    sj = (lambda j: "s") if r == 1 else (lambda j: f"s{j + 1}")
    sl = (lambda l: "s'") if rp == 1 else (lambda l: f"s'{l + 1}")
    zj = (lambda j: "z") if r == 1 else (lambda j: f"z{j + 1}")
    zl = (lambda l: "z'") if rp == 1 else (lambda l: f"z'{l + 1}")
    exps, args = [], []
    for tag in term.recipe:
        if tag[0] == "L":
            exps.append(sj(tag[1]))
            args.append(zj(tag[1]))
        elif tag[0] == "R":
            exps.append(sl(tag[1]))
            args.append(zl(tag[1]))
        else:
            exps.append(f"{sj(tag[1])}+{sl(tag[2])}")
            args.append(f"{zj(tag[1])}{zl(tag[2])}")
    return f"Li_({','.join(exps)})({','.join(args)})"


def cmd_stuffle(F, args):
    """With --symbolic, --s and --sprime are the depths r and r'."""
    from .cmpl import stuffle_expand, stuffle_verify
    if args.symbolic:
        try:
            r, rp = int(args.s), int(args.sprime)
        except ValueError:
            raise UsageError("with --symbolic, --s and --sprime are depths") from None
        if r < 1 or rp < 1:
            raise UsageError("depths must be positive")
        # distinct placeholder entries make every stuffing a distinct term
        terms = stuffle_expand(tuple(range(1, r + 1)), tuple(range(10, 10 + rp)))
        labels = [_stuffle_label(t, r, rp) for t in terms]
        head = f"Li_s(z) * Li_s'(z') ="
        return ({"r": r, "rprime": rp, "terms": labels},
                [head] + [f"  + {lab}" for lab in labels], None)
    s, sp = parse_composition(args.s), parse_composition(args.sprime)
    if not args.z or not args.w:
        raise UsageError("stuffle needs --z and --w (or --symbolic)")
    z, w = parse_point(args.z, F), parse_point(args.w, F)
    labels = [_stuffle_label(t, len(s), len(sp)) for t in stuffle_expand(s, sp)]
    rep = stuffle_verify(F, s, sp, z, w, -args.prec, drop_term=0 if args.corrupt else None)
    return {"report": rep.to_json(), "terms": labels}, [rep.line()], rep.passed


def cmd_pi(F, args):
    from .carlitz import pi_tilde
    val = pi_tilde(F, -args.prec)
    return {"value": val.to_json()}, [f"pi~ = {_graded_text(val)}"], None


def cmd_omega(F, args):
    from .carlitz import omega_series
    ts, pre = omega_series(F, args.t_trunc, -args.prec)
    lines = [f"Omega = theta~^(-{F.q}) * P(t), prefactor {_graded_text(pre)}"]
    lines += [f"  t^{n}: {format_laurent(c)}" for n, c in enumerate(ts.coeffs)]
    return {"prefactor": pre.to_json(), "series": _series_json(ts)}, lines, None


def cmd_gamma(F, args):
    from .carlitz import carlitz_factorial
    val = carlitz_factorial(F, args.n)
    return {"n": args.n, "value": format_poly(val)}, [f"Gamma_{args.n} = {format_poly(val)}"], None


def cmd_bigD(F, args):
    from .carlitz import big_d
    val = big_d(F, args.i)
    return {"i": args.i, "value": format_poly(val)}, [f"D_{args.i} = {format_poly(val)}"], None


def cmd_littleL(F, args):
    from .carlitz import little_l
    val = little_l(F, args.i)
    return {"i": args.i, "value": format_poly(val)}, [f"L_{args.i} = {format_poly(val)}"], None


def cmd_at_poly(F, args):
    from .anderson_thakur import at_poly
    H = at_poly(F, args.n)
    out = {"n": args.n, "value": format_tpoly(H.value),
           "coefficients": [format_poly(h) for h in H.coefficients],
           "certified_d_range": H.certified_d_range}
    return out, [f"H_{args.n} = {format_tpoly(H.value)} (certified for d <= {H.certified_d_range})"], None


def cmd_decompose(F, args):
    from .anderson_thakur import decompose_mzv
    dec = decompose_mzv(F, parse_composition(args.s))
    lines = [f"Gamma * zeta{dec.composition} = sum of {len(dec.terms)} terms, Gamma = {format_poly(dec.gamma_factor)}"]
    lines += [f"  x^{m} * Li({', '.join(format_poly(u) for u in pt)})" for m, pt in dec.terms]
    return dec.to_json(), lines, None


def cmd_verify_decomposition(F, args):
    from .anderson_thakur import verify_decomposition
    rep = verify_decomposition(F, parse_composition(args.s), -args.prec, corrupt=args.corrupt)
    return {"report": rep.to_json()}, [rep.line()], rep.passed


def _system_from_args(F, comp, args, zeta_type):
    from .anderson_thakur import at_poly
    from .frobenius import cmpl_system
    if zeta_type:
        Qs = [at_poly(F, s - 1).value for s in comp]
    elif getattr(args, "Q", None):
        Qs = parse_point(args.Q, F)
        if any(isinstance(u, RationalFunction) for u in Qs):
            raise UsageError("Q entries must be polynomials")
    else:
        Qs = [Poly.one(F)] * len(comp)
    if len(Qs) != len(comp):
        raise UsageError("number of Q entries must match the composition depth")
    return cmpl_system(F, comp, Qs, args.t_trunc, -args.prec), Qs


def _target_value(F, comp, Qs, zeta_type, err):
    from .cmpl import cmpl_eval
    from .zeta import multizeta
    if zeta_type:
        return multizeta(F, comp, err)
    return cmpl_eval(F, comp, Qs, err)


def cmd_verify_frobenius(F, args):
    from .frobenius import check_difference_equation, corrupt_phi, det_shape
    comp = parse_composition(args.s)
    system, _ = _system_from_args(F, comp, args, args.zeta)
    if args.corrupt:
        system = corrupt_phi(system)
    rep = check_difference_equation(system)
    try:
        _, power = det_shape(system.phi1)
        rep.details["det_power"] = power
    except ValueError as exc:
        rep.details["det_power"] = None
        rep.details["det_error"] = str(exc)
        rep.passed = False
    return {"system": system.to_json(), "report": rep.to_json()}, [rep.line()], rep.passed


def cmd_mz_check(F, args):
    from .frobenius import check_mz_property, corrupt_phi
    comp = parse_composition(args.s)
    system, Qs = _system_from_args(F, comp, args, args.zeta)
    if args.corrupt:
        system = corrupt_phi(system)
    Z = _target_value(F, comp, Qs, args.zeta, -args.prec - 4 * sum(comp) - 16)
    w = sum(comp) + (1 if args.wrong_weight else 0)
    rep = check_mz_property(system, Z, w, -args.prec)
    lines = rep.lines() + [f"c = {_fmt(rep.c)}", rep.note]
    return {"system": system.to_json(), "mz": rep.to_json()}, lines, rep.passed


def cmd_kronecker(F, args):
    from .frobenius import check_mz_property, corrupt_phi, kronecker_system
    comp1, comp2 = parse_composition(args.s), parse_composition(args.sprime)
    sys1, Q1 = _system_from_args(F, comp1, argparse.Namespace(**{**vars(args), "Q": None}), args.zeta)
    sys2, Q2 = _system_from_args(F, comp2, argparse.Namespace(**{**vars(args), "Q": None}), args.zeta)
    prod = kronecker_system([sys1, sys2])
    if args.corrupt:
        prod = corrupt_phi(prod)
    E = -args.prec - 4 * (sum(comp1) + sum(comp2)) - 16
    Z = _target_value(F, comp1, Q1, args.zeta, E).mul(_target_value(F, comp2, Q2, args.zeta, E), E + 8)
    additive = prod.weight == sys1.weight + sys2.weight
    rep = check_mz_property(prod, Z, prod.weight, -args.prec)
    lines = rep.lines() + [f"weight {sys1.weight} + {sys2.weight} = {prod.weight}", f"c = {_fmt(rep.c)}"]
    return ({"system": prod.to_json(), "mz": rep.to_json(), "weight_additive": additive},
            lines, rep.passed and additive)


def cmd_relations(F, args):
    from .relations import find_relations
    ring = parse_ring(args.ring)
    err = -args.prec

    def values_at(e):
        vals = [value_from_token(v, F, e) for v in args.value]
        if args.corrupt:
            bump = GradedNumber(LaurentNumber.monomial(F, -7), vals[0].grade)
            vals[0] = vals[0] + bump
        return vals

    certs = find_relations(values_at(err), ring, err, recompute=values_at)
    lines = [f"{len(certs)} relation(s) among {', '.join(args.value)}"]
    if not certs:
        lines.append("  none within the degree and precision bounds (not a proof of independence)")
    for c in certs:
        terms = " + ".join(f"({format_poly(a)})*{v}" for a, v in zip(c.coefficients, args.value)
                           if not a.is_zero())
        lines.append(f"  {terms} = 0   margin={c.margin} reverified_at={c.reverified_at}")
    passed = bool(certs) if args.expect else None
    return {"values": args.value, "certificates": [c.to_json() for c in certs]}, lines, passed


def cmd_reconstruct(F, args):
    from .relations import rational_reconstruct
    err = -args.prec
    num = value_from_token(args.value, F, err - args.D * 4 - 16)
    if args.over:
        den = value_from_token(args.over, F, err - args.D * 4 - 16)
        if den.grade != num.grade:
            raise UsageError("value and divisor have different grades")
        h = den.unit.degree()
        unit = num.unit.mul(den.unit.inv(err - 2 * h - 8), err)
    else:
        unit = num.unit
    r = rational_reconstruct(unit.truncate(err), args.D)
    label = args.value + (f" / {args.over}" if args.over else "")
    return ({"value": label, "D": args.D, "result": None if r is None else format_rational(r)},
            [f"{label} = {_fmt(r) if r is not None else 'none within degree bound'}"],
            None if r is not None else False)


def cmd_product_relation(F, args):
    from .relations import product_relation_search
    s, sp = parse_composition(args.s), parse_composition(args.sprime)
    cert, cands = product_relation_search(F, s, sp, -args.prec, corrupt=args.corrupt)
    names = [f"zeta{s}*zeta{sp}"] + [f"zeta{c}" for c in cands]
    if cert is None:
        return {"certificate": None, "candidates": [list(c) for c in cands]}, ["no relation found"], False
    terms = " + ".join(f"{format_poly(a)}*{n}" for a, n in zip(cert.coefficients, names) if not a.is_zero())
    return ({"certificate": cert.to_json(), "candidates": [list(c) for c in cands]},
            [f"{terms} = 0   margin={cert.margin} reverified_at={cert.reverified_at}"], True)


def selftest_reports():
    """A quick invariant sweep covering every module; returns VerificationReports."""
    from .anderson_thakur import verify_decomposition
    from .carlitz import is_even_weight, pi_tilde
    from .cmpl import stuffle_verify
    from .frobenius import check_difference_equation, check_mz_property, cmpl_system, specialize_L
    from .relations import find_relations
    from .report import VerificationReport, compare_report
    from .zeta import multizeta

    out = []
    F2, F3 = FieldConfig.from_q(2), FieldConfig.from_q(3)
    z1 = multizeta(F2, (1,), -60)
    out.append(compare_report("q=2 zeta(1)^2 = zeta(2)", z1.mul(z1, -60).truncate(-60),
                              multizeta(F2, (2,), -60), -60))
    vals = [GradedNumber(multizeta(F3, (2,), -120), 0), pi_tilde(F3, -140).pow(2, -120).truncate(-120)]
    certs = find_relations(vals, ("A", 3), -120)
    out.append(VerificationReport("q=3 zeta(2) vs pi~^2 relation", bool(certs),
                                  certs[0].margin if certs else None, -120))
    x = Poly.theta(F3)
    out.append(stuffle_verify(F3, (1,), (2,), [x], [x + 1], -30))
    out.append(verify_decomposition(F3, (2, 1), -40))
    system = cmpl_system(F3, (2, 1), [1, 1], 8, -30)
    out.append(check_difference_equation(system))
    out.append(specialize_L(system, 2, 0, -30))
    mz = check_mz_property(system, multizeta(F3, (2, 1), -60), 3, -30)
    out.append(VerificationReport("q=3 MZ property (2,1)", mz.passed, None, -30))
    parity = all((not is_even_weight(F3, w)) == (pi_tilde(F3, -10).pow(w, -10).grade != 0)
                 for w in range(1, 9))
    out.append(VerificationReport("q=3 grade of pi~^w", parity))
    return out


def cmd_selftest(F, args):
    reps = selftest_reports()
    ok = all(r.passed for r in reps)
    return {"reports": [r.to_json() for r in reps]}, [r.line() for r in reps], ok


COMMANDS = {
    "zeta": cmd_zeta, "powersum": cmd_powersum, "cmpl": cmd_cmpl, "stuffle": cmd_stuffle,
    "pi": cmd_pi, "omega": cmd_omega, "gamma": cmd_gamma, "bigD": cmd_bigD, "littleL": cmd_littleL,
    "at-poly": cmd_at_poly, "decompose": cmd_decompose,
    "verify-decomposition": cmd_verify_decomposition, "verify-frobenius": cmd_verify_frobenius,
    "mz-check": cmd_mz_check, "kronecker": cmd_kronecker, "relations": cmd_relations,
    "reconstruct": cmd_reconstruct, "product-relation": cmd_product_relation, "selftest": cmd_selftest,
}


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=2, help="field size (prime power)")
    common.add_argument("--modulus", help="defining polynomial of F_q over F_p, low to high, e.g. 1,1,1")
    common.add_argument("--prec", type=int, default=40, help="work to O(theta^-N)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--manifest", help="write the run manifest to this file instead of the output")

    p = argparse.ArgumentParser(prog="ffmzv", description="Function field multizeta values and certificates.")
    p.add_argument("--version", action="version", version=f"ffmzv {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    def corrupt(sp):
        sp.add_argument("--corrupt", action="store_true", help="negative control: spoil the check")

    def system_opts(sp):
        sp.add_argument("--Q", help="Q entries in A, separated by ';' (default all 1)")
        sp.add_argument("--zeta", action="store_true", help="use Q_j = H_{s_j - 1} (multizeta systems)")
        sp.add_argument("--t-trunc", type=int, default=10)

    sp = add("zeta", "multizeta value")
    sp.add_argument("--s", required=True)
    sp = add("powersum", "power sum S_d(s)")
    sp.add_argument("--s", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp = add("cmpl", "multiple polylog value")
    sp.add_argument("--s", required=True)
    sp.add_argument("--z", required=True, help="point, entries separated by ';'")
    sp = add("stuffle", "stuffle expansion and check")
    sp.add_argument("--s", required=True)
    sp.add_argument("--sprime", required=True)
    sp.add_argument("--z")
    sp.add_argument("--w")
    sp.add_argument("--symbolic", action="store_true")
    corrupt(sp)
    add("pi", "Carlitz period")
    sp = add("omega", "the series Omega")
    sp.add_argument("--t-trunc", type=int, default=10)
    sp = add("gamma", "Carlitz factorial")
    sp.add_argument("--n", type=int, required=True)
    sp = add("bigD", "D_i")
    sp.add_argument("--i", type=int, required=True)
    sp = add("littleL", "L_i")
    sp.add_argument("--i", type=int, required=True)
    sp = add("at-poly", "Anderson-Thakur polynomial H_n")
    sp.add_argument("--n", type=int, required=True)
    sp = add("decompose", "multizeta as a combination of polylogs")
    sp.add_argument("--s", required=True)
    sp = add("verify-decomposition", "check the decomposition numerically")
    sp.add_argument("--s", required=True)
    corrupt(sp)
    sp = add("verify-frobenius", "difference equation residual")
    sp.add_argument("--s", required=True)
    system_opts(sp)
    corrupt(sp)
    sp = add("mz-check", "MZ property conditions")
    sp.add_argument("--s", required=True)
    system_opts(sp)
    sp.add_argument("--wrong-weight", action="store_true", help="negative control: test weight w+1")
    corrupt(sp)
    sp = add("kronecker", "MZ property of a Kronecker product")
    sp.add_argument("--s", required=True)
    sp.add_argument("--sprime", required=True)
    sp.add_argument("--zeta", action="store_true")
    sp.add_argument("--t-trunc", type=int, default=10)
    corrupt(sp)
    sp = add("relations", "linear relations among values")
    sp.add_argument("--value", action="append", required=True,
                    help="zeta:S, pi:N, cmpl:S:POINT or one (repeat)")
    sp.add_argument("--ring", default="Fq", help="Fp, Fq or A:D")
    sp.add_argument("--expect", action="store_true", help="exit 1 when no relation is found")
    corrupt(sp)
    sp = add("reconstruct", "rational function from a value")
    sp.add_argument("--value", required=True)
    sp.add_argument("--over", help="divide by this value first")
    sp.add_argument("--D", type=int, default=4)
    sp = add("product-relation", "F_p relation for zeta(s) zeta(s')")
    sp.add_argument("--s", required=True)
    sp.add_argument("--sprime", required=True)
    corrupt(sp)
    add("selftest", "quick invariant sweep")
    return p


def result_digest(result) -> str:
    blob = json.dumps(result, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def make_manifest(argv, F, args, result, wall):
    return {
        "schema": SCHEMA,
        "command": list(argv),
        "field": {"q": F.q, "p": F.p, "e": F.e, "modulus": list(F.modulus)},
        "precision": {"err_deg": -args.prec, "t_trunc": getattr(args, "t_trunc", None)},
        "version": __version__,
        "wall_time": round(wall, 3),
        "digest": result_digest(result),
    }


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        if args.prec <= 0:
            raise UsageError("--prec must be positive")
        F = field_from_args(args)
        result, lines, passed = COMMANDS[args.command](F, args)
    except (UsageError, ParseError, ValueError) as exc:
        # DomainError and DecayError are ValueErrors: bad input, not failed checks
        parser.print_usage(sys.stderr)
        print(f"ffmzv {args.command}: error: {exc}", file=sys.stderr)
        return 2
    wall = time.perf_counter() - start
    manifest = make_manifest(argv, F, args, result, wall)
    if args.json:
        # wall time and the command line live only in the manifest, so the
        # JSON output does not depend on --threads or timing
        payload = {"schema": SCHEMA, "command": args.command, "result": result,
                   "digest": manifest["digest"]}
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        print("\n".join(lines))
    if args.manifest:
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, sort_keys=True, indent=1)
    elif not args.json:
        print("manifest: " + json.dumps(manifest, sort_keys=True))
    return 1 if passed is False else 0


if __name__ == "__main__":
    sys.exit(main())
