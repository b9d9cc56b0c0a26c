"""Command-line front end.

Every subcommand builds one record ``{"inputs", "results", "suite"}`` and
renders it as text, JSON or CSV.  Usage errors exit with 2; a missed
tolerance or a failed verification exits with 3.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import mpmath

from . import __version__, exppoly, lerch, liealg, suites, torsion_forms, torsion_p1
from .exppoly import AsymptoticValue, ExpPoly, evaluate_terms
from .lerch import Angle, BoundedValue, ToleranceUnreachable

EXIT_OK, EXIT_USAGE, EXIT_TOL = 0, 2, 3


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------- argument helpers


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {s!r}") from None


def _vector(s: str | None):
    if s is None:
        return None
    return tuple(_fraction(x) for x in s.split(","))


def _angle(args) -> tuple[Angle, dict]:
    if args.phi_pi is not None and args.phi is not None:
        raise UsageError("give either --phi-pi or --phi")
    if args.phi is not None:
        return Angle.from_float(args.phi), {"phi": args.phi, "angle": "inexact-angle"}
    f = _fraction(args.phi_pi or "0")
    return Angle.from_pi(f), {"phi_pi": str(f), "angle": "exact"}


def _space(args) -> liealg.HomogeneousSpace:
    if args.space_json:
        try:
            desc = json.loads(args.space_json)
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad --space-json: {exc}") from None
        kind = desc.get("type")
        if kind in liealg.CATALOGUE:
            sp = liealg.space(kind)
            if "lam" in desc or "x0" in desc:
                sp = liealg.HomogeneousSpace(
                    sp.name, sp.group,
                    tuple(Fraction(str(x)) for x in desc.get("lam", sp.lam)),
                    tuple(Fraction(str(x)) for x in desc.get("x0", sp.x0)),
                    sp.symmetric,
                )
        else:
            if "lam" not in desc:
                raise UsageError("a flag-variety description needs 'lam'")
            sp = liealg.flag_space(kind, [Fraction(str(x)) for x in desc["lam"]])
            if "x0" in desc:
                sp = sp.with_x0(tuple(Fraction(str(x)) for x in desc["x0"]))
        sp.validate()
        return sp
    return liealg.space(args.space)


# ---------------------------------------------------------------- record helpers


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _bv(b: BoundedValue) -> dict:
    return {"value": _c(b.value), "bound": b.bound}


def _asym(av: AsymptoticValue) -> dict:
    rec = {"value": _c(av.value), "bound": av.bound, "remainder_bound": av.remainder_bound,
           "terms": av.to_json()["terms"], "ledger": {}}
    with mpmath.workdps(lerch.WORK_DPS):
        for name, group in av.ledger.items():
            rec["ledger"][name] = {"value": _c(evaluate_terms(group, av.v)) if group else [0.0, 0.0], "count": len(group)}
    return rec


def _rows_from_results(results: dict) -> tuple[list[str], list[list]]:
    """Flatten {quantity: {value, bound}} records for CSV."""
    rows = []

    def walk(prefix, obj):
        if isinstance(obj, dict) and "value" in obj and isinstance(obj["value"], list):
            rows.append([prefix, obj["value"][0], obj["value"][1], obj.get("bound", "exact")])
            for k, sub in obj.get("ledger", {}).items():
                rows.append([f"{prefix}.ledger.{k}", sub["value"][0], sub["value"][1], ""])
        elif isinstance(obj, dict):
            for k, v in obj.items():
                walk(f"{prefix}.{k}" if prefix else k, v)

    walk("", results)
    return ["quantity", "re", "im", "bound"], rows


# ---------------------------------------------------------------- subcommands


def cmd_lerch(args) -> dict:
    z, ang = _angle(args)
    asy = lerch.lerch_sderiv_asymptotic(z, args.n, args.v, args.a, args.N)
    res = {"asymptotic": _bv(asy)}
    if not args.no_reference:
        ref = lerch.lerch_sderiv_reference(z, args.n, args.v + args.a, args.tol)
        res["reference"] = _bv(ref)
        res["difference"] = abs(asy.value - ref.value)
    return {"inputs": {**ang, "n": args.n, "v": args.v, "a": args.a, "N": args.N, "tol": args.tol}, "results": res}


def cmd_sum_log(args) -> dict:
    try:
        P = ExpPoly.from_json(json.loads(args.poly))
    except (json.JSONDecodeError, TypeError, ValueError, IndexError) as exc:
        raise UsageError(f"bad --poly: {exc}") from None
    asy = exppoly.sum_log_asymptotic(P, args.a, args.v, args.N)
    res = {"asymptotic": _asym(asy)}
    if not args.no_reference:
        res["exact"] = {"value": _c(exppoly.sum_log_exact(P, args.a, args.v)), "bound": "exact"}
    return {"inputs": {"poly": P.to_json(), "a": args.a, "v": args.v, "N": args.N}, "results": res}


def cmd_torsion_p1(args) -> dict:
    _, ang = _angle(args)
    if args.phi is not None:
        inp = torsion_p1.P1Input(args.ell, phi=args.phi, x0=_fraction(args.x0), N=args.N, tol=args.tol)
    else:
        inp = torsion_p1.P1Input(args.ell, phi_pi=_fraction(args.phi_pi or "0"), x0=_fraction(args.x0), N=args.N, tol=args.tol)
    res = {"exact": _bv(torsion_p1.p1_exact(inp)), "asymptotic": _asym(torsion_p1.p1_asymptotic(inp))}
    return {"inputs": {**ang, "ell": args.ell, "x0": args.x0, "N": args.N, "tol": args.tol}, "results": res}


def _x_inputs(args, sp):
    X = _vector(args.X)
    if X is not None and len(X) != sp.rs.dim:
        raise UsageError(f"X needs {sp.rs.dim} coordinates")
    return X


def cmd_torsion_sym(args) -> dict:
    sp = _space(args)
    X = _x_inputs(args, sp)
    res = {
        "exact": _bv(liealg.torsion_symmetric_exact(sp, args.ell, X, args.tol)),
        "asymptotic": _asym(liealg.torsion_symmetric_asymptotic(sp, args.ell, X, args.N)),
    }
    return {"inputs": _space_inputs(sp, args, X), "results": res}


def cmd_torsion_flag(args) -> dict:
    sp = _space(args)
    X = _x_inputs(args, sp)
    if X is None:
        raise UsageError("torsion-flag needs a regular --X")
    asy = liealg.torsion_flag_asymptotic(sp, args.ell, X, args.N)
    res = {"asymptotic": _asym(asy), "fixed_point_leading": {"value": _c(liealg.fixed_point_leading(sp, args.ell, X)), "bound": "exact"}}
    return {"inputs": _space_inputs(sp, args, X), "results": res}


def _space_inputs(sp, args, X) -> dict:
    return {"space": sp.name, "group": sp.group, "lam": [str(x) for x in sp.lam], "x0": [str(x) for x in sp.x0],
            "ell": args.ell, "X": None if X is None else [str(x) for x in X], "N": args.N}


def cmd_jantzen(args) -> dict:
    lam = _vector(args.lam)
    sp = liealg.flag_space(args.group, lam)
    X = _x_inputs(args, sp)
    pair = liealg.jantzen_pair(args.group, lam, args.ell, X, args.N)
    res = {"exact": {"value": _c(pair["exact"]), "bound": "exact"}, "asymptotic": _asym(pair["asymptotic"])}
    if X is None:
        res["log_coefficients"] = {str(k): str(v) for k, v in liealg.jantzen_log_coefficients(sp, args.ell).items()}
    return {"inputs": {"group": args.group, "lam": [str(x) for x in lam], "ell": args.ell,
                       "X": None if X is None else [str(x) for x in X], "N": args.N}, "results": res}


def cmd_lie_torsion(args) -> dict:
    res = {"series": _bv(torsion_p1.lie_series(args.ell, args.t, args.K))}
    if args.ell >= 1 and 0 < args.t < 2 * mpmath.pi:
        parts = torsion_p1.lie_asymptotic(args.ell, args.t, args.N)
        res["asymptotic"] = {k: _asym(v) for k, v in parts.items()}
    return {"inputs": {"ell": args.ell, "t": args.t, "N": args.N, "K": args.K}, "results": res}


_FORM_HEADER = ["section", "n", "m", "monomial", "term", "power_of_ell", "log_power", "exact", "re", "im", "bound"]


def cmd_torsion_form(args) -> dict:
    n, N = args.degree, args.N
    if args.symbolic == (args.ell is not None):
        raise UsageError("give exactly one of --symbolic and --ell")
    if not 0 <= n <= 8 or not 1 <= N <= 10:
        raise UsageError("need 0 <= degree <= 8 and 1 <= N <= 10")
    rows = []
    ledger = {}
    if args.symbolic:
        form = torsion_forms.assemble_torsion_form(n, "symbolic", N)
        for mono, coeff in form.items():
            name = form.monomial_name(mono)
            for j, p, c in coeff.items():
                b = c.evaluate()
                rows.append(["form", n, "", name, "total", j, p, repr(c), b.value.real, 0.0, b.bound])
        for m in range(n // 2 + 1):
            for origin, part in torsion_forms.t_terms_symbolic(m, N).items():
                for j, p, c in part.items():
                    b = c.evaluate()
                    rows.append(["T", n, m, "", origin, j, p, repr(c), b.value.real, 0.0, b.bound])
                    ledger.setdefault(str(m), {}).setdefault(origin, []).append({"power_of_ell": j, "log_power": p, "coefficient": repr(c)})
    else:
        ell = args.ell
        form = torsion_forms.assemble_torsion_form(n, "numeric", N, ell=ell)
        exact = torsion_forms.assemble_torsion_form(n, "numeric", N, ell=ell, source="exact")
        for (mono, c), (_, e) in zip(form.items(), exact.items()):
            name = form.monomial_name(mono)
            rows.append(["form", n, "", name, "asymptotic", "", "", "", c.value.real, c.value.imag, c.bound])
            rows.append(["form", n, "", name, "exact", "", "", "", e.value.real, e.value.imag, e.bound])
        for m in range(n // 2 + 1):
            for origin, val in torsion_forms.t_coeff_ledger(ell, m, N).items():
                if origin == "T25_bound":
                    rows.append(["T", n, m, "", "T25", "", "", "", "", "", val])
                else:
                    rows.append(["T", n, m, "", origin, "", "", "", val, 0.0, ""])
                ledger.setdefault(str(m), {})[origin] = val
            t = torsion_forms.t_coeff_exact(ell, m)
            rows.append(["T", n, m, "", "exact", "", "", "", t.value.real, t.value.imag, t.bound])
    return {
        "inputs": {"degree": n, "N": N, "mode": "symbolic" if args.symbolic else "numeric", "ell": args.ell},
        "results": {"table": [dict(zip(_FORM_HEADER, r)) for r in rows], "ledger": ledger},
        "_csv": (_FORM_HEADER, rows),
    }


def cmd_puchol(args) -> dict:
    ok, parts = torsion_forms.puchol_check(args.degree, args.N)
    res = {"holds": ok}
    for side in ("lhs", "rhs"):
        res[side] = {parts[side].monomial_name(mono): repr(c) for mono, c in parts[side].items()}
    rec = {"inputs": {"degree": args.degree, "N": args.N}, "results": res,
           "_csv": (["side", "monomial", "coefficient"],
                    [[side, k, v] for side in ("lhs", "rhs") for k, v in res[side].items()])}
    rec["_text"] = [f"identity holds: {ok}"] + [f"{side} {k}: {v}" for side, k, v in rec["_csv"][1]]
    if not ok:
        rec["_failed"] = True
    return rec


def cmd_verify(args) -> dict:
    if args.suite == "acceptance":
        checks = []
        for k, (title, _) in suites.CRITERIA.items():
            ok, sub = suites.run_criterion(k, args.seed)
            checks.append(suites.Check(f"criterion {k}: {title}", ok, "; ".join(c.line() for c in sub if not c.ok)))
    else:
        checks = suites.run_suite(args.suite, args.seed)
    passed = sum(c.ok for c in checks)
    rec = {
        "inputs": {"suite": args.suite, "seed": args.seed},
        "results": {"passed": passed, "failed": len(checks) - passed,
                    "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in checks]},
        "suite": args.suite,
        "_csv": (["name", "ok", "detail"], [[c.name, c.ok, c.detail] for c in checks]),
        "_text": [c.line() for c in checks] + [f"{passed}/{len(checks)} passed"],
    }
    if passed != len(checks):
        rec["_failed"] = True
    return rec


# ---------------------------------------------------------------- parser


def _add_angle(p):
    p.add_argument("--phi-pi", help="angle as a rational multiple of pi, e.g. 1/3")
    p.add_argument("--phi", type=float, help="angle in radians (inexact)")


def _add_format(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--json", dest="fmt", action="store_const", const="json")
    g.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    g.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.set_defaults(fmt="text")


def _add_space(p):
    p.add_argument("--space", default="P1", help=f"catalogue id: {', '.join(sorted(liealg.CATALOGUE))}")
    p.add_argument("--space-json", help='e.g. {"type": "A2", "lam": [1, 0, -1]} or {"type": "P2", "x0": [...]}')
    p.add_argument("--X", help="torus point as comma-separated rationals")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-12)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="torsionkit", description="Asymptotics of analytic torsion and Lerch-type sums.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    p = sub.add_parser("lerch", help="s-derivative of the Lerch function at a negative integer")
    _add_angle(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--no-reference", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_lerch)

    p = sub.add_parser("sum-log", help="sum_{k=1}^{v+a} P(k) log k for an exponential polynomial P")
    p.add_argument("--poly", required=True, help="JSON rows [re, im, n, r, phi_num, phi_den, psi_num, psi_den]")
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--no-reference", action="store_true")
    _add_format(p)
    p.set_defaults(func=cmd_sum_log)

    p = sub.add_parser("torsion-p1", help="equivariant torsion of O(ell) on P1 under a rotation")
    _add_angle(p)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--x0", default="1", help="metric scale (rational)")
    p.add_argument("--N", type=int, default=8)
    p.add_argument("--tol", type=float, default=1e-12)
    _add_format(p)
    p.set_defaults(func=cmd_torsion_p1)

    p = sub.add_parser("torsion-sym", help="torsion on a symmetric space of the catalogue")
    _add_space(p)
    _add_format(p)
    p.set_defaults(func=cmd_torsion_sym)

    p = sub.add_parser("torsion-flag", help="torsion at a regular torus point")
    _add_space(p)
    _add_format(p)
    p.set_defaults(func=cmd_torsion_flag)

    p = sub.add_parser("jantzen", help="Jantzen sum of a flag variety")
    p.add_argument("--group", required=True)
    p.add_argument("--lam", required=True, help="comma-separated rationals")
    p.add_argument("--X")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--N", type=int, default=8)
    _add_format(p)
    p.set_defaults(func=cmd_jantzen)

    p = sub.add_parser("lie-torsion", help="torsion as a function of the Lie parameter t")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--K", type=int, default=60)
    _add_format(p)
    p.set_defaults(func=cmd_lie_torsion)

    p = sub.add_parser("torsion-form", help="degree-2n torsion form of the projectivized bundle")
    p.add_argument("--degree", type=int, required=True, help="n, the form has degree 2n")
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--ell", type=int)
    p.add_argument("--N", type=int, default=6)
    _add_format(p)
    p.set_defaults(func=cmd_torsion_form)

    p = sub.add_parser("puchol", help="leading-term identity for the fiber integral")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--N", type=int, default=6)
    _add_format(p)
    p.set_defaults(func=cmd_puchol)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default="all", choices=sorted(suites.SUITES) + ["all", "acceptance"])
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=cmd_verify)
    return ap


# ---------------------------------------------------------------- rendering


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return _c(x)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return _c(complex(x))
    raise TypeError(f"cannot encode {type(x).__name__}")


def render(rec: dict, fmt: str) -> str:
    public = {"inputs": rec["inputs"], "results": rec["results"], "suite": rec.get("suite")}
    if fmt == "json":
        return json.dumps(public, default=_json_default, indent=2) + "\n"
    if fmt == "csv":
        header, rows = rec.get("_csv") or _rows_from_results(rec["results"])
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    if "_text" in rec:
        return "\n".join(rec["_text"]) + "\n"
    header, rows = rec.get("_csv") or _rows_from_results(rec["results"])
    lines = ["  ".join(f"{k}={v}" for k, v in rec["inputs"].items() if v is not None)]
    for r in rows:
        lines.append("  ".join(f"{h}={v}" for h, v in zip(header, r) if v != ""))
    return "\n".join(lines) + "\n"


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        rec = args.func(args)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except ToleranceUnreachable as exc:
        err.write(f"tolerance not reached: {exc}\n")
        return EXIT_TOL
    except ValueError as exc:
        err.write(f"invalid input: {exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    out.write(render(rec, args.fmt))
    return EXIT_TOL if rec.get("_failed") else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
