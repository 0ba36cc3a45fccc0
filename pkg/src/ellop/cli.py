"""Command line surface.

Symbolic subcommands emit deterministic JSON or CSV; numeric subcommands
print at 15 significant digits.  Exit codes: 0 success, 1 verification
mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .rationals import Rat
from .poly import MultiPoly
from .elliptic import EllipticElement
from .operators import (
    GlobalEllipticOperator,
    IndexData,
    InvalidGapsError,
    cyclic_L0,
    find_commuting,
    third_order_from_gaps,
)
from .locus3 import (
    constraints_for,
    reconstruct_in_q,
    scan_grid,
    solved_branch,
    valid_r,
)
from .lattice import make_lattice
from . import acceptance


def _sig15(x: float) -> float:
    return float(f"{x:.15g}")


def _pair(z: complex):
    return [_sig15(z.real), _sig15(z.imag)]


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _parse_clist(text: str):
    return [_parse_complex(t) for t in text.split(";") if t.strip()]


def _parse_ilist(text: str):
    return [int(t) for t in text.split(",") if t.strip()]


def _parse_operator(spec: str):
    """Operator mini-language -> (GlobalEllipticOperator, numeric values).

    second:a=-2            order 2, d^2 + a*P
    third:q=2,r=2,c=-3,e=3 the third order gap family at numeric (c, e)
    cyclic:n=4,indices=-1|1|2|4,curve=lemniscatic
    """
    def rat_or_none(text):
        try:
            if "/" in text:
                n, d = text.split("/")
                return Rat(int(n), int(d))
            return Rat(int(text))
        except ValueError:
            return None

    try:
        kind, _, body = spec.partition(":")
        kv = {}
        for chunk in body.split(","):
            if not chunk:
                continue
            k, _, v = chunk.partition("=")
            kv[k.strip()] = v.strip()
        if kind == "second":
            a = rat_or_none(kv["a"])
            if a is not None:
                elem = EllipticElement([0, a])
                return GlobalEllipticOperator(2, {2: elem}), {}
            elem = EllipticElement([0, MultiPoly.var("a")])
            return GlobalEllipticOperator(2, {2: elem}), {"a": complex(kv["a"])}
        if kind == "third":
            q, r = int(kv["q"]), int(kv["r"])
            op = third_order_from_gaps(q, r)
            vals = {}
            subs = {}
            for name in ("c", "e"):
                text = kv.get(name, "0")
                exact = rat_or_none(text)
                if exact is not None:
                    subs[name] = MultiPoly.const(exact)
                else:
                    vals[name] = complex(text)
            if subs:
                op = op.substitute(subs)
            return op, vals
        if kind == "cyclic":
            n = int(kv["n"])
            idx = IndexData(tuple(Rat(int(v)) for v in kv["indices"].split("|")))
            curve = {"generic": "generic", "equianharmonic": "g2=0",
                     "lemniscatic": "g3=0"}[kv.get("curve", "generic")]
            return cyclic_L0(n, idx, curve), {}
    except (KeyError, ValueError, InvalidGapsError) as exc:
        raise argparse.ArgumentTypeError(f"bad operator spec {spec!r}: {exc}")
    raise argparse.ArgumentTypeError(f"unknown operator kind in {spec!r}")


def _rat_arg(text: str) -> Rat:
    try:
        if "/" in text:
            n, d = text.split("/")
            return Rat(int(n), int(d))
        return Rat(int(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellop",
                                description="exact and numeric finite-gap "
                                            "operator engine")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for all randomized paths (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("indicial", help="roots of the indicial polynomial")
    s.add_argument("--n", type=int, required=True)
    for i in range(2, 7):
        s.add_argument(f"--b{i}", type=_rat_arg, default=Rat(0))

    s = sub.add_parser("homog-check",
                       help="can these indices carry an integrable "
                            "homogeneous operator?")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--indices", required=True, help="comma-separated integers")

    s = sub.add_parser("constraints", help="integrability conditions for gaps")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--r", type=int, required=True)

    s = sub.add_parser("locus", help="branch scan over q for a fixed r")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--q-max", type=int, default=None)
    s.add_argument("--curve", choices=("generic", "cuspidal", "nodal"),
                   default="generic")

    s = sub.add_parser("reconstruct",
                       help="locus quantity as a rational function of q")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--quantity", required=True)

    s = sub.add_parser("jtable", help="CSV of branch j-invariants")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--count", type=int, default=5)

    s = sub.add_parser("commute", help="search for a commuting operator")
    s.add_argument("--operator", required=True)
    s.add_argument("--order", type=int, required=True)

    s = sub.add_parser("cm2-residuals", help="finite-gap residuals, order 2")
    s.add_argument("--tau", type=_parse_complex, default=1j)
    s.add_argument("--points", required=True, help="semicolon-separated")
    s.add_argument("--mults", required=True, help="comma-separated")

    s = sub.add_parser("cm3-crit", help="cubic critical system residuals "
                                        "or a Newton solve")
    s.add_argument("--tau", type=_parse_complex, default=1j)
    s.add_argument("--points", required=True)
    s.add_argument("--momenta", required=True)
    s.add_argument("--c", type=_parse_complex, required=True)
    s.add_argument("--solve", action="store_true",
                   help="Newton with z1 pinned; unknowns z2.., p.., c")

    s = sub.add_parser("cryst3-crit", help="symmetric third order residuals")
    s.add_argument("--points", required=True)
    s.add_argument("--momenta", required=True)
    s.add_argument("--alphas", required=True)
    s.add_argument("--betas", required=True)

    s = sub.add_parser("inozemtsev-grad", help="gradient of the even "
                                               "double-pole potential")
    s.add_argument("--tau", type=_parse_complex, default=1j)
    s.add_argument("--points", required=True)
    s.add_argument("--ms", required=True, help="four comma-separated values")

    s = sub.add_parser("monodromy", help="loop transport around the pole")
    s.add_argument("--operator", required=True)
    s.add_argument("--lambda", dest="lam", type=_parse_complex, required=True)
    s.add_argument("--tau", type=_parse_complex, default=1j)
    s.add_argument("--radius", type=float, default=0.2,
                   help="fraction of the shortest period")
    s.add_argument("--tol", type=float, default=1e-12)

    sub.add_parser("verify-paper", help="run the full verification suite")
    return p


def _cmd_indicial(args) -> int:
    from .monodromy import _indicial_value
    from .operators import _rational_roots

    n = args.n
    if n < 2:
        print("order must be at least 2", file=sys.stderr)
        return 2
    bs = {i: getattr(args, f"b{i}", Rat(0)) for i in range(2, n + 1)}
    x = MultiPoly.var("m")
    prod = MultiPoly.const(1)
    ffs = {0: MultiPoly.const(1)}
    for k in range(1, n + 1):
        prod = prod * (x - Rat(k - 1))
        ffs[k] = prod
    P = ffs[n]
    for i in range(2, n + 1):
        if bs[i] != 0:
            P = P + ffs[n - i] * bs[i]
    coeffs = P.coefficients_in("m")
    lst = [coeffs.get(d, MultiPoly.zero()).constant_value()
           if d in coeffs else Rat(0) for d in range(max(coeffs) + 1)]
    roots = _rational_roots(lst)
    print(json.dumps({"n": n,
                      "roots": sorted(str(rt) for rt in roots)}))
    return 0


def _cmd_homog_check(args) -> int:
    from .operators import homogeneous_integrable

    idx = IndexData(tuple(Rat(v) for v in _parse_ilist(args.indices)))
    ok, reason = homogeneous_integrable(idx, args.n)
    print(json.dumps({"integrable": ok, "reason": reason}))
    return 0


def _cmd_constraints(args) -> int:
    cs = constraints_for(args.q, args.r)
    print(cs.to_json())
    return 0


def _cmd_locus(args) -> int:
    if not valid_r(args.r):
        print(f"r={args.r} does not occur (must be positive, not divisible "
              "by 3)", file=sys.stderr)
        return 2
    offset = 9 if args.q_max is None else max(0, args.q_max - args.r)
    report = scan_grid([args.r], q_offset=offset, curve=args.curve)
    sys.stdout.write(report.to_csv())
    return 0


def _cmd_reconstruct(args) -> int:
    fn = reconstruct_in_q(args.r, args.quantity)
    print(json.dumps({"r": args.r, "quantity": args.quantity,
                      "value": fn.text()}))
    return 0


def _cmd_jtable(args) -> int:
    rows = ["q,j"]
    for k in range(args.count):
        q = args.r + 3 * k
        b = solved_branch(q, args.r)
        j = b.j()
        rows.append(f"{q},{j if isinstance(j, str) else j.text()}")
    print("\n".join(rows))
    return 0


def _cmd_commute(args) -> int:
    op, vals = _parse_operator(args.operator)
    if vals:
        print("commute requires an exact operator (no numeric parameters)",
              file=sys.stderr)
        return 2
    M = find_commuting(op, args.order)
    if M is None:
        print(json.dumps({"found": False}))
        return 0
    print(json.dumps({
        "found": True,
        "operator": {str(k): v.text() for k, v in sorted(M.items())},
    }))
    return 0


def _cmd_cm2(args) -> int:
    from .cm import CMConfig2, finite_gap_residuals

    lat = make_lattice(args.tau)
    cfg = CMConfig2(_parse_clist(args.points), _parse_ilist(args.mults))
    res = finite_gap_residuals(cfg, lat)
    print(json.dumps({"residuals": [_pair(v) for v in res],
                      "max_abs": _sig15(max((abs(v) for v in res), default=0.0))}))
    return 0


def _cmd_cm3(args) -> int:
    from .cm import CMConfig3, cm3_residuals, newton_critical

    lat = make_lattice(args.tau)
    zs = _parse_clist(args.points)
    ps = _parse_clist(args.momenta)
    if not args.solve:
        res = cm3_residuals(CMConfig3(zs, ps, args.c), lat)
        print(json.dumps({"residuals": [_pair(v) for v in res],
                          "max_abs": _sig15(max(abs(v) for v in res))}))
        return 0
    z1 = zs[0]

    def system(x):
        rest = list(x)
        zz = [z1] + rest[: len(zs) - 1]
        pp = rest[len(zs) - 1: len(zs) - 1 + len(ps)]
        cv = rest[-1]
        return cm3_residuals(CMConfig3(zz, pp, cv), lat)

    guess = list(zs[1:]) + list(ps) + [args.c]
    out = newton_critical(system, guess)
    print(json.dumps({
        "success": out.success,
        "residual_norm": out.residual_norm,
        "iterations": out.iterations,
        "jacobian_rank": out.jacobian_rank,
        "least_squares": out.used_least_squares,
        "solution": [_pair(v) for v in out.solution],
        "trace": out.trace,
    }))
    return 0 if out.success else 1


def _cmd_cryst3(args) -> int:
    from .cm import Cryst3Config, cryst3_grad_H, cryst3_residuals

    cfg = Cryst3Config(_parse_clist(args.points), _parse_clist(args.momenta),
                       _parse_clist(args.alphas), _parse_clist(args.betas))
    res = cryst3_residuals(cfg)
    grd = cryst3_grad_H(cfg)
    print(json.dumps({
        "residuals": [_pair(v) for v in res],
        "gradient": [_pair(v) for v in grd],
        "agreement": _sig15(max(abs(a - b) for a, b in zip(res, grd))),
    }))
    return 0


def _cmd_inozemtsev(args) -> int:
    from .cm import inozemtsev_gradient

    lat = make_lattice(args.tau)
    g = inozemtsev_gradient(_parse_clist(args.points),
                            _parse_clist(args.ms), lat)
    print(json.dumps({"gradient": [_pair(v) for v in g],
                      "max_abs": _sig15(max(abs(v) for v in g))}))
    return 0


def _cmd_monodromy(args) -> int:
    from .oracle import elliptic_evaluator, monodromy_matrix

    op, vals = _parse_operator(args.operator)
    lat = make_lattice(args.tau)
    ev = elliptic_evaluator(op, vals, lat)
    rep = monodromy_matrix(ev, op.n, 0, args.radius * lat.shortest,
                           args.lam, args.tol)
    print(rep.to_json())
    return 0


def _cmd_verify(args) -> int:
    results = acceptance.run_all(seed=args.seed)
    failed = 0
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        if not ok:
            failed += 1
    print(f"{len(results) - failed}/{len(results)} criteria passed")
    return 0 if failed == 0 else 1


_DISPATCH = {
    "indicial": _cmd_indicial,
    "homog-check": _cmd_homog_check,
    "constraints": _cmd_constraints,
    "locus": _cmd_locus,
    "reconstruct": _cmd_reconstruct,
    "jtable": _cmd_jtable,
    "commute": _cmd_commute,
    "cm2-residuals": _cmd_cm2,
    "cm3-crit": _cmd_cm3,
    "cryst3-crit": _cmd_cryst3,
    "inozemtsev-grad": _cmd_inozemtsev,
    "monodromy": _cmd_monodromy,
    "verify-paper": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args)
    except (ValueError, ArithmeticError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
