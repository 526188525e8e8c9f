"""Command line runner: build, certify and report on every object."""
import argparse
import sys
import time

from . import gf
from .errors import (
    InvalidParameters, NoObstructionFound, UnitalForgeError, UnknownExperiment,
)
from .experiments import REGISTRY, run
from .nearfield import build_nearfield, verify_nearfield_axioms
from .onan import find_onan, vj_obstruction
from .plane import build_plane, verify_plane_axioms
from .polyfn import hk_is_permutation, hk_value_set
from .reporting import all_passed, make_check, make_report, report_write
from .unital import (
    make_B, make_hermitian, make_U, make_V, make_wantz, verify_unital,
)

FAMILIES = ("hermitian", "wantz", "U", "V", "B")


def _ms(t0: float) -> int:
    return int((time.perf_counter() - t0) * 1000)


def _emit(report: dict, args) -> int:
    text = report_write(report, args.report, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0 if all_passed(report) else 1


def cmd_field(args) -> int:
    t0 = time.perf_counter()
    q = args.q
    N = build_nearfield(2, q, cache_dir=args.cache)
    F = N.F
    consts = {k: int(v) for k, v in gf.constants(F).items()}
    closed = all(
        gf.in_subfield(F, gf.trace(F, x)) and gf.in_subfield(F, gf.norm(F, x))
        for x in range(F.q))
    witness = {"order": F.q, "characteristic": F.p,
               "modulus": list(F.modulus), "gamma": F.gamma, **consts}
    checks = [make_check("trace-norm-into-subfield",
                         "pass" if closed else "fail", witness, _ms(t0))]
    if args.cache is not None:
        t1 = time.perf_counter()
        again = build_nearfield(2, q, cache_dir=args.cache).F
        same = (F.exp == again.exp and F.log == again.log
                and F.modulus == again.modulus)
        checks.append(make_check("cache-roundtrip",
                                 "pass" if same else "fail",
                                 {"dir": args.cache}, _ms(t1)))
    report = make_report("field", {"q": q}, checks,
                         cache_used=args.cache is not None)
    return _emit(report, args)


def cmd_nearfield(args) -> int:
    t0 = time.perf_counter()
    N = build_nearfield(2, args.q, cache_dir=args.cache)
    rep = verify_nearfield_axioms(N)
    keep = ("name", "order", "right_distributive", "left_distributive",
            "left_distributive_witness", "checked_triples")
    witness = {k: rep[k] for k in keep}
    checks = [make_check("nearfield-axioms",
                         "pass" if rep["ok"] else "fail", witness, _ms(t0))]
    report = make_report("nearfield", {"q": args.q}, checks,
                         cache_used=args.cache is not None)
    return _emit(report, args)


def cmd_plane(args) -> int:
    t0 = time.perf_counter()
    N = build_nearfield(2, args.q, cache_dir=args.cache)
    plane = build_plane(N)
    rep = verify_plane_axioms(plane)
    keep = ("plane", "order", "n_points", "affine_join_failures",
            "mixed_join_failures", "meet_failures", "quadrangle")
    witness = {k: rep[k] for k in keep}
    checks = [make_check("plane-axioms",
                         "pass" if rep["ok"] else "fail", witness, _ms(t0))]
    report = make_report("plane", {"q": args.q}, checks,
                         cache_used=args.cache is not None)
    return _emit(report, args)


def _build_family(args):
    q = args.q
    if args.family == "hermitian":
        return make_hermitian(q)
    if args.family == "wantz":
        return make_wantz(q, args.a, args.b)
    if args.family == "U":
        return make_U(q, args.b, args.j)
    raise InvalidParameters(f"family {args.family!r} is not a unital family")


def cmd_unital(args) -> int:
    t0 = time.perf_counter()
    q = args.q
    params = {"q": q, "family": args.family}
    if args.family in ("hermitian", "wantz", "U"):
        if args.family == "wantz":
            params.update(a=args.a, b=args.b)
        if args.family == "U":
            params.update(b=args.b, j=args.j)
        U = _build_family(args)
        rep = verify_unital(U.plane, U.points)
        witness = {"size": rep["size"], "histogram": rep["histogram"],
                   "witness": rep["witness"],
                   "infinity_profile": rep["infinity_profile"]}
        status = "pass" if rep["is_unital"] else "fail"
        checks = [make_check("unital-profile", status, witness, _ms(t0))]
    elif args.family == "V":
        params.update(j=args.j)
        pts = make_V(q, args.j)
        expected = q * (q * q - 1) // 2
        witness = {"size": len(pts), "expected": expected}
        status = "pass" if len(pts) == expected else "fail"
        checks = [make_check("set-size", status, witness, _ms(t0))]
    else:
        params.update(a=args.a, b=args.b)
        pts = make_B(q, args.a, args.b)
        expected = q * (q + 1) if args.a != 0 else q
        witness = {"size": len(pts), "expected": expected}
        status = "pass" if len(pts) == expected else "fail"
        checks = [make_check("set-size", status, witness, _ms(t0))]
    report = make_report("unital", params, checks,
                         cache_used=args.cache is not None)
    return _emit(report, args)


def cmd_onan(args) -> int:
    t0 = time.perf_counter()
    q = args.q
    params = {"q": q, "family": args.family}
    if args.family == "V":
        params.update(j=args.j)
        try:
            cfg = vj_obstruction(q, args.j)
            checks = [make_check("vj-obstruction", "pass", cfg.to_dict(),
                                 _ms(t0))]
        except NoObstructionFound as exc:
            status = "inapplicable" if q == 3 else "fail"
            checks = [make_check("vj-obstruction", status,
                                 {"reason": exc.detail}, _ms(t0))]
    elif args.family in ("hermitian", "wantz", "U"):
        if args.family == "wantz":
            params.update(a=args.a, b=args.b)
        if args.family == "U":
            params.update(b=args.b, j=args.j)
        U = _build_family(args)
        hits = find_onan(U, must_contain=(0, 1, 0))
        witness = {"through": [0, 1, 0], "configs_found": len(hits),
                   "first": hits[0].to_dict() if hits else None}
        status = "pass" if not hits else "fail"
        checks = [make_check("onan-through-infinity-absent", status, witness,
                             _ms(t0))]
    else:
        raise InvalidParameters("family B has no O'Nan query; use a unital"
                                " family or V")
    report = make_report("onan", params, checks,
                         cache_used=args.cache is not None)
    return _emit(report, args)


def cmd_poly(args) -> int:
    t0 = time.perf_counter()
    q, k = args.q, args.j
    rep = hk_value_set(q, k)
    perm = hk_is_permutation(q, k)
    consistent = (perm == rep["is_permutation"]
                  and not (perm and rep["collision"] is not None))
    checks = [make_check("hk-value-set", "pass" if consistent else "fail",
                         rep, _ms(t0))]
    report = make_report("poly", {"q": q, "k": k}, checks)
    return _emit(report, args)


def cmd_experiments(args) -> int:
    report = run(args.name, q=args.q, threads=args.threads,
                 cache_dir=args.cache)
    return _emit(report, args)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=3,
                        help="nearfield parameter, odd prime power")
    common.add_argument("--j", type=int, default=1,
                        help="exponent parameter")
    common.add_argument("--a", type=int, default=0,
                        help="first coefficient")
    common.add_argument("--b", type=int, default=1,
                        help="second coefficient")
    common.add_argument("--family", choices=FAMILIES, default="wantz",
                        help="point family to build")
    common.add_argument("--threads", type=int, default=1,
                        help="worker pool size for sweeps")
    common.add_argument("--cache", default=None, metavar="DIR",
                        help="field table cache directory")
    common.add_argument("--report", choices=("json", "text"), default="text",
                        help="output format")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(
        prog="unital-forge",
        description="certified constructions in regular nearfield planes")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("field", cmd_field), ("nearfield", cmd_nearfield),
                     ("plane", cmd_plane), ("unital", cmd_unital),
                     ("onan", cmd_onan), ("poly", cmd_poly)):
        p = sub.add_parser(name, parents=[common], help=f"{name} checks")
        p.set_defaults(func=fn)
    pexp = sub.add_parser("experiments", parents=[common],
                          help="named experiment suites")
    pexp.add_argument("name", help="experiment name, or 'all'")
    pexp.set_defaults(func=cmd_experiments)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownExperiment as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UnitalForgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
