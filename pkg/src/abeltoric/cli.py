"""Command-line front end.

Exit codes: 0 success, 1 violations or instability found, 2 malformed input.
Set LOG_LEVEL to quiet, info or debug for progress messages on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import __version__
from . import chow, classify, fan as fanmod, lattice, morphism, theta
from .classify import fmt

log = logging.getLogger("abeltoric")

EXIT_OK, EXIT_VIOLATION, EXIT_MALFORMED = 0, 1, 2


class InputError(Exception):
    pass


def _setup_logging():
    level = os.environ.get("LOG_LEVEL", "quiet").strip().lower()
    levels = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(stream=sys.stderr, level=levels.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")


def _report(command, inputs, results, mode=None) -> dict:
    doc = {"command": command, "inputs": inputs}
    if mode is not None:
        doc["mode"] = mode
    doc["results"] = results
    doc["tool_version"] = __version__
    return doc


def _space(args) -> chow.BundleSpace:
    if args.family is None:
        raise InputError("--family D S is required")
    d, s = args.family
    twists = tuple(args.twists or ())
    if len(twists) != s:
        raise InputError(f"--family {d} {s} needs {s} twists, got {len(twists)}")
    try:
        return chow.BundleSpace(d, twists)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load_fan(path) -> fanmod.Fan:
    try:
        with open(path) as fh:
            return fanmod.Fan.from_json(fh.read())
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise InputError(f"cannot read fan from {path}: {exc}") from exc


# -- subcommands -----------------------------------------------------------

def cmd_fan(args):
    if args.fan:
        f = _load_fan(args.fan)
        inputs = {"fan": args.fan}
    else:
        space = _space(args)
        f = space.fan()
        inputs = {"family": list(args.family), "twists": list(space.twists)}
    results = {
        "fan": f.to_dict(),
        "smooth": fanmod.is_smooth(f),
        "complete": fanmod.is_complete(f),
        "primitive_collections": [list(c) for c in fanmod.primitive_collections(f)],
    }
    lines = [f"rank {f.rank}, {len(f.rays)} rays, {len(f.max_cones)} maximal cones"]
    lines += [f"  ray {i}: {r}" for i, r in enumerate(f.rays)]
    lines.append("maximal cones: " + " ".join(str(list(c)) for c in f.max_cones))
    lines.append("primitive collections: " + " ".join(str(c) for c in results["primitive_collections"]))
    lines.append(f"smooth: {results['smooth']}  complete: {results['complete']}")
    return _report("fan", inputs, results), lines, EXIT_OK


def cmd_chow(args):
    space = _space(args)
    inputs = {"family": list(args.family), "twists": list(space.twists)}
    table = chow.intersection_table(space)
    c2 = chow.chern_c2(space)
    differ = [row[0] for row in table if row[2] is not None and row[1] != row[2]]
    results = {
        "intersections": [{"monomial": m, "fan": fv, "paper": pv} for m, fv, pv in table],
        "c2": c2.to_dict(),
        "modes_differ_at": differ,
    }
    lines = [f"{space.label()}", "monomial   fan   paper"]
    lines += [f"{m:<10} {fv:<5} {'' if pv is None else pv}" for m, fv, pv in table]
    lines.append(f"c2 = {c2}")
    if differ:
        lines.append(f"note: the printed table and the fan disagree at {', '.join(differ)}; --mode fan is available")
    return _report("chow", inputs, results), lines, EXIT_OK


def cmd_classify(args):
    space = _space(args)
    d, s = args.family
    inputs = {"family": [d, s], "twists": list(space.twists)}
    lines = [space.label()]
    if (d, s) == (1, 3):
        cands = classify.sieve_p3_bundle(space.twists, include_rejected=args.all)
        results = {"candidates": [c.to_dict() for c in cands]}
        mode = "paper"
    elif (d, s) == (3, 1):
        res = classify.check_p1_bundle(space.twists[0])
        results = res.to_dict()
        lines.append(json.dumps(results))
        return _report("classify", inputs, results, "paper"), lines, EXIT_OK
    elif (d, s) == (2, 2):
        if args.nu is None:
            raise InputError("--nu is required for the P^2-bundle over P^2")
        inputs.update(nu=args.nu, mu_max=args.mu_max)
        try:
            cands = classify.enumerate_p2_bundle(space.twists, args.nu, args.mu_max, args.mode, args.all)
            region = classify.region_test(space.twists, args.nu).to_dict()
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        results = {"candidates": [c.to_dict() for c in cands], "region": region}
        mode = args.mode
        lines.append(f"region test: value {region['value_condition']}, slope {region['slope_condition']}, "
                     f"verdict {region['verdict']}")
    else:
        raise InputError(f"no classification for family {d} {s}")
    lines.append(f"{'nu':>4} {'mu':>4} {'lambda':>8}  verdict")
    for c in cands:
        trail = " ".join(f"{k.rule}{'+' if k.passed else '-'}" for k in c.checks)
        lines.append(f"{c.nu:>4} {c.mu:>4} {str(fmt(c.lam)):>8}  {c.verdict}"
                     f"{'(' + c.reason + ')' if c.reason else ''}  {trail}")
    if not cands:
        lines.append("(no candidates)")
    return _report("classify", inputs, results, mode), lines, EXIT_OK


def cmd_curve(args):
    if args.fan:
        f = _load_fan(args.fan)
        inputs = {"fan": args.fan}
    else:
        space = _space(args)
        f = space.fan()
        inputs = {"family": list(args.family), "twists": list(space.twists)}
    if args.enumerate_degrees is not None:
        degs = morphism.admissible_degrees(f, args.enumerate_degrees)
        inputs["enumerate_degrees"] = args.enumerate_degrees
        results = {"degrees": [list(v) for v in degs]}
        lines = [" ".join(map(str, v)) for v in degs]
        return _report("curve", inputs, results), lines, EXIT_OK
    if not args.polys:
        raise InputError("give --polys or --enumerate-degrees")
    try:
        data = morphism.CurveData.parse(args.polys)
        violations = morphism.validate_curve(f, data)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    inputs["polys"] = list(args.polys)
    results = {"data": data.to_dict(), "valid": not violations,
               "violations": [v.to_dict() for v in violations]}
    lines = [f"{len(violations)} violation(s)"] + [f"  {v.kind} at {list(v.where)}: {v.detail}" for v in violations]
    if args.at is not None and not violations:
        try:
            pt = morphism.evaluate_curve(f, data, args.at)
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        inputs["at"] = args.at
        results["point"] = pt.to_dict()
        lines.append(f"z = {args.at}: cone {list(pt.cone)}, values {[fmt(v) for v in pt.values]}")
    return _report("curve", inputs, results), lines, EXIT_VIOLATION if violations else EXIT_OK


def cmd_theta(args):
    inputs = {"s_cut": args.s_cut, "t_window": args.t_window, "backend": args.backend}
    try:
        cert = theta.stable_certificate(args.s_cut, args.t_window, args.backend)
    except theta.ThetaInstability as exc:
        log.error("%s", exc)
        results = {"stable": False, "error": str(exc)}
        return _report("theta", inputs, results), [f"UNSTABLE: {exc}"], EXIT_VIOLATION
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    results = cert.to_dict()
    lines = []
    for k, mn in enumerate(cert.minors):
        lines.append(f"minor {k}: s-exponents {mn.exponents()}")
    lines.append("brackets: " + ", ".join(f"{a}{b}={v}" for (a, b), v in sorted(cert.brackets.items())))
    lines.append(f"constant = {cert.value}  (stable at t-window {cert.t_window} and {cert.rerun_window})")
    return _report("theta", inputs, results), lines, EXIT_OK


def cmd_lattice(args):
    conf = lattice.paper_configuration()
    rep = lattice.reider_case_analysis(conf.paper_gram)
    results = {
        "polarization": [conf.lattice.d1, conf.lattice.d2],
        "E": list(conf.E.coeffs),
        "C": list(conf.C.coeffs),
        "C_primitive": lattice.is_primitive(conf.C),
        "gram": [list(r) for r in conf.gram],
        "analysis": rep.to_dict(),
    }
    lines = [f"E = {conf.E}", f"C = {conf.C} (primitive: {results['C_primitive']})",
             f"Gram(E, E+2C) = {results['gram']}",
             f"isotropic: {rep.isotropy.factorization}, directions {[list(d) for d in rep.isotropy.directions]}"]
    for b in rep.branches:
        lines.append(f"  {b.scenario:<10} {b.label:<32} {b.verdict}: {b.reason or ''}")
    return _report("lattice", {}, results), lines, EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abeltoric", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def family(sp):
        sp.add_argument("--family", nargs=2, type=int, metavar=("D", "S"),
                        help="P^S-bundle over P^D")
        sp.add_argument("--twists", nargs="*", type=int, default=[])
        sp.add_argument("--json", action="store_true", help="emit the JSON report")

    sp = sub.add_parser("fan", help="build or inspect a fan")
    family(sp)
    sp.add_argument("--fan", help="fan JSON file to inspect")
    sp.set_defaults(func=cmd_fan)

    sp = sub.add_parser("chow", help="intersection numbers and c2")
    family(sp)
    sp.set_defaults(func=cmd_chow)

    sp = sub.add_parser("classify", help="run the feasibility sieve")
    family(sp)
    sp.add_argument("--nu", type=int)
    sp.add_argument("--mu-max", type=int)
    sp.add_argument("--mode", choices=chow.MODES, default="paper")
    sp.add_argument("--all", action="store_true", help="include rejected candidates")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("curve", help="validate morphism data from P^1")
    family(sp)
    sp.add_argument("--fan", help="fan JSON file")
    sp.add_argument("--polys", nargs="*", help='one monic polynomial per ray, e.g. "z^2-3/2*z+1"')
    sp.add_argument("--enumerate-degrees", type=int, metavar="N")
    sp.add_argument("--at", help="evaluate at this rational z (or 'inf')")
    sp.set_defaults(func=cmd_curve)

    sp = sub.add_parser("theta", help="theta nonvanishing certificate")
    sp.add_argument("--s-cut", type=int, default=theta.DEFAULT_S_CUT)
    sp.add_argument("--t-window", type=int, default=theta.DEFAULT_T_WINDOW)
    sp.add_argument("--backend", choices=("exact", "numba", "numpy"), default="exact")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_theta)

    sp = sub.add_parser("lattice", help="Neron-Severi Gram matrix and case analysis")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_lattice)
    return p


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    log.info("running %s", args.command)
    try:
        report, lines, code = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(lines))
    return code


if __name__ == "__main__":
    sys.exit(main())
