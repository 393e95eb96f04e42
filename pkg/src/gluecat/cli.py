"""Batch front end.

    gluecat verify <scenario.json> [--report out.json] [--quiet]
    gluecat apply <scenario.json> <functor> <object> [--quiet]

Exit codes: 0 all checks pass, 1 at least one failure, 2 inconclusive
cells only (certificates not found), 3 invalid scenario or unknown
functor/object.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import (
    CyclicQuiverError,
    IdealIsWholeAlgebraError,
    Quiver,
    path_algebra,
)
from .complexes import homology_dims
from .field import PrimeField
from .modules import GlobalDimensionExceedsCapError, ResolutionExceedsCapError
from .recollement import (
    FunctorExpr,
    NotStratifyingError,
    build_recollement,
    default_menu,
    original_diagram,
    verify_axioms,
)
from .reflect import NEW_ADJOINT_EXPRS, assemble_reflected, verify_reflected
from .scenarios import Scenario, ScenarioError, load_scenario
from .serre import INDUCED_EXPRS, attach_serre, intrinsic_nakayama_crosscheck, serre_axiom_check

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_INVALID = 3

_FUNCTOR_ALIASES = {
    "T̃": "T~",
    "S̃": "S~",
    "Ũ": "U~",
}

_SETUP_ERRORS = (
    ScenarioError,
    CyclicQuiverError,
    IdealIsWholeAlgebraError,
    NotStratifyingError,
    GlobalDimensionExceedsCapError,
    ResolutionExceedsCapError,
)


def _build_workbench(scn: Scenario):
    field = PrimeField(scn.p)
    quiver = Quiver(scn.vertices, tuple(scn.arrows))
    algebra = path_algebra(quiver, field)
    rec = build_recollement(
        algebra,
        scn.e_vertices,
        gldim_cap=scn.gldim_cap,
        seed=scn.seed,
        attempts=max(scn.attempts, 1),
    )
    sd = attach_serre(rec)
    return rec, sd


def _resolve_menus(rec, scn: Scenario):
    menus = {tag: default_menu(rec, tag) for tag in ("A", "B", "C")}
    if scn.menu == "default":
        return menus
    if not isinstance(scn.menu, list):
        raise ScenarioError("menu must be \"default\" or a list of object names")
    wanted = list(scn.menu)
    out = {}
    for tag, full in menus.items():
        catalog = dict(full)
        picked = []
        for name in wanted:
            if name in catalog:
                picked.append((name, catalog[name]))
        if not picked:
            raise ScenarioError(f"menu selects no objects in category {tag}")
        out[tag] = picked
    return out


def _functor_expr(name: str):
    name = _FUNCTOR_ALIASES.get(name, name)
    if name in ("i_*", "i^*", "i^!", "j_!", "j^*", "j_*", "T", "T~"):
        return name, FunctorExpr((name,))
    if name in INDUCED_EXPRS:
        return name, INDUCED_EXPRS[name]
    if name in NEW_ADJOINT_EXPRS:
        return name, NEW_ADJOINT_EXPRS[name]
    raise ScenarioError(f"unknown functor {name!r}")


def _report_payload(scn: Scenario, reports):
    cells = []
    for rep in reports:
        cells.extend(c.to_dict() for c in rep.sorted_cells())
    cells.sort(key=lambda c: (c["diagram"], c["axiom"], c["objects"], c["note"]))
    counts = {"pass": 0, "fail": 0, "inconclusive": 0}
    for c in cells:
        if c["verdict"] == "pass":
            counts["pass"] += 1
        elif c["verdict"] == "fail":
            counts["fail"] += 1
        else:
            counts["inconclusive"] += 1
    return {
        "scenario": scn.raw,
        "cells": cells,
        "coverage": {rep.diagram: rep.coverage for rep in reports},
        "summary": counts,
    }


def cmd_verify(args) -> int:
    try:
        scn = load_scenario(args.scenario)
        rec, sd = _build_workbench(scn)
        menus = _resolve_menus(rec, scn)
    except _SETUP_ERRORS as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_INVALID

    reports = []
    for variant in scn.variants:
        if variant == "original":
            reports.append(
                verify_axioms(
                    original_diagram(rec),
                    menus,
                    seed=scn.seed,
                    attempts=scn.attempts,
                    matrix_pairs=scn.matrix_pairs,
                )
            )
        else:
            rr = assemble_reflected(rec, sd, variant)
            reports.append(
                verify_reflected(
                    rr,
                    menus,
                    seed=scn.seed,
                    attempts=scn.attempts,
                    matrix_pairs=scn.matrix_pairs,
                )
            )
    for which, tag in (("T", "A"), ("S", "B"), ("U", "C")):
        budget = scn.matrix_pairs if which == "T" else None
        reports.append(
            serre_axiom_check(
                sd, which, menus[tag], seed=scn.seed, attempts=scn.attempts, pairing_pairs=budget
            )
        )
    for which in ("S", "U"):
        reports.append(intrinsic_nakayama_crosscheck(sd, which, seed=scn.seed, attempts=scn.attempts))

    payload = _report_payload(scn, reports)
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(text)

    counts = payload["summary"]
    if not args.quiet:
        for rep in reports:
            c = rep.counts()
            print(
                f"{rep.diagram}: pass={c['pass']} fail={c['fail']} "
                f"inconclusive={c['not-certified']}"
            )
    if counts["fail"]:
        verdict, code = "FAIL", EXIT_FAIL
    elif counts["inconclusive"]:
        verdict, code = "INCONCLUSIVE", EXIT_INCONCLUSIVE
    else:
        verdict, code = "PASS", EXIT_PASS
    print(f"RESULT: {verdict} ({counts['pass']} pass, {counts['fail']} fail, "
          f"{counts['inconclusive']} inconclusive); report: {args.report}")
    return code


def cmd_apply(args) -> int:
    try:
        scn = load_scenario(args.scenario)
        rec, sd = _build_workbench(scn)
        name, expr = _functor_expr(args.functor)
        src_tag, _ = expr.signature(rec.registry)
        menu = dict(default_menu(rec, src_tag))
        if args.object not in menu:
            raise ScenarioError(
                f"unknown object {args.object!r} in category {src_tag}; "
                f"choose from {sorted(menu)}"
            )
    except _SETUP_ERRORS as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out = rec.apply_expr(expr, menu[args.object])
    dims = {str(k): v for k, v in sorted(homology_dims(out).items())}
    print(json.dumps(dims, sort_keys=True))
    return EXIT_PASS


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gluecat",
        description="Build and machine-verify recollements of bounded derived "
        "categories of path-algebra quotients over GF(p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the full axiom suite for a scenario")
    p_verify.add_argument("scenario")
    p_verify.add_argument("--report", default="report.json", help="structured report path")
    p_verify.add_argument("--quiet", action="store_true", help="only print the final line")
    p_verify.set_defaults(func=cmd_verify)

    p_apply = sub.add_parser("apply", help="apply a functor to a menu object")
    p_apply.add_argument("scenario")
    p_apply.add_argument("functor")
    p_apply.add_argument("object")
    p_apply.add_argument("--quiet", action="store_true")
    p_apply.set_defaults(func=cmd_apply)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
