"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 size-guard refusal, 4 internal
cross-check failure. With ``--json`` the result document is printed with
sorted keys so identical inputs give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Any, Callable

from . import __version__
from .cohomology import DEFAULT_MAX_ORDER, DEFAULT_WINDOW, Limits, tate_group
from .errors import CrossCheckError, GalcohError, SizeGuardError
from .fundgroup import local_basic_classes, local_h1
from .local_global import (
    FundamentalGroup,
    GlobalScenario,
    check_in_image,
    global_A,
    global_h1,
    localizations,
    random_scenario,
    random_tower,
    tower_compare,
    verify_exactness,
)
from .scenario import (
    load,
    locus,
    parse_global,
    parse_group,
    parse_lambda,
    parse_locals,
    parse_module,
    parse_places,
    parse_triple,
)
from .tn_triple import DEFAULT_TN_WINDOW, check_tate_nakayama
from .zlattice import FgAbGroup, IntMatrix

EXIT_OK, EXIT_INPUT, EXIT_SIZE, EXIT_INTERNAL = 0, 2, 3, 4


def _grp(g: FgAbGroup) -> dict:
    return g.invariants_dict()


def _mat(m: IntMatrix) -> list[list[int]]:
    return m.tolist()


def _lambda_doc(lam: FundamentalGroup) -> dict:
    m = lam.module
    return {"label": lam.label, "group": _grp(m.underlying), "action": [_mat(a) for a in m.action]}


def cmd_local(doc: dict, args) -> dict:
    pg = parse_group(doc.get("group", {"named": "trivial"}), args.max_group_order)
    lam = parse_lambda(doc.get("lambda"), pg)
    return {
        "group": pg.echo(),
        "lambda": _lambda_doc(lam),
        "basic_classes": _grp(local_basic_classes(lam)),
        "h1": _grp(local_h1(lam)),
    }


def _global_doc(pg, s: GlobalScenario) -> dict:
    a = global_A(s)
    locs = []
    for loc in localizations(s):
        locs.append({
            "orbit": loc.orbit,
            "points": [s.places.label(p) for p in loc.points],
            "representative": s.places.label(loc.representative),
            "stabilizer": list(loc.stabilizer),
            "target": _grp(loc.target),
            "matrix": _mat(loc.hom.matrix),
        })
    return {
        "group": pg.echo(),
        "points": [s.places.label(p) for p in range(s.places.npoints)],
        "degrees": list(s.places.degrees),
        "lambda": _lambda_doc(s.lam),
        "A": _grp(a.group),
        "A_tors": _grp(global_h1(s)),
        "localizations": locs,
    }


def cmd_global(doc: dict, args) -> dict:
    pg, s = parse_global(doc, args.max_group_order)
    return _global_doc(pg, s)


def cmd_obstruction(doc: dict, args) -> dict:
    pg, s = parse_global(doc, args.max_group_order)
    locs = parse_locals(doc.get("locals"), s.places)
    with locus("locals"):
        report = check_in_image(s, locs)
    out = _global_doc(pg, s)
    out["obstruction"] = report.to_dict()
    return out


def cmd_tn(doc: dict, args) -> dict:
    pg = parse_group(doc["group"], args.max_group_order) if "group" in doc else None
    pg, triple = parse_triple(doc.get("triple"), pg, args.max_group_order)
    window = tuple(args.window) if args.window else DEFAULT_TN_WINDOW
    lo, hi = window
    limits = Limits(window=(min(DEFAULT_WINDOW[0], lo), max(DEFAULT_WINDOW[1], hi + 2)),
                    max_order=args.max_group_order)
    report = check_tate_nakayama(triple, window, limits)
    return {"group": pg.echo(), "report": report.to_dict()}


def cmd_tate(doc: dict, args) -> dict:
    pg = parse_group(doc.get("group"), args.max_group_order)
    m = parse_module(doc.get("module"), pg)
    window = tuple(args.window) if args.window else DEFAULT_WINDOW
    limits = Limits(window=window, max_order=args.max_group_order)
    degrees = doc.get("degrees")
    if degrees is None:
        degrees = [doc["degree"]] if "degree" in doc else list(range(window[0], window[1] + 1))
    out = {}
    for r in degrees:
        with locus("degree"):
            if isinstance(r, bool) or not isinstance(r, int):
                raise ValueError(f"degree must be an integer, got {r!r}")
            tg = tate_group(m, r, limits)
        out[str(r)] = _grp(tg.group)
    return {"group": pg.echo(), "module": {"group": _grp(m.underlying), "action": [_mat(a) for a in m.action]},
            "cohomology": out}


def cmd_tower(doc: dict, args) -> dict:
    pg, sK = parse_global(doc, args.max_group_order)
    with locus("tower"):
        t = doc.get("tower")
        if not isinstance(t, dict):
            raise ValueError("missing 'tower' section")
        pl = parse_group(t.get("group"), args.max_group_order)
        placesL = parse_places(t.get("places"), pl)
        quotient = t.get("quotient")
        cover_raw = t.get("cover")
        if not isinstance(quotient, list) or not isinstance(cover_raw, list):
            raise ValueError("need 'quotient' (one element per upper group element) and 'cover' (one point per upper point)")
        labels = {sK.places.label(p): p for p in range(sK.places.npoints)}
        cover = [x if isinstance(x, int) else labels[str(x)] for x in cover_raw]
        quotient = [int(x) for x in quotient]
        if "lambda" in t:
            lamL = parse_lambda(t["lambda"], pl)
        else:
            lk = sK.lam_module
            if len(quotient) != pl.group.order or any(not 0 <= x < sK.group.order for x in quotient):
                raise ValueError("quotient must send each upper element to a lower element")
            from .gmodule import GModule

            lamL = FundamentalGroup(GModule(pl.group, lk.underlying, tuple(lk.action[x] for x in quotient)),
                                    f"inflated {sK.lam.label}")
        sL = GlobalScenario(placesL, lamL)
        rep = tower_compare(sK, sL, quotient, cover, t.get("local_degrees"))
    return {
        "lower": _global_doc(pg, sK),
        "upper": _global_doc(pl, sL),
        "relative_degree": rep.relative_degree,
        "induced_matrix": _mat(rep.induced.matrix),
        "bijective": rep.bijective,
        "squares": [
            {"orbit": sq.orbit, "lower_representative": sq.lower_representative,
             "upper_representative": sq.upper_representative, "commutes_identity": sq.commutes_identity,
             "commutes_scaled": sq.commutes_scaled}
            for sq in rep.squares
        ],
        "pushforward_matrix": _mat(rep.pushforward.matrix),
        "pushforward_bijective": rep.pushforward_bijective,
        "pushforward_squares_commute": rep.pushforward_squares_commute,
        "stable": rep.stable,
        "findings": rep.findings(),
    }


def cmd_selftest(doc: dict | None, args) -> dict:
    from .zlattice import smith_normal_form

    rng = random.Random(args.seed)
    snf_ok = 0
    for _ in range(args.samples):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        m = IntMatrix.from_rows([[rng.randint(-9, 9) for _ in range(c)] for _ in range(r)], c)
        u, d, v = smith_normal_form(m)
        diag = [d[i, i] for i in range(min(r, c))]
        if u @ m @ v != d or abs(u.det()) != 1 or abs(v.det()) != 1:
            raise CrossCheckError("Smith form contract violated")
        nz = [x for x in diag if x]
        if any(b % a for a, b in zip(nz, nz[1:])):
            raise CrossCheckError("invariant factors do not divide each other")
        snf_ok += 1
    exact = 0
    for _ in range(args.samples):
        s = random_scenario(rng)
        if not verify_exactness(s).exact:
            raise CrossCheckError("localization image differs from the kernel of the sum map")
        exact += 1
    towers = []
    for _ in range(max(1, args.samples // 5)):
        t = random_tower(rng)
        rep = tower_compare(t.lower, t.upper, t.quotient, t.cover)
        towers.append(rep.stable)
    return {
        "seed": args.seed,
        "smith_checks": snf_ok,
        "exactness_checks": exact,
        "towers": len(towers),
        "stable_towers": sum(towers),
    }


COMMANDS: dict[str, Callable[[Any, Any], dict]] = {
    "local": cmd_local,
    "global": cmd_global,
    "obstruction": cmd_obstruction,
    "tn": cmd_tn,
    "tate": cmd_tate,
    "tower": cmd_tower,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="galcoh", description="Tate cohomology and local-global invariants.")
    p.add_argument("--version", action="version", version=f"galcoh {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--input", help="scenario JSON file")
        sp.add_argument("--json", action="store_true", help="print the JSON result document")
        sp.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"))
        sp.add_argument("--max-group-order", type=int, default=DEFAULT_MAX_ORDER)
        sp.add_argument("--seed", type=int, default=0)
        if name == "selftest":
            sp.add_argument("--samples", type=int, default=50)
    return p


def _format_human(doc: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    for k in sorted(doc):
        v = doc[k]
        if isinstance(v, dict) and set(v) == {"torsion", "free_rank", "pretty"}:
            out.append(f"{pad}{k}: {v['pretty']}")
        elif isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out.extend(_format_human(v, indent + 1))
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            out.append(f"{pad}{k}:")
            for i, x in enumerate(v):
                out.append(f"{pad}  [{i}]")
                out.extend(_format_human(x, indent + 2))
        else:
            out.append(f"{pad}{k}: {json.dumps(v)}")
    return out


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.window and args.window[0] > args.window[1]:
        print("error: --window LO must not exceed HI", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.command == "selftest":
            doc = None
        elif not args.input:
            print(f"error: {args.command} needs --input", file=sys.stderr)
            return EXIT_INPUT
        else:
            doc = load(args.input)
        result = COMMANDS[args.command](doc, args)
    except SizeGuardError as exc:
        print(f"size guard: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except CrossCheckError as exc:
        print(f"internal cross-check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (GalcohError, ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    document = {
        "tool": "galcoh",
        "version": __version__,
        "command": args.command,
        "input": doc,
        "window": list(args.window) if args.window else None,
        "max_group_order": args.max_group_order,
        "result": result,
    }
    if args.json:
        sys.stdout.write(json.dumps(document, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(_format_human(result)) + "\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
