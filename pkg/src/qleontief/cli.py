"""Command-line front end.

Subcommands: check, efficient, maximize, refine, decompose, corpus.
Exit codes: 0 pass, 1 mathematical failure (with witness), 2 input or usage
error.  Reports are deterministic: identical config and seed give
byte-identical JSON.
"""
from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import corpus as corpus_mod
from . import oracle
from .efficiency import check_charpar, efficient_set
from .io import (
    InputError,
    downset_from_json,
    dumps_report,
    elem_key,
    encode_elem,
    encode_value,
    load_json,
    point_from_json,
    utility_from_json,
)
from .leontief import TabulatedUtility, UtilityError, min_decompose, tabulate
from .maximize import (
    PreconditionError,
    argmax_over_downset,
    check_argmax_localization,
    efficient_refinement,
    maximal_argmax,
    product_downset,
)
from .oracle import InconsistencyError
from .order import OrderError, tolerant

SCHEMA = 1


def _default_seed() -> int:
    try:
        return int(os.environ.get("QL_SEED", "42"))
    except ValueError:
        return 42


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qleontief",
        description="Certification and maximization of quasi-Leontief utilities on finite posets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        p.add_argument("--quiet", action="store_true", help="suppress detail lines")
        p.add_argument("--tolerance", type=float, default=None,
                       help="tolerance override for closed-form utilities")

    p = sub.add_parser("check", help="run the certifier battery on a utility")
    p.add_argument("utility")
    common(p)

    p = sub.add_parser("efficient", help="list the efficient points")
    p.add_argument("utility")
    p.add_argument("--subset", default=None, help="down-set file restricting the search")
    common(p)

    p = sub.add_parser("maximize", help="maximize over a comprehensive set")
    p.add_argument("utility")
    p.add_argument("--downset", required=True)
    common(p)

    p = sub.add_parser("refine", help="refine a maximizer into an efficient maximizer")
    p.add_argument("utility")
    p.add_argument("--sets", nargs="+", required=True,
                   help="one comprehensive-set file per factor")
    p.add_argument("--start", default=None, help="point file with the starting maximizer")
    p.add_argument("--order", default=None, help="axis permutation, 1-based, e.g. 2,1")
    common(p)

    p = sub.add_parser("decompose", help="split a product utility into axis utilities")
    p.add_argument("utility")
    p.add_argument("--upper", required=True, help="point file with the freezing upper bound")
    p.add_argument("--subset", required=True, help="down-set file the identity must hold on")
    common(p)

    p = sub.add_parser("corpus", help="run the randomized equivalence sweeps")
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--inject-fault", action="store_true",
                   help="test mode: corrupt one dual entry and expect a failure")
    common(p)
    return parser


def _load_utility(path: str, tolerance: Optional[float]):
    u = utility_from_json(load_json(path), base_dir=os.path.dirname(path) or ".")
    if tolerance is not None and getattr(u, "scale", None) is not None:
        if u.scale.kind == "tolerant":
            u.scale = tolerant(tolerance)
    return u


def _as_tabulated(u) -> TabulatedUtility:
    if isinstance(u, TabulatedUtility):
        return u
    box = getattr(u, "box", None)
    if box is not None and box.is_grid():
        return tabulate(u)
    raise InputError("this command needs a tabulated utility or a gridded closed form")


def _emit(report: dict, args, lines: List[str]) -> None:
    if args.json:
        sys.stdout.write(dumps_report(report))
    else:
        for line in lines:
            if args.quiet and not (line.startswith("PASS") or line.startswith("FAIL")):
                continue
            print(line)


def cmd_check(args) -> int:
    u = _as_tabulated(_load_utility(args.utility, args.tolerance))
    certs = []
    base = oracle.certify_quasi_leontief(u)
    certs.append(base)
    if base.ok:
        cu = base.utility
        reg = oracle.certify_regular(cu)
        certs.append(reg)
        if reg.ok:
            certs.append(oracle.verify_galois(reg.utility, reg.dual_table))
        certs.append(oracle.check_isotone(u))
        certs.append(oracle.check_property_phi(u))
        certs.append(oracle.check_lower_bounded_level_sets(u))
        if u.poset.is_inf_semilattice():
            certs.append(oracle.check_meet_homomorphism(u))
    ok = all(c.ok for c in certs)
    report = {
        "schema": SCHEMA,
        "command": "check",
        "input": args.utility,
        "certificates": [c.to_json() for c in certs],
        "ok": ok,
    }
    lines = []
    for c in certs:
        tag = "PASS" if c.ok else "FAIL"
        line = f"{tag} {c.prop}"
        if not c.ok:
            line += f": {c.detail} witnesses={[encode_elem(w) for w in c.witnesses]}"
        lines.append(line)
    _emit(report, args, lines)
    return 0 if ok else 1


def cmd_efficient(args) -> int:
    u = _load_utility(args.utility, args.tolerance)
    subset = None
    if isinstance(u, TabulatedUtility):
        u = oracle.require_certified(u)
        if args.subset is not None:
            space = u.space if u.space is not None else u.poset
            subset = downset_from_json(load_json(args.subset), space).sorted_members()
    elif args.subset is not None:
        raise InputError("--subset needs a tabulated utility")
    eff = efficient_set(u, subset)
    pts = [encode_elem(p) for p in eff.points]
    report = {
        "schema": SCHEMA,
        "command": "efficient",
        "input": args.utility,
        "mode": eff.mode,
        "points": pts,
        "ok": True,
    }
    _emit(report, args, [f"{len(pts)} efficient points", *(str(p) for p in pts)])
    return 0


def cmd_maximize(args) -> int:
    loaded = _load_utility(args.utility, args.tolerance)
    box = getattr(loaded, "box", None)
    if not isinstance(loaded, TabulatedUtility) and (box is None or not box.is_grid()):
        # continuous closed form: isotonicity pushes the maximum to the
        # generators, so a generated down-set is enough
        obj = load_json(args.downset)
        if "generators" not in obj:
            raise InputError("closed-form maximize needs a generated down-set")
        from .io import parse_number
        from .maximize import argmax_via_generators

        gens = [tuple(parse_number(c) for c in g) for g in obj["generators"]]
        res = argmax_via_generators(loaded, gens)
        report = {
            "schema": SCHEMA,
            "command": "maximize",
            "input": args.utility,
            "result": res.to_json(),
            "ok": True,
        }
        _emit(report, args, [f"value {encode_value(res.value)}",
                             f"maximizers {[encode_elem(x) for x in res.maximizers]}"])
        return 0
    u = _as_tabulated(loaded)
    u = oracle.require_certified(u)
    space = u.space if u.space is not None else u.poset
    S = downset_from_json(load_json(args.downset), space)
    res = argmax_over_downset(u, S)
    mm = maximal_argmax(u, S)
    loc = check_argmax_localization(u, S)
    res_json = res.to_json()
    res_json["maximal_maximizer"] = encode_elem(mm)
    report = {
        "schema": SCHEMA,
        "command": "maximize",
        "input": args.utility,
        "result": res_json,
        "localization": loc.to_json(),
        "ok": loc.ok,
    }
    lines = [
        f"value {encode_value(res.value)}",
        f"maximizers {[encode_elem(x) for x in res.maximizers]}",
        f"largest efficient {encode_elem(res.largest_efficient)}",
        f"maximal maximizer {encode_elem(mm)}",
        ("PASS" if loc.ok else "FAIL") + " argmax-localization",
    ]
    _emit(report, args, lines)
    return 0 if loc.ok else 1


def _parse_order(raw: str, n: int) -> List[int]:
    try:
        order = [int(tok) for tok in raw.split(",")]
    except ValueError:
        raise InputError(f"bad --order {raw!r}") from None
    if sorted(order) != list(range(1, n + 1)):
        raise InputError(f"--order must be a permutation of 1..{n}")
    return [k - 1 for k in order]


def cmd_refine(args) -> int:
    u = _as_tabulated(_load_utility(args.utility, args.tolerance))
    if u.space is None:
        raise InputError("refine needs a product-domain utility")
    space = u.space
    if len(args.sets) != space.n_axes:
        raise InputError(f"need {space.n_axes} set files, got {len(args.sets)}")
    sets = [
        downset_from_json(load_json(path), f)
        for path, f in zip(args.sets, space.factors)
    ]
    S = product_downset(space, sets)
    cert = oracle.certify_quasi_leontief(u)
    cu = cert.utility if cert.ok else u
    if args.start is not None:
        x_star = point_from_json(load_json(args.start), space)
    else:
        members = S.sorted_members()
        best = max(u.value(x) for x in members)
        x_star = next(x for x in members if u.scale.eq(u.value(x), best))
    order = _parse_order(args.order, space.n_axes) if args.order is not None else None
    try:
        trace = efficient_refinement(cu, sets, x_star, order=order)
    except (PreconditionError, UtilityError, InconsistencyError) as exc:
        report = {
            "schema": SCHEMA,
            "command": "refine",
            "input": args.utility,
            "ok": False,
            "error": str(exc),
        }
        _emit(report, args, [f"FAIL refinement: {exc}"])
        return 1
    report = {
        "schema": SCHEMA,
        "command": "refine",
        "input": args.utility,
        "trace": trace.to_json(),
        "ok": True,
    }
    lines = [
        f"start {encode_elem(trace.start)}",
        *(
            f"axis {s.axis + 1}: {encode_elem(s.before)} -> {encode_elem(s.after)}"
            for s in trace.steps
        ),
        f"result {encode_elem(trace.result)}",
        "PASS refinement (argmax, dominated, efficient)",
    ]
    if cert.ok:
        xbar = argmax_over_downset(cu, S).largest_efficient
        report["largest_efficient"] = encode_elem(xbar)
        report["refined_equals_largest_efficient"] = xbar == trace.result
        lines.append(f"largest efficient {encode_elem(xbar)}")
    _emit(report, args, lines)
    return 0


def cmd_decompose(args) -> int:
    u = _as_tabulated(_load_utility(args.utility, args.tolerance))
    if u.space is None:
        raise InputError("decompose needs a product-domain utility")
    space = u.space
    S = downset_from_json(load_json(args.subset), space)
    xbar = point_from_json(load_json(args.upper), space)
    try:
        parts = min_decompose(u, S.sorted_members(), xbar)
    except UtilityError as exc:
        raise InputError(str(exc)) from exc
    bad = []
    for x in S.sorted_members():
        got = min(p.value(c) for p, c in zip(parts, x))
        if not u.scale.eq(got, u.value(x)):
            bad.append((x, u.value(x), got))
    report = {
        "schema": SCHEMA,
        "command": "decompose",
        "input": args.utility,
        "factors": [
            {elem_key(e): encode_value(v) for e, v in p.values.items()} for p in parts
        ],
        "identity": {
            "ok": not bad,
            "violations": [
                {"point": encode_elem(x), "value": encode_value(v), "min_form": encode_value(g)}
                for x, v, g in bad
            ],
        },
        "ok": not bad,
    }
    lines = [f"{len(parts)} axis utilities"]
    lines.append(("PASS" if not bad else "FAIL") + " min-identity on subset")
    _emit(report, args, lines)
    return 0 if not bad else 1


# -- corpus suites -----------------------------------------------------------


def _suite_triangle(seed: int, n: int, inject: bool) -> List[dict]:
    failures = []
    fault_pending = inject
    for i in range(n):
        rng = corpus_mod.derive_rng(seed, "triangle", i)
        poset = corpus_mod.random_poset(rng, 16, with_bottom=True)
        u = corpus_mod.random_isotone_utility(rng, poset)
        cert = oracle.check_characterization_equivalence(u)
        if not cert.ok:
            failures.append({"instance": i, "property": cert.prop, "detail": cert.detail})
            continue
        base = oracle.certify_quasi_leontief(u)
        if base.ok:
            reg = oracle.certify_regular(base.utility)
            if reg.ok:
                table = dict(reg.dual_table)
                if fault_pending and table:
                    lam = sorted(table)[-1]
                    alt = next(e for e in poset.elements if e != table[lam])
                    table[lam] = alt
                    fault_pending = False
                gal = oracle.verify_galois(reg.utility, table)
                if not gal.ok:
                    failures.append(
                        {"instance": i, "property": gal.prop, "detail": gal.detail}
                    )
    return failures


def _suite_charpar(seed: int, n: int) -> List[dict]:
    failures = []
    for i in range(n):
        rng = corpus_mod.derive_rng(seed, "charpar", i)
        space = corpus_mod.random_product_of_chains(rng)
        u = corpus_mod.random_isotone_on_product(rng, space)
        cert = check_charpar(u)
        if not cert.ok:
            failures.append({"instance": i, "property": cert.prop, "detail": cert.detail})
    return failures


def _suite_localization(seed: int, n: int) -> List[dict]:
    failures = []
    for i in range(n):
        rng = corpus_mod.derive_rng(seed, "localization", i)
        poset = corpus_mod.random_poset(rng, 12, with_bottom=True)
        u = corpus_mod.random_quasileontief_utility(rng, poset)
        cu = oracle.require_certified(u)
        S = corpus_mod.random_downset(rng, poset)
        problems = []
        loc = check_argmax_localization(cu, S)
        if not loc.ok:
            problems.append(loc.detail)
        res = argmax_over_downset(cu, S)
        if res.largest_efficient not in res.maximizers:
            problems.append("largest efficient point is not a maximizer")
        if not all(poset.leq(res.largest_efficient, x) for x in res.maximizers):
            problems.append("a maximizer fails to dominate the largest efficient point")
        mm = maximal_argmax(cu, S)
        if not cu.scale.eq(cu.value(mm), res.value):
            problems.append("maximal maximizer misses the maximum value")
        if any(y != mm and y in S.members() for y in poset.up_set(mm)):
            problems.append("maximal maximizer is not maximal in S")
        for p in problems:
            failures.append({"instance": i, "property": "maximization", "detail": p})
    return failures


def _suite_refinement(seed: int, n: int) -> List[dict]:
    failures = []
    for i in range(n):
        rng = corpus_mod.derive_rng(seed, "refinement", i)
        space = corpus_mod.random_product_of_chains(rng)
        u = corpus_mod.random_isotone_on_product(rng, space)
        sets = corpus_mod.random_prefix_downsets(rng, space)
        S = product_downset(space, sets)
        members = S.sorted_members()
        best = max(u.value(x) for x in members)
        maximizers = [x for x in members if u.scale.eq(u.value(x), best)]
        for x_star in maximizers:
            try:
                efficient_refinement(u, sets, x_star)
            except (InconsistencyError, UtilityError) as exc:
                failures.append(
                    {"instance": i, "property": "refinement", "detail": str(exc)}
                )
    return failures


def cmd_corpus(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    n = args.n
    suites = []
    runs = [
        ("characterization-triangle", lambda: _suite_triangle(seed, n, args.inject_fault)),
        ("charpar", lambda: _suite_charpar(seed, n)),
        ("argmax-localization", lambda: _suite_localization(seed, n)),
        ("refinement", lambda: _suite_refinement(seed, n)),
    ]
    total = 0
    for name, run in runs:
        failures = run() if n > 0 else []
        total += len(failures)
        suites.append(
            {
                "name": name,
                "instances": n,
                "inconsistencies": len(failures),
                "failures": failures,
            }
        )
    report = {
        "schema": SCHEMA,
        "command": "corpus",
        "seed": seed,
        "n": n,
        "suites": suites,
        "ok": total == 0,
    }
    lines = [
        f"{s['name']}: {s['instances']} instances, {s['inconsistencies']} inconsistencies"
        for s in suites
    ]
    lines.append(("PASS" if total == 0 else "FAIL") + f" corpus ({total} inconsistencies)")
    _emit(report, args, lines)
    return 0 if total == 0 else 1


_COMMANDS = {
    "check": cmd_check,
    "efficient": cmd_efficient,
    "maximize": cmd_maximize,
    "refine": cmd_refine,
    "decompose": cmd_decompose,
    "corpus": cmd_corpus,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except oracle.CertificationError as exc:
        # a mathematical verdict, not an input problem
        print(f"FAIL {exc}")
        return 1
    except (InputError, OrderError, UtilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
