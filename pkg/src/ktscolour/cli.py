"""Command-line front end: ``ktscolour <command> ...``.

Designs are named either by a catalog identifier (``kts9``, ``tv33-7``) or by
a DESIGN file path. Output is ``key: value`` lines on stdout.

Exit codes: 0 success, 1 verification failure or UNSAT, 2 usage error,
3 timeout.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path
from typing import Callable

from . import catalog, constructions
from .core import (
    Colouring,
    DesignError,
    Permutation,
    System,
    colour_type,
    delete_point,
    is_weak,
    parse_type,
    rainbow_check,
    verify_frame,
    verify_gdd,
    verify_kts,
    verify_pairwise_balance,
    verify_resolution,
)
from .formats import emit_colouring, emit_design, parse_colouring, parse_design
from .solver import SAT, TIMEOUT, SearchOptions, chromatic_number, find_resolution, search_weak_colouring

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TIMEOUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def load_system(ref: str) -> System:
    path = Path(ref)
    if path.is_file():
        system = parse_design(path.read_text())
        return System(system.design, system.resolution, system.groups, system.colouring, name=path.stem)
    try:
        return catalog.get(ref)
    except KeyError:
        raise UsageError(f"{ref!r} is neither a readable file nor a catalog design") from None


def load_colouring(ref: str, system: System | None = None) -> Colouring:
    """File path, catalog colouring id, id relative to the design, or a literal."""
    path = Path(ref)
    v = None if system is None else system.design.v
    if path.is_file():
        text = path.read_text()
        if text.lstrip().startswith("DESIGN"):
            col = parse_design(text).colouring
            if col is None:
                raise UsageError(f"{ref} has no COLOURING section")
            return col
        return parse_colouring(text, v)
    candidates = [ref]
    if system is not None and system.name:
        candidates.insert(0, f"{system.name}-{ref}")
        if ref in system.colourings:
            return system.colourings[ref]
        for cand in candidates:
            if cand in system.colourings:
                return system.colourings[cand]
    for cand in candidates:
        try:
            return catalog.colouring(cand)
        except KeyError:
            pass
    if v is not None and len(ref) == v and ref.isdigit():
        return Colouring.from_string(ref)
    raise UsageError(f"cannot resolve colouring {ref!r}")


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(**items) -> None:
    for key, value in items.items():
        print(f"{key}: {value}")


# -- commands ----------------------------------------------------------------

def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in catalog.names():
            s = catalog.get(name)
            print(f"{name}: v={s.design.v} k={s.design.k} b={s.design.b}"
                  f" colourings={','.join(sorted(s.colourings)) or '-'}")
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog emit needs --name")
    system = load_system(args.name)
    col = load_colouring(args.with_colouring, system) if args.with_colouring else None
    if args.one_based:
        # human-readable listing only; not a DESIGN file
        d, res = system.design, system.resolution
        groups = res.classes if res is not None else (tuple(range(d.b)),)
        lines = [f"# {system.name}, points 1..{d.v}"]
        for ci, cls in enumerate(groups):
            lines.append(f"class {ci + 1}: " + " ".join("{" + ",".join(str(p + 1) for p in d.blocks[b]) + "}"
                                                       for b in cls))
        if col is not None:
            lines.append("colouring: " + " ".join(str(c + 1) for c in col.colours))
        _write("\n".join(lines) + "\n", args.out)
        return EXIT_OK
    text = emit_design(System(system.design, system.resolution, system.groups, col))
    _write(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    system = load_system(args.design)
    d = system.design
    reports = []
    if args.gdd or args.frame:
        if system.groups is None:
            raise UsageError("--gdd/--frame need a design with groups")
        reports.append(verify_gdd(d, system.groups))
    elif system.groups is None:
        reports.append(verify_pairwise_balance(d))
    if args.frame or args.resolution:
        if system.resolution is None:
            raise UsageError("the design carries no resolution")
        if args.frame:
            reports.append(verify_frame(d, system.groups, system.resolution))
        elif d.k == 3 and system.groups is None:
            reports.append(verify_kts(d, system.resolution))
        else:
            reports.append(verify_resolution(d, system.resolution, system.groups))
    col = system.colouring
    if args.colouring:
        col = load_colouring(args.colouring, system)
    if args.colouring or args.rainbow:
        if col is None:
            raise UsageError("no colouring given")
        reports.append(is_weak(d, col))
        _say(colour_type=" ".join(f"{s}^{n}" for s, n in sorted(colour_type(col).items())))
    if args.rainbow:
        if system.resolution is None:
            raise UsageError("--rainbow needs a resolution")
        reports.append(rainbow_check(d, system.resolution, col))
    for r in reports:
        print("\n".join(r.lines()))
    ok = all(reports)
    _say(result="ok" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_chromatic(args) -> int:
    system = load_system(args.design)
    out = chromatic_number(system.design, max_delta=args.max, budget=args.budget, threads=args.threads)
    for delta, o in sorted(out.outcomes.items()):
        _say(**{f"delta{delta}": f"{o.status} nodes={o.nodes} seconds={o.seconds:.3f}"})
    _say(chromatic=out.value)
    return EXIT_OK if out.determined else EXIT_TIMEOUT


def cmd_colour(args) -> int:
    system = load_system(args.design)
    rainbow = None
    if args.rainbow:
        if system.resolution is None:
            raise UsageError("--rainbow needs a design with a resolution")
        rainbow = system.resolution
    opts = SearchOptions(args.delta, equitable=args.equitable,
                         required_type=parse_type(args.type) if args.type else None,
                         min_colours_per_block=args.min_block_colours, rainbow=rainbow,
                         time_budget=args.budget, threads=args.threads)
    out = search_weak_colouring(system.design, opts)
    _say(status=out.status, nodes=out.nodes, seconds=f"{out.seconds:.3f}")
    if out.status == SAT:
        _say(colouring=emit_colouring(out.colouring))
        if args.out:
            Path(args.out).write_text(emit_colouring(out.colouring) + "\n")
        return EXIT_OK
    return EXIT_TIMEOUT if out.status == TIMEOUT else EXIT_FAIL


def cmd_resolve(args) -> int:
    system = load_system(args.design)
    auto = None
    if args.automorphism:
        cycles = [[int(t) for t in c.replace(",", " ").split()] for c in re.findall(r"\(([^()]*)\)", args.automorphism)]
        if not cycles:
            raise UsageError("--automorphism expects cycle notation such as '(0,1,2)(3,4)'")
        auto = Permutation.from_cycles(system.design.v, cycles)
    out = find_resolution(system.design, budget=args.budget, seed=args.seed, automorphism=auto)
    _say(status=out.status, nodes=out.nodes, seconds=f"{out.seconds:.3f}")
    if out.status == SAT:
        text = emit_design(System(system.design, out.resolution, system.groups, system.colouring))
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK
    return EXIT_TIMEOUT if out.status == TIMEOUT else EXIT_FAIL


# -- construct ----------------------------------------------------------------

def _ints(text: str) -> list[int]:
    return [int(t) for t in text.replace(",", " ").split()]


def _need(mapping: dict, key: str, what: str):
    if key not in mapping:
        raise UsageError(f"{what} needs {key}")
    return mapping[key]


def _recipe_delete_point(p, i):
    s = load_system(_need(i, "kts", "delete_point"))
    d, g, r = delete_point(s.design, s.resolution, int(p.get("point", 0)))
    return System(d, r, g, name="frame")


def _recipe_tripling(p, i):
    s = load_system(_need(i, "kts", "tripling"))
    col = load_colouring(i["colouring"], s) if "colouring" in i else None
    return constructions.tripling(s, col)


def _recipe_rainbow_frame(p, i):
    frame = load_system(_need(i, "frame", "rainbow_frame"))
    return constructions.rainbow_frame_construction(frame, int(p.get("w", 3)))


def _recipe_td3(p, i):
    return constructions.td3_resolvable(int(_need(p, "v", "td3_resolvable")))


def _recipe_4gdd(p, i):
    return constructions.quadruple_to_4gdd(load_system(_need(i, "q", "quadruple_to_4gdd")))


def _recipe_blowup(p, i):
    gdd = load_system(_need(i, "gdd", "gdd_blowup"))
    return constructions.gdd_blowup(gdd, int(_need(p, "g", "gdd_blowup")),
                                    load_system(_need(i, "ingredient", "gdd_blowup")))


def _recipe_fill(p, i):
    frame = load_system(_need(i, "frame", "frame_fill_one_point"))
    n = len(frame.groups.groups) if frame.groups else 0
    fills = [i.get(f"fill{j}", i.get("fill")) for j in range(n)]
    if None in fills:
        raise UsageError("frame_fill_one_point needs --input fill=F or fill0..fillN")
    systems = [load_system(f) for f in fills]
    if frame.colouring is not None and "inf_colour" in p:
        systems = [constructions.align_fill(s, [frame.colouring.colours[x] for x in g], int(p["inf_colour"]))
                   for s, g in zip(systems, frame.groups.groups)]
    return constructions.frame_fill_one_point(frame, systems)


def _recipe_rgdd(p, i):
    return constructions.rgdd_4_3_coloured(*_ints(_need(p, "c", "rgdd_4_3_coloured")),
                                           int(_need(p, "delta", "rgdd_4_3_coloured")))


def _recipe_frame84(p, i):
    base = load_system(i["base"]) if "base" in i else None
    return constructions.frame_8_4_coloured(_ints(_need(p, "c", "frame_8_4_coloured")),
                                            int(_need(p, "delta", "frame_8_4_coloured")), base)


def _recipe_pipeline(p, i):
    q = load_system(_need(i, "q", "sts_to_kts_pipeline"))
    s = point_map = extra = None
    if "s" in i:
        s = load_system(i["s"])
        if "colouring" in i:
            s = s.with_colouring(load_colouring(i["colouring"], s))
        point_map = dict(enumerate(_ints(_need(p, "map", "an embedded STS"))))
        extra = _ints(_need(p, "extra", "an embedded STS"))
    return constructions.sts_to_kts_pipeline(s, q, point_map, extra, int(_need(p, "delta", "sts_to_kts_pipeline")))


def _recipe_kq(p, i):
    return constructions.kq_build(load_system(_need(i, "q", "kq_build")), p.get("ordering"),
                                  method=p.get("method", "assemble"))


def _recipe_kq2(p, i):
    q = load_system(_need(i, "q", "kq_colour_2delta"))
    col = load_colouring(i["colouring"], q) if "colouring" in i else None
    return constructions.kq_colour_2delta(q, col)


def _recipe_kq1(p, i):
    q = load_system(_need(i, "q", "kq_colour_delta_plus_one"))
    return constructions.kq_colour_delta_plus_one(q, load_colouring(_need(i, "colouring", "kq_colour_delta_plus_one"), q))


RECIPES: dict[str, Callable] = {
    "td3_resolvable": _recipe_td3,
    "tripling": _recipe_tripling,
    "delete_point": _recipe_delete_point,
    "rainbow_frame": _recipe_rainbow_frame,
    "quadruple_to_4gdd": _recipe_4gdd,
    "gdd_blowup": _recipe_blowup,
    "frame_fill_one_point": _recipe_fill,
    "rgdd_4_3_coloured": _recipe_rgdd,
    "frame_8_4_coloured": _recipe_frame84,
    "sts_to_kts_pipeline": _recipe_pipeline,
    "kq_build": _recipe_kq,
    "kq_colour_2delta": _recipe_kq2,
    "kq_colour_delta_plus_one": _recipe_kq1,
}
RECIPES["rainbow_frame_construction"] = RECIPES["rainbow_frame"]


def _pairs(items: list[str], flag: str) -> dict[str, str]:
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"{flag} expects name=value, got {item!r}")
        out[key] = value
    return out


def cmd_construct(args) -> int:
    recipe = RECIPES.get(args.recipe)
    if recipe is None:
        raise UsageError(f"unknown recipe {args.recipe!r}; choose from {', '.join(sorted(RECIPES))}")
    system = recipe(_pairs(args.param, "--param"), _pairs(args.input, "--input"))
    text = emit_design(system)
    _say(recipe=args.recipe, v=system.design.v, blocks=system.design.b,
         classes=len(system.resolution.classes) if system.resolution else 0)
    if system.colouring is not None:
        _say(colours=system.colouring.delta)
    if args.out:
        Path(args.out).write_text(text)
        _say(out=args.out)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ktscolour", description="Construct, verify and colour Kirkman triple systems.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list or emit stored designs")
    c.add_argument("action", choices=("list", "emit"))
    c.add_argument("--name")
    c.add_argument("--with-colouring")
    c.add_argument("--one-based", action="store_true", help="print a 1-based class listing instead of a DESIGN file")
    c.add_argument("--out")
    c.set_defaults(func=cmd_catalog)

    v = sub.add_parser("verify", help="run verifiers on a design")
    v.add_argument("--design", required=True)
    v.add_argument("--resolution", action="store_true")
    v.add_argument("--gdd", action="store_true")
    v.add_argument("--frame", action="store_true")
    v.add_argument("--colouring")
    v.add_argument("--rainbow", action="store_true")
    v.set_defaults(func=cmd_verify)

    ch = sub.add_parser("chromatic", help="exact weak chromatic number")
    ch.add_argument("--design", required=True)
    ch.add_argument("--max", type=int, default=8)
    ch.add_argument("--budget", type=float)
    ch.add_argument("--threads", type=int, default=1)
    ch.set_defaults(func=cmd_chromatic)

    co = sub.add_parser("colour", help="search for a weak colouring")
    co.add_argument("--design", required=True)
    co.add_argument("--delta", type=int, required=True)
    co.add_argument("--equitable", action="store_true")
    co.add_argument("--type")
    co.add_argument("--min-block-colours", type=int, default=2)
    co.add_argument("--rainbow", action="store_true")
    co.add_argument("--budget", type=float)
    co.add_argument("--threads", type=int, default=1)
    co.add_argument("--out")
    co.set_defaults(func=cmd_colour)

    r = sub.add_parser("resolve", help="find parallel classes")
    r.add_argument("--design", required=True)
    r.add_argument("--budget", type=float)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--automorphism", help="restrict to resolutions invariant under this permutation (cycle notation)")
    r.add_argument("--out")
    r.set_defaults(func=cmd_resolve)

    k = sub.add_parser("construct", help="run a construction")
    k.add_argument("recipe")
    k.add_argument("--param", action="append", default=[])
    k.add_argument("--input", action="append", default=[])
    k.add_argument("--out")
    k.set_defaults(func=cmd_construct)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except constructions.ConstructionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (DesignError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
