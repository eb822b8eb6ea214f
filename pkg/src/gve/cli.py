"""Command-line interface: ``gve check|classify|example|map|selftest``.

Exit codes: 0 pass, 1 classification differs from ``expect``, 2 parse or
validation error, 3 a precision bound was exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .dsl import DslError, load, print_doc, parse_pilinear
from .extensions import check_axioms, classify_global, default_grid
from .fixtures import FIXTURE_NAMES, make_fixture, run_all
from .maps import (
    Family,
    GradedMap,
    GradedMapTable,
    InconsistentTable,
    check_graded_map,
    classify_table,
    farey_grid,
    is_nice_map,
    lemma46_check,
)
from .report import dumps, render_rows, report
from .scalars import PiLinear, PiPrecisionError

EXIT_OK, EXIT_MISMATCH, EXIT_INVALID, EXIT_BOUND = 0, 1, 2, 3
DEFAULT_SEED = 0xC0FFEE


class UsageError(ValueError):
    pass


def _grid_arg(text: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("grid must be P,Q with positive integers") from None
    if p < 1 or q < 1:
        raise argparse.ArgumentTypeError("grid must be P,Q with positive integers")
    return p, q


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _pilinear(text: str) -> PiLinear:
    try:
        return parse_pilinear(text)
    except DslError as e:
        raise argparse.ArgumentTypeError(f"bad constant {text!r}: {e}") from None


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _out(text: str | bytes):
    if isinstance(text, bytes):
        text = text.decode()
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _grid_for(inst, grid):
    F = inst.family
    if grid is None:
        return None
    if F.rule is None:
        raise UsageError("--grid does not apply to a table family; its grid is the table")
    return default_grid(F.named_grades, *grid)


def cmd_check(args) -> int:
    inst = load(_read(args.file))
    rep = check_axioms(inst.family, _grid_for(inst, args.grid))
    _out(report(rep, "json" if args.json else "text"))
    return EXIT_OK if rep else EXIT_INVALID


def cmd_classify(args) -> int:
    inst = load(_read(args.file))
    grid = _grid_for(inst, args.grid)
    rep = check_axioms(inst.family, grid)
    if not rep:
        _out(report(rep, "json" if args.json else "text"))
        return EXIT_INVALID
    v = classify_global(inst.family, grid, N=args.bound)
    v.axioms = rep.summary()
    _out(report(v, "json" if args.json else "text"))
    if inst.expected and inst.expected != v.letter:
        if not args.json:
            _out(f"mismatch: expected ({inst.expected}), got ({v.letter})")
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_example(args) -> int:
    fx = make_fixture(args.name)
    text = print_doc(fx.instance.doc)
    if args.emit:
        Path(args.emit).write_text(text, encoding="utf-8")
    if args.json:
        rep = check_axioms(fx.family)
        v = classify_global(fx.family, N=args.bound)
        v.axioms = rep.summary()
        _out(report(v, "json"))
    elif not args.emit:
        _out(text)
    return EXIT_OK


def _map_from_args(args):
    if args.table is not None:
        try:
            raw = json.loads(args.table)
            return GradedMapTable({Fraction(k): int(v) for k, v in raw.items()})
        except (ValueError, TypeError, AttributeError) as e:
            raise UsageError(f"bad table: {e}") from None
    if args.family is None or args.d is None:
        raise UsageError("give --family and --d, or --table")
    return GradedMap(Family(args.family), args.d)


def cmd_map(args) -> int:
    f = _map_from_args(args)
    if args.action == "eval":
        if args.r is None:
            raise UsageError("map eval needs --r")
        val = f.eval(args.r)
        _out(dumps({"map": str(f), "r": str(args.r), "value": val}) if args.json else str(val))
        return EXIT_OK
    if args.action == "check":
        if args.grid:
            grid = farey_grid(*args.grid)
        elif isinstance(f, GradedMapTable):
            grid = f.domain
        else:
            grid = farey_grid(8, 8)
        rep = check_graded_map(f, grid)
        if args.json:
            _out(dumps({"ok": rep.ok, "reason": rep.reason,
                        "s": None if rep.s is None else str(rep.s),
                        "t": None if rep.t is None else str(rep.t)}))
        else:
            _out(str(rep))
        return EXIT_OK if rep else EXIT_INVALID
    if args.action == "classify":
        table = f if isinstance(f, GradedMapTable) else GradedMapTable.restrict(f, farey_grid(*(args.grid or (8, 8))))
        try:
            cands = classify_table(table)
        except InconsistentTable as e:
            _out(dumps({"candidates": [], "error": str(e)}) if args.json else f"no family fits: {e}")
            return EXIT_INVALID
        if args.json:
            _out(dumps({"candidates": [{"family": c.family.value, "interval": str(c.interval)} for c in cands]}))
        else:
            _out("\n".join(str(c) for c in cands))
        return EXIT_OK
    if args.r is None:
        raise UsageError("map nice needs --r")
    ok = is_nice_map(f, args.r, args.N)
    _out(dumps({"nice": ok}) if args.json else ("nice" if ok else "not nice"))
    return EXIT_OK if ok else EXIT_MISMATCH


def _draw_map(rng: random.Random) -> GradedMap:
    fam = rng.choice(list(Family))
    if rng.random() < 0.5:
        d = PiLinear(Fraction(rng.randint(-36, 36), rng.randint(1, 12)))
    else:
        d = PiLinear(rng.randint(-3, 3), rng.randint(-3, 3))
    if fam is Family.FD and d.is_zero():
        d = PiLinear(1)
    return GradedMap(fam, d)


def cmd_selftest(args) -> int:
    t0 = time.perf_counter()
    rows = run_all(bound=args.bound)
    ok = all(r.ok for r in rows)
    rng = random.Random(args.seed)
    grid = farey_grid(6, 6)
    map_fail = []
    for _ in range(args.draws):
        f = _draw_map(rng)
        if not check_graded_map(f, grid) or not lemma46_check(f, 1, 20):
            map_fail.append(str(f))
            continue
        if not any(c.contains(f) for c in classify_table(GradedMapTable.restrict(f, grid))):
            map_fail.append(str(f))
    elapsed = time.perf_counter() - t0
    if args.json:
        _out(dumps({"fixtures": json.loads(render_rows(rows, "json")), "seed": args.seed,
                    "map_draws": args.draws, "map_failures": map_fail, "seconds": round(elapsed, 3)}))
    else:
        _out(render_rows(rows))
        _out(f"graded maps: {args.draws - len(map_fail)}/{args.draws} seeded draws pass (seed {args.seed:#x})")
        _out(f"elapsed {elapsed:.2f}s")
    return EXIT_OK if ok and not map_fail else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gve", description="Graded extensions of valuation rings over Q-graded skew group rings.")
    p.add_argument("--version", action="version", version=f"gve {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="check the graded-extension axioms of an instance")
    c.add_argument("file")
    c.add_argument("--grid", type=_grid_arg, metavar="P,Q")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_check)

    c = sub.add_parser("classify", help="classify an instance into types (a)-(h)")
    c.add_argument("file")
    c.add_argument("--bound", type=int, default=16, metavar="N")
    c.add_argument("--grid", type=_grid_arg, metavar="P,Q")
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("example", help="print or emit a reference instance")
    c.add_argument("name", choices=FIXTURE_NAMES)
    c.add_argument("--emit", metavar="FILE")
    c.add_argument("--json", action="store_true", help="print the verdict as JSON")
    c.add_argument("--bound", type=int, default=16, metavar="N")
    c.set_defaults(func=cmd_example)

    c = sub.add_parser("map", help="graded maps Q -> Z")
    c.add_argument("action", choices=("eval", "check", "classify", "nice"))
    c.add_argument("--family", choices=[f.value for f in Family])
    c.add_argument("--d", type=_pilinear, help="parameter a + b*pi, e.g. 1/3, pi, 2-pi")
    c.add_argument("--table", help='JSON table such as {"0":0,"1":1,"-1":-2}')
    c.add_argument("--grid", type=_grid_arg, metavar="P,Q")
    c.add_argument("--r", type=_rational)
    c.add_argument("--N", type=int, default=8)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_map)

    c = sub.add_parser("selftest", help="classify every reference instance and run seeded map checks")
    c.add_argument("--seed", type=lambda s: int(s, 0), default=DEFAULT_SEED)
    c.add_argument("--bound", type=int, default=16, metavar="N")
    c.add_argument("--draws", type=int, default=50)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PiPrecisionError as e:
        print(f"gve: precision bound exceeded: {e}", file=sys.stderr)
        return EXIT_BOUND
    except ValueError as e:  # parse, validation and usage errors
        print(f"gve: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"gve: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
