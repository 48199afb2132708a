"""Command-line interface.

Exit status: 0 when the computation succeeds or the checked property holds,
1 when a checked property fails (a witness is printed), 2 for usage or input
errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import extensions as ext
from . import chains, formats, graphs, links, magma as mg, tait
from .intlin import INFINITE

OK, FAILED, BAD_INPUT = 0, 1, 2


class Report:
    """Ordered key/value lines, printed as ``key: value`` or as one JSON object."""

    def __init__(self):
        self.items: list[tuple[str, object]] = []
        self.body: str | None = None

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def emit(self, as_json: bool, out) -> None:
        if as_json:
            data = {k: _jsonable(v) for k, v in self.items}
            if self.body is not None:
                data["output"] = self.body
            out.write(json.dumps(data, sort_keys=False) + "\n")
            return
        if self.body is not None:
            out.write(self.body)
        for k, v in self.items:
            out.write(f"{k}: {_text(v)}\n")


def _text(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v == INFINITE:
        return "infinite"
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return str(v)


def _jsonable(v):
    if v == INFINITE:
        return "infinite"
    if isinstance(v, (bool, int, str)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _magma(path: str, need_seq: bool = False):
    m, seq = formats.parse_magma(_read(path))
    if need_seq and seq is None:
        raise InputError(f"{path} has no 'seq' line")
    return m, seq


def _order(text: str | None, base: int = 0) -> tuple[int, ...] | None:
    """Parse ``i,j,k`` (1-based indices) into a tuple shifted by ``base``."""
    if text is None:
        return None
    try:
        return tuple(int(x) - 1 + base for x in text.split(","))
    except ValueError:
        raise InputError(f"bad order {text!r}") from None


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad integer list {text!r}") from None


def _signs(text: str) -> tuple[int, ...]:
    table = {"+": 1, "-": -1, "+1": 1, "-1": -1, "1": 1}
    try:
        return tuple(table[x.strip()] for x in text.split(","))
    except KeyError:
        raise InputError(f"bad sign list {text!r}") from None


def _action(args) -> ext.AffineAction:
    return ext.AffineAction(args.mod, args.t, args.s, args.a0)


# -- subcommands ---------------------------------------------------------------------


def cmd_check(args, rep: Report) -> int:
    if args.property == "compatible":
        members = [_magma(p)[0] for p in args.files]
        if len(members) == 1:
            family = mg.MagmaFamily.with_projections(members[0])
        else:
            family = mg.MagmaFamily(tuple(members))
        result = mg.is_compatible_family(family)
        rep.add("compatible", bool(result))
    else:
        if len(args.files) != 1:
            raise InputError(f"check {args.property} takes one magma file")
        m, seq = _magma(args.files[0], need_seq=args.property != "entropic")
        if args.property == "entropic":
            result = mg.is_entropic(m)
            rep.add("entropic", bool(result))
        elif args.property == "bracket":
            result = mg.is_entropic(m)
            rep.add("entropic", bool(result))
            for variant in ("i", "ii"):
                r = mg.check_bracket_conditions(m, seq, variant)
                rep.add(f"condition {variant}", bool(r))
                if not r and result:
                    result = r
        else:
            result = mg.check_4move_condition(m, seq)
            rep.add("fourmove", bool(result))
    if not result:
        rep.add("witness", result.detail)
        return FAILED
    return OK


def cmd_bracket(args, rep: Report) -> int:
    m, seq = _magma(args.magma, need_seq=True)
    d = formats.parse_link(_read(args.link))
    order = _order(args.order)
    rep.add("leaves", links.resolve_leaves(d, order))
    rep.add("value", links.bracket(m, seq, d, order))
    if args.verify_orders:
        r = links.order_invariance_check(m, seq, d, args.verify_orders, random.Random(args.seed))
        rep.add("orders agree", bool(r))
        if not r:
            rep.add("witness", r.detail)
            return FAILED
    return OK


def cmd_tutte(args, rep: Report) -> int:
    m, seq = _magma(args.magma, need_seq=True)
    g = formats.parse_graph(_read(args.graph))
    g = g.graph if isinstance(g, tait.PlaneGraph) else g
    order = _order(args.order, base=1)
    rep.add("value", graphs.tutte_value(m, seq, g, order))
    if args.all_orders or args.verify_orders:
        found = graphs.all_ordering_values(m, seq, g, args.verify_orders or 200, random.Random(args.seed))
        rep.add("ordering values", sorted(found.values))
        rep.add("exact", found.exact)
        rep.add("orders checked", found.orders_checked)
        if len(found.values) > 1:
            return FAILED
    return OK


def _plane(path: str) -> tait.PlaneGraph:
    g = formats.parse_graph(_read(path))
    if not isinstance(g, tait.PlaneGraph):
        raise InputError(f"{path} has no rotation system ('rot' lines)")
    return g


def cmd_tait(args, rep: Report) -> int:
    pg = _plane(args.graph)
    if not pg.euler_ok():
        print("warning: rotation system fails the Euler check", file=sys.stderr)
    rep.body = formats.format_link(tait.medial_link(pg))
    return OK


def cmd_crosscheck(args, rep: Report) -> int:
    m, seq = _magma(args.magma, need_seq=True)
    pg = _plane(args.graph)
    r = tait.cross_check(m, seq, pg, _order(args.order, base=1))
    rep.add("agree", bool(r))
    rep.add("detail", r.detail)
    return OK if r else FAILED


def cmd_quotient(args, rep: Report) -> int:
    m, seq = _magma(args.magma, need_seq=True)
    g = formats.parse_graph(_read(args.graph))
    g = g.graph if isinstance(g, tait.PlaneGraph) else g
    q = graphs.quotient_invariant(m, seq, g, force=args.force, rng=random.Random(args.seed))
    rep.add("ordering values", sorted(q.values.values))
    rep.add("classes", " ".join("{" + ",".join(map(str, c)) + "}" for c in q.partition.classes()))
    rep.add("value class", q.value_class)
    rep.body = formats.format_magma(q.quotient)
    return OK


def _nus(args, n: int) -> dict[int, tuple[int, ...]]:
    nus = {}
    for level in range(2, 7):
        text = getattr(args, f"nu{level}")
        if text:
            nus[level] = _int_list(text)
    if args.nu:
        nus[n] = _int_list(args.nu)
    return nus


def cmd_homology(args, rep: Report) -> int:
    m, seq = _magma(args.magma)
    n = args.n
    nus = _nus(args, n)
    coeff = 0
    if args.coeff != "z":
        if not args.coeff.startswith("zp:"):
            raise InputError("--coeff must be 'z' or 'zp:P'")
        coeff = int(args.coeff[3:])
    try:
        result = chains.homology(m, n, nus, coeff, force=args.force)
    except chains.ChainComplexError as exc:
        rep.add("error", str(exc))
        return FAILED
    rep.add("homology", f"H_{n} = {result}")
    chain = None
    if args.chain:
        chain = chains.parse_chain(args.chain)
    elif n >= 2 and seq is not None and (args.link or n == 2):
        d = formats.parse_link(_read(args.link)) if args.link else links.EXAMPLE_TWO_KINKS
        leaves = links.resolve_leaves(d)
        if len(leaves) != 2**n:
            raise InputError(f"diagram has {len(leaves)} leaves; level {n} needs {2**n}")
        word = tuple(seq(k) for k in leaves)
        chain = chains.make_cycle(n, chains.nu_for(nus, n), word)
    if chain is not None and coeff == 0:
        rep.add("chain", chains.format_chain(chain))
        order = chains.homology_class_order(m, n, chain, nus, force=args.force)
        rep.add("class order", order)
    return OK


def cmd_hhat(args, rep: Report) -> int:
    members = [_magma(p)[0] for p in args.magmas]
    signs = _signs(args.signs) if args.signs else None
    if args.with_projections:
        if len(members) != 1:
            raise InputError("--with-projections takes exactly one magma")
        family = mg.MagmaFamily.with_projections(members[0], signs or (1, -1, -1))
    else:
        family = mg.MagmaFamily(tuple(members), signs or ())
    nus = _nus(args, args.n + 1)
    try:
        result = chains.hat_homology(family, args.n, nus, alternate_signs=args.alt, force=args.force)
    except chains.IncompatibleFamily as exc:
        rep.add("error", str(exc))
        return FAILED
    rep.add("homology", f"Hhat_{args.n} = {result}")
    return OK


def cmd_cocycle_check(args, rep: Report) -> int:
    m, _ = _magma(args.magma)
    f = formats.parse_cochain(_read(args.cochain), m.order)
    if not f or not isinstance(f[0], tuple):
        raise InputError("expected a 2-cochain ('f' lines)")
    r = ext.is_entropic_cocycle(f, _action(args), m)
    rep.add("cocycle", bool(r))
    if not r:
        rep.add("witness", r.detail)
        return FAILED
    return OK


def cmd_coboundary(args, rep: Report) -> int:
    m, _ = _magma(args.magma)
    c = formats.parse_cochain(_read(args.cochain), m.order)
    if c and isinstance(c[0], tuple):
        raise InputError("expected a 1-cochain ('c' lines)")
    rep.body = formats.format_cochain(ext.coboundary(c, _action(args), m))
    return OK


def cmd_extension(args, rep: Report) -> int:
    m, _ = _magma(args.magma)
    f = formats.parse_cochain(_read(args.cochain), m.order)
    e = ext.build_extension(m, _action(args), f)
    rep.body = formats.format_magma(e)
    r = mg.is_entropic(e)
    rep.add("entropic", bool(r))
    return OK


def cmd_equivalent(args, rep: Report) -> int:
    m, _ = _magma(args.magma)
    f1 = formats.parse_cochain(_read(args.first), m.order)
    f2 = formats.parse_cochain(_read(args.second), m.order)
    c = ext.extensions_equivalent(f1, f2, _action(args), m)
    if c is None:
        rep.add("equivalent", False)
        return FAILED
    rep.add("equivalent", True)
    rep.body = formats.format_cochain(c)
    return OK


def cmd_h2(args, rep: Report) -> int:
    m, _ = _magma(args.magma)
    rep.add("H^2", ext.second_cohomology(m, _action(args)))
    return OK


def cmd_enumerate(args, rep: Report) -> int:
    seq = mg.EventualSequence.repeat(*_int_list(args.seq)) if args.seq else None
    count = 0
    bodies = []
    for m in mg.enumerate_entropic_magmas(args.order, args.filter, seq):
        count += 1
        if not args.count_only:
            bodies.append(formats.format_magma(m))
    if bodies:
        rep.body = "\n".join(bodies)
    rep.add("count", count)
    return OK


_GRAPH_FIXTURES = {
    "line": tait.line_plane_graph,
    "cycle": tait.cycle_plane_graph,
    "cycle_doubled": tait.doubled_cycle_plane_graph,
}


def cmd_fixture(args, rep: Report) -> int:
    kind, n = args.kind, args.n
    if kind in _GRAPH_FIXTURES:
        rep.body = formats.format_graph(_GRAPH_FIXTURES[kind](n))
    elif kind in graphs.GRAPH_KINDS:
        rep.body = formats.format_graph(graphs.make_graph_fixture(kind, n))
    elif kind in links.MOVE_KINDS:
        left, right = links.make_move_fixture(kind, n, mirror=args.mirror)
        if args.side == "left":
            rep.body = formats.format_link(left)
        elif args.side == "right":
            rep.body = formats.format_link(right)
        else:
            rep.body = "# left\n" + formats.format_link(left) + "\n# right\n" + formats.format_link(right)
    elif kind == "two-kinks":
        rep.body = formats.format_link(links.EXAMPLE_TWO_KINKS)
    elif kind == "kink":
        rep.body = formats.format_link(links.add_kink(links.LinkDiagram.trivial(n), -1 if args.mirror else 1))
    else:
        raise InputError(f"unknown fixture {kind!r}")
    return OK


FIXTURE_KINDS = sorted(set(graphs.GRAPH_KINDS) | set(links.MOVE_KINDS) | {"two-kinks", "kink"})


# -- parser --------------------------------------------------------------------------


def _add_action_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mod", type=int, default=2, help="coefficient modulus m (0 = integers)")
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--a0", type=int, default=0)


def _add_nu_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--nu", help="nu for the top level, e.g. 1,0")
    for level in range(2, 7):
        p.add_argument(f"--nu{level}", help=f"nu for level {level}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entropic", description="Entropic magma invariants and homology.")
    parser.add_argument("--json", action="store_true", help="emit one JSON object instead of text lines")
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled computations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check a property of a magma")
    p.add_argument("property", choices=("entropic", "bracket", "fourmove", "compatible"))
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bracket", help="bracket value of a link diagram")
    p.add_argument("magma")
    p.add_argument("link")
    p.add_argument("--order", help="crossing order, 1-based, e.g. 2,1")
    p.add_argument("--verify-orders", type=int, default=0, metavar="N")
    p.set_defaults(func=cmd_bracket)

    p = sub.add_parser("tutte", help="graph invariant")
    p.add_argument("magma")
    p.add_argument("graph")
    p.add_argument("--order", help="edge order, e.g. 3,1,2")
    p.add_argument("--all-orders", action="store_true")
    p.add_argument("--verify-orders", type=int, default=0, metavar="N")
    p.set_defaults(func=cmd_tutte)

    p = sub.add_parser("tait", help="emit the medial link diagram of a plane graph")
    p.add_argument("graph")
    p.set_defaults(func=cmd_tait)

    p = sub.add_parser("crosscheck", help="graph invariant versus bracket of the medial diagram")
    p.add_argument("magma")
    p.add_argument("graph")
    p.add_argument("--order")
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("quotient", help="quotient by the congruence of all ordering values")
    p.add_argument("magma")
    p.add_argument("graph")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("homology", help="H_n of the entropic chain complex")
    p.add_argument("magma")
    p.add_argument("-n", type=int, required=True)
    _add_nu_flags(p)
    p.add_argument("--coeff", default="z", help="z or zp:P")
    p.add_argument("--force", action="store_true", help="lift the size guard")
    p.add_argument("--chain", help="chain whose class order to report, e.g. '1 (4,1,2,4) + 1 (4,2,1,4)'")
    p.add_argument("--link", help="use the leaf word of this diagram as the chain (after symmetrising)")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("hhat", help="homology of a compatible family")
    p.add_argument("magmas", nargs="+")
    p.add_argument("-n", type=int, default=1)
    _add_nu_flags(p)
    p.add_argument("--with-projections", action="store_true")
    p.add_argument("--signs", help="sign pattern, e.g. +,-,-")
    p.add_argument("--alt", action="store_true", help="use signs (-1)^n tau at level n")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_hhat)

    for name, func, files in (
        ("cocycle-check", cmd_cocycle_check, ("cochain",)),
        ("coboundary", cmd_coboundary, ("cochain",)),
        ("extension", cmd_extension, ("cochain",)),
        ("equivalent", cmd_equivalent, ("first", "second")),
        ("h2", cmd_h2, ()),
    ):
        p = sub.add_parser(name)
        p.add_argument("magma")
        for f in files:
            p.add_argument(f)
        _add_action_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("enumerate", help="list entropic magmas of a small order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--filter", choices=mg.ENUMERATION_FILTERS, default="entropic")
    p.add_argument("--seq", help="period of the sequence for the bracket filters, e.g. 1,2")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("fixture", help="emit a fixture graph or diagram")
    p.add_argument("kind", choices=FIXTURE_KINDS)
    p.add_argument("n", type=int, nargs="?", default=1)
    p.add_argument("--side", choices=("left", "right"))
    p.add_argument("--mirror", action="store_true")
    p.set_defaults(func=cmd_fixture)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    rep = Report()
    try:
        code = args.func(args, rep)
    except (InputError, mg.MagmaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    rep.emit(args.json, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
