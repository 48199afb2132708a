"""Line-oriented text formats for magmas, link diagrams, graphs and cochains.

Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

from typing import Iterator

from .extensions import Cochain1, Cochain2
from .graphs import SignedGraph
from .links import LinkDiagram
from .magma import EventualSequence, FiniteMagma, MagmaError
from .tait import PlaneGraph, format_half_edge


class FormatError(MagmaError):
    pass


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line.split()


def _int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"line {number}: expected an integer, got {token!r}") from None


def _header(lines, keyword: str) -> tuple[int, list[str]]:
    try:
        number, words = next(lines)
    except StopIteration:
        raise FormatError(f"empty input, expected '{keyword}' header") from None
    if words[0] != keyword:
        raise FormatError(f"line {number}: expected '{keyword}' header, got {words[0]!r}")
    return number, words


# -- magma -----------------------------------------------------------------------


def parse_magma(text: str) -> tuple[FiniteMagma, EventualSequence | None]:
    """``magma <n>``, then n rows of n entries, then optionally ``seq <pre...> repeat <period...>``."""
    lines = _lines(text)
    number, words = _header(lines, "magma")
    if len(words) != 2:
        raise FormatError(f"line {number}: expected 'magma <n>'")
    n = _int(words[1], number)
    rows = []
    seq = None
    for number, words in lines:
        if words[0] == "seq":
            if seq is not None:
                raise FormatError(f"line {number}: duplicate seq line")
            if "repeat" not in words:
                raise FormatError(f"line {number}: seq needs a 'repeat' part")
            k = words.index("repeat")
            pre = [_int(w, number) for w in words[1:k]]
            period = [_int(w, number) for w in words[k + 1:]]
            seq = EventualSequence(tuple(pre), tuple(period))
            continue
        if seq is not None:
            raise FormatError(f"line {number}: table rows must come before seq")
        rows.append(tuple(_int(w, number) for w in words))
    if len(rows) != n:
        raise FormatError(f"expected {n} table rows, got {len(rows)}")
    magma = FiniteMagma(tuple(rows))
    if seq is not None and not seq.fits(magma):
        raise FormatError("sequence values exceed the magma order")
    return magma, seq


def format_magma(magma: FiniteMagma, seq: EventualSequence | None = None) -> str:
    out = [f"magma {magma.order}"]
    out += [" ".join(map(str, row)) for row in magma.table]
    if seq is not None:
        out.append(format_sequence(seq))
    return "\n".join(out) + "\n"


def format_sequence(seq: EventualSequence) -> str:
    return " ".join(["seq", *map(str, seq.preperiod), "repeat", *map(str, seq.period)])


# -- link --------------------------------------------------------------------------


def parse_link(text: str) -> LinkDiagram:
    lines = _lines(text)
    number, words = _header(lines, "link")
    circles = None
    crossings = []
    for number, words in lines:
        if words[0] == "circles":
            if len(words) != 2 or circles is not None:
                raise FormatError(f"line {number}: expected a single 'circles <f>' line")
            circles = _int(words[1], number)
        elif words[0] == "x":
            if len(words) != 5:
                raise FormatError(f"line {number}: a crossing needs four arc labels")
            crossings.append(tuple(_int(w, number) for w in words[1:]))
        else:
            raise FormatError(f"line {number}: unknown record {words[0]!r}")
    return LinkDiagram(tuple(crossings), circles or 0)


def format_link(d: LinkDiagram) -> str:
    out = ["link", f"circles {d.free_circles}"]
    out += ["x " + " ".join(map(str, c)) for c in d.crossings]
    return "\n".join(out) + "\n"


# -- graphs ------------------------------------------------------------------------


def _half_edge(token: str, number: int) -> tuple[int, int]:
    if len(token) < 2 or token[-1] not in "ab":
        raise FormatError(f"line {number}: bad half-edge token {token!r}")
    return _int(token[:-1], number), "ab".index(token[-1])


def parse_graph(text: str) -> SignedGraph | PlaneGraph:
    """Graph file; ``rot`` lines, when present, make it a plane graph."""
    lines = _lines(text)
    number, words = _header(lines, "graph")
    if len(words) != 2:
        raise FormatError(f"line {number}: expected 'graph <vertexCount>'")
    vertices = _int(words[1], number)
    edges = []
    rotation: dict[int, tuple] = {}
    for number, words in lines:
        if words[0] == "e":
            if len(words) != 4 or words[3] not in ("+", "-"):
                raise FormatError(f"line {number}: expected 'e <u> <v> <+|->'")
            edges.append((_int(words[1], number), _int(words[2], number), 1 if words[3] == "+" else -1))
        elif words[0] == "rot":
            if len(words) < 3 or words[2] != ":":
                raise FormatError(f"line {number}: expected 'rot <v> : <half-edges>'")
            v = _int(words[1], number)
            if v in rotation:
                raise FormatError(f"line {number}: duplicate rotation for vertex {v}")
            rotation[v] = tuple(_half_edge(w, number) for w in words[3:])
        else:
            raise FormatError(f"line {number}: unknown record {words[0]!r}")
    graph = SignedGraph.build(vertices, edges)
    if not rotation:
        return graph
    return PlaneGraph(graph, tuple(rotation.get(v, ()) for v in range(1, vertices + 1)))


def format_graph(g: SignedGraph | PlaneGraph) -> str:
    plane = g if isinstance(g, PlaneGraph) else None
    graph = plane.graph if plane else g
    out = [f"graph {graph.vertices}"]
    out += [f"e {e.u} {e.v} {'+' if e.sign == 1 else '-'}" for e in graph.edges]
    if plane:
        for v, r in enumerate(plane.rotation, start=1):
            out.append(" ".join([f"rot {v} :", *map(format_half_edge, r)]).rstrip())
    return "\n".join(out) + "\n"


# -- cochains ----------------------------------------------------------------------


def parse_cochain(text: str, n: int) -> Cochain1 | Cochain2:
    """``c <x> <value>`` lines give a 1-cochain, ``f <x1> <x2> <value>`` lines a 2-cochain."""
    ones: dict[int, int] = {}
    twos: dict[tuple[int, int], int] = {}
    for number, words in _lines(text):
        if words[0] == "c" and len(words) == 3:
            x = _int(words[1], number)
            key, store = x, ones
            args = (x,)
        elif words[0] == "f" and len(words) == 4:
            key = (_int(words[1], number), _int(words[2], number))
            store = twos
            args = key
        else:
            raise FormatError(f"line {number}: expected 'c <x> <v>' or 'f <x1> <x2> <v>'")
        if any(not 1 <= a <= n for a in args):
            raise FormatError(f"line {number}: argument outside 1..{n}")
        if key in store:
            raise FormatError(f"line {number}: duplicate value for {key}")
        store[key] = _int(words[-1], number)
    if ones and twos:
        raise FormatError("a cochain file holds either c lines or f lines, not both")
    if ones:
        missing = [x for x in range(1, n + 1) if x not in ones]
        if missing:
            raise FormatError(f"1-cochain has no value at {missing[0]}")
        return tuple(ones[x] for x in range(1, n + 1))
    missing = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if (a, b) not in twos]
    if missing:
        raise FormatError(f"2-cochain has no value at {missing[0]}")
    return tuple(tuple(twos[(a, b)] for b in range(1, n + 1)) for a in range(1, n + 1))


def format_cochain(c: Cochain1 | Cochain2) -> str:
    if c and isinstance(c[0], tuple):
        lines = [f"f {a} {b} {v}" for a, row in enumerate(c, start=1) for b, v in enumerate(row, start=1)]
    else:
        lines = [f"c {x} {v}" for x, v in enumerate(c, start=1)]
    return "\n".join(lines) + "\n"
