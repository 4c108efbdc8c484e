"""Numbered graphs, slide moves, collapse reduction and the GBS dictionary.

A numbered graph is a connected graph with a positive integer ``d`` on every
vertex and edge pair such that an edge label divides both endpoint labels.
Read as a graph of finite cyclic groups ``Z/d``; read via the ratios
``d_tau(e) / d_e`` it is a positive graph of infinite cyclic groups.
"""

from __future__ import annotations

import hashlib
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

from .errors import DegenerateGroupError, InvalidGraphError, PreconditionError
from .graph_core import Dart, SerreGraph, bar, components, spanning_tree


@dataclass(frozen=True)
class NumberedGraph:
    graph: SerreGraph
    vlabel: Mapping[str, int]
    elabel: Mapping[str, int]

    def __post_init__(self):
        g = self.graph
        if not g.vertices:
            raise InvalidGraphError("numbered graph has no vertices")
        if set(self.vlabel) != set(g.vertices) or set(self.elabel) != set(g.pair_ids):
            raise InvalidGraphError("labels must cover exactly the vertices and edge pairs")
        for x, d in list(self.vlabel.items()) + list(self.elabel.items()):
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise InvalidGraphError(f"label of {x!r} must be a positive integer, got {d!r}")
        for p, o, t in g.pairs:
            d = self.elabel[p]
            if self.vlabel[o] % d or self.vlabel[t] % d:
                raise InvalidGraphError(f"edge {p!r}: label {d} does not divide both endpoint labels")
        if len(components(g)) != 1:
            raise InvalidGraphError("numbered graph must be connected")

    def __hash__(self):
        return hash(self.digest)

    @classmethod
    def build(
        cls, vertices: Mapping[str, int], edges: Iterable[tuple[str, str, str, int]]
    ) -> "NumberedGraph":
        """``vertices``: id -> d; ``edges``: (id, origin, terminus, d)."""
        edges = list(edges)
        g = SerreGraph.build(vertices, [(p, o, t) for p, o, t, _ in edges])
        return cls(g, dict(vertices), {p: d for p, _, _, d in edges})

    def dart_label(self, d: Dart) -> int:
        return self.elabel[d[0]]

    def with_graph(self, graph: SerreGraph) -> "NumberedGraph":
        return NumberedGraph(
            graph,
            {v: self.vlabel[v] for v in graph.vertices},
            {p: self.elabel[p] for p in graph.pair_ids},
        )

    def edge_list(self) -> list[tuple[str, str, str, int]]:
        return [(p, o, t, self.elabel[p]) for p, o, t in self.graph.pairs]

    @cached_property
    def digest(self) -> str:
        payload = json.dumps(
            [sorted(self.vlabel.items()), self.edge_list()], separators=(",", ":"), sort_keys=True
        )
        return hashlib.sha256(payload.encode()).hexdigest()


def labelled_equal(g1: NumberedGraph, g2: NumberedGraph, vmap: Mapping[str, str]) -> bool:
    """Equality of labelled multigraphs once ``g1``'s vertices are renamed by ``vmap``."""
    if sorted(vmap) != list(g1.graph.vertices) or sorted(vmap.values()) != list(g2.graph.vertices):
        return False
    if any(g1.vlabel[v] != g2.vlabel[vmap[v]] for v in g1.graph.vertices):
        return False

    def edges(g, rename):
        return Counter((tuple(sorted((rename(o), rename(t)))), d) for _, o, t, d in g.edge_list())

    return edges(g1, vmap.__getitem__) == edges(g2, lambda v: v)


@dataclass(frozen=True)
class SlideMove:
    """Slide the terminus of ``moved`` from ``origin(along)`` to ``tau(along)``."""

    moved: Dart
    along: Dart


def check_slide(g: NumberedGraph, m: SlideMove) -> None:
    gr = g.graph
    e, f = m.moved, m.along
    for d in (e, f):
        if not gr.has_pair(d[0]):
            raise PreconditionError(f"slide: edge {d[0]!r} does not exist")
    if e[0] == f[0]:
        raise PreconditionError("slide: moved edge and along edge must be distinct pairs")
    if gr.tau(e) != gr.origin(f):
        raise PreconditionError(
            f"slide: tau(moved)={gr.tau(e)!r} differs from origin(along)={gr.origin(f)!r}"
        )
    if g.dart_label(f) % g.dart_label(e):
        raise PreconditionError(
            f"slide: label {g.dart_label(e)} of moved edge does not divide label {g.dart_label(f)}"
        )


def slide(g: NumberedGraph, m: SlideMove) -> NumberedGraph:
    check_slide(g, m)
    gr = g.graph
    (p, rev), f = m.moved, m.along
    o, t = gr.ends(p)
    new_end = gr.tau(f)
    graph = gr.replace_pair(p, new_end, t) if rev else gr.replace_pair(p, o, new_end)
    return NumberedGraph(graph, g.vlabel, g.elabel)


def inverse_move(g_after: NumberedGraph, m: SlideMove) -> SlideMove:
    """The move undoing ``m`` on the graph that ``m`` produced."""
    return SlideMove(m.moved, bar(m.along))


def legal_slides(g: NumberedGraph) -> list[SlideMove]:
    gr = g.graph
    out = []
    for e in gr.darts():
        for f in gr.darts_from(gr.tau(e)):
            if f[0] != e[0] and g.dart_label(f) % g.dart_label(e) == 0:
                out.append(SlideMove(e, f))
    return out


def collapsible(g: NumberedGraph, pair_id: str) -> bool:
    o, t = g.graph.ends(pair_id)
    d = g.elabel[pair_id]
    return o != t and (d == g.vlabel[o] or d == g.vlabel[t])


def is_reduced(g: NumberedGraph) -> bool:
    return not any(collapsible(g, p) for p in g.graph.pair_ids)


@dataclass(frozen=True)
class Collapse:
    pair: str
    removed: str
    kept: str


def collapse(g: NumberedGraph, pair_id: str) -> tuple[NumberedGraph, Collapse]:
    """Contract a non-loop edge whose label equals an endpoint label.

    The endpoint carrying that label is merged into the other one, which keeps
    its id and label.
    """
    if not g.graph.has_pair(pair_id) or not collapsible(g, pair_id):
        raise PreconditionError(f"edge {pair_id!r} is not collapsible")
    o, t = g.graph.ends(pair_id)
    removed, kept = (t, o) if g.elabel[pair_id] == g.vlabel[t] else (o, t)
    ren = {removed: kept}
    graph = SerreGraph(
        tuple(v for v in g.graph.vertices if v != removed),
        tuple(
            (p, ren.get(a, a), ren.get(b, b)) for p, a, b in g.graph.pairs if p != pair_id
        ),
    )
    return g.with_graph(graph), Collapse(pair_id, removed, kept)


def reduce(g: NumberedGraph) -> tuple[NumberedGraph, list[Collapse]]:
    """Collapse edges, smallest eligible id first, until the graph is reduced."""
    log = []
    while True:
        eligible = [p for p in g.graph.pair_ids if collapsible(g, p)]
        if not eligible:
            return g, log
        g, entry = collapse(g, eligible[0])
        log.append(entry)


def replay_collapses(g: NumberedGraph, log: Iterable[Collapse]) -> NumberedGraph:
    for entry in log:
        g, got = collapse(g, entry.pair)
        if got != entry:
            raise PreconditionError(f"collapse of {entry.pair!r} does not match the log")
    return g


def edge_gcd(g: NumberedGraph) -> int:
    if not g.elabel:
        raise DegenerateGroupError("graph has no edges")
    return math.gcd(*g.elabel.values())


# --- positive GBS dictionary -------------------------------------------------


@dataclass(frozen=True)
class LabeledGBS:
    """Integer-labelled graph: ``delta[dart]`` is the index at ``tau(dart)``; ``sign`` per pair."""

    graph: SerreGraph
    delta: Mapping[Dart, int]
    sign: Mapping[str, int]

    def __post_init__(self):
        if set(self.delta) != set(self.graph.darts()):
            raise InvalidGraphError("delta must be given on every dart")
        if any(not isinstance(x, int) or x < 1 for x in self.delta.values()):
            raise InvalidGraphError("delta values must be positive integers")
        if set(self.sign) != set(self.graph.pair_ids) or any(s not in (1, -1) for s in self.sign.values()):
            raise InvalidGraphError("sign must be +1 or -1 on every edge pair")

    @property
    def positive(self) -> bool:
        return all(s == 1 for s in self.sign.values())


def gbs_from_numbering(g: NumberedGraph) -> LabeledGBS:
    gr = g.graph
    delta = {d: g.vlabel[gr.tau(d)] // g.dart_label(d) for d in gr.darts()}
    return LabeledGBS(gr, delta, {p: 1 for p in gr.pair_ids})


def _potentials(gbs: LabeledGBS) -> tuple[dict[str, Fraction], dict[str, int], dict[str, Dart]]:
    gr = gbs.graph
    parent = spanning_tree(gr)
    pot = {gr.vertices[0]: Fraction(1)}
    sgn = {gr.vertices[0]: 1}
    for v in _bfs_order(gr, parent):
        d = parent[v]
        u = gr.origin(d)
        pot[v] = pot[u] * Fraction(gbs.delta[bar(d)], gbs.delta[d])
        sgn[v] = sgn[u] * gbs.sign[d[0]]
    return pot, sgn, parent


def _bfs_order(gr: SerreGraph, parent: Mapping[str, Dart]) -> list[str]:
    depth: dict[str, int] = {gr.vertices[0]: 0}

    def dep(v):
        if v not in depth:
            depth[v] = dep(gr.origin(parent[v])) + 1
        return depth[v]

    return sorted(parent, key=lambda v: (dep(v), v))


def modular_homomorphism(gbs: LabeledGBS) -> dict[str, Fraction]:
    """Value of the modular homomorphism on the fundamental cycle of each non-tree pair.

    The cycle runs along the pair's canonical orientation and closes up through
    the BFS tree.
    """
    gr = gbs.graph
    if len(components(gr)) != 1:
        raise PreconditionError("modular homomorphism requires a connected graph")
    pot, sgn, parent = _potentials(gbs)
    tree = {d[0] for d in parent.values()}
    out = {}
    for p, o, t in gr.pairs:
        if p in tree:
            continue
        d = (p, False)
        ratio = Fraction(gbs.delta[bar(d)], gbs.delta[d]) * pot[o] / pot[t]
        out[p] = gbs.sign[p] * sgn[o] * sgn[t] * ratio
    return out


def numbering_from_gbs(gbs: LabeledGBS) -> NumberedGraph:
    """Labels ``d_v = [G_v : Z]``, ``d_e = [G_e : Z]`` for a positive GBS with trivial modular map.

    Normalised so that the edge labels have gcd 1.
    """
    gr = gbs.graph
    if not gr.pairs:
        raise DegenerateGroupError("edgeless GBS graph (the group is Z)")
    if not gbs.positive:
        raise PreconditionError("numbering requires a positive GBS structure")
    for p, value in modular_homomorphism(gbs).items():
        if value != 1:
            raise PreconditionError(f"modular homomorphism is nontrivial: value {value} on the cycle of {p!r}")
    pot, _, _ = _potentials(gbs)
    # d_v is proportional to 1/pot(v)
    edge_vals = {p: 1 / (pot[gr.tau((p, False))] * gbs.delta[(p, False)]) for p in gr.pair_ids}
    scale = math.lcm(*(x.denominator for x in edge_vals.values()))
    ints = {p: int(x * scale) for p, x in edge_vals.items()}
    g = math.gcd(*ints.values())
    elabel = {p: x // g for p, x in ints.items()}
    vlabel = {}
    for p, o, t in gr.pairs:
        vlabel[t] = elabel[p] * gbs.delta[(p, False)]
        vlabel[o] = elabel[p] * gbs.delta[(p, True)]
    return NumberedGraph(gr, vlabel, elabel)


def centre_normalize(g: NumberedGraph) -> NumberedGraph:
    return numbering_from_gbs(gbs_from_numbering(g))
