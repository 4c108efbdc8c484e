"""Finite graphs in Serre's formalism.

An edge pair ``{e, ē}`` is stored once, with a canonical orientation
``(pair_id, origin, terminus)``.  A directed edge (a *dart*) is addressed as
``(pair_id, reversed)``: ``(p, False)`` runs origin -> terminus and
``(p, True)`` is its reverse ``ē``.  The involution therefore never needs
bookkeeping: ``bar((p, r)) == (p, not r)``.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict, deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

from .errors import InvalidGraphError, PreconditionError

Dart = tuple[str, bool]


def bar(d: Dart) -> Dart:
    return (d[0], not d[1])


@dataclass(frozen=True)
class SerreGraph:
    vertices: tuple[str, ...]
    pairs: tuple[tuple[str, str, str], ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise InvalidGraphError("duplicate vertex id")
        ids = [p for p, _, _ in self.pairs]
        if len(set(ids)) != len(ids):
            raise InvalidGraphError("duplicate edge id")
        vs = set(self.vertices)
        for p, o, t in self.pairs:
            if o not in vs or t not in vs:
                raise InvalidGraphError(f"edge {p!r} has an endpoint outside the vertex set")

    @classmethod
    def build(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str, str]]) -> "SerreGraph":
        """Build from vertex ids and ``(id, origin, terminus)`` triples (any order)."""
        return cls(tuple(sorted(vertices)), tuple(sorted(tuple(e) for e in edges)))

    @cached_property
    def _ends(self) -> dict[str, tuple[str, str]]:
        return {p: (o, t) for p, o, t in self.pairs}

    @cached_property
    def _out(self) -> dict[str, list[Dart]]:
        out: dict[str, list[Dart]] = {v: [] for v in self.vertices}
        for p, o, t in self.pairs:
            out[o].append((p, False))
            out[t].append((p, True))
        return out

    @property
    def pair_ids(self) -> tuple[str, ...]:
        return tuple(p for p, _, _ in self.pairs)

    def ends(self, pair_id: str) -> tuple[str, str]:
        return self._ends[pair_id]

    def has_pair(self, pair_id: str) -> bool:
        return pair_id in self._ends

    def tau(self, d: Dart) -> str:
        o, t = self._ends[d[0]]
        return o if d[1] else t

    def origin(self, d: Dart) -> str:
        return self.tau(bar(d))

    def is_loop(self, pair_id: str) -> bool:
        o, t = self._ends[pair_id]
        return o == t

    def darts(self) -> list[Dart]:
        return [(p, r) for p, _, _ in self.pairs for r in (False, True)]

    def darts_from(self, v: str) -> list[Dart]:
        """Darts with origin ``v``; a loop contributes both of its darts."""
        return list(self._out[v])

    def neighbours(self, v: str) -> list[str]:
        return [self.tau(d) for d in self._out[v]]

    def subgraph(self, vertices: Iterable[str], pair_ids: Iterable[str]) -> "SerreGraph":
        vs = set(vertices)
        keep = set(pair_ids)
        return SerreGraph(
            tuple(v for v in self.vertices if v in vs),
            tuple(e for e in self.pairs if e[0] in keep),
        )

    def replace_pair(self, pair_id: str, origin: str, terminus: str) -> "SerreGraph":
        return SerreGraph(
            self.vertices,
            tuple((p, origin, terminus) if p == pair_id else (p, o, t) for p, o, t in self.pairs),
        )


@dataclass(frozen=True)
class Component:
    vertices: frozenset[str]
    pairs: frozenset[str]


def components(g: SerreGraph) -> list[Component]:
    """Connected components, sorted by smallest vertex id."""
    seen: set[str] = set()
    out = []
    for start in g.vertices:
        if start in seen:
            continue
        seen.add(start)
        verts, pairs = {start}, set()
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for d in g.darts_from(v):
                pairs.add(d[0])
                w = g.tau(d)
                if w not in seen:
                    seen.add(w)
                    verts.add(w)
                    queue.append(w)
        out.append(Component(frozenset(verts), frozenset(pairs)))
    return out


def is_connected(g: SerreGraph) -> bool:
    return len(components(g)) == 1


def betti(g: SerreGraph) -> int:
    """First Betti number of a connected, nonempty graph."""
    if not g.vertices:
        raise PreconditionError("betti of the empty graph")
    if not is_connected(g):
        raise PreconditionError("betti requires a connected graph")
    return len(g.pairs) - len(g.vertices) + 1


def spanning_tree(g: SerreGraph, root: Optional[str] = None) -> dict[str, Dart]:
    """BFS tree from ``root`` (default: smallest id) as ``vertex -> dart from its parent``."""
    root = g.vertices[0] if root is None else root
    parent: dict[str, Dart] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for d in sorted(g.darts_from(v)):
            w = g.tau(d)
            if w not in seen:
                seen.add(w)
                parent[w] = d
                queue.append(w)
    return parent


@dataclass(frozen=True, eq=True)
class GraphAutomorphism:
    """An automorphism ``f`` of a finite graph.

    ``emap[p] = (q, reversed)`` sends the dart ``(p, False)`` to ``(q, reversed)``.
    """

    base: SerreGraph
    vmap: Mapping[str, str]
    emap: Mapping[str, tuple[str, bool]]

    def __post_init__(self):
        g = self.base
        if set(self.vmap) != set(g.vertices) or sorted(self.vmap.values()) != sorted(g.vertices):
            raise InvalidGraphError("vertex map is not a bijection of the vertex set")
        if set(self.emap) != set(g.pair_ids) or sorted(q for q, _ in self.emap.values()) != sorted(g.pair_ids):
            raise InvalidGraphError("edge map is not a bijection of the edge pairs")
        for p in g.pair_ids:
            img = self.dart_image((p, False))
            o, t = g.ends(p)
            if g.origin(img) != self.vmap[o] or g.tau(img) != self.vmap[t]:
                raise InvalidGraphError(f"edge map is incompatible with incidence at edge {p!r}")

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.vmap.items())), tuple(sorted(self.emap.items()))))

    @classmethod
    def identity(cls, g: SerreGraph) -> "GraphAutomorphism":
        return cls(g, {v: v for v in g.vertices}, {p: (p, False) for p in g.pair_ids})

    def dart_image(self, d: Dart) -> Dart:
        q, r = self.emap[d[0]]
        return (q, r != d[1])

    def compose(self, other: "GraphAutomorphism") -> "GraphAutomorphism":
        """``self ∘ other``."""
        vmap = {v: self.vmap[other.vmap[v]] for v in self.base.vertices}
        emap = {p: self.dart_image(other.dart_image((p, False))) for p in self.base.pair_ids}
        return GraphAutomorphism(self.base, vmap, emap)


def _cycle_lengths(perm: Mapping) -> list[int]:
    seen = set()
    lengths = []
    for x in perm:
        if x in seen:
            continue
        n, y = 0, x
        while y not in seen:
            seen.add(y)
            y = perm[y]
            n += 1
        lengths.append(n)
    return lengths


def aut_order(f: GraphAutomorphism) -> int:
    dart_perm = {d: f.dart_image(d) for d in f.base.darts()}
    return math.lcm(1, *_cycle_lengths(f.vmap), *_cycle_lengths(dart_perm))


def aut_power(f: GraphAutomorphism, k: int) -> GraphAutomorphism:
    n = aut_order(f)
    k %= n
    result = GraphAutomorphism.identity(f.base)
    base = f
    while k:
        if k & 1:
            result = base.compose(result)
        base = base.compose(base)
        k >>= 1
    return result


def orbits(f: GraphAutomorphism) -> tuple[list[frozenset[str]], list[frozenset[str]]]:
    """Vertex orbits and edge-pair orbits of ``<f>``, each sorted by smallest member."""

    def _orbits(items, step):
        seen, out = set(), []
        for x in sorted(items):
            if x in seen:
                continue
            orb, y = set(), x
            while y not in orb:
                orb.add(y)
                y = step(y)
            seen |= orb
            out.append(frozenset(orb))
        return out

    return (
        _orbits(f.base.vertices, lambda v: f.vmap[v]),
        _orbits(f.base.pair_ids, lambda p: f.emap[p][0]),
    )


def inverted_pairs(f: GraphAutomorphism) -> list[str]:
    """Edge pairs reversed by some power of ``f``."""
    out = []
    for p in f.base.pair_ids:
        d = f.dart_image((p, False))
        while d[0] != p:
            d = f.dart_image(d)
        if d[1]:
            out.append(p)
    return out


def subdivide_inverted_edges(g: SerreGraph, f: GraphAutomorphism) -> tuple[SerreGraph, GraphAutomorphism]:
    """Subdivide every edge pair that some power of ``f`` inverts.

    Pair ``p`` (origin ``o``, terminus ``t``) becomes a midpoint ``p.m`` with
    pairs ``p.0: o -> p.m`` and ``p.1: t -> p.m``; the extended automorphism
    inverts nothing.
    """
    if f.base != g:
        raise PreconditionError("automorphism is not defined on this graph")
    bad = set(inverted_pairs(f))
    if not bad:
        return g, f
    vertices = list(g.vertices) + [f"{p}.m" for p in sorted(bad)]
    pairs = [e for e in g.pairs if e[0] not in bad]
    for p in sorted(bad):
        o, t = g.ends(p)
        pairs += [(f"{p}.0", o, f"{p}.m"), (f"{p}.1", t, f"{p}.m")]
    g2 = SerreGraph.build(vertices, pairs)
    vmap = dict(f.vmap)
    emap: dict[str, tuple[str, bool]] = {}
    for p in g.pair_ids:
        q, rev = f.emap[p]
        if p not in bad:
            emap[p] = (q, rev)
            continue
        vmap[f"{p}.m"] = f"{q}.m"
        emap[f"{p}.0"] = (f"{q}.1" if rev else f"{q}.0", False)
        emap[f"{p}.1"] = (f"{q}.0" if rev else f"{q}.1", False)
    return g2, GraphAutomorphism(g2, vmap, emap)


def _between(g: SerreGraph, elabels: Mapping[str, object]) -> dict[tuple[str, str], Counter]:
    out: dict[tuple[str, str], Counter] = defaultdict(Counter)
    for p, o, t in g.pairs:
        out[(min(o, t), max(o, t))][elabels[p]] += 1
    return out


def _refined_colours(graphs, vlabels, elabels) -> list[dict[str, int]]:
    palette: dict = {}
    cols = []
    for g, vl in zip(graphs, vlabels):
        cols.append({v: palette.setdefault(("init", vl[v]), len(palette)) for v in g.vertices})
    while True:
        sigs = []
        for g, col, el in zip(graphs, cols, elabels):
            sigs.append(
                {
                    v: (col[v], tuple(sorted((el[d[0]], col[g.tau(d)], g.is_loop(d[0])) for d in g.darts_from(v))))
                    for v in g.vertices
                }
            )
        palette = {}
        new = [{v: palette.setdefault(s[v], len(palette)) for v in s} for s in sigs]
        if all(len(set(n.values())) == len(set(c.values())) for n, c in zip(new, cols)):
            return new
        cols = new


def labelled_iso(
    g1: SerreGraph,
    g2: SerreGraph,
    vertex_labels: Optional[tuple[Mapping[str, object], Mapping[str, object]]] = None,
    edge_labels: Optional[tuple[Mapping[str, object], Mapping[str, object]]] = None,
) -> Optional[tuple[dict[str, str], dict[str, tuple[str, bool]]]]:
    """Find a label- and incidence-preserving isomorphism ``g1 -> g2``.

    Colour refinement on (label, labelled neighbourhood) followed by
    backtracking.  Returns ``(vertex_map, edge_map)`` with edge_map entries
    ``(pair_in_g2, reversed)``, or ``None``.
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.pairs) != len(g2.pairs):
        return None
    vl = vertex_labels or ({v: 0 for v in g1.vertices}, {v: 0 for v in g2.vertices})
    el = edge_labels or ({p: 0 for p in g1.pair_ids}, {p: 0 for p in g2.pair_ids})
    if Counter(el[0].values()) != Counter(el[1].values()):
        return None
    c1, c2 = _refined_colours((g1, g2), vl, el)
    if Counter(c1.values()) != Counter(c2.values()):
        return None
    b1, b2 = _between(g1, el[0]), _between(g2, el[1])
    empty: Counter = Counter()

    def key(a, b):
        return (a, b) if a <= b else (b, a)

    by_colour: dict[int, list[str]] = defaultdict(list)
    for v in g2.vertices:
        by_colour[c2[v]].append(v)
    class_size = Counter(c1.values())

    # rarest colour first, then grow along adjacency
    order: list[str] = []
    placed: set[str] = set()
    while len(order) < len(g1.vertices):
        start = min((v for v in g1.vertices if v not in placed), key=lambda v: (class_size[c1[v]], v))
        queue = deque([start])
        placed.add(start)
        while queue:
            v = queue.popleft()
            order.append(v)
            for w in sorted(set(g1.neighbours(v))):
                if w not in placed:
                    placed.add(w)
                    queue.append(w)

    phi: dict[str, str] = {}
    used: set[str] = set()

    def consistent(v, img):
        if b1.get((v, v), empty) != b2.get((img, img), empty):
            return False
        for w, wi in phi.items():
            if b1.get(key(v, w), empty) != b2.get(key(img, wi), empty):
                return False
        return True

    def search(i):
        if i == len(order):
            return True
        v = order[i]
        for img in by_colour[c1[v]]:
            if img in used or not consistent(v, img):
                continue
            phi[v] = img
            used.add(img)
            if search(i + 1):
                return True
            del phi[v]
            used.discard(img)
        return False

    if not search(0):
        return None

    # pair up edges between corresponding endpoints, label by label
    pools: dict[tuple, list[str]] = defaultdict(list)
    for p, o, t in g2.pairs:
        pools[(key(o, t), el[1][p])].append(p)
    emap: dict[str, tuple[str, bool]] = {}
    for p, o, t in g1.pairs:
        q = pools[(key(phi[o], phi[t]), el[0][p])].pop(0)
        qo, _ = g2.ends(q)
        emap[p] = (q, o != t and phi[o] != qo)
    return phi, emap
