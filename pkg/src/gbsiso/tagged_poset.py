"""The poset of a numbered graph: components of the divisibility subgraphs.

For each ``k`` the subgraph ``G_k`` keeps the vertices and edges whose label
is divisible by ``k``; its connected components are the elements of level
``k``, tagged with their first Betti number.  ``x <= y`` iff
``level(x) | level(y)`` and ``x`` contains ``y``.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

from .graph_core import Component, components
from .numbered_graph import NumberedGraph


def divisors(n: int) -> list[int]:
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius is defined for n >= 1")
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@dataclass(frozen=True)
class PosetElement:
    id: str
    level: int
    tag: int


@dataclass(frozen=True)
class TaggedPoset:
    elements: tuple[PosetElement, ...]
    leq: frozenset[tuple[int, int]]
    provenance: tuple[Optional[Component], ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        n = len(self.elements)
        for i in range(n):
            if (i, i) not in self.leq:
                raise ValueError("order relation must be reflexive")
        for i, j in self.leq:
            if self.elements[j].level % self.elements[i].level:
                raise ValueError("comparable elements must have dividing levels")
            if i != j and (j, i) in self.leq:
                raise ValueError("order relation must be antisymmetric")

    def __len__(self):
        return len(self.elements)

    def index(self, element_id: str) -> int:
        return self._index[element_id]

    @cached_property
    def _index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.elements)}

    @cached_property
    def up(self) -> tuple[frozenset[int], ...]:
        out = [set() for _ in self.elements]
        for i, j in self.leq:
            if i != j:
                out[i].add(j)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def down(self) -> tuple[frozenset[int], ...]:
        out = [set() for _ in self.elements]
        for i, j in self.leq:
            if i != j:
                out[j].add(i)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def covers(self) -> frozenset[tuple[int, int]]:
        """Hasse diagram edges ``(lower, upper)``."""
        return frozenset(
            (i, j)
            for i in range(len(self))
            for j in self.up[i]
            if not any(j in self.up[z] for z in self.up[i])
        )

    def maximal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.up[i]]

    def minimal(self) -> list[int]:
        return [i for i in range(len(self)) if not self.down[i]]

    def level_counts(self) -> dict[int, int]:
        return dict(sorted(Counter(e.level for e in self.elements).items()))


def level_universe(g: NumberedGraph) -> list[int]:
    return sorted({k for d in g.vlabel.values() for k in divisors(d)})


def level_subgraph(g: NumberedGraph, k: int):
    gr = g.graph
    return gr.subgraph(
        [v for v in gr.vertices if g.vlabel[v] % k == 0],
        [p for p in gr.pair_ids if g.elabel[p] % k == 0],
    )


def associated_poset(g: NumberedGraph) -> TaggedPoset:
    elements: list[PosetElement] = []
    prov: list[Component] = []
    for k in level_universe(g):
        for i, comp in enumerate(components(level_subgraph(g, k)), start=1):
            elements.append(PosetElement(f"a{i},{k}", k, len(comp.pairs) - len(comp.vertices) + 1))
            prov.append(comp)
    witness = [min(c.vertices) for c in prov]
    leq = frozenset(
        (i, j)
        for i, x in enumerate(elements)
        for j, y in enumerate(elements)
        if y.level % x.level == 0 and witness[j] in prov[i].vertices
    )
    return TaggedPoset(tuple(elements), leq, tuple(prov))


def _colours(p: TaggedPoset, palette: dict, cols: Optional[list[int]] = None) -> list[int]:
    if cols is None:
        return [
            palette.setdefault((e.level, e.tag, len(p.up[i]), len(p.down[i])), len(palette))
            for i, e in enumerate(p.elements)
        ]
    up, down = defaultdict(list), defaultdict(list)
    for i, j in p.covers:
        up[i].append(cols[j])
        down[j].append(cols[i])
    return [
        palette.setdefault((cols[i], tuple(sorted(up[i])), tuple(sorted(down[i]))), len(palette))
        for i in range(len(p))
    ]


def data_preserving_iso(p1: TaggedPoset, p2: TaggedPoset) -> Optional[dict[str, str]]:
    """A level- and tag-preserving order isomorphism, as ``element id -> element id``."""
    if len(p1) != len(p2) or len(p1.leq) != len(p2.leq):
        return None
    palette: dict = {}
    c1, c2 = _colours(p1, palette), _colours(p2, palette)
    while True:
        if Counter(c1) != Counter(c2):
            return None
        palette = {}
        n1, n2 = _colours(p1, palette, c1), _colours(p2, palette, c2)
        stable = len(set(n1)) == len(set(c1))
        c1, c2 = n1, n2
        if stable:
            break
    if Counter(c1) != Counter(c2):
        return None

    by_colour = defaultdict(list)
    for j, c in enumerate(c2):
        by_colour[c].append(j)
    size = Counter(c1)
    order = sorted(range(len(p1)), key=lambda i: (size[c1[i]], -p1.elements[i].level, i))
    phi: dict[int, int] = {}
    used: set[int] = set()

    def ok(i, j):
        for x, y in phi.items():
            if ((x, i) in p1.leq) != ((y, j) in p2.leq) or ((i, x) in p1.leq) != ((j, y) in p2.leq):
                return False
        return True

    def search(n):
        if n == len(order):
            return True
        i = order[n]
        for j in by_colour[c1[i]]:
            if j not in used and ok(i, j):
                phi[i] = j
                used.add(j)
                if search(n + 1):
                    return True
                del phi[i]
                used.discard(j)
        return False

    if not search(0):
        return None
    return {p1.elements[i].id: p2.elements[j].id for i, j in sorted(phi.items())}


def edge_count_by_label(g: NumberedGraph, label: int) -> tuple[int, int]:
    """Edges labelled exactly ``label``, counted directly and by Möbius inversion over ``G_m``."""
    direct = sum(1 for d in g.elabel.values() if d == label)
    via = 0
    for m in level_universe(g):
        if m % label == 0:
            via += sum(1 for d in g.elabel.values() if d % m == 0) * mobius(m // label)
    return direct, via
