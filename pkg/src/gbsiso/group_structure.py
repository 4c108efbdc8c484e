"""Group-theoretic readings of a numbered graph.

A numbered graph presents two groups: the positive GBS group built from the
index ratios (a free-by-cyclic group with centre), and its quotient by the
centre, the graph of finite cyclic groups ``Z/d_v``.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Optional, Sequence

from .errors import DegenerateGroupError, InvalidGraphError, PreconditionError
from .graph_core import spanning_tree
from .numbered_graph import NumberedGraph, centre_normalize, edge_gcd, reduce
from .tagged_poset import TaggedPoset, associated_poset

Word = tuple[tuple[str, int], ...]


def reduce_word(syllables: Iterable[tuple[str, int]]) -> Word:
    """Freely reduce a sequence of ``(symbol, exponent)`` syllables."""
    out: list[tuple[str, int]] = []
    for s, e in syllables:
        if e == 0:
            continue
        if out and out[-1][0] == s:
            e += out.pop()[1]
            if e:
                out.append((s, e))
        else:
            out.append((s, e))
    return tuple(out)


def invert(w: Word) -> Word:
    return tuple((s, -e) for s, e in reversed(w))


def concat(*words: Word) -> Word:
    return reduce_word(x for w in words for x in w)


def cyclic_reduce(w: Word) -> Word:
    w = reduce_word(w)
    while len(w) > 1 and w[0][0] == w[-1][0]:
        w = reduce_word(((w[0][0], w[0][1] + w[-1][1]),) + w[1:-1])
    return w


def word_length(w: Word) -> int:
    return sum(abs(e) for _, e in w)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(s if e == 1 else f"{s}^{e}" for s, e in w)


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise InvalidGraphError("duplicate generator")
        gens = set(self.generators)
        for r in self.relators:
            for s, e in r:
                if s not in gens:
                    raise InvalidGraphError(f"relator uses undeclared generator {s!r}")
                if not isinstance(e, int) or e == 0:
                    raise InvalidGraphError("exponents must be nonzero integers")

    @classmethod
    def make(cls, generators: Sequence[str], relators: Iterable[Iterable[tuple[str, int]]]) -> "Presentation":
        return cls(tuple(generators), tuple(reduce_word(r) for r in relators))

    def __str__(self):
        return "< " + ", ".join(self.generators) + " | " + ", ".join(format_word(r) for r in self.relators) + " >"


Interpretation = Literal["gbs", "finite_quotient"]


def _vertex_gen(v: str) -> str:
    return f"t_{v}"


def _edge_gen(p: str) -> str:
    return f"g_{p}"


def present(g: NumberedGraph, interp: Interpretation = "gbs") -> Presentation:
    """Presentation over a BFS spanning tree rooted at the smallest vertex.

    Tree edge ``e``: ``t_o^(delta of e-bar) = t_tau^(delta of e)``; other edges
    add a stable letter conjugating one power to the other.  The finite
    quotient reading adds ``t_v^(d_v)``.
    """
    if interp not in ("gbs", "finite_quotient"):
        raise PreconditionError(f"unknown interpretation {interp!r}")
    gr = g.graph
    tree = {d[0] for d in spanning_tree(gr).values()}
    gens = [_vertex_gen(v) for v in gr.vertices]
    rels: list[Word] = []
    for p, o, t in gr.pairs:
        d = g.elabel[p]
        at_t, at_o = g.vlabel[t] // d, g.vlabel[o] // d
        if p in tree:
            rels.append(reduce_word([(_vertex_gen(o), at_o), (_vertex_gen(t), -at_t)]))
        else:
            s = _edge_gen(p)
            gens.append(s)
            rels.append(reduce_word([(s, 1), (_vertex_gen(t), at_t), (s, -1), (_vertex_gen(o), -at_o)]))
    if interp == "finite_quotient":
        rels += [((_vertex_gen(v), g.vlabel[v]),) for v in gr.vertices]
    return Presentation(tuple(gens), tuple(rels))


@dataclass(frozen=True)
class Epimorphism:
    modulus: int
    images: dict[str, int]

    def evaluate(self, w: Word) -> int:
        return sum(self.images[s] * e for s, e in w) % self.modulus


def structure_epimorphism(g: NumberedGraph) -> Epimorphism:
    """``t_v -> M / d_v`` in ``Z/M`` (``M`` the lcm of vertex labels), stable letters -> 0."""
    M = math.lcm(*g.vlabel.values())
    pres = present(g, "finite_quotient")
    images = {s: 0 for s in pres.generators}
    images.update({_vertex_gen(v): (M // d) % M for v, d in g.vlabel.items()})
    h = Epimorphism(M, images)
    for r in pres.relators:
        if h.evaluate(r):
            raise AssertionError(f"structure map does not kill relator {format_word(r)}")
    return h


def rational_euler_char(g: NumberedGraph) -> Fraction:
    return sum((Fraction(1, d) for d in g.vlabel.values()), Fraction(0)) - sum(
        (Fraction(1, d) for d in g.elabel.values()), Fraction(0)
    )


def _negative_chi(g: NumberedGraph) -> Fraction:
    chi = rational_euler_char(g)
    if chi >= 0:
        raise DegenerateGroupError(f"Euler characteristic {chi} >= 0: the group is virtually abelian")
    return chi


def holonomy_order(g: NumberedGraph, fiber_rank: int) -> int:
    """Order ``m`` of the monodromy when the fibre is free of rank ``fiber_rank``: ``(1 - N) / chi``."""
    chi = _negative_chi(g)
    if fiber_rank < 2:
        raise PreconditionError("fibre rank must be at least 2")
    m = Fraction(1 - fiber_rank) / chi
    if m.denominator != 1 or m < 1:
        raise PreconditionError(f"(1 - N)/chi = {m} is not a positive integer: no such fibration")
    m = int(m)
    L = math.lcm(*g.vlabel.values())
    if m % L:
        raise PreconditionError(f"holonomy {m} is not a multiple of the vertex-label lcm {L}")
    return m


def fiber_rank(g: NumberedGraph, holonomy: int) -> int:
    """Rank ``N = 1 - m * chi`` of the free fibre for monodromy of order ``m``."""
    chi = _negative_chi(g)
    if holonomy < 1:
        raise PreconditionError("holonomy order must be positive")
    L = math.lcm(*g.vlabel.values())
    if holonomy % L:
        raise PreconditionError(f"holonomy {holonomy} is not a multiple of the vertex-label lcm {L}")
    n = 1 - holonomy * chi
    if n.denominator != 1 or n < 2:
        raise PreconditionError(f"1 - m*chi = {n} is not an integer >= 2")
    return int(n)


def recognize_direct_product(g: NumberedGraph) -> Optional[int]:
    """``M`` when the GBS group is ``F_M x Z``, else ``None``."""
    if not g.elabel:
        raise DegenerateGroupError("edgeless graph (the group is Z)")
    r, _ = reduce(centre_normalize(g))
    if any(d != 1 for d in list(r.vlabel.values()) + list(r.elabel.values())):
        return None
    return len(r.graph.pairs) - len(r.graph.vertices) + 1


def centreless_candidate(g: NumberedGraph) -> bool:
    """Edge labels have gcd 1 (necessary for ``g`` to be a central quotient)."""
    return edge_gcd(g) == 1


@dataclass(frozen=True)
class FscClass:
    element: str
    order: int
    centraliser_betti: int

    def describe(self) -> str:
        if self.order == 1:
            return f"{self.element}: trivial subgroup; centraliser b1 = {self.centraliser_betti}"
        return (
            f"{self.element}: conjugacy class of a cyclic subgroup of order {self.order}; "
            f"centraliser b1 = {self.centraliser_betti}"
        )


@dataclass(frozen=True)
class FscReport:
    poset: TaggedPoset
    classes: tuple[FscClass, ...]


def fsc_report(g: NumberedGraph) -> FscReport:
    p = associated_poset(g)
    return FscReport(p, tuple(FscClass(e.id, e.level, e.tag) for e in p.elements))


def higman_twist(p: Presentation, index: int, letter: str) -> Presentation:
    """Replace relator ``r`` by ``(t^-1 r t)^-1 r (t^-1 r t) r^-2``.

    ``r`` is cyclically reduced first (same normal closure).
    """
    if len(p.generators) < 2:
        raise PreconditionError("Higman twist needs at least two generators")
    if letter not in p.generators:
        raise PreconditionError(f"{letter!r} is not a generator")
    if not 0 <= index < len(p.relators):
        raise PreconditionError(f"no relator at index {index}")
    r = cyclic_reduce(p.relators[index])
    if all(s == letter for s, _ in r):
        raise PreconditionError(f"relator is a power of {letter!r}")
    t = ((letter, 1),)
    conj = concat(invert(t), r, t)
    new = concat(invert(conj), r, conj, invert(r), invert(r))
    rels = list(p.relators)
    rels[index] = new
    return Presentation(p.generators, tuple(rels))


def _letters(w: Word) -> list[tuple[str, int]]:
    return [(s, 1 if e > 0 else -1) for s, e in w for _ in range(abs(e))]


def _relator_key(w: Word, rename) -> tuple:
    """Canonical form of a relator up to cyclic rotation and inversion."""
    w = cyclic_reduce(w)
    best = None
    for v in (w, invert(w)):
        letters = [(rename(s), e) for s, e in _letters(v)]
        for i in range(max(len(letters), 1)):
            rot = tuple(letters[i:] + letters[:i])
            if best is None or rot < best:
                best = rot
    return best


def equivalent_up_to_renaming(p1: Presentation, p2: Presentation) -> Optional[dict[str, str]]:
    """A generator bijection carrying the relators of ``p1`` onto those of ``p2``
    (as a multiset, each up to cyclic rotation and inversion), or ``None``."""
    if len(p1.generators) != len(p2.generators) or len(p1.relators) != len(p2.relators):
        return None
    target = Counter(_relator_key(r, lambda s: s) for r in p2.relators)
    for perm in itertools.permutations(p2.generators):
        ren = dict(zip(p1.generators, perm))
        if Counter(_relator_key(r, ren.__getitem__) for r in p1.relators) == target:
            return ren
    return None
