"""Counting homomorphisms from finitely presented groups to small finite groups.

Isomorphic groups have the same number of homomorphisms into every finite
group, so a vector of counts over a fixed catalogue is a cheap, refutable
fingerprint of the set of finite quotients.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterator, Optional, Sequence

from .errors import InvalidGraphError, PreconditionError, ResourceCapExceeded
from .group_structure import Presentation, Word

DEFAULT_NODE_BUDGET = 10**9


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    table: tuple[tuple[int, ...], ...]
    identity: int = 0

    def __post_init__(self):
        n = len(self.table)
        if n < 1 or any(len(row) != n for row in self.table):
            raise InvalidGraphError(f"{self.name}: table must be square")
        els = range(n)
        if any(not 0 <= x < n for row in self.table for x in row):
            raise InvalidGraphError(f"{self.name}: table entries out of range")
        t = self.table
        e = self.identity
        if any(t[e][x] != x or t[x][e] != x for x in els):
            raise InvalidGraphError(f"{self.name}: {e} is not an identity")
        if any(e not in row for row in t):
            raise InvalidGraphError(f"{self.name}: missing inverses")
        for a, b, c in itertools.product(els, repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InvalidGraphError(f"{self.name}: not associative at {(a, b, c)}")

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        return tuple(row.index(self.identity) for row in self.table)

    @cached_property
    def powers(self) -> tuple[tuple[int, ...], ...]:
        """``powers[x][k] = x^k`` for ``0 <= k < order``; exponents reduce mod the order."""
        out = []
        for x in range(self.order):
            row = [self.identity]
            for _ in range(self.order - 1):
                row.append(self.table[row[-1]][x])
            out.append(tuple(row))
        return tuple(out)

    def power(self, x: int, k: int) -> int:
        return self.powers[x][k % self.order]

    def element_order(self, x: int) -> int:
        return self.powers[x].index(self.identity, 1) if self.order > 1 else 1

    @classmethod
    def from_permutations(cls, name: str, gens: Sequence[Sequence[int]]) -> "FiniteGroup":
        ident = tuple(range(len(gens[0])))
        elements = [ident]
        index = {ident: 0}
        i = 0
        while i < len(elements):
            x = elements[i]
            for g in gens:
                y = tuple(g[x[k]] for k in range(len(x)))
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
            i += 1
        # row a, column b: a then b as maps, i.e. b∘a; any fixed convention gives a group table
        table = tuple(
            tuple(index[tuple(b[a[k]] for k in range(len(a)))] for b in elements) for a in elements
        )
        return cls(name, table)

    @classmethod
    def cyclic(cls, n: int) -> "FiniteGroup":
        return cls(f"C{n}", tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))

    @classmethod
    def dihedral(cls, n: int) -> "FiniteGroup":
        """Symmetries of an ``n``-gon (order ``2n``)."""
        rot = [(i + 1) % n for i in range(n)]
        ref = [(-i) % n for i in range(n)]
        return cls.from_permutations(f"D{n}", [rot, ref])


def _quaternion() -> FiniteGroup:
    # element = 4 * sign_bit + unit, unit in (1, i, j, k)
    unit = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }  # (u, v) -> (sign, w) with u*v = (-1)^sign w

    def mul(a, b):
        s, w = unit[(a % 4, b % 4)]
        return 4 * ((a // 4 + b // 4 + s) % 2) + w

    return FiniteGroup("Q8", tuple(tuple(mul(a, b) for b in range(8)) for a in range(8)))


def catalogue(tier: str = "small") -> list[FiniteGroup]:
    if tier not in ("small", "medium"):
        raise PreconditionError(f"unknown tier {tier!r}")
    groups = [FiniteGroup.cyclic(n) for n in range(2, 7)]
    groups += [
        FiniteGroup.from_permutations("S3", [[1, 0, 2], [1, 2, 0]]),
        FiniteGroup.dihedral(4),
        _quaternion(),
        FiniteGroup.from_permutations("A4", [[1, 2, 0, 3], [0, 2, 3, 1]]),
    ]
    if tier == "medium":
        groups += [FiniteGroup.cyclic(n) for n in range(7, 13)]
        groups += [
            FiniteGroup.dihedral(5),
            FiniteGroup.dihedral(6),
            FiniteGroup.from_permutations("S4", [[1, 0, 2, 3], [1, 2, 3, 0]]),
        ]
    return groups


def group_by_name(name: str) -> FiniteGroup:
    for q in catalogue("medium"):
        if q.name == name:
            return q
    raise PreconditionError(f"no catalogue group named {name!r}")


class _Search:
    """Backtracking over generator images; each relator is checked as soon as
    all of its generators are assigned."""

    def __init__(self, p: Presentation, q: FiniteGroup, budget: int):
        self.q = q
        self.budget = budget
        self.spent = 0
        gens = list(p.generators)
        idx = {s: i for i, s in enumerate(gens)}
        rels = [[(idx[s], e) for s, e in r] for r in p.relators]
        rels = [r for r in rels if r]
        supports = [frozenset(i for i, _ in r) for r in rels]

        # single-generator relators filter candidate images up front
        self.allowed = [list(range(q.order)) for _ in gens]
        multi = []
        for r, sup in zip(rels, supports):
            if len(sup) == 1:
                (g,) = sup
                self.allowed[g] = [x for x in self.allowed[g] if self._eval(r, {g: x}) == q.identity]
            else:
                multi.append((r, sup))

        order: list[int] = []
        left = set(range(len(gens)))
        while left:
            done = set(order)

            def score(g):
                closes = sum(1 for _, sup in multi if g in sup and sup - done <= {g})
                touches = sum(1 for _, sup in multi if g in sup)
                return (-closes, len(self.allowed[g]), -touches, g)

            g = min(left, key=score)
            order.append(g)
            left.remove(g)
        self.order = order
        pos = {g: i for i, g in enumerate(order)}
        self.checks: list[list[list[tuple[int, int]]]] = [[] for _ in order]
        for r, sup in multi:
            self.checks[max(pos[g] for g in sup)].append(r)
        self.gens = gens

    def _eval(self, r, images) -> int:
        q = self.q
        acc = q.identity
        for g, e in r:
            acc = q.table[acc][q.power(images[g], e)]
        self.spent += len(r)
        if self.spent > self.budget:
            raise ResourceCapExceeded(f"homomorphism search exceeded {self.budget} evaluations")
        return acc

    def run(self, visit: Callable[[list[int]], None]) -> None:
        images: list[int] = [0] * len(self.gens)
        ident = self.q.identity

        def rec(depth):
            if depth == len(self.order):
                visit(images)
                return
            g = self.order[depth]
            for x in self.allowed[g]:
                images[g] = x
                if all(self._eval(r, images) == ident for r in self.checks[depth]):
                    rec(depth + 1)

        rec(0)


def hom_count(p: Presentation, q: FiniteGroup, budget: int = DEFAULT_NODE_BUDGET) -> int:
    count = 0

    def visit(_):
        nonlocal count
        count += 1

    _Search(p, q, budget).run(visit)
    return count


def iter_homs(p: Presentation, q: FiniteGroup, budget: int = DEFAULT_NODE_BUDGET) -> Iterator[dict[str, int]]:
    found: list[dict[str, int]] = []
    search = _Search(p, q, budget)
    search.run(lambda images: found.append(dict(zip(search.gens, images))))
    return iter(found)


def evaluate(w: Word, images: dict[str, int], q: FiniteGroup) -> int:
    acc = q.identity
    for s, e in w:
        acc = q.mul(acc, q.power(images[s], e))
    return acc


@dataclass(frozen=True)
class Fingerprint:
    tier: str
    counts: dict[str, int]


def fingerprint(p: Presentation, tier: str = "small", budget: int = DEFAULT_NODE_BUDGET) -> Fingerprint:
    return Fingerprint(tier, {q.name: hom_count(p, q, budget) for q in catalogue(tier)})


def distinguish(
    p1: Presentation, p2: Presentation, tier: str = "small", budget: int = DEFAULT_NODE_BUDGET
) -> Optional[FiniteGroup]:
    """First catalogue group with different homomorphism counts, if any."""
    for q in catalogue(tier):
        if hom_count(p1, q, budget) != hom_count(p2, q, budget):
            return q
    return None


def higman_quotient_check(
    p: Presentation, word: Word, tier: str = "small", budget: int = DEFAULT_NODE_BUDGET
) -> bool:
    """Whether ``word`` maps to the identity under every homomorphism into the catalogue."""
    for q in catalogue(tier):
        for images in iter_homs(p, q, budget):
            if evaluate(word, images, q) != q.identity:
                return False
    return True
