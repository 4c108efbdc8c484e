"""Mapping tori of finite-order graph automorphisms.

The mapping torus of ``f: X -> X`` is a graph of circles over the orbit
graph ``X / <f>``.  Dividing out the centre leaves the numbered graph whose
label on an orbit is ``order(f) / |orbit|``, the order of its stabiliser.
"""

from __future__ import annotations

import math

from .errors import InvalidGraphError, PreconditionError
from .graph_core import GraphAutomorphism, SerreGraph, aut_order, aut_power, is_connected, orbits, subdivide_inverted_edges
from .numbered_graph import NumberedGraph


def mapping_torus(x: SerreGraph, f: GraphAutomorphism) -> NumberedGraph:
    if f.base != x:
        raise InvalidGraphError("automorphism is not defined on this graph")
    if not x.vertices or not is_connected(x):
        raise PreconditionError("mapping torus needs a connected nonempty graph")
    x, f = subdivide_inverted_edges(x, f)
    m = aut_order(f)
    v_orbits, e_orbits = orbits(f)
    rep = {}
    vlabel = {}
    for orb in v_orbits:
        r = min(orb)
        vlabel[r] = m // len(orb)
        rep.update((v, r) for v in orb)
    edges = []
    for orb in e_orbits:
        p = min(orb)
        o, t = x.ends(p)
        edges.append((p, rep[o], rep[t], m // len(orb)))
    return NumberedGraph.build(vlabel, edges)


def cage_graph(m: int, r: int, step: int = 1) -> tuple[SerreGraph, GraphAutomorphism]:
    """Inner cycle ``v_i -- v_{i+step}``, outer cycle ``w_i -- w_{i+1}``, and
    ``r`` parallel cage edges ``v_i -- w_i``, with the rotation that advances
    ``i`` by one and cycles each cage."""
    if m < 3 or r < 2:
        raise PreconditionError("cage graph needs m >= 3 and r >= 2")
    if math.gcd(m, r) != 1:
        raise PreconditionError(f"cage graph needs gcd(m, r) = 1, got gcd({m}, {r}) = {math.gcd(m, r)}")
    if math.gcd(step, m) != 1:
        raise PreconditionError(f"cage graph needs the step coprime to m, got step {step}")
    width = len(str(max(m, r) - 1))

    def n(i):
        return str(i % m).zfill(width)

    def j_(j):
        return str(j % r).zfill(width)

    vertices = [f"v{n(i)}" for i in range(m)] + [f"w{n(i)}" for i in range(m)]
    edges = []
    for i in range(m):
        edges.append((f"in{n(i)}", f"v{n(i)}", f"v{n(i + step)}"))
        edges.append((f"out{n(i)}", f"w{n(i)}", f"w{n(i + 1)}"))
        edges += [(f"c{n(i)}_{j_(j)}", f"v{n(i)}", f"w{n(i)}") for j in range(r)]
    g = SerreGraph.build(vertices, edges)
    vmap = {f"{s}{n(i)}": f"{s}{n(i + 1)}" for s in "vw" for i in range(m)}
    emap = {}
    for i in range(m):
        emap[f"in{n(i)}"] = (f"in{n(i + 1)}", False)
        emap[f"out{n(i)}"] = (f"out{n(i + 1)}", False)
        for j in range(r):
            emap[f"c{n(i)}_{j_(j)}"] = (f"c{n(i + 1)}_{j_(j + 1)}", False)
    return g, GraphAutomorphism(g, vmap, emap)


def rose_cyclic_cover(M: int, m: int) -> tuple[SerreGraph, GraphAutomorphism]:
    """The ``Z/m`` cover of the ``M``-petal rose: an ``m``-cycle with ``M - 1``
    loops at each vertex, and its deck rotation."""
    if M < 2 or m < 1:
        raise PreconditionError("rose cover needs M >= 2 and m >= 1")
    width = len(str(max(m, M) - 1))

    def n(i):
        return str(i % m).zfill(width)

    vertices = [f"x{n(i)}" for i in range(m)]
    edges = []
    for i in range(m):
        edges.append((f"s{n(i)}", f"x{n(i)}", f"x{n(i + 1)}"))
        edges += [(f"l{n(i)}_{str(j).zfill(width)}", f"x{n(i)}", f"x{n(i)}") for j in range(1, M)]
    g = SerreGraph.build(vertices, edges)
    vmap = {f"x{n(i)}": f"x{n(i + 1)}" for i in range(m)}
    emap = {f"s{n(i)}": (f"s{n(i + 1)}", False) for i in range(m)}
    for i in range(m):
        for j in range(1, M):
            jj = str(j).zfill(width)
            emap[f"l{n(i)}_{jj}"] = (f"l{n(i + 1)}_{jj}", False)
    return g, GraphAutomorphism(g, vmap, emap)


def coprime_power_check(x: SerreGraph, f: GraphAutomorphism, k: int) -> bool:
    """Whether ``f`` and ``f^k`` have the same mapping-torus numbered graph."""
    if math.gcd(k, aut_order(f)) != 1:
        raise PreconditionError(f"k = {k} is not coprime to the order {aut_order(f)}")
    return mapping_torus(x, f) == mapping_torus(x, aut_power(f, k))
