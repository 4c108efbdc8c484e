"""JSON encodings. Every ``*_to_json`` has an inverse ``*_from_json``."""

from __future__ import annotations

import json
from typing import Any

from .errors import InvalidGraphError
from .graph_core import GraphAutomorphism, SerreGraph
from .group_structure import Presentation
from .numbered_graph import Collapse, NumberedGraph, SlideMove
from .slide_engine import SlideSequence
from .tagged_poset import PosetElement, TaggedPoset


def _require(obj: Any, key: str, kind):
    if not isinstance(obj, dict) or key not in obj:
        raise InvalidGraphError(f"missing field {key!r}")
    val = obj[key]
    if not isinstance(val, kind) or isinstance(val, bool) and kind is int:
        raise InvalidGraphError(f"field {key!r} has the wrong type")
    return val


def graph_to_json(g: NumberedGraph) -> dict:
    return {
        "vertices": [{"id": v, "d": g.vlabel[v]} for v in g.graph.vertices],
        "edges": [{"id": p, "ends": [o, t], "d": d} for p, o, t, d in sorted(g.edge_list())],
    }


def _ends(e) -> tuple[str, str]:
    ends = _require(e, "ends", list)
    if len(ends) != 2 or not all(isinstance(x, str) for x in ends):
        raise InvalidGraphError("edge ends must be two vertex ids")
    return ends[0], ends[1]


def graph_from_json(obj: Any) -> NumberedGraph:
    vs = _require(obj, "vertices", list)
    es = _require(obj, "edges", list)
    vertices = {}
    for v in vs:
        vid = _require(v, "id", str)
        if vid in vertices:
            raise InvalidGraphError(f"duplicate vertex {vid!r}")
        vertices[vid] = _require(v, "d", int)
    edges = [(_require(e, "id", str), *_ends(e), _require(e, "d", int)) for e in es]
    return NumberedGraph.build(vertices, edges)


def automorphism_to_json(f: GraphAutomorphism) -> dict:
    g = f.base
    return {
        "vertices": [{"id": v} for v in g.vertices],
        "edges": [{"id": p, "ends": [o, t]} for p, o, t in sorted(g.pairs)],
        "vertex_map": {v: f.vmap[v] for v in g.vertices},
        "edge_map": {p: {"image": q, "reversed": r} for p, (q, r) in sorted(f.emap.items())},
    }


def automorphism_from_json(obj: Any) -> GraphAutomorphism:
    vertices = [_require(v, "id", str) for v in _require(obj, "vertices", list)]
    edges = [(_require(e, "id", str), *_ends(e)) for e in _require(obj, "edges", list)]
    g = SerreGraph.build(vertices, edges)
    vmap = _require(obj, "vertex_map", dict)
    emap = {p: (_require(x, "image", str), _require(x, "reversed", bool)) for p, x in _require(obj, "edge_map", dict).items()}
    return GraphAutomorphism(g, dict(vmap), emap)


def poset_to_json(p: TaggedPoset) -> dict:
    above: dict[int, list[str]] = {i: [] for i in range(len(p.elements))}
    for lo, hi in p.covers:
        above[lo].append(p.elements[hi].id)
    return {
        "elements": [
            {"id": e.id, "level": e.level, "tag": e.tag, "covers": sorted(above[i])}
            for i, e in enumerate(p.elements)
        ]
    }


def poset_from_json(obj: Any) -> TaggedPoset:
    raw = _require(obj, "elements", list)
    elements = tuple(
        PosetElement(_require(e, "id", str), _require(e, "level", int), _require(e, "tag", int)) for e in raw
    )
    index = {e.id: i for i, e in enumerate(elements)}
    if len(index) != len(elements):
        raise InvalidGraphError("duplicate poset element id")
    up = {i: {index[c] for c in _require(e, "covers", list)} for i, e in enumerate(raw)}
    leq = set()
    for i in range(len(elements)):
        stack, seen = [i], {i}
        while stack:
            for j in up[stack.pop()]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        leq.update((i, j) for j in seen)
    try:
        return TaggedPoset(elements, frozenset(leq))
    except ValueError as exc:
        raise InvalidGraphError(str(exc)) from exc


def _dart(d) -> dict:
    return {"edge": d[0], "reversed": d[1]}


def _dart_from(obj) -> tuple[str, bool]:
    return (_require(obj, "edge", str), _require(obj, "reversed", bool))


def sequence_to_json(s: SlideSequence) -> dict:
    return {
        "source": graph_to_json(s.source),
        "target": graph_to_json(s.target),
        "source_collapses": [{"edge": c.pair, "removed": c.removed, "kept": c.kept} for c in s.source_collapses],
        "target_collapses": [{"edge": c.pair, "removed": c.removed, "kept": c.kept} for c in s.target_collapses],
        "moves": [{"moved": _dart(m.moved), "along": _dart(m.along)} for m in s.moves],
        "vertex_map": dict(sorted(s.vertex_map.items())),
        "hashes": list(s.hashes),
    }


def _collapses(items) -> tuple[Collapse, ...]:
    return tuple(
        Collapse(_require(c, "edge", str), _require(c, "removed", str), _require(c, "kept", str)) for c in items
    )


def sequence_from_json(obj: Any) -> SlideSequence:
    return SlideSequence(
        graph_from_json(_require(obj, "source", dict)),
        graph_from_json(_require(obj, "target", dict)),
        tuple(
            SlideMove(_dart_from(_require(m, "moved", dict)), _dart_from(_require(m, "along", dict)))
            for m in _require(obj, "moves", list)
        ),
        dict(_require(obj, "vertex_map", dict)),
        _collapses(obj.get("source_collapses", [])),
        _collapses(obj.get("target_collapses", [])),
        tuple(obj.get("hashes", [])),
    )


def presentation_to_json(p: Presentation) -> dict:
    return {"generators": list(p.generators), "relators": [[[s, e] for s, e in r] for r in p.relators]}


def presentation_from_json(obj: Any) -> Presentation:
    gens = _require(obj, "generators", list)
    rels = _require(obj, "relators", list)
    try:
        words = [[(str(s), int(e)) for s, e in r] for r in rels]
    except (TypeError, ValueError) as exc:
        raise InvalidGraphError("relators must be lists of [symbol, exponent] pairs") from exc
    return Presentation.make(gens, words)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
