"""Named example graphs."""

from __future__ import annotations

from .numbered_graph import NumberedGraph


def fig1a() -> NumberedGraph:
    """Vertex ``u`` labelled 4 with a loop labelled 4, and a triangle of 12s."""
    return NumberedGraph.build(
        {"u": 4, "a": 12, "b": 12, "c": 12},
        [
            ("uu", "u", "u", 4),
            ("ua", "u", "a", 2),
            ("ub", "u", "b", 2),
            ("ab", "a", "b", 6),
            ("ac", "a", "c", 3),
            ("bc", "b", "c", 1),
        ],
    )


def fig1b() -> NumberedGraph:
    """``fig1a`` after sliding the far end of ``ub`` from ``b`` to ``a`` along ``ab``."""
    return NumberedGraph.build(
        {"u": 4, "a": 12, "b": 12, "c": 12},
        [
            ("uu", "u", "u", 4),
            ("ua", "u", "a", 2),
            ("ub", "u", "a", 2),
            ("ab", "a", "b", 6),
            ("ac", "a", "c", 3),
            ("bc", "b", "c", 1),
        ],
    )


def klein() -> NumberedGraph:
    """``Z/2 * Z/2``: the mod-centre graph of the Klein bottle group."""
    return NumberedGraph.build({"a": 2, "b": 2}, [("e", "a", "b", 1)])


def rose(loops: int, label: int = 1) -> NumberedGraph:
    return NumberedGraph.build({"x": label}, [(f"l{i}", "x", "x", label) for i in range(loops)])


GRAPH_FIXTURES = {"FIG1A": fig1a, "FIG1B": fig1b, "KLEIN": klein}
