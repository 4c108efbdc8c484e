"""``gbsiso`` command-line interface.

Exit codes: 0 success or isomorphic, 1 decided negative (non-isomorphic,
separated, not recognised), 2 input or precondition error, 3 resource cap.

Graph arguments are JSON files or fixture names: ``FIG1A``, ``FIG1B``,
``KLEIN``, ``CAGE:m,r[,step]`` and ``ROSECOVER:M,m`` (the last two denote
mapping tori).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import formats
from .errors import CertificateError, GbsIsoError, ResourceCapExceeded
from .fixtures import GRAPH_FIXTURES
from .graph_core import GraphAutomorphism
from .group_structure import (
    centreless_candidate,
    fiber_rank,
    format_word,
    fsc_report,
    higman_twist,
    holonomy_order,
    present,
    rational_euler_char,
    recognize_direct_product,
    structure_epimorphism,
)
from .hom_oracle import DEFAULT_NODE_BUDGET, catalogue, distinguish, fingerprint, group_by_name, hom_count, higman_quotient_check
from .mapping_torus import cage_graph, mapping_torus, rose_cyclic_cover
from .numbered_graph import NumberedGraph, SlideMove, reduce, slide
from .slide_engine import enumerate_slide_class, slide_equivalent, verify_certificate
from .tagged_poset import associated_poset

BUDGET_ENV = "GBSISO_NODE_BUDGET"


class UsageError(GbsIsoError):
    pass


def _budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"{BUDGET_ENV} must be an integer") from None
    if value < 1:
        raise UsageError(f"{BUDGET_ENV} must be positive")
    return value


def _ints(spec: str, n_min: int, n_max: int) -> list[int]:
    try:
        vals = [int(x) for x in spec.split(",")]
    except ValueError:
        raise UsageError(f"bad fixture parameters {spec!r}") from None
    if not n_min <= len(vals) <= n_max:
        raise UsageError(f"expected {n_min}..{n_max} parameters, got {spec!r}")
    return vals


def _fixture_aut(name: str) -> Optional[GraphAutomorphism]:
    head, _, params = name.partition(":")
    if head == "CAGE":
        return cage_graph(*_ints(params or "5,2", 2, 3))[1]
    if head == "ROSECOVER":
        return rose_cyclic_cover(*_ints(params or "3,4", 2, 2))[1]
    return None


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def load_graph(arg: str) -> NumberedGraph:
    if arg in GRAPH_FIXTURES:
        return GRAPH_FIXTURES[arg]()
    f = _fixture_aut(arg)
    if f is not None:
        return mapping_torus(f.base, f)
    return formats.graph_from_json(_read_json(arg))


def load_aut(arg: str) -> GraphAutomorphism:
    f = _fixture_aut(arg)
    return f if f is not None else formats.automorphism_from_json(_read_json(arg))


def _out(obj) -> None:
    sys.stdout.write(formats.dumps(obj))


def _parse_dart(spec: str):
    return (spec[1:], True) if spec.startswith("~") else (spec, False)


# --- subcommands ---------------------------------------------------------------


def cmd_poset(a) -> int:
    p = associated_poset(load_graph(a.graph))
    if a.text:
        data = formats.poset_to_json(p)["elements"]
        for e in data:
            print(f"{e['id']} level={e['level']} tag={e['tag']} covers=[{' '.join(e['covers'])}]")
    else:
        _out(formats.poset_to_json(p))
    return 0


def cmd_iso(a) -> int:
    d = slide_equivalent(load_graph(a.g1), load_graph(a.g2))
    if not d.isomorphic:
        print("not isomorphic")
        return 1
    print(f"isomorphic ({len(d.certificate)} slide moves)")
    if a.witness:
        with open(a.witness, "w", encoding="utf-8") as fh:
            fh.write(formats.dumps(formats.sequence_to_json(d.certificate)))
    return 0


def cmd_verify(a) -> int:
    s = formats.sequence_from_json(_read_json(a.witness))
    try:
        verify_certificate(s)
    except CertificateError as exc:
        print(f"invalid: {exc}")
        return 1
    print(f"valid ({len(s)} slide moves)")
    return 0


def cmd_slide(a) -> int:
    g = slide(load_graph(a.graph), SlideMove(_parse_dart(a.edge), _parse_dart(a.along)))
    _out(formats.graph_to_json(g))
    return 0


def cmd_reduce(a) -> int:
    g, log = reduce(load_graph(a.graph))
    for c in log:
        print(f"collapsed {c.pair}: {c.removed} -> {c.kept}", file=sys.stderr)
    _out(formats.graph_to_json(g))
    return 0


def cmd_enumerate(a) -> int:
    g, _ = reduce(load_graph(a.graph))
    cls = enumerate_slide_class(g, a.cap)
    _out({
        "count": len(cls.members),
        "truncated": cls.truncated,
        "members": [formats.graph_to_json(h) for h in cls.members],
    })
    if cls.truncated:
        print(f"slide class exceeds cap {a.cap}", file=sys.stderr)
        return 3
    return 0


def cmd_mapping_torus(a) -> int:
    f = load_aut(a.automorphism)
    _out(formats.graph_to_json(mapping_torus(f.base, f)))
    return 0


def cmd_fixture(a) -> int:
    name = a.name.upper()
    if name in GRAPH_FIXTURES:
        _out(formats.graph_to_json(GRAPH_FIXTURES[name]()))
        return 0
    if name == "CAGE":
        f = cage_graph(a.m, a.r, a.step)[1]
    elif name == "ROSECOVER":
        f = rose_cyclic_cover(a.M, a.m)[1]
    else:
        raise UsageError(f"unknown fixture {a.name!r}")
    _out(formats.graph_to_json(mapping_torus(f.base, f)) if a.torus else formats.automorphism_to_json(f))
    return 0


def cmd_present(a) -> int:
    interp = "finite_quotient" if a.interp == "finite" else "gbs"
    p = present(load_graph(a.graph), interp)
    if a.text:
        print(p)
    else:
        _out(formats.presentation_to_json(p))
    return 0


def cmd_epi(a) -> int:
    h = structure_epimorphism(load_graph(a.graph))
    _out({"modulus": h.modulus, "images": dict(sorted(h.images.items()))})
    return 0


def cmd_euler(a) -> int:
    g = load_graph(a.graph)
    print(f"chi={rational_euler_char(g)}")
    if a.holonomy is not None:
        print(f"m={holonomy_order(g, a.holonomy)}")
    if a.fiber_rank is not None:
        print(f"N={fiber_rank(g, a.fiber_rank)}")
    return 0


def cmd_recognize(a) -> int:
    M = recognize_direct_product(load_graph(a.graph))
    if M is None:
        print("not a direct product F_M x Z")
        return 1
    print(f"F_{M} x Z (M={M})")
    return 0


def cmd_fsc(a) -> int:
    for c in fsc_report(load_graph(a.graph)).classes:
        print(c.describe())
    return 0


def cmd_centreless(a) -> int:
    ok = centreless_candidate(load_graph(a.graph))
    print("candidate" if ok else "not a candidate: edge labels have a common factor")
    return 0 if ok else 1


def cmd_homcount(a) -> int:
    p = formats.presentation_from_json(_read_json(a.presentation))
    print(hom_count(p, group_by_name(a.group), _budget()))
    return 0


def cmd_fingerprint(a) -> int:
    p1 = formats.presentation_from_json(_read_json(a.p1))
    budget = _budget()
    if a.p2 is None:
        _out(fingerprint(p1, a.tier, budget).counts)
        return 0
    p2 = formats.presentation_from_json(_read_json(a.p2))
    q = distinguish(p1, p2, a.tier, budget)
    if q is None:
        print(f"not separated at tier {a.tier}")
        return 0
    print(f"separated by {q.name}")
    return 1


def cmd_higman(a) -> int:
    p = formats.presentation_from_json(_read_json(a.presentation))
    twisted = higman_twist(p, a.relator, a.letter)
    _out(formats.presentation_to_json(twisted))
    if a.verify:
        ok = higman_quotient_check(twisted, p.relators[a.relator], a.tier, _budget())
        print(
            f"{format_word(p.relators[a.relator])} dies in every tier-{a.tier} quotient: {str(ok).lower()}",
            file=sys.stderr,
        )
        return 0 if ok else 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gbsiso", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, *graphs):
        sp = sub.add_parser(name, help=help_)
        for gname in graphs:
            sp.add_argument(gname)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("poset", cmd_poset, "associated tagged poset", "graph")
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--json", action="store_true")
    mode.add_argument("--text", action="store_true")

    sp = add("iso", cmd_iso, "decide isomorphism via slide moves", "g1", "g2")
    sp.add_argument("--witness", help="write the slide certificate here")

    add("verify", cmd_verify, "replay a slide certificate", "witness")

    sp = add("slide", cmd_slide, "apply one slide move (prefix ~ for the reversed dart)", "graph")
    sp.add_argument("--edge", required=True)
    sp.add_argument("--along", required=True)

    add("reduce", cmd_reduce, "collapse to a reduced graph", "graph")

    sp = add("enumerate", cmd_enumerate, "slide class up to labelled isomorphism", "graph")
    sp.add_argument("--cap", type=int, default=1000)

    add("mapping-torus", cmd_mapping_torus, "numbered graph of a mapping torus", "automorphism")

    sp = add("fixture", cmd_fixture, "emit a named fixture", "name")
    sp.add_argument("--m", type=int, default=5)
    sp.add_argument("--r", type=int, default=2)
    sp.add_argument("--step", type=int, default=1)
    sp.add_argument("--M", type=int, default=3)
    sp.add_argument("--torus", action="store_true", help="emit the mapping torus instead of the automorphism")

    sp = add("present", cmd_present, "group presentation", "graph")
    sp.add_argument("--interp", choices=["gbs", "finite"], default="gbs")
    sp.add_argument("--text", action="store_true")

    add("epi", cmd_epi, "structure map onto Z/M", "graph")

    sp = add("euler", cmd_euler, "Euler characteristic and holonomy arithmetic", "graph")
    sp.add_argument("--holonomy", type=int, metavar="N", help="fibre rank N; prints the holonomy order m")
    sp.add_argument("--fiber-rank", type=int, metavar="m", help="holonomy order m; prints the fibre rank N")

    add("recognize-product", cmd_recognize, "recognise F_M x Z", "graph")
    add("fsc", cmd_fsc, "finite subgroup conjugacy classes", "graph")
    add("centreless-check", cmd_centreless, "edge-label gcd test", "graph")

    sp = add("homcount", cmd_homcount, "count homomorphisms to a catalogue group", "presentation")
    sp.add_argument("--group", required=True, choices=[q.name for q in catalogue("medium")])

    sp = add("fingerprint", cmd_fingerprint, "homomorphism-count fingerprint", "p1")
    sp.add_argument("p2", nargs="?")
    sp.add_argument("--tier", choices=["small", "medium"], default="small")

    sp = add("higman", cmd_higman, "Higman twist of a relator", "presentation")
    sp.add_argument("--relator", type=int, required=True)
    sp.add_argument("--letter", required=True)
    sp.add_argument("--verify", action="store_true")
    sp.add_argument("--tier", choices=["small", "medium"], default="small")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (GbsIsoError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
