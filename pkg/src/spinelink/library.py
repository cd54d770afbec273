"""Built-in spine library.

Five spines ship with the package:

* ``sphere``       - closed-surface spine of the product region between two
                     balls; carries a co-orientation, so all flow calculi
                     apply (with no singular strata).
* ``klein_surface``- Klein bottle with product thickening.
* ``bing_house``   - the house with two rooms, hand-encoded from the usual
                     picture (two membrane corners give the two vertices).
* ``abalone``      - dual of a one-vertex two-tetrahedron homology-sphere
                     triangulation; the minimal vertex-bearing spine here,
                     and it carries branchings.
* ``s2xs1_spine``  - dual of a two-vertex subdivision of the two-tetrahedron
                     triangulation with first homology Z; its complement is
                     two balls, so the euler characteristic is 2.

Each builtin is constructed deterministically, validated, and handed out
with its first enumerated flow structure attached when one exists.
"""

from __future__ import annotations

from .spine import Edge, EdgeEnd, Face, FlowStructure, Spine, SpineError
from .spine_io import parse_spine, serialize_spine
from .tetra import TetComplex, dual_spine, pachner_14, perm_inverse


BUILTIN_NAMES = ("sphere", "klein_surface", "bing_house", "abalone", "s2xs1_spine")


def rename_spine(s: Spine, name: str | None = None) -> Spine:
    """Canonical pretty ids: v0.., e0.., wings e0a/e0b/e0c, f0.."""
    vmap = {v: f"v{i}" for i, v in enumerate(sorted(s.vertices))}
    emap = {e: f"e{i}" for i, e in enumerate(sorted(s.edges))}
    wmap = {}
    for eid in sorted(s.edges):
        e = s.edges[eid]
        for w, suffix in zip(e.wings, "abc"):
            wmap[w] = f"{emap[eid]}{suffix}"
    fmap = {f: f"f{i}" for i, f in enumerate(sorted(s.faces))}
    edges = []
    for eid in sorted(s.edges):
        e = s.edges[eid]
        ends = None
        if e.ends:
            ends = tuple(EdgeEnd(vertex=vmap[end.vertex], slot=end.slot,
                                 facing={wmap[w]: sl for w, sl in end.facing.items()})
                         for end in e.ends)
        edges.append(Edge(id=emap[eid], kind=e.kind,
                          wings=tuple(wmap[w] for w in e.wings),
                          ends=ends, monodromy=e.monodromy))
    faces = []
    for fid in sorted(s.faces):
        f = s.faces[fid]
        if f.is_disc:
            circuit = tuple(type(p)(edge=emap[p.edge], direction=p.direction,
                                    wing=wmap[p.wing]) for p in f.circuit)
            faces.append(Face(id=fmap[fid], circuit=circuit))
        else:
            faces.append(Face(id=fmap[fid], genus=f.genus, orientable=f.orientable))
    flow = None
    if s.flow:
        flow = FlowStructure(
            branch={emap[e]: tuple(wmap[w] for w in tr) for e, tr in s.flow.branch.items()},
            coorient={fmap[f]: sg for f, sg in s.flow.coorient.items()})
    return Spine(name=name or s.name, vertices=sorted(vmap.values()),
                 edges=edges, faces=faces, flow=flow, thickening=s.thickening,
                 metadata=s.metadata)


def with_first_flow(s: Spine) -> Spine:
    from .spine import enumerate_flow_structures
    flows = enumerate_flow_structures(s)
    if not flows:
        return s
    return Spine(name=s.name, vertices=s.vertices, edges=list(s.edges.values()),
                 faces=list(s.faces.values()), flow=flows[0],
                 thickening=s.thickening, metadata=s.metadata)


def _build_sphere() -> Spine:
    s = Spine(name="sphere", vertices=(), edges=(),
              faces=[Face(id="f0", genus=0, orientable=True)],
              thickening="product")
    return with_first_flow(s)


def _build_klein_surface() -> Spine:
    return Spine(name="klein_surface", vertices=(), edges=(),
                 faces=[Face(id="f0", genus=2, orientable=False)],
                 thickening="product")


_BING_HOUSE_DOC = """spine bing_house
vertex p1
vertex p2
edge E1 interval p1:0 p2:0
edge E2 interval p2:1 p1:1
edge E3 interval p1:2 p1:3
edge E4 interval p2:2 p2:3
wings E1 w1u w1d w1f
wings E2 w2u w2d w2f
wings E3 w3n w3s w3m
wings E4 w4n w4s w4m
attach E1:0 w1u faces 1
attach E1:0 w1d faces 2
attach E1:0 w1f faces 3
attach E1:1 w1u faces 2
attach E1:1 w1d faces 1
attach E1:1 w1f faces 3
attach E2:0 w2u faces 2
attach E2:0 w2d faces 0
attach E2:0 w2f faces 3
attach E2:1 w2u faces 0
attach E2:1 w2d faces 2
attach E2:1 w2f faces 3
attach E3:0 w3n faces 0
attach E3:0 w3s faces 1
attach E3:0 w3m faces 3
attach E3:1 w3n faces 0
attach E3:1 w3s faces 1
attach E3:1 w3m faces 2
attach E4:0 w4n faces 0
attach E4:0 w4s faces 1
attach E4:0 w4m faces 3
attach E4:1 w4n faces 0
attach E4:1 w4s faces 1
attach E4:1 w4m faces 2
face A
face m1
face m2
circuit A: E1+@w1u, E4+@w4n, E1-@w1f, E3-@w3n, E1+@w1d, E2+@w2d, E3+@w3s, E2-@w2f, E4-@w4s, E2+@w2u
circuit m1: E3+@w3m
circuit m2: E4+@w4m
"""


def _build_bing_house() -> Spine:
    return with_first_flow(parse_spine(_BING_HOUSE_DOC))


# gluing tables found by exhaustive search over two-tetrahedron closed
# complexes (orientable, sphere vertex links), then frozen; see
# tools/build_library.py for the regeneration script
_ABALONE_GLUINGS = {
    ("A", 0): ("A", 1, (1, 0, 2, 3)),
    ("A", 1): ("A", 0, (1, 0, 2, 3)),
    ("A", 2): ("B", 0, (1, 2, 0, 3)),
    ("A", 3): ("B", 1, (0, 2, 3, 1)),
    ("B", 0): ("A", 2, (2, 0, 1, 3)),
    ("B", 1): ("A", 3, (0, 3, 1, 2)),
    ("B", 2): ("B", 3, (0, 1, 3, 2)),
    ("B", 3): ("B", 2, (0, 1, 3, 2)),
}

_S2XS1_FROZEN = {
    ("A", 0): ("A", 1, (1, 2, 3, 0)),
    ("A", 1): ("A", 0, (3, 0, 1, 2)),
    ("A", 2): ("B", 0, (1, 2, 0, 3)),
    ("B", 0): ("A", 2, (2, 0, 1, 3)),
    ("A", 3): ("B", 3, (1, 2, 0, 3)),
    ("B", 3): ("A", 3, (2, 0, 1, 3)),
    ("B", 1): ("B", 2, (3, 2, 0, 1)),
    ("B", 2): ("B", 1, (2, 3, 1, 0)),
}


def _build_abalone() -> Spine:
    cx = TetComplex(tets=["A", "B"], gluings=dict(_ABALONE_GLUINGS))
    sp = rename_spine(dual_spine(cx, "abalone"), "abalone")
    return with_first_flow(sp)


def _build_s2xs1() -> Spine:
    cx = TetComplex(tets=["A", "B"], gluings=dict(_S2XS1_FROZEN))
    cx2, _ = pachner_14(cx, "A")
    sp = rename_spine(dual_spine(cx2, "s2xs1_spine"), "s2xs1_spine")
    return with_first_flow(sp)


_BUILDERS = {
    "sphere": _build_sphere,
    "klein_surface": _build_klein_surface,
    "bing_house": _build_bing_house,
    "abalone": _build_abalone,
    "s2xs1_spine": _build_s2xs1,
}

_cache: dict[str, Spine] = {}


def builtin(name: str) -> Spine:
    if name not in _BUILDERS:
        raise KeyError(f"unknown builtin spine {name!r} (have {', '.join(BUILTIN_NAMES)})")
    if name not in _cache:
        s = _BUILDERS[name]()
        errs = s.validate()
        if errs:
            raise SpineError(f"builtin {name} failed validation: {errs[0]}")
        _cache[name] = s
    return _cache[name]


def builtin_document(name: str) -> str:
    return serialize_spine(builtin(name))
