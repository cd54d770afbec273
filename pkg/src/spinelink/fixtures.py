"""Hand-built diagram fixtures used by tests and the CLI library."""

from __future__ import annotations

from .builder import DiagramBuilder
from .diagram import Diagram, RegionAddr
from .library import builtin


def unknot_on(spine_name: str = "sphere", face: str | None = None) -> Diagram:
    s = builtin(spine_name)
    b = DiagramBuilder(spine=s, name=f"unknot_{spine_name}")
    fid = face or sorted(s.faces)[0]
    m = b.add_marker(fid)
    b.add_arc((m, 0), (m, 1), fid)
    return b.build()


def two_markers_on(spine_name: str, face: str) -> Diagram:
    s = builtin(spine_name)
    b = DiagramBuilder(spine=s, name="two_markers")
    m1 = b.add_marker(face)
    a1 = b.add_arc((m1, 0), (m1, 1), face)
    m2 = b.add_marker(face)
    a2 = b.add_arc((m2, 0), (m2, 1), face)
    if s.faces[face].is_disc:
        b.place(m1, None, RegionAddr(a1, 0, -1))
        b.place(m2, None, RegionAddr(a2, 0, -1))
    else:
        # m1 is the base container; m2 sits beside it
        b.place(m2, RegionAddr(a1, 0, -1), RegionAddr(a2, 0, -1))
    return b.build()


def trefoil_sphere(mirror: bool = False) -> Diagram:
    """Standard alternating trefoil; strand B over at every crossing."""
    s = builtin("sphere")
    b = DiagramBuilder(spine=s, name="trefoil")
    over = mirror
    x = [b.add_crossing("f0", over) for _ in range(3)]
    # PD code X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]; ports listed ccw
    b.add_arc((x[0], 0), (x[1], 3), "f0")    # edge 1
    b.add_arc((x[0], 2), (x[2], 1), "f0")    # edge 2
    b.add_arc((x[1], 0), (x[2], 3), "f0")    # edge 3
    b.add_arc((x[0], 1), (x[1], 2), "f0")    # edge 4
    b.add_arc((x[0], 3), (x[2], 0), "f0")    # edge 5
    b.add_arc((x[1], 1), (x[2], 2), "f0")    # edge 6
    return b.build()


def hopf_sphere() -> Diagram:
    """Two components crossing twice (writhe +2 clasp)."""
    s = builtin("sphere")
    b = DiagramBuilder(spine=s, name="hopf")
    x1 = b.add_crossing("f0", True)
    x2 = b.add_crossing("f0", True)
    b.add_arc((x1, 0), (x2, 1), "f0")
    b.add_arc((x1, 1), (x2, 0), "f0")
    b.add_arc((x1, 2), (x2, 3), "f0")
    b.add_arc((x1, 3), (x2, 2), "f0")
    return b.build()


def klein_core() -> Diagram:
    """Orientation-reversing core loop on the Klein-bottle surface spine."""
    s = builtin("klein_surface")
    b = DiagramBuilder(spine=s, name="klein_core")
    m = b.add_marker("f0")
    b.add_arc((m, 0), (m, 1), "f0", twist=1)
    return b.build()


def loop_through_edge(spine_name: str, edge: str, w_from: str, w_to: str,
                      name: str = "loop") -> Diagram:
    """A loop crossing one spine edge once; both wings must share a face."""
    s = builtin(spine_name)
    site_from = s.pass_site(w_from)
    site_to = s.pass_site(w_to)
    if site_from.face != site_to.face:
        raise ValueError("wings lie in different faces; loop cannot close")
    b = DiagramBuilder(spine=s, name=name)
    ep = b.add_edgepoint(edge, (w_from, w_to), 0)
    b.add_arc((ep, 0), (ep, 1), site_from.face)
    return b.build()


def s2xs1_core() -> Diagram:
    """A knot on s2xs1_spine generating H1(spine; Z/2)."""
    from .invariants import z2_class
    s = builtin("s2xs1_spine")
    for eid in sorted(s.edges):
        e = s.edges[eid]
        for w1 in e.wings:
            for w2 in e.wings:
                if w1 >= w2:
                    continue
                if s.pass_site(w1).face != s.pass_site(w2).face:
                    continue
                d = loop_through_edge("s2xs1_spine", eid, w1, w2, "k_core")
                if d.validate("link"):
                    continue
                if any(z2_class(s, d, 0)):
                    return d
    raise RuntimeError("no single-edge-point generator found")


def bing_parity_pair() -> Diagram:
    """Two one-edge-point loops on bing_house, adjacent on edge E1.

    Backward clearing between their edge-points creates a crossing joining
    the two components, realizing the odd inter-component parity.
    """
    s = builtin("bing_house")
    b = DiagramBuilder(spine=s, name="parity_pair")
    # all wings of E1 bound the big face A; with the (w1u,w1d) loop first
    # along E1 the two connecting arcs nest instead of interleaving
    ep2 = b.add_edgepoint("E1", ("w1u", "w1d"), 0)
    b.add_arc((ep2, 0), (ep2, 1), "A")
    ep1 = b.add_edgepoint("E1", ("w1u", "w1f"), 1)
    b.add_arc((ep1, 0), (ep1, 1), "A")
    return b.build()


FIXTURES = {
    "unknot_sphere": lambda: unknot_on("sphere"),
    "trefoil": trefoil_sphere,
    "trefoil_mirror": lambda: trefoil_sphere(mirror=True),
    "hopf": hopf_sphere,
    "klein_core": klein_core,
    "s2xs1_core": s2xs1_core,
    "bing_parity_pair": bing_parity_pair,
}


def fixture(name: str) -> Diagram:
    return FIXTURES[name]()
