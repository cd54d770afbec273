"""Combinatorial model of almost special spines of 3-manifolds.

A spine is encoded by its singular graph (vertices and edges, where an edge
carries three wings in a fixed cyclic order and each end of an interval edge
carries a bijection from wings to the facing germ slots of the vertex) plus
disc faces given by boundary circuits of edge passes.  Spines with empty
singular set are a single closed surface with a declared thickening.

Local models:

* An edge cross-section is a triod; the stored wing triple is its cyclic
  order as seen looking along the edge from end 0 towards end 1.  The three
  complementary sectors of the triod are the unordered wing pairs.
* A vertex is the cone over the 1-skeleton of a tetrahedron.  Its four germ
  slots are the K4 vertices, the six corners are the K4 edges, and validity
  means the germ rotations (induced by the wing orders through the facing
  bijections, with one free reversal per germ) admit a completion to the
  spherical embedding of K4.

Side bookkeeping: each disc face has a conventional "front" side.  The front
of its first pass is the sector from the pass wing to the next wing in the
travel view, and the fronts of the remaining passes are derived by corner
(or circle monodromy) transport.  Transport around the circuit must return
front to front, which is exactly two-sidedness of the disc.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

INTERVAL = "interval"
CIRCLE = "circle"

PRODUCT = "product"
TWISTED = "twisted"


class SpineError(Exception):
    """Structural problem that prevents building a spine at all."""


@dataclass(frozen=True)
class EdgeEnd:
    vertex: str
    slot: int
    facing: dict[str, int] = field(default_factory=dict, compare=False)

    def facing_item(self, wing: str) -> int:
        return self.facing[wing]


@dataclass(frozen=True)
class Edge:
    id: str
    kind: str                      # INTERVAL or CIRCLE
    wings: tuple[str, str, str]    # cyclic order looking along end0 -> end1
    ends: tuple[EdgeEnd, EdgeEnd] | None = None   # interval edges
    monodromy: tuple[int, int] | None = None      # circle edges: (rotation, flip)

    def wing_index(self, wing: str) -> int:
        return self.wings.index(wing)

    def other_wing(self, w1: str, w2: str) -> str:
        (rest,) = set(self.wings) - {w1, w2}
        return rest

    def sectors(self) -> list[frozenset[str]]:
        w = self.wings
        return [frozenset((w[0], w[1])), frozenset((w[1], w[2])), frozenset((w[2], w[0]))]

    def monodromy_map(self) -> dict[str, str]:
        """Wing permutation after one positive loop of a circle edge."""
        rot, flip = self.monodromy
        out = {}
        for i, w in enumerate(self.wings):
            j = (rot - i) % 3 if flip else (rot + i) % 3
            out[w] = self.wings[j]
        return out


@dataclass(frozen=True)
class Pass:
    """One traversal of an edge by a face boundary circuit."""
    edge: str
    direction: int   # +1 traverses end0 -> end1, -1 the opposite
    wing: str


@dataclass(frozen=True)
class Face:
    id: str
    circuit: tuple[Pass, ...] | None = None       # disc faces
    genus: int | None = None                      # closed-surface faces
    orientable: bool | None = None

    @property
    def is_disc(self) -> bool:
        return self.circuit is not None


@dataclass(frozen=True)
class FlowStructure:
    """Branched-surface structure: wing roles plus face co-orientations.

    ``branch`` maps each edge id to (free, under, over) wing ids, and
    ``coorient`` maps each face id to +1 (front side) or -1 (back side).
    """
    branch: dict[str, tuple[str, str, str]]
    coorient: dict[str, int]

    def roles(self, edge: str) -> dict[str, str]:
        f, u, o = self.branch[edge]
        return {f: "free", u: "under", o: "over"}

    def free_wing(self, edge: str) -> str:
        return self.branch[edge][0]


@dataclass(frozen=True)
class PassSite:
    """Where a wing sits inside the face-circuit structure."""
    face: str
    index: int            # position in the circuit
    direction: int
    front: frozenset[str]  # sector on the face's front side at this pass
    back: frozenset[str]


@dataclass
class VertexModel:
    """Resolved local model of a vertex: rotations, regions, transports."""
    slots: dict[int, tuple[str, int]]            # slot -> (edge id, end index)
    dart_wing: dict[tuple[int, int], str]        # (slot s, slot t) -> wing of s facing t
    sector_region: dict[tuple[int, frozenset[str]], int]
    regions: list[set[tuple[int, frozenset[str]]]]

    def corner_transport(self, s: int, t: int, sector: frozenset[str]) -> frozenset[str]:
        """Carry a side across the corner {s, t}: in at germ s, out at germ t."""
        region = self.sector_region[(s, sector)]
        w_ts = self.dart_wing[(t, s)]
        for u in self.slots:
            if u == t or u == s:
                continue
            cand = frozenset((w_ts, self.dart_wing[(t, u)]))
            if self.sector_region.get((t, cand)) == region:
                return cand
        raise SpineError(f"corner transport failed at slots {s},{t}")


class Spine:
    """Immutable-by-convention spine; derived tables built on first analysis."""

    def __init__(self, name, vertices, edges, faces, flow=None, thickening=None,
                 metadata=""):
        self.name: str = name
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.edges: dict[str, Edge] = {e.id: e for e in edges}
        self.faces: dict[str, Face] = {f.id: f for f in faces}
        self.flow: Optional[FlowStructure] = flow
        self.thickening: Optional[str] = thickening
        self.metadata: str = metadata
        self._analysis = None

    # -- basic queries -------------------------------------------------

    def without_flow(self) -> "Spine":
        return Spine(name=self.name, vertices=self.vertices,
                     edges=list(self.edges.values()), faces=list(self.faces.values()),
                     flow=None, thickening=self.thickening, metadata=self.metadata)

    def with_flow(self, flow: "FlowStructure") -> "Spine":
        return Spine(name=self.name, vertices=self.vertices,
                     edges=list(self.edges.values()), faces=list(self.faces.values()),
                     flow=flow, thickening=self.thickening, metadata=self.metadata)

    @property
    def is_surface_spine(self) -> bool:
        return not self.edges and not self.vertices

    @property
    def surface_face(self) -> Face:
        (f,) = self.faces.values()
        return f

    def is_special(self) -> bool:
        return (bool(self.vertices)
                and all(f.is_disc for f in self.faces.values())
                and all(e.kind == INTERVAL for e in self.edges.values()))

    def wing_owner(self, wing: str) -> Edge:
        return self._wing_edge[wing]

    @property
    def _wing_edge(self) -> dict[str, Edge]:
        try:
            return self.__wing_edge
        except AttributeError:
            self.__wing_edge = {w: e for e in self.edges.values() for w in e.wings}
            return self.__wing_edge

    # -- analysis ------------------------------------------------------

    def analysis(self) -> "SpineAnalysis":
        if self._analysis is None:
            self._analysis = analyze(self)
            if self._analysis.violations:
                first = self._analysis.violations[0]
                raise SpineError(f"invalid spine {self.name!r}: {first}")
        return self._analysis

    def validate(self) -> list[str]:
        """All invariant violations; empty list means the spine is valid."""
        if self._analysis is None:
            self._analysis = analyze(self)
        return list(self._analysis.violations)

    def pass_site(self, wing: str) -> PassSite:
        return self.analysis().pass_sites[wing]

    def euler_characteristic(self) -> int:
        if self.is_surface_spine:
            f = self.surface_face
            return 2 - f.genus * (2 if f.orientable else 1)
        return len(self.vertices) - len(self.edges) + len(self.faces)


@dataclass
class SpineAnalysis:
    violations: list[str]
    vertex_models: dict[str, VertexModel]
    pass_sites: dict[str, PassSite]               # wing -> site
    slot_table: dict[str, dict[int, tuple[str, int]]]   # vertex -> slot -> (edge, end)


def analyze(spine: Spine) -> SpineAnalysis:
    v: list[str] = []
    slot_table: dict[str, dict[int, tuple[str, int]]] = {u: {} for u in spine.vertices}
    vertex_models: dict[str, VertexModel] = {}
    pass_sites: dict[str, PassSite] = {}

    if spine.is_surface_spine:
        faces = list(spine.faces.values())
        if len(faces) != 1 or faces[0].is_disc:
            v.append("surface spine must consist of exactly one closed-surface face")
        if spine.thickening not in (PRODUCT, TWISTED):
            v.append("surface spine must declare a thickening")
        return SpineAnalysis(v, vertex_models, pass_sites, slot_table)

    if spine.thickening is not None:
        v.append("thickening is only meaningful for surface spines")
    for f in spine.faces.values():
        if not f.is_disc:
            v.append(f"face {f.id}: closed-surface face in a singular spine")

    # slot occupancy and facing bijections
    for e in spine.edges.values():
        if e.kind == INTERVAL:
            for endidx, end in enumerate(e.ends):
                if end.vertex not in slot_table:
                    v.append(f"edge {e.id}: unknown vertex {end.vertex}")
                    continue
                if end.slot in slot_table[end.vertex]:
                    v.append(f"vertex {end.vertex}: slot {end.slot} occupied twice")
                if not 0 <= end.slot <= 3:
                    v.append(f"edge {e.id}: slot {end.slot} out of range")
                    continue
                slot_table[end.vertex][end.slot] = (e.id, endidx)
        else:
            rot, flip = e.monodromy
            if not (0 <= rot <= 2 and flip in (0, 1)):
                v.append(f"edge {e.id}: bad monodromy {e.monodromy}")
    for u, slots in slot_table.items():
        if sorted(slots) != [0, 1, 2, 3]:
            v.append(f"vertex {u}: expected germ slots 0..3 occupied once each, got {sorted(slots)}")
    if v:
        return SpineAnalysis(v, vertex_models, pass_sites, slot_table)

    for e in spine.edges.values():
        if e.kind == INTERVAL:
            for endidx, end in enumerate(e.ends):
                other = [s for s in range(4) if s != end.slot]
                if sorted(end.facing.keys()) != sorted(e.wings) or \
                        sorted(end.facing.values()) != other:
                    v.append(f"edge {e.id} end {endidx}: facing must biject wings onto "
                             f"the other three slots of vertex {end.vertex}")
    if v:
        return SpineAnalysis(v, vertex_models, pass_sites, slot_table)

    # wing coverage by circuits
    owner: dict[str, tuple[str, int]] = {}
    for f in spine.faces.values():
        for i, p in enumerate(f.circuit):
            if p.edge not in spine.edges:
                v.append(f"face {f.id}: unknown edge {p.edge}")
                continue
            e = spine.edges[p.edge]
            if p.wing not in e.wings:
                v.append(f"face {f.id}: wing {p.wing} does not belong to edge {p.edge}")
                continue
            if p.wing in owner:
                v.append(f"wing {p.wing} traversed twice")
            owner[p.wing] = (f.id, i)
    for e in spine.edges.values():
        for w in e.wings:
            if w not in owner:
                v.append(f"wing {w} of edge {e.id} is not traversed by any face circuit")
    if v:
        return SpineAnalysis(v, vertex_models, pass_sites, slot_table)

    # vertex local models
    for u in spine.vertices:
        model, errs = _build_vertex_model(spine, u, slot_table[u])
        v.extend(errs)
        if model is not None:
            vertex_models[u] = model
    if v:
        return SpineAnalysis(v, vertex_models, pass_sites, slot_table)

    # circuit transitions (corners / monodromy), corner usage
    corner_used: dict[tuple[str, frozenset[int]], int] = {}
    for f in spine.faces.values():
        kinds = {spine.edges[p.edge].kind for p in f.circuit}
        if len(kinds) > 1:
            v.append(f"face {f.id}: circuit mixes circle and interval edges")
            continue
        if kinds == {CIRCLE}:
            v.extend(_check_circle_circuit(spine, f))
        else:
            v.extend(_check_vertex_circuit(spine, f, slot_table, corner_used))
    for u in spine.vertices:
        pairs = [frozenset(c) for c in itertools.combinations(range(4), 2)]
        for c in pairs:
            n = corner_used.get((u, c), 0)
            if n != 1:
                v.append(f"vertex {u}: corner {sorted(c)} used {n} times (expected 1)")
    if v:
        return SpineAnalysis(v, vertex_models, pass_sites, slot_table)

    # face side derivation and two-sidedness
    for f in spine.faces.values():
        sites, err = _derive_sides(spine, f, slot_table, vertex_models)
        if err:
            v.append(err)
        else:
            pass_sites.update(sites)

    if not v and spine.flow is not None:
        v.extend(validate_flow(spine, spine.flow, pass_sites))

    return SpineAnalysis(v, vertex_models, pass_sites, slot_table)


# -- vertex model -----------------------------------------------------


def _germ_view(spine: Spine, edge: Edge, endidx: int) -> tuple[str, str, str]:
    """Wing cyclic order as seen from the vertex looking outward."""
    return edge.wings if endidx == 0 else tuple(reversed(edge.wings))


def _build_vertex_model(spine, u, slots):
    # germ rotations as cyclic sequences of faced slots, up to one free
    # reversal each (the edges' normal orientations are independent data)
    base_rot: dict[int, tuple[int, int, int]] = {}
    dart_wing: dict[tuple[int, int], str] = {}
    for s, (eid, endidx) in slots.items():
        e = spine.edges[eid]
        end = e.ends[endidx]
        view = _germ_view(spine, e, endidx)
        base_rot[s] = tuple(end.facing[w] for w in view)
        for w in e.wings:
            dart_wing[(s, end.facing[w])] = w

    darts = [(s, t) for s in range(4) for t in range(4) if s != t]

    def trace_faces(rot: dict[int, tuple[int, int, int]]) -> list[list[tuple[int, int]]]:
        nxt = {}
        for s, seq in rot.items():
            for i, t in enumerate(seq):
                nxt[(s, t)] = (s, seq[(i + 1) % 3])
        faces, seen = [], set()
        for d in darts:
            if d in seen:
                continue
            cyc, cur = [], d
            while cur not in seen:
                seen.add(cur)
                cyc.append(cur)
                s, t = cur
                cur = nxt[(t, s)]
            faces.append(cyc)
        return faces

    solutions = []
    for flips in itertools.product((False, True), repeat=3):
        rot = {0: base_rot[0]}
        for s, fl in zip((1, 2, 3), flips):
            rot[s] = tuple(reversed(base_rot[s])) if fl else base_rot[s]
        cycles = trace_faces(rot)
        if len(cycles) == 4:
            solutions.append(cycles)
    if not solutions:
        return None, [f"vertex {u}: germ rotations admit no spherical completion"]
    if len(solutions) > 1:
        # K4 is 3-connected, so with one germ's view pinned the spherical
        # completion is unique; duplicates mean degenerate input data
        return None, [f"vertex {u}: ambiguous spherical completion"]

    regions: list[set[tuple[int, frozenset[str]]]] = []
    for cyc in solutions[0]:
        sect = set()
        for i, (s, t) in enumerate(cyc):
            t2 = cyc[(i + 1) % len(cyc)][1]
            # the face turns at vertex t between darts (t, s) and (t, t2)
            sect.add((t, frozenset((dart_wing[(t, s)], dart_wing[(t, t2)]))))
        regions.append(sect)
    sector_region = {}
    for idx, sect in enumerate(regions):
        for key in sect:
            if key in sector_region:
                return None, [f"vertex {u}: sector {key} on two regions"]
            sector_region[key] = idx
    if len(sector_region) != 12:
        return None, [f"vertex {u}: region structure does not cover all sectors"]

    model = VertexModel(slots=dict(slots), dart_wing=dart_wing,
                        sector_region=sector_region, regions=regions)
    return model, []


# -- circuits ----------------------------------------------------------


def _arrival_end(p: Pass) -> int:
    return 1 if p.direction > 0 else 0


def _departure_end(p: Pass) -> int:
    return 0 if p.direction > 0 else 1


def _check_vertex_circuit(spine, f, slot_table, corner_used):
    errs = []
    n = len(f.circuit)
    for i, p in enumerate(f.circuit):
        q = f.circuit[(i + 1) % n]
        ep, eq = spine.edges[p.edge], spine.edges[q.edge]
        endp = ep.ends[_arrival_end(p)]
        endq = eq.ends[_departure_end(q)]
        if endp.vertex != endq.vertex:
            errs.append(f"face {f.id}: passes {i}->{(i + 1) % n} do not meet at one vertex")
            continue
        u = endp.vertex
        sp, sq = endp.slot, endq.slot
        if endp.facing[p.wing] != sq or endq.facing[q.wing] != sp:
            errs.append(f"face {f.id}: corner between passes {i} and {(i + 1) % n} at "
                        f"vertex {u} violates the facing bijections")
            continue
        key = (u, frozenset((sp, sq)))
        corner_used[key] = corner_used.get(key, 0) + 1
    return errs


def _check_circle_circuit(spine, f):
    errs = []
    eids = {p.edge for p in f.circuit}
    dirs = {p.direction for p in f.circuit}
    if len(eids) > 1 or len(dirs) > 1:
        return [f"face {f.id}: a circle circuit must follow one edge in one direction"]
    e = spine.edges[next(iter(eids))]
    mu = e.monodromy_map()
    step = mu if f.circuit[0].direction > 0 else {b: a for a, b in mu.items()}
    n = len(f.circuit)
    for i, p in enumerate(f.circuit):
        q = f.circuit[(i + 1) % n]
        if step[p.wing] != q.wing:
            errs.append(f"face {f.id}: circle circuit breaks the monodromy at pass {i}")
            return errs
    # the circuit must be exactly one wing orbit
    orbit = {p.wing for p in f.circuit}
    if len(orbit) != n:
        errs.append(f"face {f.id}: circle circuit repeats a wing")
    return errs


# -- side derivation ---------------------------------------------------


def _travel_next(e: Edge, direction: int, wing: str) -> str:
    order = e.wings if direction > 0 else tuple(reversed(e.wings))
    i = order.index(wing)
    return order[(i + 1) % 3]


def _derive_sides(spine, f, slot_table, vertex_models):
    n = len(f.circuit)
    e0 = spine.edges[f.circuit[0].edge]
    fronts: list[frozenset[str]] = []
    front = frozenset((f.circuit[0].wing,
                       _travel_next(e0, f.circuit[0].direction, f.circuit[0].wing)))
    circle = e0.kind == CIRCLE

    for i in range(n + 1):
        p = f.circuit[i % n]
        if i < n:
            fronts.append(front)
        if i == n:
            if front != fronts[0]:
                return {}, (f"face {f.id}: side transport around the circuit is "
                            f"orientation-reversing (not a disc)")
            break
        q = f.circuit[(i + 1) % n]
        if circle:
            e = spine.edges[p.edge]
            mu = e.monodromy_map()
            step = mu if p.direction > 0 else {b: a for a, b in mu.items()}
            front = frozenset(step[w] for w in front)
        else:
            ep = spine.edges[p.edge]
            endp = ep.ends[_arrival_end(p)]
            u = endp.vertex
            model = vertex_models[u]
            sq = spine.edges[q.edge].ends[_departure_end(q)].slot
            front = model.corner_transport(endp.slot, sq, front)

    sites = {}
    for i, p in enumerate(f.circuit):
        e = spine.edges[p.edge]
        others = [w for w in e.wings if w != p.wing]
        back = (frozenset((p.wing, others[0]))
                if fronts[i] == frozenset((p.wing, others[1]))
                else frozenset((p.wing, others[1])))
        sites[p.wing] = PassSite(face=f.id, index=i, direction=p.direction,
                                 front=fronts[i], back=back)
    return sites, None


# -- flow structures ---------------------------------------------------


def _edge_coorientation_targets(spine, e, pass_sites, coorient):
    """Sector each of the three incident faces co-orients into at edge e."""
    targets = {}
    for w in e.wings:
        site = pass_sites[w]
        sign = coorient[site.face]
        targets[w] = site.front if sign > 0 else site.back
    return targets


def branch_roles_at_edge(e: Edge, targets: dict[str, frozenset[str]]):
    """Derive (free, under, over) from co-orientation targets, or None.

    The branched local model: the under wing points into the sector it
    shares with the over wing, while both the over and the free wing point
    into the sector they share.  The remaining 2 of the 8 patterns are the
    two pinwheels, which admit no smooth two-sheeted stack.
    """
    for free, under, over in itertools.permutations(e.wings):
        ok = (targets[under] == frozenset((under, over))
              and targets[over] == frozenset((over, free))
              and targets[free] == frozenset((free, over)))
        if ok:
            return free, under, over
    return None


def validate_flow(spine: Spine, flow: FlowStructure, pass_sites) -> list[str]:
    errs = []
    if set(flow.coorient) != set(spine.faces):
        return ["flow: co-orientation must be defined on every face"]
    if set(flow.branch) != set(spine.edges):
        return ["flow: branch roles must be defined on every edge"]
    for e in spine.edges.values():
        targets = _edge_coorientation_targets(spine, e, pass_sites, flow.coorient)
        derived = branch_roles_at_edge(e, targets)
        if derived is None:
            errs.append(f"flow: edge {e.id} co-orientations do not match along a "
                        f"branched model")
        elif tuple(flow.branch[e.id]) != derived:
            errs.append(f"flow: edge {e.id} roles {flow.branch[e.id]} disagree with "
                        f"the co-orientations (derived {derived})")
        if e.kind == CIRCLE:
            mu = e.monodromy_map()
            f_, u_, o_ = flow.branch[e.id]
            if (mu[f_], mu[u_], mu[o_]) != (f_, u_, o_):
                errs.append(f"flow: circle edge {e.id} monodromy does not preserve "
                            f"the branching roles")
    return errs


def enumerate_flow_structures(spine: Spine) -> list[FlowStructure]:
    """All flow structures, in a deterministic order.

    Iterates over the co-orientation assignments (the branch roles are
    determined at every edge when a branched completion exists at all).
    """
    spine.analysis()
    face_ids = sorted(spine.faces)
    out = []
    for signs in itertools.product((1, -1), repeat=len(face_ids)):
        coorient = dict(zip(face_ids, signs))
        branch = {}
        ok = True
        for e in sorted(spine.edges.values(), key=lambda e: e.id):
            targets = _edge_coorientation_targets(spine, e, spine.analysis().pass_sites,
                                                  coorient)
            roles = branch_roles_at_edge(e, targets)
            if roles is None:
                ok = False
                break
            branch[e.id] = roles
        if not ok:
            continue
        cand = FlowStructure(branch=branch, coorient=coorient)
        if not validate_flow(spine, cand, spine.analysis().pass_sites):
            out.append(cand)
    return out


# -- orientation transport ---------------------------------------------


@dataclass(frozen=True)
class CrossStep:
    """Cross one edge from wing ``w_from`` into wing ``w_to``."""
    w_from: str
    w_to: str


@dataclass(frozen=True)
class TwistStep:
    """Traverse an orientation-reversing segment inside a surface face."""
    count: int = 1


def cross_edge_transport(spine: Spine, w_from: str, w_to: str,
                         side_is_front: bool) -> tuple[bool, int]:
    """Transport across an edge: returns (side_is_front', tangent_sign).

    The side (a sector adjacent to w_from) maps to itself if it is the
    sector {w_from, w_to} and to {w_to, w3} if it is {w_from, w3}.  The
    tangent orientation of the bent sheet flips exactly when the two passes
    traverse the edge in the same direction.
    """
    e = spine.wing_owner(w_from)
    if spine.wing_owner(w_to) is not e or w_from == w_to:
        raise SpineError(f"wings {w_from},{w_to} do not span an edge crossing")
    site_from = spine.pass_site(w_from)
    site_to = spine.pass_site(w_to)
    w3 = e.other_wing(w_from, w_to)
    sector = site_from.front if side_is_front else site_from.back
    if sector == frozenset((w_from, w_to)):
        new_sector = sector
    else:
        new_sector = frozenset((w_to, w3))
    if new_sector == site_to.front:
        new_front = True
    elif new_sector == site_to.back:
        new_front = False
    else:
        raise SpineError("sector transport produced a non-adjacent sector")
    tangent = -1 if site_from.direction == site_to.direction else 1
    return new_front, tangent


def orientation_transport(spine: Spine, steps) -> int:
    """Sign of the ambient-orientation transport along a path on the spine.

    The path alternates travel inside faces with edge crossings; a step is a
    :class:`CrossStep` (only on singular spines) or a :class:`TwistStep`
    (only on surface spines).  Returns +1 if a local orientation of the
    ambient manifold returns to itself, -1 otherwise.  Multiplicative under
    concatenation, +1 on the empty path.
    """
    sign = 1
    side_front = True
    prev_face = None
    for step in steps:
        if isinstance(step, TwistStep):
            if not spine.is_surface_spine:
                raise SpineError("twist steps only make sense on surface spines")
            if spine.thickening == PRODUCT:
                sign *= (-1) ** step.count
            # twisted thickening is the orientation I-bundle: ambient
            # orientation transport is trivial there
            continue
        site_from = spine.pass_site(step.w_from)
        if prev_face is not None and site_from.face != prev_face:
            raise SpineError("disconnected transport path")
        new_front, tsign = cross_edge_transport(spine, step.w_from, step.w_to,
                                                side_front)
        flip_side = (new_front != side_front)
        if flip_side != (tsign < 0):
            sign = -sign
        side_front = new_front
        prev_face = spine.pass_site(step.w_to).face
    return sign
