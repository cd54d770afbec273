"""Decorated curve arrangements on a fixed spine.

A diagram is a graph of nodes (crossings, edge-points, half-twist points and
markers) joined by arcs, each arc lying in one face.  Per-face embedding data
consists of node rotations (implicit in the port numbering), the shared order
of edge-points along each spine edge, and a placement record for every
*floating* component (a connected component touching no spine edge).

Port conventions:

* crossing: ports 0..3 counterclockwise w.r.t. the face's reference
  orientation (circuit-on-left); strand A joins ports 0-2, strand B ports
  1-3; ``over`` means strand A is in front when the face is seen from its
  front side.
* edge-point: port 0 ends on the face of ``wings[0]``, port 1 on the face of
  ``wings[1]``; the strand crosses the edge through the sector spanned by
  its two wings.
* half-twist: 2 ports; the stored sign is normalized against the frame
  (port0->port1 direction, its left side, the face's front side).
* marker: 2-valent carrier so crossing-free circles have a node.

Floating components carry a placement ``(parent, parent_region, own_outer)``:
the component lies inside region ``parent_region`` of its parent container
("b" is the anchored part of the face) and faces it with its own region
``own_outer``.  Region indices refer to the container's own region list.

Region tracing uses the rotation-previous rule: with counterclockwise
rotations, the region to the left of a dart is traced by taking, at the
dart's head, the rotation-predecessor of the reversed dart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .spine import Spine

CROSSING = "crossing"
EDGEPOINT = "edgepoint"
HALFTWIST = "halftwist"
MARKER = "marker"

MODES = ("link", "band", "flow", "flowband", "framed")


class DiagramError(Exception):
    """Structural problem that prevents building the diagram at all."""


@dataclass(frozen=True)
class Node:
    id: str
    kind: str
    face: str | None = None
    over: bool | None = None                 # crossings
    edge: str | None = None                  # edge-points
    wings: tuple[str, str] | None = None     # edge-points
    sign: int | None = None                  # half-twists

    @property
    def nports(self) -> int:
        return 4 if self.kind == CROSSING else 2


@dataclass(frozen=True)
class Arc:
    id: str
    ends: tuple[tuple[str, int], tuple[str, int]]
    face: str
    twist: int = 0


@dataclass(frozen=True)
class RegionAddr:
    """A region named by an adjacent arc side: dart (arc, endidx), side L/R.

    Dart (a, e) leaves end e of arc a; side +1 is its left.  Addresses stay
    meaningful under rewrites that do not touch the named arc.
    """
    arc: str
    endidx: int
    side: int

    def state(self):
        return (("a", self.arc, self.endidx), self.side)


@dataclass(frozen=True)
class Placement:
    """Where a floating component sits.

    ``parent_addr`` names a region of some other container (None means the
    bare face, legal only when the face has no other content to speak of);
    ``own_outer`` names the float's own region that faces the parent.
    """
    parent_addr: RegionAddr | None
    own_outer: RegionAddr


class Diagram:
    """Immutable-by-convention diagram; derived structures cached lazily."""

    def __init__(self, spine: Spine, name: str, nodes: Iterable[Node],
                 arcs: Iterable[Arc], edge_order: dict[str, tuple[str, ...]],
                 labels: dict[int, str] | None = None,
                 placements: dict[str, Placement] | None = None):
        self.spine = spine
        self.name = name
        self.nodes: dict[str, Node] = {n.id: n for n in nodes}
        self.arcs: dict[str, Arc] = {a.id: a for a in arcs}
        self.edge_order: dict[str, tuple[str, ...]] = {
            e: tuple(v) for e, v in edge_order.items() if v}
        self.labels: dict[int, str] = dict(labels or {})
        self.placements: dict[str, Placement] = dict(placements or {})
        self._analysis = None
        self._components = None

    # -- conveniences ----------------------------------------------------

    def node_face_at_port(self, nid: str, port: int) -> str:
        n = self.nodes[nid]
        if n.kind == EDGEPOINT:
            return self.spine.pass_site(n.wings[port]).face
        return n.face

    def port_map(self) -> dict[tuple[str, int], tuple[str, int]]:
        try:
            return self.__port_map
        except AttributeError:
            pm = {}
            for a in self.arcs.values():
                for endidx, (nid, port) in enumerate(a.ends):
                    key = (nid, port)
                    if key in pm:
                        raise DiagramError(f"port {key} used twice")
                    pm[key] = (a.id, endidx)
            self.__port_map = pm
            return pm

    def arc_at(self, nid: str, port: int) -> tuple[str, int]:
        return self.port_map()[(nid, port)]

    def rank(self, nid: str) -> int:
        n = self.nodes[nid]
        return self.edge_order[n.edge].index(nid)

    def strand_through(self, nid: str, port: int) -> int:
        """Port on the opposite side of the node along the same strand."""
        n = self.nodes[nid]
        return (port + 2) % 4 if n.kind == CROSSING else 1 - port

    # -- structural validation --------------------------------------------

    def structural_errors(self) -> list[str]:
        errs = []
        spine = self.spine
        spine.analysis()
        for n in self.nodes.values():
            if n.kind == EDGEPOINT:
                if n.edge not in spine.edges:
                    errs.append(f"node {n.id}: unknown edge {n.edge}")
                    continue
                e = spine.edges[n.edge]
                if (n.wings is None or len(set(n.wings)) != 2
                        or any(w not in e.wings for w in n.wings)):
                    errs.append(f"node {n.id}: wings must be two distinct wings "
                                f"of edge {n.edge}")
            elif n.kind in (CROSSING, HALFTWIST, MARKER):
                if n.face not in spine.faces:
                    errs.append(f"node {n.id}: unknown face {n.face}")
                if n.kind == CROSSING and n.over is None:
                    errs.append(f"node {n.id}: crossing needs an over-strand bit")
                if n.kind == HALFTWIST and n.sign not in (1, -1):
                    errs.append(f"node {n.id}: half-twist needs a sign")
            else:
                errs.append(f"node {n.id}: unknown kind {n.kind}")
        for eid, order in self.edge_order.items():
            if eid not in spine.edges:
                errs.append(f"edge order for unknown edge {eid}")
                continue
            for nid in order:
                n = self.nodes.get(nid)
                if n is None or n.kind != EDGEPOINT or n.edge != eid:
                    errs.append(f"edge order of {eid} lists non edge-point {nid}")
        listed = {nid for order in self.edge_order.values() for nid in order}
        for n in self.nodes.values():
            if n.kind == EDGEPOINT and n.id not in listed:
                errs.append(f"edge-point {n.id} missing from its edge order")
        if errs:
            return errs
        try:
            pm = self.port_map()
        except DiagramError as exc:
            return [str(exc)]
        for n in self.nodes.values():
            for p in range(n.nports):
                if (n.id, p) not in pm:
                    errs.append(f"port {(n.id, p)} is unused")
        for a in self.arcs.values():
            if a.face not in spine.faces:
                errs.append(f"arc {a.id}: unknown face {a.face}")
                continue
            for (nid, port) in a.ends:
                if nid not in self.nodes:
                    errs.append(f"arc {a.id}: unknown node {nid}")
                    continue
                if port >= self.nodes[nid].nports:
                    errs.append(f"arc {a.id}: port {port} out of range on {nid}")
                    continue
                if self.node_face_at_port(nid, port) != a.face:
                    errs.append(f"arc {a.id}: end {nid}:{port} lies in face "
                                f"{self.node_face_at_port(nid, port)}, "
                                f"not {a.face}")
            f = spine.faces[a.face]
            if a.twist and (f.is_disc or f.orientable):
                errs.append(f"arc {a.id}: twists only on non-orientable "
                            f"surface faces")
        if any(lab not in ("c", "m") for lab in self.labels.values()):
            errs.append("labels must be 'c' or 'm'")
        return errs

    def analysis(self) -> "DiagramAnalysis":
        if self._analysis is None:
            errs = self.structural_errors()
            if errs:
                raise DiagramError(errs[0])
            self._analysis = analyze_diagram(self)
        return self._analysis

    def validate(self, mode: str = "link") -> list[str]:
        errs = self.structural_errors()
        if errs:
            return errs
        ana = analyze_diagram(self)
        if ana.errors:
            return list(ana.errors)
        self._analysis = ana
        return mode_errors(self, mode)

    # -- components --------------------------------------------------------

    def components(self) -> list[tuple[str, ...]]:
        """Partition of arcs into link components, indexed by least arc id."""
        if self._components is not None:
            return self._components
        parent: dict[str, str] = {a: a for a in self.arcs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        pm = self.port_map()
        for n in self.nodes.values():
            pairs = [(0, 2), (1, 3)] if n.kind == CROSSING else [(0, 1)]
            for p, q in pairs:
                ra, rb = find(pm[(n.id, p)][0]), find(pm[(n.id, q)][0])
                if ra != rb:
                    parent[ra] = rb
        groups: dict[str, list[str]] = {}
        for a in sorted(self.arcs):
            groups.setdefault(find(a), []).append(a)
        self._components = sorted((tuple(v) for v in groups.values()),
                                  key=lambda t: t[0])
        return self._components

    def component_of_arc(self, aid: str) -> int:
        for i, comp in enumerate(self.components()):
            if aid in comp:
                return i
        raise KeyError(aid)

    def walk_component(self, idx: int):
        """Strand traversal: yields (arc id, end entered) around the loop."""
        comp = self.components()[idx]
        aid = comp[0]
        start = (aid, 0)
        cur = start
        pm = self.port_map()
        while True:
            yield cur
            aid, entered = cur
            nid, port = self.arcs[aid].ends[1 - entered]
            nxt_port = self.strand_through(nid, port)
            cur = pm[(nid, nxt_port)]
            if cur == start:
                return


# -- per-face arrangements ----------------------------------------------


@dataclass
class ComponentMap:
    """Traced map of one in-face graph component (plus optional boundary)."""
    regions: list[tuple]                 # dart-state tuples per region
    state_region: dict[tuple, int]
    outer: int | None                    # for anchored maps: far-side orbit
    verts: int
    edges: int
    twisted: bool


@dataclass
class FaceArrangement:
    face: str
    boundary_items: list[tuple[str, int]]
    item_pass: list[int]
    anchored_nodes: set[str]
    anchored: ComponentMap | None        # None when face has no boundary
    float_roots: list[str]               # sorted root node ids
    float_nodes: dict[str, set[str]]
    float_maps: dict[str, ComponentMap]
    base_root: str | None                # surface faces: the unplaced float
    assembled_of: dict[tuple, int]       # container atom -> assembled index
    assembled_count: int
    owner_of_arc: dict[str, str]         # in-face arc -> container
    placement_region: dict[str, tuple]   # root -> ((powner, pidx), (root, oidx))

    def container_map(self, owner: str) -> ComponentMap:
        return self.anchored if owner == "b" else self.float_maps[owner]

    def region_of_state(self, state: tuple) -> int:
        """Assembled region of a dart-state anywhere in the face."""
        dart, side = state
        if dart[0] == "a":
            owner = self.owner_of_arc[dart[1]]
        else:
            owner = "b"
        cmap = self.container_map(owner)
        if state in cmap.state_region:
            idx = cmap.state_region[state]
        else:
            idx = cmap.state_region[(dart_rev(dart), -side)]
        return self.assembled_of[(owner, idx)]

    def assembled_states(self, assembled_idx: int) -> set[tuple]:
        """All dart-states lying on the boundary of an assembled region."""
        out = set()
        for (owner, idx), a in self.assembled_of.items():
            if a != assembled_idx:
                continue
            cmap = self.anchored if owner == "b" else self.float_maps.get(owner)
            if cmap is None:
                continue
            if owner == "b" and self.anchored is None:
                continue
            out |= set(cmap.regions[idx])
        return out


@dataclass
class DiagramAnalysis:
    errors: list[str]
    faces: dict[str, FaceArrangement]
    node_component: dict[str, int]


def dart_rev(dart):
    kind = dart[0]
    if kind == "a":
        return ("a", dart[1], 1 - dart[2])
    return ("s", dart[1], -dart[2])


def _boundary_items(diagram: Diagram, face: str):
    spine = diagram.spine
    f = spine.faces[face]
    items, item_pass = [], []
    if not f.is_disc:
        return items, item_pass
    for i, p in enumerate(f.circuit):
        order = diagram.edge_order.get(p.edge, ())
        seq = list(order) if p.direction > 0 else list(reversed(order))
        for nid in seq:
            n = diagram.nodes[nid]
            for port in range(2):
                if n.wings[port] == p.wing:
                    items.append((nid, port))
                    item_pass.append(i)
    return items, item_pass


def _trace_component(diagram: Diagram, nodes: set[str],
                     boundary: list | None) -> ComponentMap:
    """Region-trace one component map, optionally with the face boundary.

    States are (dart, side) pairs; untwisted traversal keeps side +1, and a
    twisted arc flips it.  For twist-free maps the +1 states alone trace the
    regions; with twists each orbit is a ribbon boundary walk.
    """
    pm = diagram.port_map()
    rot: dict[tuple[str, int], list[tuple]] = {}
    heads: dict[tuple, tuple[str, int]] = {}
    arcs_here: set[str] = set()
    twisted = False

    for nid in nodes:
        n = diagram.nodes[nid]
        if n.kind == EDGEPOINT:
            continue            # their in-face ports live on the boundary
        darts = []
        for p in range(n.nports):
            aid, endidx = pm[(nid, p)]
            darts.append(("a", aid, endidx))
            heads[("a", aid, 1 - endidx)] = (nid, p)
            arcs_here.add(aid)
        rot[nid] = darts

    nverts = sum(1 for nid in nodes if diagram.nodes[nid].kind != EDGEPOINT)
    bverts = 0
    if boundary is not None:
        m = len(boundary)
        bverts = m
        for i, (nid, port) in enumerate(boundary):
            aid, endidx = pm[(nid, port)]
            arcs_here.add(aid)
            heads[("a", aid, 1 - endidx)] = ("bnd", i)

    for aid in arcs_here:
        if diagram.arcs[aid].twist:
            twisted = True

    def rot_prev(head, dart):
        if head[0] == "bnd":
            i = head[1]
            m = len(boundary)
            order = [("s", i, 1), _bnd_arc_dart(i), ("s", (i - 1) % m, -1)]
            j = order.index(dart)
            return order[(j - 1) % 3]
        nid, p = head
        darts = rot[nid]
        j = darts.index(dart)
        return darts[(j - 1) % len(darts)]

    def rot_next(head, dart):
        if head[0] == "bnd":
            i = head[1]
            m = len(boundary)
            order = [("s", i, 1), _bnd_arc_dart(i), ("s", (i - 1) % m, -1)]
            j = order.index(dart)
            return order[(j + 1) % 3]
        nid, p = head
        darts = rot[nid]
        j = darts.index(dart)
        return darts[(j + 1) % len(darts)]

    def _bnd_arc_dart(i):
        nid, port = boundary[i]
        aid, endidx = pm[(nid, port)]
        return ("a", aid, endidx)

    def head_of(dart):
        if dart[0] == "s":
            i, sgn = dart[1], dart[2]
            m = len(boundary)
            return ("bnd", (i + 1) % m if sgn > 0 else i)
        return heads[dart]

    def step(state):
        dart, side = state
        if dart[0] == "a" and diagram.arcs[dart[1]].twist:
            side = -side
        head = head_of(dart)
        rd = dart_rev(dart)
        nd = rot_prev(head, rd) if side > 0 else rot_next(head, rd)
        return (nd, side)

    all_states = []
    for nid, darts in rot.items():
        for d in darts:
            all_states.append((d, 1))
            if twisted:
                all_states.append((d, -1))
    if boundary is not None:
        m = len(boundary)
        for i in range(m):
            for sgn in (1, -1):
                all_states.append((("s", i, sgn), 1))
            all_states.append((_bnd_arc_dart(i), 1))
            if twisted:
                all_states.append((_bnd_arc_dart(i), -1))
    # deduplicate while keeping deterministic order
    seenset = set()
    ordered = []
    for st in sorted(all_states):
        if st not in seenset:
            seenset.add(st)
            ordered.append(st)

    regions, state_region = [], {}
    visited = set()
    for st in ordered:
        if st in visited:
            continue
        orbit, cur = [], st
        while cur not in visited:
            visited.add(cur)
            orbit.append(cur)
            cur = step(cur)
        idx = len(regions)
        regions.append(tuple(orbit))
        for x in orbit:
            state_region[x] = idx

    outer = None
    if boundary is not None and len(boundary) > 0:
        outer = state_region[(("s", 0, -1), 1)]
    nedges = len(arcs_here) + (len(boundary) if boundary else 0)
    return ComponentMap(regions=regions, state_region=state_region, outer=outer,
                        verts=nverts + bverts, edges=nedges, twisted=twisted)


def _graph_components_in_face(diagram: Diagram, face: str):
    """Partition the face's content into anchored nodes and float components."""
    nodes = set()
    for n in diagram.nodes.values():
        if n.kind == EDGEPOINT:
            if face in (diagram.node_face_at_port(n.id, 0),
                        diagram.node_face_at_port(n.id, 1)):
                nodes.add(n.id)
        elif n.face == face:
            nodes.add(n.id)
    adj: dict[str, set[str]] = {n: set() for n in nodes}
    for a in diagram.arcs.values():
        if a.face != face:
            continue
        (n1, _), (n2, _) = a.ends
        adj[n1].add(n2)
        adj[n2].add(n1)
    seen = set()
    anchored: set[str] = set()
    floats: list[set[str]] = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp, stack = set(), [start]
        while stack:
            x = stack.pop()
            if x in comp:
                continue
            comp.add(x)
            stack.extend(adj[x] - comp)
        seen |= comp
        if any(diagram.nodes[x].kind == EDGEPOINT for x in comp):
            anchored |= comp
        else:
            floats.append(comp)
    return anchored, floats


def _arrange_face(diagram: Diagram, face: str) -> FaceArrangement | str:
    spine = diagram.spine
    f = spine.faces[face]
    anchored_nodes, float_comps = _graph_components_in_face(diagram, face)
    items, item_pass = _boundary_items(diagram, face)

    anchored_map = None
    if f.is_disc:
        if items:
            anchored_map = _trace_component(diagram, anchored_nodes, items)
            chi = anchored_map.verts - anchored_map.edges + len(anchored_map.regions)
            if chi != 2:
                return (f"face {face}: anchored arrangement is not planar "
                        f"(euler count {chi})")
        elif anchored_nodes:
            return f"face {face}: anchored nodes without boundary attachments"

    float_roots = sorted(min(c) for c in float_comps)
    float_nodes = {min(c): c for c in float_comps}
    float_maps = {}
    for root, comp in float_nodes.items():
        cmap = _trace_component(diagram, comp, None)
        if f.is_disc or f.orientable:
            chi = cmap.verts - cmap.edges + len(cmap.regions)
            if chi != 2:
                return (f"face {face}: component at {root} is not planar "
                        f"(euler count {chi})")
        else:
            b = len(cmap.regions)
            chi_closed = cmap.verts - cmap.edges + b
            eg = 2 - chi_closed
            eg_face = 2 - (2 - f.genus * (2 if f.orientable else 1))
            if eg > eg_face:
                return (f"face {face}: component at {root} needs euler genus "
                        f"{eg} > {eg_face}")
        float_maps[root] = cmap

    # owners: which container each in-face arc belongs to
    owner_of_arc: dict[str, str] = {}
    node_owner: dict[str, str] = {}
    for nid in anchored_nodes:
        node_owner[nid] = "b"
    for root, comp in float_nodes.items():
        for nid in comp:
            node_owner[nid] = root
    for a in diagram.arcs.values():
        if a.face == face:
            owner_of_arc[a.id] = node_owner[a.ends[0][0]]

    def resolve(cmap: ComponentMap, addr: RegionAddr) -> int | None:
        st = addr.state()
        if st in cmap.state_region:
            return cmap.state_region[st]
        alt = (dart_rev(st[0]), -st[1])
        return cmap.state_region.get(alt)

    base_root = None
    if not f.is_disc and float_roots:
        unplaced = [r for r in float_roots if r not in diagram.placements]
        if len(unplaced) != 1:
            return (f"face {face}: a surface face needs exactly one unplaced "
                    f"base component, found {len(unplaced)}")
        base_root = unplaced[0]

    placement_region: dict[str, tuple[tuple, tuple]] = {}
    for root in float_roots:
        if root == base_root:
            continue
        if root not in diagram.placements:
            return f"face {face}: floating component {root} has no placement"
        pl = diagram.placements[root]
        if owner_of_arc.get(pl.own_outer.arc) != root:
            return (f"face {face}: outer address of {root} must name one of "
                    f"its own arcs")
        own_idx = resolve(float_maps[root], pl.own_outer)
        if own_idx is None:
            return f"face {face}: outer address of {root} does not resolve"
        if pl.parent_addr is None:
            if not f.is_disc or anchored_map is not None:
                return (f"face {face}: bare placement of {root} needs a disc "
                        f"face without anchored content")
            placement_region[root] = (("b", 0), (root, own_idx))
            continue
        powner = owner_of_arc.get(pl.parent_addr.arc)
        if powner is None:
            return (f"face {face}: parent address of {root} names no arc of "
                    f"this face")
        if powner == root:
            return f"face {face}: placement of {root} inside itself"
        pmap = anchored_map if powner == "b" else float_maps[powner]
        pidx = resolve(pmap, pl.parent_addr)
        if pidx is None:
            return f"face {face}: parent address of {root} does not resolve"
        if powner == "b" and anchored_map and pidx == anchored_map.outer:
            return f"face {face}: placement of {root} in the far region"
        placement_region[root] = ((powner, pidx), (root, own_idx))
    # forest check through parent owners
    for root in float_roots:
        if root == base_root or root not in placement_region:
            continue
        chain = {root}
        cur = placement_region[root][0][0]
        while cur not in ("b", base_root):
            if cur in chain:
                return f"face {face}: placement cycle at {root}"
            chain.add(cur)
            nxt = placement_region.get(cur)
            if nxt is None:
                break
            cur = nxt[0][0]

    # assembled regions: union the placement interfaces
    atoms = []
    if f.is_disc:
        if anchored_map:
            atoms += [("b", i) for i in range(len(anchored_map.regions))
                      if i != anchored_map.outer]
        else:
            atoms.append(("b", 0))
    for root in float_roots:
        atoms += [(root, i) for i in range(len(float_maps[root].regions))]
    parent_of = {a: a for a in atoms}

    def find(x):
        while parent_of[x] != x:
            parent_of[x] = parent_of[parent_of[x]]
            x = parent_of[x]
        return x

    for root, (a1, a2) in placement_region.items():
        ra, rb = find(a1), find(a2)
        if ra != rb:
            parent_of[ra] = rb
    reps = sorted({find(a) for a in atoms})
    assembled_of = {a: reps.index(find(a)) for a in atoms}

    return FaceArrangement(face=face, boundary_items=items, item_pass=item_pass,
                           anchored_nodes=anchored_nodes, anchored=anchored_map,
                           float_roots=float_roots, float_nodes=float_nodes,
                           float_maps=float_maps, base_root=base_root,
                           assembled_of=assembled_of, assembled_count=len(reps),
                           owner_of_arc=owner_of_arc,
                           placement_region=placement_region)


def analyze_diagram(diagram: Diagram) -> DiagramAnalysis:
    errors: list[str] = []
    faces: dict[str, FaceArrangement] = {}
    placed_roots = set()
    for fid in sorted(diagram.spine.faces):
        result = _arrange_face(diagram, fid)
        if isinstance(result, str):
            errors.append(result)
        else:
            faces[fid] = result
            placed_roots |= set(result.float_roots)
    for root in diagram.placements:
        if root not in placed_roots and not errors:
            errors.append(f"placement for {root}, which is not a floating root")
    node_component = {}
    for i, comp in enumerate(diagram.components()):
        for aid in comp:
            for (nid, _) in diagram.arcs[aid].ends:
                node_component[nid] = i
    return DiagramAnalysis(errors=errors, faces=faces,
                           node_component=node_component)


def mode_errors(diagram: Diagram, mode: str) -> list[str]:
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    errs = []
    spine = diagram.spine
    if mode in ("flow", "flowband", "framed") and spine.flow is None:
        return [f"mode {mode} requires a spine with a flow structure"]
    if mode in ("flow", "flowband", "framed"):
        for n in diagram.nodes.values():
            if n.kind != EDGEPOINT:
                continue
            free = spine.flow.free_wing(n.edge)
            if free not in n.wings:
                errs.append(f"edge-point {n.id}: wing pair must include the "
                            f"free wing of {n.edge}")
    if mode in ("link", "flow", "framed"):
        for n in sorted(diagram.nodes):
            if diagram.nodes[n].kind == HALFTWIST:
                errs.append(f"{mode} diagrams forbid half-twist points ({n})")
        if diagram.labels:
            errs.append(f"{mode} diagrams forbid c/m labels")
    if mode in ("band", "flowband"):
        from .invariants import uk_type
        ncomp = len(diagram.components())
        types = [uk_type(spine, diagram, i) for i in range(ncomp)]
        for idx, lab in sorted(diagram.labels.items()):
            if idx >= ncomp:
                errs.append(f"label on missing component {idx}")
            elif types[idx] != "klein":
                errs.append(f"label on torus-type component {idx}")
        for i, t in enumerate(types):
            if t == "klein" and i not in diagram.labels:
                errs.append(f"klein-type component {i} needs a c/m label")
        node_comp = diagram.analysis().node_component
        for nid in sorted(diagram.nodes):
            n = diagram.nodes[nid]
            if n.kind == HALFTWIST and types[node_comp[nid]] == "klein":
                errs.append(f"half-twist {nid} on a klein-type component")
    return errs
