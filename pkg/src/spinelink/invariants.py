"""Quantities preserved (or predictably changed) by the move calculi.

Everything here is a pure function of (spine, diagram, component index).
Homology is taken with Z/2 coefficients throughout; the diagram class of a
component is computed in a refined chain complex whose extra 0-cells are the
edge-points, then expressed in the basis of the plain spine complex.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import CROSSING, EDGEPOINT, HALFTWIST, Diagram
from .homology import gf2_nullspace, gf2_solve
from .spine import CIRCLE, CrossStep, Spine, TwistStep, orientation_transport


# -- transport along components ------------------------------------------


def component_walk(d: Diagram, idx: int):
    """(arc, entered end) pairs around the component loop."""
    return list(d.walk_component(idx))


def component_transport_steps(spine: Spine, d: Diagram, idx: int):
    steps = []
    for (aid, entered) in component_walk(d, idx):
        a = d.arcs[aid]
        if a.twist:
            steps.append(TwistStep())
        nid, port = a.ends[1 - entered]
        n = d.nodes[nid]
        if n.kind == EDGEPOINT:
            steps.append(CrossStep(n.wings[port], n.wings[1 - port]))
    return steps


def uk_type(spine: Spine, d: Diagram, idx: int) -> str:
    """'klein' iff the component's neighbourhood is a solid Klein bottle."""
    steps = component_transport_steps(spine, d, idx)
    return "klein" if orientation_transport(spine, steps) == -1 else "torus"


# -- Z/2 homology of the spine --------------------------------------------


@dataclass(frozen=True)
class H1Basis:
    dimension: int
    cell_index: dict            # 1-cell name -> bit position
    basis: tuple[int, ...]      # cycle masks
    relations: tuple[int, ...]  # boundary masks of the 2-cells


def _refined_cells(spine: Spine, d: Diagram | None):
    """Refined 1-skeleton: spine edges subdivided at the diagram edge-points.

    Returns (segment list, segment endpoints) where vertices are spine
    vertices, circle-edge base points, or edge-point node ids.
    """
    segments = []
    ends = {}
    for eid in sorted(spine.edges):
        e = spine.edges[eid]
        pts = list(d.edge_order.get(eid, ())) if d is not None else []
        if e.kind == CIRCLE:
            stops = [f"@{eid}"] + pts
            k = len(stops)
            for i in range(k):
                seg = (eid, i)
                segments.append(seg)
                ends[seg] = (stops[i], stops[(i + 1) % k])
        else:
            stops = [e.ends[0].vertex] + pts + [e.ends[1].vertex]
            for i in range(len(stops) - 1):
                seg = (eid, i)
                segments.append(seg)
                ends[seg] = (stops[i], stops[i + 1])
    return segments, ends


def _face_boundary_segments(spine: Spine, d: Diagram | None, fid: str):
    """The face boundary as a cyclic list of (segment, direction, pass wing).

    The wing tag distinguishes the two occurrences of an edge-point on one
    face boundary when both its strands lie in the same face.
    """
    f = spine.faces[fid]
    out = []
    for p in f.circuit:
        e = spine.edges[p.edge]
        npts = len(d.edge_order.get(p.edge, ())) if d is not None else 0
        nsegs = npts + (0 if e.kind == CIRCLE else 1)
        idxs = range(nsegs) if p.direction > 0 else reversed(range(nsegs))
        for i in idxs:
            out.append(((p.edge, i), p.direction, p.wing))
    return out


def h1_z2(spine: Spine, d: Diagram | None = None) -> H1Basis:
    """Z/2 H1 of the spine, in the (diagram-)refined CW structure."""
    spine.analysis()
    if spine.is_surface_spine:
        f = spine.surface_face
        k = 2 * f.genus if f.orientable else f.genus
        # standard polygon relation vanishes mod 2 in both cases
        return H1Basis(dimension=k, cell_index={i: i for i in range(k)},
                       basis=tuple(1 << i for i in range(k)), relations=())
    segments, ends = _refined_cells(spine, d)
    seg_index = {s: i for i, s in enumerate(segments)}
    verts = sorted({v for pair in ends.values() for v in pair})
    vIndex = {v: i for i, v in enumerate(verts)}
    d1_rows = [0] * len(verts)
    for s, (a, b) in ends.items():
        if a != b:
            d1_rows[vIndex[a]] ^= 1 << seg_index[s]
            d1_rows[vIndex[b]] ^= 1 << seg_index[s]
    relations = []
    for fid in sorted(spine.faces):
        mask = 0
        for (seg, _dir, _w) in _face_boundary_segments(spine, d, fid):
            mask ^= 1 << seg_index[seg]
        relations.append(mask)
    cycles = gf2_nullspace(d1_rows, len(segments))
    # quotient by the relations: find cycles independent modulo im d2
    basis = []
    span: list[int] = list(relations)
    for c in cycles:
        if gf2_solve(span, c) is None:
            basis.append(c)
            span.append(c)
    return H1Basis(dimension=len(basis), cell_index=seg_index,
                   basis=tuple(basis), relations=tuple(relations))


def h1_dimension(spine: Spine) -> int:
    return h1_z2(spine).dimension


def z2_class(spine: Spine, d: Diagram, idx: int,
             reverse_routing: bool = False) -> tuple[int, ...]:
    """Class of the component in H1(spine; Z/2), in the h1_z2 basis.

    Each face traversal between consecutive edge-points is homotoped to a
    path along the face boundary; ``reverse_routing`` picks the complementary
    boundary path, which differs by the face relation and must give the same
    class (checked in tests).
    """
    spine.analysis()
    if spine.is_surface_spine:
        f = spine.surface_face
        if f.genus == 0:
            return ()
        raise ValueError("component classes on higher-genus surface spines "
                         "are not determined by the map data")
    # basis of the spine's own complex expressed in the refined one
    plain = h1_z2(spine, None)
    refined_segments, _ = _refined_cells(spine, d)
    seg_index = {s: i for i, s in enumerate(refined_segments)}

    def refine_mask(mask_plain: int) -> int:
        out = 0
        for eid in sorted(spine.edges):
            i = plain.cell_index[(eid, 0)]
            if mask_plain >> i & 1:
                for seg in refined_segments:
                    if seg[0] == eid:
                        out ^= 1 << seg_index[seg]
        return out

    basis_refined = [refine_mask(b) for b in plain.basis]

    refined = h1_z2(spine, d)
    chain = 0
    walk = component_walk(d, idx)
    eps = [i for i, (aid, entered) in enumerate(walk)
           if d.nodes[d.arcs[aid].ends[1 - entered][0]].kind == EDGEPOINT]
    if not eps:
        return tuple(0 for _ in plain.basis)
    # boundary cycles per face, as position lookup tables
    bcycles: dict[str, list] = {}
    for fid in sorted(spine.faces):
        bcycles[fid] = _face_boundary_segments(spine, d, fid)

    _, ends_tab = _refined_cells(spine, d)

    def boundary_path(fid, nid_from, wing_from, nid_to, wing_to):
        """Boundary segments from one edge-point occurrence to another.

        Occurrences are matched by pass wing: when both strands of an
        edge-point lie in the same face, routing to the wrong occurrence
        would shift the class by an essential loop.
        """
        cyc = bcycles[fid]
        pos_from = pos_to = None
        m = len(cyc)
        for i in range(m):
            seg, dirn, w = cyc[i]
            a, b = ends_tab[seg]
            tail = a if dirn > 0 else b
            if tail == nid_from and w == wing_from:
                pos_from = i
            if tail == nid_to and w == wing_to:
                pos_to = i
        if pos_from is None or pos_to is None:
            raise ValueError(f"edge-point occurrence not on the boundary of {fid}")
        mask = 0
        if not reverse_routing:
            i = pos_from
            while i != pos_to:
                mask ^= 1 << seg_index[cyc[i][0]]
                i = (i + 1) % m
        else:
            i = pos_from
            while i != pos_to:
                i = (i - 1) % m
                mask ^= 1 << seg_index[cyc[i][0]]
        return mask

    nsteps = len(eps)
    for k in range(nsteps):
        i1 = eps[k]
        i2 = eps[(k + 1) % nsteps]
        aid1, ent1 = walk[i1]
        nid1, port1 = d.arcs[aid1].ends[1 - ent1]
        # the next stretch of the walk lies in the face on the far side
        n1 = d.nodes[nid1]
        wing1 = n1.wings[1 - port1]
        far_face = spine.pass_site(wing1).face
        aid2, ent2 = walk[i2]
        nid2, port2 = d.arcs[aid2].ends[1 - ent2]
        wing2 = d.nodes[nid2].wings[port2]
        chain ^= boundary_path(far_face, nid1, wing1, nid2, wing2)

    # the chain must be a cycle; express it in the plain basis
    sol = gf2_solve(list(refined.relations) + basis_refined, chain)
    if sol is None:
        raise ValueError("component chain is not a boundary-plus-basis "
                         "combination; routing bug")
    shift = len(refined.relations)
    return tuple((sol >> (shift + i)) & 1 for i in range(len(basis_refined)))


# -- crossing parity -------------------------------------------------------


def crossing_parity_matrix(d: Diagram) -> tuple[tuple[int, ...], ...]:
    comps = d.components()
    ncomp = len(comps)
    node_comp = {}
    pm = d.port_map()
    counts = [[0] * ncomp for _ in range(ncomp)]
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        if n.kind != CROSSING:
            continue
        ca = d.component_of_arc(pm[(nid, 0)][0])
        cb = d.component_of_arc(pm[(nid, 1)][0])
        counts[ca][cb] += 1
        if ca != cb:
            counts[cb][ca] += 1
    return tuple(tuple(x % 2 for x in row) for row in counts)


def off_diagonal_parity(d: Diagram) -> tuple[tuple[int, ...], ...]:
    m = crossing_parity_matrix(d)
    return tuple(tuple(v if i != j else 0 for j, v in enumerate(row))
                 for i, row in enumerate(m))


# -- writhe and twist bookkeeping on oriented surface spines ----------------


def _component_orientations(d: Diagram):
    """Crossing direction bits from a deterministic traversal."""
    dirs: dict[tuple[str, str], bool] = {}    # (crossing, strand 'A'|'B') -> forward
    for idx in range(len(d.components())):
        for (aid, entered) in d.walk_component(idx):
            nid, port = d.arcs[aid].ends[1 - entered]
            n = d.nodes[nid]
            if n.kind == CROSSING:
                strand = "A" if port in (0, 2) else "B"
                # forward means the strand is traversed entering at the
                # smaller port of its pair
                dirs[(nid, strand)] = port in (0, 1)
    return dirs


def crossing_sign(d: Diagram, nid: str, dirs=None) -> int:
    if dirs is None:
        dirs = _component_orientations(d)
    n = d.nodes[nid]
    axis_a = 2 if dirs[(nid, "A")] else 0
    axis_b = 3 if dirs[(nid, "B")] else 1
    sign = 1 if (axis_b - axis_a) % 4 == 1 else -1
    return sign if n.over else -sign


def _require_oriented_surface(spine: Spine):
    if not spine.is_surface_spine:
        raise ValueError("writhe needs a surface spine (empty singular set)")
    if not spine.surface_face.orientable:
        raise ValueError("writhe needs an orientable surface face")


def writhe(spine: Spine, d: Diagram, component: int | None = None) -> int:
    """Sum of crossing signs; restricted to self-crossings of one component
    when ``component`` is given.  Self-writhe per component does not depend
    on the traversal orientation."""
    _require_oriented_surface(spine)
    dirs = _component_orientations(d)
    total = 0
    pm = d.port_map()
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        if n.kind != CROSSING:
            continue
        if component is not None:
            ca = d.component_of_arc(pm[(nid, 0)][0])
            cb = d.component_of_arc(pm[(nid, 1)][0])
            if not (ca == component and cb == component):
                continue
        total += crossing_sign(d, nid, dirs)
    return total


def halftwist_count(d: Diagram, component: int) -> int:
    node_comp = d.analysis().node_component
    return sum(1 for nid, n in d.nodes.items()
               if n.kind == HALFTWIST and node_comp[nid] == component)


def algebraic_half_twist(spine: Spine, d: Diagram, component: int) -> int:
    """Sum of half-twist signs transported along the component.

    Signs at different points are compared through the ambient-orientation
    transport, so the value does not depend on the traversal direction.
    Only defined for torus-type components.
    """
    if uk_type(spine, d, component) == "klein":
        raise ValueError("algebraic half-twist count needs a torus-type "
                         "component")
    total = 0
    carry = 1
    for (aid, entered) in d.walk_component(component):
        a = d.arcs[aid]
        if a.twist and spine.is_surface_spine and spine.thickening == "product":
            carry = -carry
        nid, port = a.ends[1 - entered]
        n = d.nodes[nid]
        if n.kind == HALFTWIST:
            total += n.sign * carry
        elif n.kind == EDGEPOINT:
            step = CrossStep(n.wings[port], n.wings[1 - port])
            carry *= orientation_transport(spine, [step])
    return total


def twist_number(spine: Spine, d: Diagram, component: int):
    """(writhe + algebraic half-twists / 2, half-twist count parity)."""
    _require_oriented_surface(spine)
    w = writhe(spine, d, component)
    a = algebraic_half_twist(spine, d, component)
    parity = halftwist_count(d, component) % 2
    return (w + a / 2.0, parity)
