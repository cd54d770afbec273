"""Canonical forms and isomorphism of diagrams on a fixed spine.

Isotopy on the spine is modelled as decorated-structure isomorphism fixing
the spine strata pointwise, with these gauge freedoms quotiented out:

* relabelling of nodes and arcs;
* port renumbering at nodes (crossings rotate with the over bit flipping on
  odd rotations; 2-valent nodes swap freely, half-twist signs surviving the
  swap because two of the three frame components flip together);
* cyclic rotation of the edge-point order on circle edges;
* on boundaryless (surface) faces, re-rooting of the floating-component
  containment tree.

``canonical_key`` minimizes a full structural signature over the gauge
choices; ``is_isomorphic`` is an independent backtracking check used as the
test oracle for the key.
"""

from __future__ import annotations

import itertools
from hashlib import sha256

from .diagram import (CROSSING, EDGEPOINT, HALFTWIST, MARKER, Diagram,
                      Placement)
from .spine import CIRCLE


# -- helpers --------------------------------------------------------------


def rotate_edge_order(d: Diagram, eid: str, shift: int) -> Diagram:
    order = d.edge_order[eid]
    k = len(order)
    new_order = dict(d.edge_order)
    new_order[eid] = tuple(order[(i + shift) % k] for i in range(k))
    return Diagram(spine=d.spine, name=d.name, nodes=d.nodes.values(),
                   arcs=d.arcs.values(), edge_order=new_order, labels=d.labels,
                   placements=d.placements)


def _circle_rotations(d: Diagram):
    """All rank-rotation variants of the diagram (identity when no circles)."""
    circles = [eid for eid in sorted(d.edge_order)
               if d.spine.edges[eid].kind == CIRCLE and d.edge_order[eid]]
    if not circles:
        yield d
        return
    ranges = [range(len(d.edge_order[eid])) for eid in circles]
    for shifts in itertools.product(*ranges):
        cur = d
        for eid, s in zip(circles, shifts):
            if s:
                cur = rotate_edge_order(cur, eid, s)
        yield cur


def _node_static_class(d: Diagram, nid: str):
    n = d.nodes[nid]
    if n.kind == EDGEPOINT:
        return (EDGEPOINT, n.edge, tuple(sorted(n.wings)))
    if n.kind == CROSSING:
        return (CROSSING, n.face)
    if n.kind == HALFTWIST:
        return (HALFTWIST, n.face, n.sign)
    return (MARKER, n.face)


# -- canonical signature ----------------------------------------------------


def _anchored_signature(d: Diagram):
    """Deterministic signature of all anchored content; no gauge left."""
    spine = d.spine
    pm = d.port_map()
    node_idx: dict[str, int] = {}
    node_portmap: dict[str, tuple[int, ...]] = {}   # stored port -> canon port
    arc_idx: dict[str, int] = {}
    events = []

    def assign_node(nid, entry_port):
        """Number a node and fix its canonical port numbering."""
        n = d.nodes[nid]
        idx = len(node_idx)
        node_idx[nid] = idx
        if n.kind == CROSSING:
            rot = tuple((p - entry_port) % 4 for p in range(4))
            over = n.over if entry_port % 2 == 0 else not n.over
            node_portmap[nid] = rot
            events.append(("x", idx, over))
        elif n.kind == EDGEPOINT:
            node_portmap[nid] = (0, 1)
            events.append(("p", idx, n.edge, n.wings))
        else:
            if entry_port == 0:
                node_portmap[nid] = (0, 1)
            else:
                node_portmap[nid] = (1, 0)
            if n.kind == HALFTWIST:
                events.append(("h", idx, n.sign))
            else:
                events.append(("o", idx))
        return idx

    # seeds: edge-points in stratum order
    queue = []
    for eid in sorted(d.edge_order):
        for nid in d.edge_order[eid]:
            if nid not in node_idx:
                assign_node(nid, 0)
            queue.append(nid)
    arcsig = []
    head = 0
    while head < len(queue):
        nid = queue[head]
        head += 1
        n = d.nodes[nid]
        canon_ports = node_portmap[nid]
        # visit ports in canonical order
        stored_of_canon = sorted(range(n.nports), key=lambda p: canon_ports[p])
        for stored_port in stored_of_canon:
            aid, endidx = pm[(nid, stored_port)]
            if aid in arc_idx:
                continue
            arc_idx[aid] = len(arc_idx)
            a = d.arcs[aid]
            onid, oport = a.ends[1 - endidx]
            if onid not in node_idx:
                assign_node(onid, oport)
                queue.append(onid)
            arcsig.append((arc_idx[aid], a.face, a.twist,
                           node_idx[nid], node_portmap[nid][stored_port],
                           node_idx[onid], node_portmap[onid][oport]))
    edge_orders = tuple(
        (eid, tuple((node_idx[nid],) for nid in d.edge_order[eid]))
        for eid in sorted(d.edge_order))
    return (tuple(events), tuple(sorted(arcsig)), edge_orders), node_idx, arc_idx


def _float_signature(d: Diagram, comp_nodes: set[str], root_dart=None):
    """Canonical signature of one floating component's map.

    Minimizes a rooted traversal over all (node, port) roots unless a
    specific root dart is supplied; returns (signature, node_idx, portmaps).
    """
    pm = d.port_map()
    candidates = ([root_dart] if root_dart is not None else
                  [(nid, p) for nid in sorted(comp_nodes)
                   for p in range(d.nodes[nid].nports)])
    best = None
    for (rnid, rport) in candidates:
        node_idx: dict[str, int] = {}
        node_portmap: dict[str, tuple[int, ...]] = {}
        arc_idx: dict[str, int] = {}
        events, arcsig = [], []

        def assign(nid, entry_port):
            n = d.nodes[nid]
            idx = len(node_idx)
            node_idx[nid] = idx
            if n.kind == CROSSING:
                rot = tuple((p - entry_port) % 4 for p in range(4))
                over = n.over if entry_port % 2 == 0 else not n.over
                node_portmap[nid] = rot
                events.append(("x", idx, over))
            else:
                node_portmap[nid] = (0, 1) if entry_port == 0 else (1, 0)
                if n.kind == HALFTWIST:
                    events.append(("h", idx, n.sign))
                else:
                    events.append(("o", idx))
            return idx

        assign(rnid, rport)
        queue = [rnid]
        head = 0
        while head < len(queue):
            nid = queue[head]
            head += 1
            n = d.nodes[nid]
            canon_ports = node_portmap[nid]
            stored_of_canon = sorted(range(n.nports), key=lambda p: canon_ports[p])
            for stored_port in stored_of_canon:
                aid, endidx = pm[(nid, stored_port)]
                if aid in arc_idx:
                    continue
                arc_idx[aid] = len(arc_idx)
                a = d.arcs[aid]
                onid, oport = a.ends[1 - endidx]
                if onid not in node_idx:
                    assign(onid, oport)
                    queue.append(onid)
                arcsig.append((arc_idx[aid], a.twist,
                               node_idx[nid], node_portmap[nid][stored_port],
                               node_idx[onid], node_portmap[onid][oport]))
        sig = (tuple(events), tuple(sorted(arcsig)))
        if best is None or sig < best[0]:
            best = (sig, dict(node_idx), dict(node_portmap), dict(arc_idx))
    return best


def _canonical_regions(d: Diagram, cmap, node_idx, node_portmap, arc_idx):
    """Region list of a ComponentMap reindexed by canonical dart order."""
    def dart_key(state):
        dart, side = state
        if dart[0] == "a":
            return (0, arc_idx.get(dart[1], -1), dart[2], side)
        return (1, dart[1], dart[2], side)

    keyed = []
    for i, orbit in enumerate(cmap.regions):
        keyed.append((min(dart_key(s) for s in orbit), i))
    keyed.sort()
    canon_of_region = {orig: canon for canon, (_, orig) in enumerate(keyed)}
    return canon_of_region


def _face_signature(d: Diagram, fa, anch_nodes, anch_arcs):
    """Signature of a face's float forest (anchored part covered globally)."""
    float_sigs = {}
    float_idx = {}
    float_portmaps = {}
    float_arcidx = {}
    for root in fa.float_roots:
        sig, nidx, pmap, aidx = _float_signature(d, fa.float_nodes[root])
        float_sigs[root] = sig
        float_idx[root] = nidx
        float_portmaps[root] = pmap
        float_arcidx[root] = aidx

    canon_region = {}
    for root in fa.float_roots:
        canon_region[root] = _canonical_regions(
            d, fa.float_maps[root], float_idx[root], float_portmaps[root],
            float_arcidx[root])
    if fa.anchored is not None:
        canon_region["b"] = _canonical_regions(
            d, fa.anchored, anch_nodes, None, anch_arcs)
    elif d.spine.faces[fa.face].is_disc:
        canon_region["b"] = {0: 0}

    # resolved placements: root -> (parent owner, parent region, own region)
    resolved = {root: (po, pi, oi)
                for root, ((po, pi), (_r, oi)) in fa.placement_region.items()}

    children: dict[str, list[str]] = {p: [] for p in ["b"] + fa.float_roots}
    for root, (po, pi, oi) in resolved.items():
        children[po].append(root)

    def subtree(root) -> tuple:
        po, pi, oi = resolved[root]
        kids = tuple(sorted(
            (canon_region[root][resolved[k][1]], subtree(k))
            for k in children[root]))
        return (float_sigs[root], canon_region[root][oi], kids)

    if d.spine.faces[fa.face].is_disc:
        entries = []
        for k in children["b"]:
            po, pi, oi = resolved[k]
            ridx = canon_region["b"][pi] if fa.anchored is not None else 0
            entries.append((ridx, subtree(k)))
        return ("disc", tuple(sorted(entries)))

    # surface face: minimize over the choice of base container
    if not fa.float_roots:
        return ("surface", ())
    best = None
    for newbase in fa.float_roots:
        tree = _rerooted_tree(fa, resolved, newbase)
        sig = _surface_tree_signature(tree, newbase, float_sigs, canon_region)
        if best is None or sig < best:
            best = sig
    return ("surface", best)


def _rerooted_tree(fa, resolved, newbase):
    """parent/placement structure after re-rooting the float forest."""
    parent: dict[str, tuple[str, int, int]] = dict(resolved)
    chain = []
    cur = newbase
    while cur != fa.base_root:
        p, pr, oo = parent[cur]
        chain.append((cur, p, pr, oo))
        cur = p
    for (c, p, pr, oo) in chain:
        del parent[c]
        parent[p] = (c, oo, pr)
    return parent


def _surface_tree_signature(parent, base, float_sigs, canon_region):
    children: dict[str, list[str]] = {}
    for c, (p, pr, oo) in parent.items():
        children.setdefault(p, []).append(c)

    def subtree(root):
        kids = []
        for k in children.get(root, []):
            p, pr, oo = parent[k]
            kids.append((canon_region[root][pr],
                         canon_region[k][oo], subtree(k)))
        return (float_sigs[root], tuple(sorted(kids)))

    return subtree(base)


def canonical_key(d: Diagram):
    """Hashable key equal for exactly the isomorphic diagrams."""
    best = None
    for cand in _circle_rotations(d):
        ana = cand.analysis()
        anch_sig, node_idx, arc_idx = _anchored_signature(cand)
        face_sigs = []
        for fid in sorted(cand.spine.faces):
            fa = ana.faces[fid]
            face_sigs.append((fid, _face_signature(cand, fa, node_idx, arc_idx)))
        # component labels, identified by canonical content
        comp_sig = []
        if cand.labels:
            comps = cand.components()
            for idx in sorted(cand.labels):
                comp = comps[idx]
                anchor = min((arc_idx[a] for a in comp if a in arc_idx),
                             default=None)
                if anchor is None:
                    nodes = {nid for a in comp
                             for (nid, _) in cand.arcs[a].ends}
                    fid = cand.arcs[comp[0]].face
                    anchor = ("f", fid, _float_signature(cand, nodes)[0])
                comp_sig.append((anchor, cand.labels[idx]))
        key = (anch_sig, tuple(face_sigs), tuple(sorted(comp_sig, key=repr)))
        if best is None or repr(key) < repr(best):
            best = key
    return repr(best)


def key_digest(d: Diagram) -> str:
    return sha256(canonical_key(d).encode()).hexdigest()[:16]


# -- independent isomorphism check ------------------------------------------


def is_isomorphic(d1: Diagram, d2: Diagram) -> bool:
    """Backtracking isomorphism test, independent of canonical_key."""
    if d1.spine is not d2.spine and d1.spine.name != d2.spine.name:
        raise ValueError("diagrams live on different spines")
    if len(d1.nodes) != len(d2.nodes) or len(d1.arcs) != len(d2.arcs):
        return False
    if sorted(d1.edge_order) != sorted(d2.edge_order):
        return False
    for eid in d1.edge_order:
        if len(d1.edge_order[eid]) != len(d2.edge_order[eid]):
            return False
    circles = [eid for eid in sorted(d1.edge_order)
               if d1.spine.edges[eid].kind == CIRCLE and d1.edge_order[eid]]
    ranges = [range(len(d1.edge_order[eid])) for eid in circles]
    for shifts in itertools.product(*ranges) if circles else [()]:
        cand = d2
        for eid, s in zip(circles, shifts):
            if s:
                cand = rotate_edge_order(cand, eid, s)
        if _iso_fixed_rotation(d1, cand):
            return True
    return False


def _iso_fixed_rotation(d1: Diagram, d2: Diagram) -> bool:
    # forced: edge-points correspond by (edge, rank)
    mapping: dict[str, tuple[str, int]] = {}   # d1 node -> (d2 node, port shift)
    for eid in d1.edge_order:
        for nid1, nid2 in zip(d1.edge_order[eid], d2.edge_order[eid]):
            n1, n2 = d1.nodes[nid1], d2.nodes[nid2]
            if n1.wings == n2.wings:
                mapping[nid1] = (nid2, 0)
            elif n1.wings == (n2.wings[1], n2.wings[0]):
                mapping[nid1] = (nid2, 1)
            else:
                return False
    pm1, pm2 = d1.port_map(), d2.port_map()

    def port_image(nid1, port1):
        nid2, shift = mapping[nid1]
        n1 = d1.nodes[nid1]
        if n1.kind == CROSSING:
            return nid2, (port1 + shift) % 4
        return nid2, port1 ^ shift

    def compatible(nid1, nid2, shift):
        n1, n2 = d1.nodes[nid1], d2.nodes[nid2]
        if n1.kind != n2.kind or n1.face != n2.face:
            return False
        if n1.kind == CROSSING:
            over2 = n1.over if shift % 2 == 0 else not n1.over
            return n2.over == over2
        if n1.kind == HALFTWIST:
            return n1.sign == n2.sign
        return True

    # seed arcs from edge-point ports, then propagate; floats need guesses
    arc_map: dict[str, str] = {}
    used2: set[str] = {m[0] for m in mapping.values()}
    used_arcs2: set[str] = set()

    def propagate(frontier) -> bool:
        while frontier:
            nid1 = frontier.pop()
            n1 = d1.nodes[nid1]
            for p1 in range(n1.nports):
                aid1, end1 = pm1[(nid1, p1)]
                nid2, p2 = port_image(nid1, p1)
                aid2, end2 = pm2[(nid2, p2)]
                a1, a2 = d1.arcs[aid1], d2.arcs[aid2]
                if aid1 in arc_map:
                    if arc_map[aid1] != aid2:
                        return False
                    continue
                if aid2 in used_arcs2 or a1.face != a2.face or a1.twist != a2.twist:
                    return False
                arc_map[aid1] = aid2
                used_arcs2.add(aid2)
                onid1, oport1 = a1.ends[1 - end1]
                onid2, oport2 = a2.ends[1 - end2]
                if onid1 in mapping:
                    if port_image(onid1, oport1) != (onid2, oport2):
                        return False
                    continue
                if onid2 in used2:
                    return False
                o1, o2 = d1.nodes[onid1], d2.nodes[onid2]
                if o1.kind == CROSSING:
                    shift = (oport2 - oport1) % 4
                else:
                    shift = oport1 ^ oport2
                if not compatible(onid1, onid2, shift):
                    return False
                mapping[onid1] = (onid2, shift)
                used2.add(onid2)
                frontier.append(onid1)
        return True

    if not propagate([nid for nid in mapping.keys()]):
        return False

    # floats: try all candidate images component by component
    def float_components(d, taken):
        comps = []
        seen = set(taken)
        for nid in sorted(d.nodes):
            if nid in seen:
                continue
            comp, stack = set(), [nid]
            while stack:
                x = stack.pop()
                if x in comp:
                    continue
                comp.add(x)
                for p in range(d.nodes[x].nports):
                    aid, endidx = d.port_map()[(x, p)]
                    comp.add(d.arcs[aid].ends[1 - endidx][0])
            seen |= comp
            comps.append(sorted(comp))
        return comps

    comps1 = float_components(d1, mapping.keys())
    comps2 = float_components(d2, used2)
    if len(comps1) != len(comps2):
        return False

    def match_floats(i) -> bool:
        if i == len(comps1):
            return _placements_match(d1, d2, mapping)
        c1 = comps1[i]
        root1 = c1[0]
        n1 = d1.nodes[root1]
        for c2 in comps2:
            if c2[0] in used2:
                continue
            for root2 in c2:
                n2 = d2.nodes[root2]
                if n1.kind != n2.kind:
                    continue
                shifts = range(4) if n1.kind == CROSSING else range(2)
                for shift in shifts:
                    if not compatible(root1, root2, shift):
                        continue
                    saved = (dict(mapping), set(used2), dict(arc_map),
                             set(used_arcs2))
                    mapping[root1] = (root2, shift)
                    used2.add(root2)
                    if propagate([root1]) and match_floats(i + 1):
                        return True
                    mapping.clear()
                    mapping.update(saved[0])
                    used2.clear()
                    used2.update(saved[1])
                    arc_map.clear()
                    arc_map.update(saved[2])
                    used_arcs2.clear()
                    used_arcs2.update(saved[3])
        return False

    return match_floats(0)


def _placements_match(d1: Diagram, d2: Diagram, mapping) -> bool:
    """Compare float placements through the node mapping.

    Region indices are deterministic per diagram but not stable under
    relabelling, so regions are compared through dart images.
    """
    ana1, ana2 = d1.analysis(), d2.analysis()
    nmap = {k: v[0] for k, v in mapping.items()}
    for fid in sorted(d1.spine.faces):
        fa1, fa2 = ana1.faces[fid], ana2.faces[fid]
        if len(fa1.float_roots) != len(fa2.float_roots):
            return False
        # assembled-region correspondence: two dart states correspond if the
        # underlying arcs do; require the partition to match
        arcmap = _arc_map_from_nodes(d1, d2, mapping)
        for fa, fb, dmap in ((fa1, fa2, arcmap),):
            part1 = _region_partition(d1, fa)
            part2 = _region_partition(d2, fb)
            translated = set()
            for cls in part1:
                t = frozenset((dmap[a], s, e) for (a, s, e) in cls if a in dmap)
                translated.add(t)
            if translated != set(part2):
                return False
    return True


def _arc_map_from_nodes(d1, d2, mapping):
    out = {}
    pm1, pm2 = d1.port_map(), d2.port_map()
    for nid1, (nid2, shift) in mapping.items():
        n1 = d1.nodes[nid1]
        for p1 in range(n1.nports):
            aid1, _ = pm1[(nid1, p1)]
            if n1.kind == CROSSING:
                p2 = (p1 + shift) % 4
            else:
                p2 = p1 ^ shift
            aid2, _ = pm2[(nid2, p2)]
            out[aid1] = aid2
    return out


def _region_partition(d: Diagram, fa):
    """Assembled regions as frozensets of (arc, endidx, side) states."""
    out = {}
    if fa.anchored is not None:
        for i, orbit in enumerate(fa.anchored.regions):
            if i == fa.anchored.outer:
                continue
            key = fa.assembled_of[("b", i)]
            for (dart, side) in orbit:
                if dart[0] == "a":
                    out.setdefault(key, set()).add((dart[1], dart[2], side))
    for root in fa.float_roots:
        cmap = fa.float_maps[root]
        for i, orbit in enumerate(cmap.regions):
            key = fa.assembled_of[(root, i)]
            for (dart, side) in orbit:
                if dart[0] == "a":
                    out.setdefault(key, set()).add((dart[1], dart[2], side))
    return [frozenset(v) for v in out.values()]
