"""Concrete move kinds: Reidemeister moves inside a face.

Port geometry used throughout: crossing ports sit counterclockwise at
right angles, a strand entering port p leaves at p+2, and the left side of
that passage is the (p+2, p+3) corner.
"""

from __future__ import annotations

import itertools

from .builder import DiagramBuilder
from .diagram import CROSSING, Diagram, RegionAddr
from .moves import (Match, MoveError, MoveKind, _fa, _region_of, _state,
                    face_arc_states, fuse_ends, patch_addresses, register,
                    split_strand, _validated)


@register
class R1(MoveKind):
    """Kink creation/removal.

    Forward variants: bit0 picks the side of the strand that the eye bulges
    into, bit1 the over/under of the new crossing.
    """
    name = "R1"

    def matches(self, d, direction):
        out = []
        if direction == "fwd":
            for aid in sorted(d.arcs):
                if d.arcs[aid].twist:
                    continue
                for variant in range(4):
                    out.append(Match("R1", variant, "fwd", (aid,)))
            return out
        pm = d.port_map()
        for nid in sorted(d.nodes):
            n = d.nodes[nid]
            if n.kind != CROSSING:
                continue
            for q in range(4):
                aid1, _ = pm[(nid, q)]
                aid2, _ = pm[(nid, (q + 1) % 4)]
                if aid1 != aid2:
                    continue
                eye = aid1
                fa = _fa(d, d.arcs[eye].face)
                for side in (1, -1):
                    ridx = fa.region_of_state(_state(eye, 0, side))
                    if len(fa.assembled_states(ridx)) == 1:
                        out.append(Match("R1", q, "bwd", (nid, eye)))
                        break
        return out

    def apply(self, d, m):
        if m.direction == "fwd":
            (aid,) = m.data
            if aid not in d.arcs:
                raise MoveError("stale match")
            side = m.variant & 1
            over = bool(m.variant & 2)
            bld = DiagramBuilder(d)
            a = bld.arcs[aid]
            face = a.face
            x = bld.add_crossing(face, over)
            alias = {}
            if side == 0:
                arcs = split_strand(bld, aid, [(x, 0, 2), (x, 1, 3)], alias)
            else:
                arcs = split_strand(bld, aid, [(x, 0, 2), (x, 3, 1)], alias)
            eye = arcs[1]
            patch_addresses(bld, alias)
            out = _validated(bld, d.name)
            return out, Match("R1", 0, "bwd", (x, eye))
        (nid, eye) = m.data
        if nid not in d.nodes or eye not in d.arcs:
            raise MoveError("stale match")
        n = d.nodes[nid]
        pm = d.port_map()
        eyeports = sorted(p for p in range(4) if pm[(nid, p)][0] == eye)
        if len(eyeports) != 2 or (eyeports[1] - eyeports[0]) % 4 not in (1, 3):
            raise MoveError("stale match: not a curl")
        q = eyeports[0] if (eyeports[0] + 1) % 4 == eyeports[1] else eyeports[1]
        bld = DiagramBuilder(d)
        bld.remove_arc(eye)
        alias, made_loops = {}, []
        merged = fuse_ends(bld, (nid, (q + 2) % 4), (nid, (q + 3) % 4),
                           alias, made_loops)
        bld.remove_node(nid)
        # the eye's outer side was the left of the first passage, which is
        # the left of the merged arc's end-0 dart
        alias[eye] = ("all", RegionAddr(merged, 0, 1))
        patch_addresses(bld, alias)
        out = _validated(bld, d.name)
        over = n.over if (q + 2) % 2 == 0 else not n.over
        inv = Match("R1", 1 | (2 if over else 0), "fwd", (merged,))
        return out, inv


def _curl_sites(d):
    """(crossing, eye arc, q) for every curl: eye spans ports (q, q+1)."""
    pm = d.port_map()
    out = []
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        if n.kind != CROSSING:
            continue
        for q in range(4):
            aid1, _ = pm[(nid, q)]
            aid2, _ = pm[(nid, (q + 1) % 4)]
            if aid1 == aid2:
                out.append((nid, aid1, q))
    return out


@register
class R2(MoveKind):
    """Finger push: two arc sides on a common region gain or lose a bigon.

    Forward data: (state lo, state hi, lo_is_over); states are (arc, endidx,
    side) triples on one assembled region.  Backward data: the two crossings
    plus the bigon arcs.
    """
    name = "R2"

    def matches(self, d, direction):
        out = []
        if direction == "fwd":
            for fid in sorted(d.spine.faces):
                fa = _fa(d, fid)
                by_region: dict[int, list] = {}
                for (aid, endidx, side) in face_arc_states(d, fid):
                    ridx = fa.region_of_state(_state(aid, endidx, side))
                    by_region.setdefault(ridx, []).append((aid, endidx, side))
                for ridx, states in sorted(by_region.items()):
                    for s1, s2 in itertools.combinations(sorted(states), 2):
                        if s1[0] == s2[0] and s1[:2] == s2[:2]:
                            continue
                        for lo_over in (True, False):
                            out.append(Match("R2", 0, "fwd",
                                             (s1, s2, lo_over)))
            return out
        pm = d.port_map()
        seen = set()
        for nid in sorted(d.nodes):
            n = d.nodes[nid]
            if n.kind != CROSSING:
                continue
            for q in range(4):
                a_t, _ = pm[(nid, q)]
                a_m, _ = pm[(nid, (q + 1) % 4)]
                if a_t == a_m:
                    continue          # that is a curl, not a bigon
                t_arc, m_arc = d.arcs[a_t], d.arcs[a_m]
                t_far = [e for e in t_arc.ends if e != (nid, q)]
                m_far = [e for e in m_arc.ends if e != (nid, (q + 1) % 4)]
                if not t_far or not m_far:
                    continue
                (n2, pt2), (n2b, pm2) = t_far[0], m_far[0]
                if n2 != n2b or n2 == nid:
                    continue
                o2 = d.nodes[n2]
                if o2.kind != CROSSING:
                    continue
                if (pt2 - pm2) % 4 not in (1, 3):
                    continue
                # decoration: the same strand over at both crossings
                t_is_a1 = q in (0, 2)
                t_is_a2 = pt2 in (0, 2)
                t_over1 = (n.over == t_is_a1)
                t_over2 = (o2.over == t_is_a2)
                if t_over1 != t_over2:
                    continue
                # bigon emptiness
                fa = _fa(d, t_arc.face)
                for side in (1, -1):
                    ridx = fa.region_of_state(_state(a_t, 0, side))
                    states = fa.assembled_states(ridx)
                    arcset = {st[0][1] for st in states if st[0][0] == "a"}
                    if arcset == {a_t, a_m} and len(states) == 2:
                        key = frozenset((nid, n2))
                        fp = (key, frozenset((a_t, a_m)))
                        if fp not in seen:
                            seen.add(fp)
                            out.append(Match("R2", 0, "bwd",
                                             (min(nid, n2), max(nid, n2),
                                              min(a_t, a_m), max(a_t, a_m))))
        return out

    def apply(self, d, m):
        if m.direction == "fwd":
            return self._apply_fwd(d, m)
        return self._apply_bwd(d, m)

    def _apply_fwd(self, d, m):
        (s1, s2, lo_over) = m.data
        (a1, e1, sd1), (a2, e2, sd2) = tuple(s1), tuple(s2)
        if a1 not in d.arcs or a2 not in d.arcs:
            raise MoveError("stale match")
        fid = d.arcs[a1].face
        fa = _fa(d, fid)
        if (fa.region_of_state(_state(a1, e1, sd1))
                != fa.region_of_state(_state(a2, e2, sd2))):
            raise MoveError("stale match: sides no longer share a region")
        # arc1 (the pusher, carrying s1) crosses arc2 twice; the over bit of
        # both crossings is "strand A over" with arc2 as strand A
        results = []
        self_push = a1 == a2
        for first_end, flip in itertools.product((0, 1), (False, True)):
            bld = DiagramBuilder(d)
            over_a = not lo_over     # arc2 carries strand A at both crossings
            x1 = bld.add_crossing(fid, over_a)
            x2 = bld.add_crossing(fid, over_a)
            alias = {}
            p_in = 1 if not flip else 3
            if self_push:
                # one arc crosses itself: order along the arc is
                # [x_first tip crossing] then [x_second]
                xs = (x1, x2) if first_end == 0 else (x2, x1)
                pieces = [(xs[0], 0, 2), (xs[1], 0, 2),
                          (xs[0], p_in, (p_in + 2) % 4),
                          (xs[1], p_in, (p_in + 2) % 4)]
                try:
                    split_strand(bld, a1, pieces, alias)
                except Exception as exc:
                    continue
            else:
                xa = (x1, x2) if first_end == 0 else (x2, x1)
                split_strand(bld, a2, [(x1, 0, 2), (x2, 0, 2)], alias)
                split_strand(bld, a1, [(xa[0], p_in, (p_in + 2) % 4),
                                       (xa[1], (p_in + 2) % 4, p_in)], alias)
            patch_addresses(bld, alias)
            try:
                out = _validated(bld, d.name)
            except MoveError:
                continue
            # locate the bigon arcs: the middles between x1 and x2
            pm = out.port_map()
            mid_a = pm[(x1, 2)][0]
            tip = next(aid for aid in out.arcs
                       if {out.arcs[aid].ends[0][0],
                           out.arcs[aid].ends[1][0]} == {x1, x2}
                       and aid != mid_a)
            # the bigon between mid_a and tip must be empty for this to be
            # the honest finger push
            fa2 = _fa(out, fid)
            good = False
            for side in (1, -1):
                ridx = fa2.region_of_state(_state(mid_a, 0, side))
                states = fa2.assembled_states(ridx)
                arcset = {st[0][1] for st in states if st[0][0] == "a"}
                if arcset == {mid_a, tip} and len(states) == 2:
                    good = True
            if good:
                inv = Match("R2", 0, "bwd", (min(x1, x2), max(x1, x2),
                                             min(mid_a, tip), max(mid_a, tip)))
                results.append((out, inv))
        if not results:
            raise MoveError("no planar finger push for this match")
        return results[0]

    def _apply_bwd(self, d, m):
        (n1, n2, b1, b2) = m.data
        if n1 not in d.nodes or n2 not in d.nodes \
                or b1 not in d.arcs or b2 not in d.arcs:
            raise MoveError("stale match")
        pm = d.port_map()
        bld = DiagramBuilder(d)
        arc_b1, arc_b2 = d.arcs[b1], d.arcs[b2]
        fid = arc_b1.face

        def port_on(aid, nid):
            a = d.arcs[aid]
            for (nn, pp) in a.ends:
                if nn == nid:
                    return pp
            raise MoveError("stale match: bigon arc detached")

        p11, p12 = port_on(b1, n1), port_on(b1, n2)
        p21, p22 = port_on(b2, n1), port_on(b2, n2)
        alias, made_loops = {}, []
        # record which merged sides absorb the bigon for address patching
        bld.remove_arc(b1)
        bld.remove_arc(b2)
        m1 = fuse_ends(bld, (n1, (p11 + 2) % 4), (n2, (p12 + 2) % 4),
                       alias, made_loops)
        m2 = fuse_ends(bld, (n1, (p21 + 2) % 4), (n2, (p22 + 2) % 4),
                       alias, made_loops)
        bld.remove_node(n1)
        bld.remove_node(n2)
        alias[b1] = ("all", RegionAddr(m1, 0, 1))
        alias[b2] = ("all", RegionAddr(m2, 0, 1))
        patch_addresses(bld, alias)
        # a detached closed loop sits beside the other merged strand
        for (mk, loop) in made_loops:
            if mk in bld.placements or loop not in bld.arcs:
                continue
            other = m2 if loop == m1 else m1
            if other in bld.arcs and other != loop:
                bld.placements[mk] = __import__(
                    "spinelink.diagram", fromlist=["Placement"]).Placement(
                        RegionAddr(other, 0, 1), RegionAddr(loop, 0, 1))
        out = _validated(bld, d.name)
        side1 = _best_state(out, m1)
        side2 = _best_state(out, m2)
        over_lo = _strand_over(d, n1, p11) if min(m1, m2) == m1 else \
            _strand_over(d, n1, p21)
        lo, hi = sorted((side1, side2))
        lo_over = _strand_over(d, n1, p11 if lo[0] == m1 else p21)
        inv = Match("R2", 0, "fwd", (lo, hi, lo_over))
        return out, inv


def _best_state(d, aid):
    return (aid, 0, 1)


def _strand_over(d, nid, port):
    n = d.nodes[nid]
    is_a = port in (0, 2)
    return n.over == is_a


@register
class R3(MoveKind):
    """Triangle slide past a crossing; self-inverse shape.

    Data: the three crossings and three boundary arcs of an empty triangle
    whose over/under relations are acyclic.
    """
    name = "R3"

    def matches(self, d, direction):
        out = []
        pm = d.port_map()
        for fid in sorted(d.spine.faces):
            fa = _fa(d, fid)
            # candidate triangles: assembled regions with exactly three arc
            # states on three distinct crossings
            done = set()
            for ridx in range(fa.assembled_count):
                states = fa.assembled_states(ridx)
                arc_states = sorted(st for st in states if st[0][0] == "a")
                if len(states) != 3 or len(arc_states) != 3:
                    continue
                aids = [st[0][1] for st in arc_states]
                if len(set(aids)) != 3:
                    continue
                nodes = set()
                for aid in aids:
                    for (nn, _) in d.arcs[aid].ends:
                        nodes.add(nn)
                if len(nodes) != 3 or any(d.nodes[x].kind != CROSSING
                                          for x in nodes):
                    continue
                # each pair of triangle arcs shares one crossing at adjacent
                # ports
                orient = {}
                ok = True
                for x in sorted(nodes):
                    ports = []
                    for aid in aids:
                        for (nn, pp) in d.arcs[aid].ends:
                            if nn == x:
                                ports.append(pp)
                    if len(ports) != 2 or (ports[0] - ports[1]) % 4 not in (1, 3):
                        ok = False
                        break
                if not ok:
                    continue
                # acyclic over-relations: strand heights totally ordered
                if not _r3_heights(d, sorted(nodes)):
                    continue
                key = frozenset(aids)
                if key in done:
                    continue
                done.add(key)
                out.append(Match("R3", 0, direction,
                                 (tuple(sorted(nodes)), tuple(sorted(aids)))))
        return out

    def apply(self, d, m):
        (nodes, aids) = m.data
        for x in nodes:
            if x not in d.nodes:
                raise MoveError("stale match")
        for aid in aids:
            if aid not in d.arcs:
                raise MoveError("stale match")
        # slide: every triangle arc is replaced by the opposite connection:
        # at each crossing the two triangle ports move to the antipodes
        bld = DiagramBuilder(d)
        fid = d.arcs[aids[0]].face
        pm = d.port_map()
        alias = {}
        for aid in aids:
            a = d.arcs[aid]
            (u, pu), (v, pv) = a.ends
            bld.remove_arc(aid)
            na = bld.add_arc((u, (pu + 2) % 4), (v, (pv + 2) % 4), a.face)
            alias[aid] = {0: (na, 0), 1: (na, 1)}
        # the former outer connections attach to the freed triangle ports
        remap = {}
        for x in nodes:
            for p in range(4):
                aid, endidx = pm[(x, p)]
                if aid in aids:
                    continue
                remap[(aid, endidx)] = (x, (p + 2) % 4)
        for (aid, endidx), new_end in remap.items():
            bld.reattach(aid, endidx, new_end)
        patch_addresses(bld, alias)
        out = _validated(bld, d.name)
        new_aids = tuple(sorted(alias[aid][0][0] for aid in aids))
        inv = Match("R3", 0, "bwd" if m.direction == "fwd" else "fwd",
                    (nodes, new_aids))
        return out, inv


def _r3_heights(d, nodes):
    """True when the pairwise over-relations of three crossings are acyclic."""
    import itertools as it
    beats = {}
    pm = d.port_map()
    arcs_between = {}
    for x in nodes:
        for y in nodes:
            if x >= y:
                continue
            # strands: which strand of x continues to y along the triangle?
            # compare the over bits of the shared arc's two ends
            shared = None
            for p in range(4):
                aid, endidx = pm[(x, p)]
                other = d.arcs[aid].ends[1 - endidx][0]
                if other == y:
                    shared = (aid, p)
            if shared is None:
                return False
            aid, px = shared
            py = next(pp for (nn, pp) in d.arcs[aid].ends if nn == y)
            x_over = _strand_over(d, x, px)
            y_over = _strand_over(d, y, py)
            beats[(x, y)] = (x_over, y_over)
    # assign heights: the arc between x and y is over at x iff the strand
    # through it at x is above the strand crossing it; consistency means
    # some strand is over at both its crossings, one under at both, and the
    # third mixed -- i.e. not all three arcs alternate
    pattern = [beats[k][0] == beats[k][1] for k in sorted(beats)]
    return any(pattern)
