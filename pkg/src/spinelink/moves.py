"""Move framework: matches, surgeries, and shared plumbing.

Every move kind implements ``matches(diagram, direction)`` returning a
deterministic duplicate-free list and ``apply(diagram, match)`` returning
``(result, inverse_match)``; replaying the inverse restores the canonical
key.  Matching is region-anchored: corridors and emptiness conditions are
read off the assembled region structure of the face arrangements.

Where a surgery has mirror-candidate port arrangements, all candidates are
built and the planar ones kept; candidates describing the same isotopy
class are deduplicated by each move's own logic.

Placement bookkeeping: rewrites patch the region addresses of floating
components through ``alias`` records describing what happened to dead arcs:

* ``{endidx: (arc, endidx)}``  - the arc was split; both ends survive.
* ``("fuse", arc, far_e, new_e, twist)`` - merged into a longer arc; only
  the far end survives, the other end is normalized across the twist.
* ``("all", RegionAddr)``      - every reference is redirected to a fixed
  surviving address (used for arcs whose one side was an emptied pocket).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .builder import DiagramBuilder
from .diagram import (CROSSING, EDGEPOINT, HALFTWIST, MARKER, Diagram,
                      DiagramError, Placement, RegionAddr, analyze_diagram,
                      dart_rev)
from .spine import CIRCLE


class MoveError(Exception):
    """Stale or inapplicable match."""


@dataclass(frozen=True)
class Match:
    kind: str
    variant: int
    direction: str          # "fwd" | "bwd"
    data: tuple

    def fingerprint(self):
        return (self.kind, self.variant, self.direction) + tuple(self.data)


def _state(aid, endidx, side):
    return (("a", aid, endidx), side)


def _fa(d: Diagram, fid: str):
    return d.analysis().faces[fid]


def _region_of(d, fid, aid, endidx, side):
    return _fa(d, fid).region_of_state(_state(aid, endidx, side))


def face_arc_states(d, fid):
    """(arc, endidx, side) triples with distinct regions, sorted."""
    fa = _fa(d, fid)
    out = []
    for aid in sorted(fa.owner_of_arc):
        twisted = d.arcs[aid].twist
        for endidx in (0, 1):
            for side in (1, -1):
                if side == -1 and not twisted:
                    continue
                out.append((aid, endidx, side))
    return out


def _validated(bld: DiagramBuilder, name=None) -> Diagram:
    bld.normalize_placements()
    d = bld.build(name)
    errs = d.structural_errors()
    if errs:
        raise MoveError(f"surgery broke the diagram: {errs[0]}")
    ana = analyze_diagram(d)
    if ana.errors:
        raise MoveError(f"surgery left a non-planar face: {ana.errors[0]}")
    return d


def patch_addresses(bld: DiagramBuilder, alias: dict):
    for root, pl in list(bld.placements.items()):
        changed = False
        parts = []
        for addr in (pl.parent_addr, pl.own_outer):
            for _ in range(len(alias) + 1):
                if addr is None or addr.arc not in alias:
                    break
                spec = alias[addr.arc]
                if isinstance(spec, dict):
                    na, ne = spec[addr.endidx]
                    addr = RegionAddr(na, ne, addr.side)
                elif spec[0] == "fuse":
                    _t, new, far_e, new_e, twist = spec
                    side = addr.side
                    if addr.endidx != far_e:
                        side = side if twist else -side
                    addr = RegionAddr(new, new_e, side)
                else:
                    addr = spec[1]
                changed = True
            parts.append(addr)
        if changed:
            bld.placements[root] = Placement(parts[0], parts[1])


def fuse_ends(bld: DiagramBuilder, end1, end2, alias, made_loops):
    """Fuse the arcs attached at two ports of dying nodes into one arc.

    Returns the merged arc (or marker loop) id.  The merged arc's end 0 sits
    at ``end1``'s far side.
    """
    (a1, e1) = bld.end_at(*end1)
    (a2, e2) = bld.end_at(*end2)
    arc1, arc2 = bld.arcs[a1], bld.arcs[a2]
    face = arc1.face
    if arc2.face != face:
        raise MoveError("fuse joins different faces")
    if a1 == a2:
        m = bld.add_marker(face)
        bld.remove_arc(a1)
        loop = bld.add_arc((m, 0), (m, 1), face, arc1.twist)
        alias[a1] = {0: (loop, 0), 1: (loop, 1)}
        made_loops.append((m, loop))
        return loop
    far1 = arc1.ends[1 - e1]
    far2 = arc2.ends[1 - e2]
    bld.remove_arc(a1)
    bld.remove_arc(a2)
    new = bld.add_arc(far1, far2, face, arc1.twist ^ arc2.twist)
    alias[a1] = ("fuse", new, 1 - e1, 0, arc1.twist)
    alias[a2] = ("fuse", new, 1 - e2, 1, arc2.twist)
    return new


def split_strand(bld: DiagramBuilder, aid: str, pieces, alias):
    """Split one arc into a chain through new nodes.

    ``pieces``: (node, in_port, out_port) along the arc from end 0; returns
    the new arc ids.  Any twist stays on the last piece.
    """
    a = bld.arcs[aid]
    face, twist = a.face, a.twist
    bld.remove_arc(aid)
    ends = [a.ends[0]]
    for (nid, pin, pout) in pieces:
        ends.append((nid, pin))
        ends.append((nid, pout))
    ends.append(a.ends[1])
    out = []
    for i in range(0, len(ends), 2):
        tw = twist if i == len(ends) - 2 else 0
        out.append(bld.add_arc(ends[i], ends[i + 1], face, tw))
    alias[aid] = {0: (out[0], 0), 1: (out[-1], 1)}
    return out


def through_ports(n, port):
    """The strand-partner port."""
    return (port + 2) % 4 if n.kind == CROSSING else 1 - port


# -- registry ----------------------------------------------------------------


REGISTRY: dict[str, "MoveKind"] = {}


def register(cls):
    inst = cls()
    REGISTRY[inst.name] = inst
    return cls


class MoveKind:
    name: str = ""

    def matches(self, d: Diagram, direction: str) -> list:
        raise NotImplementedError

    def apply(self, d: Diagram, m: Match):
        raise NotImplementedError


def find_matches(d: Diagram, kind: str, direction: str) -> list:
    mk = REGISTRY[kind]
    out = mk.matches(d, direction)
    seen = set()
    uniq = []
    for m in out:
        fp = m.fingerprint()
        if fp not in seen:
            seen.add(fp)
            uniq.append(m)
    return sorted(uniq, key=lambda m: repr(m.fingerprint()))


def apply_move(d: Diagram, m: Match):
    mk = REGISTRY[m.kind]
    return mk.apply(d, m)
