"""Mutable construction kit for diagrams; rewrites copy-build-freeze."""

from __future__ import annotations

from .diagram import (CROSSING, EDGEPOINT, HALFTWIST, MARKER, Arc, Diagram,
                      DiagramError, Node, Placement, RegionAddr)
from .spine import Spine


class DiagramBuilder:
    def __init__(self, base: Diagram | None = None, spine: Spine | None = None,
                 name: str = "d"):
        if base is not None:
            self.spine = base.spine
            self.name = base.name
            self.nodes = dict(base.nodes)
            self.arcs = dict(base.arcs)
            self.edge_order = {e: list(v) for e, v in base.edge_order.items()}
            self.labels = dict(base.labels)
            self.placements = dict(base.placements)
        else:
            self.spine = spine
            self.name = name
            self.nodes = {}
            self.arcs = {}
            self.edge_order = {}
            self.labels = {}
            self.placements = {}
        self._counter = 0

    # -- ids ---------------------------------------------------------------

    def _fresh(self, prefix: str) -> str:
        while True:
            self._counter += 1
            cand = f"{prefix}{self._counter}"
            if cand not in self.nodes and cand not in self.arcs:
                return cand

    # -- nodes ---------------------------------------------------------------

    def add_crossing(self, face: str, over: bool, nid: str | None = None) -> str:
        nid = nid or self._fresh("x")
        self.nodes[nid] = Node(id=nid, kind=CROSSING, face=face, over=over)
        return nid

    def add_edgepoint(self, edge: str, wings: tuple[str, str], position: int,
                      nid: str | None = None) -> str:
        """Insert an edge-point at ``position`` in the edge order."""
        nid = nid or self._fresh("p")
        self.nodes[nid] = Node(id=nid, kind=EDGEPOINT, edge=edge,
                               wings=tuple(wings))
        order = self.edge_order.setdefault(edge, [])
        order.insert(position, nid)
        return nid

    def add_halftwist(self, face: str, sign: int, nid: str | None = None) -> str:
        nid = nid or self._fresh("h")
        self.nodes[nid] = Node(id=nid, kind=HALFTWIST, face=face, sign=sign)
        return nid

    def add_marker(self, face: str, nid: str | None = None) -> str:
        nid = nid or self._fresh("o")
        self.nodes[nid] = Node(id=nid, kind=MARKER, face=face)
        return nid

    def remove_node(self, nid: str):
        n = self.nodes.pop(nid)
        if n.kind == EDGEPOINT and n.edge in self.edge_order:
            self.edge_order[n.edge] = [x for x in self.edge_order[n.edge]
                                       if x != nid]
            if not self.edge_order[n.edge]:
                del self.edge_order[n.edge]
        self.placements.pop(nid, None)

    # -- arcs ----------------------------------------------------------------

    def add_arc(self, end1: tuple[str, int], end2: tuple[str, int], face: str,
                twist: int = 0, aid: str | None = None) -> str:
        aid = aid or self._fresh("a")
        self.arcs[aid] = Arc(id=aid, ends=(tuple(end1), tuple(end2)),
                             face=face, twist=twist)
        return aid

    def remove_arc(self, aid: str):
        del self.arcs[aid]

    def end_at(self, nid: str, port: int) -> tuple[str, int]:
        for aid, a in self.arcs.items():
            for i, e in enumerate(a.ends):
                if e == (nid, port):
                    return (aid, i)
        raise DiagramError(f"no arc at {(nid, port)}")

    def reattach(self, aid: str, endidx: int, new_end: tuple[str, int]):
        a = self.arcs[aid]
        ends = list(a.ends)
        ends[endidx] = tuple(new_end)
        self.arcs[aid] = Arc(id=aid, ends=tuple(ends), face=a.face, twist=a.twist)

    def set_face(self, aid: str, face: str):
        a = self.arcs[aid]
        self.arcs[aid] = Arc(id=aid, ends=a.ends, face=face, twist=a.twist)

    def split_arc(self, aid: str, nid: str, port_in: int, port_out: int):
        """Replace an arc by two arcs running through a 2-valent node.

        The original arc's end 0 connects to ``port_in``; returns the two new
        arc ids (end0 side, end1 side).
        """
        a = self.arcs.pop(aid)
        a1 = self.add_arc(a.ends[0], (nid, port_in), a.face, a.twist)
        a2 = self.add_arc((nid, port_out), a.ends[1], a.face, 0)
        return a1, a2

    def join_through(self, nid: str) -> str:
        """Remove a 2-valent node, fusing its two arcs into one."""
        n = self.nodes[nid]
        (a1, e1) = self.end_at(nid, 0)
        (a2, e2) = self.end_at(nid, 1)
        arc1, arc2 = self.arcs[a1], self.arcs[a2]
        if a1 == a2:
            raise DiagramError(f"cannot fuse the closed loop at {nid}")
        if arc1.face != arc2.face:
            raise DiagramError(f"arcs at {nid} lie in different faces")
        far1 = arc1.ends[1 - e1]
        far2 = arc2.ends[1 - e2]
        twist = arc1.twist ^ arc2.twist
        self.remove_arc(a1)
        self.remove_arc(a2)
        self.remove_node(nid)
        return self.add_arc(far1, far2, arc1.face, twist)

    # -- misc ------------------------------------------------------------

    def place(self, root: str, parent_addr: RegionAddr | None,
              own_outer: RegionAddr):
        self.placements[root] = Placement(parent_addr, own_outer)

    def normalize_placements(self):
        """Re-key placement entries by component roots; drop stale entries.

        A placement belongs to the floating component owning its own-outer
        arc.  Entries whose component became anchored, or whose parent
        address landed inside their own component, are dropped.  When two
        entries survive for one component the lexicographically least is
        kept.
        """
        d = self.build()
        comp_of_node = {}
        comps = d.components()
        for i, comp in enumerate(comps):
            for aid in comp:
                for (nid, _) in d.arcs[aid].ends:
                    comp_of_node[nid] = i
        comp_of_arc = {aid: i for i, comp in enumerate(comps) for aid in comp}
        anchored_comps = {comp_of_node[n.id] for n in d.nodes.values()
                          if n.kind == EDGEPOINT}
        entries: dict[int, list[Placement]] = {}
        for pl in self.placements.values():
            ci = comp_of_arc.get(pl.own_outer.arc)
            if ci is None or ci in anchored_comps:
                continue
            if pl.parent_addr is not None:
                pi = comp_of_arc.get(pl.parent_addr.arc)
                if pi is None or pi == ci:
                    continue
            entries.setdefault(ci, []).append(pl)
        self.placements = {}
        for ci, pls in entries.items():
            root = min(nid for aid in comps[ci]
                       for (nid, _) in d.arcs[aid].ends)
            pls.sort(key=repr)
            self.placements[root] = pls[0]

    def unplace(self, root: str):
        self.placements.pop(root, None)

    def build(self, name: str | None = None) -> Diagram:
        d = Diagram(spine=self.spine, name=name or self.name,
                    nodes=self.nodes.values(), arcs=self.arcs.values(),
                    edge_order={e: tuple(v) for e, v in self.edge_order.items()},
                    labels=self.labels, placements=self.placements)
        return d
