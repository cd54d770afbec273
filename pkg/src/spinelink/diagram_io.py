"""Text format for diagrams; canonical serialization sorts by id.

``bnd`` lines are derived data (boundary orders follow the shared edge
orders); the parser verifies them against the derived values when present.
``rot`` lines likewise record the fixed port rotations.
"""

from __future__ import annotations

from .diagram import (CROSSING, EDGEPOINT, HALFTWIST, MARKER, Arc, Diagram,
                      DiagramError, Node, Placement, RegionAddr)
from .spine import Spine
from .spine_io import ParseError


def parse_diagram(spine: Spine, text: str) -> Diagram:
    name = None
    nodes: list[Node] = []
    arcs: list[Arc] = []
    ranks: dict[str, dict[int, str]] = {}
    labels: dict[int, str] = {}
    placements: dict[str, Placement] = {}
    bnd_claims: list[tuple[int, str, int, int, tuple]] = []
    seen: set[str] = set()

    def claim(ident, lineno):
        if ident in seen:
            raise ParseError(f"duplicate id {ident!r}", lineno)
        seen.add(ident)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        kw = tok[0]
        try:
            if kw == "diagram":
                name = tok[1]
                if tok[2] != "on" or tok[3] != spine.name:
                    raise ParseError(f"diagram is on spine {tok[3]!r}, "
                                     f"expected {spine.name!r}", lineno)
            elif kw == "node":
                nid, kind = tok[1], tok[2]
                claim(nid, lineno)
                if kind == "crossing":
                    if tok[3] != "in" or tok[5] != "over":
                        raise ParseError("crossing syntax: node <id> crossing "
                                         "in <f> over A|B", lineno)
                    nodes.append(Node(id=nid, kind=CROSSING, face=tok[4],
                                      over=(tok[6] == "A")))
                elif kind == "edgepoint":
                    if tok[3] != "on" or tok[5] != "rank" or tok[7] != "wings":
                        raise ParseError("edgepoint syntax: node <id> edgepoint "
                                         "on <e> rank <r> wings <w1> <w2>", lineno)
                    eid, rank = tok[4], int(tok[6])
                    ranks.setdefault(eid, {})
                    if rank in ranks[eid]:
                        raise ParseError(f"rank {rank} on {eid} used twice", lineno)
                    ranks[eid][rank] = nid
                    nodes.append(Node(id=nid, kind=EDGEPOINT, edge=eid,
                                      wings=(tok[8], tok[9])))
                elif kind == "halftwist":
                    if tok[3] != "in" or tok[5] != "sign":
                        raise ParseError("halftwist syntax: node <id> halftwist "
                                         "in <f> sign +|-", lineno)
                    nodes.append(Node(id=nid, kind=HALFTWIST, face=tok[4],
                                      sign=+1 if tok[6] == "+" else -1))
                elif kind == "marker":
                    if tok[3] != "in":
                        raise ParseError("marker syntax: node <id> marker in <f>",
                                         lineno)
                    nodes.append(Node(id=nid, kind=MARKER, face=tok[4]))
                else:
                    raise ParseError(f"unknown node kind {kind!r}", lineno)
            elif kw == "arc":
                aid = tok[1]
                claim(aid, lineno)
                if tok[3] != "--" or tok[5] != "in":
                    raise ParseError("arc syntax: arc <a> n:p -- n:p in <f>"
                                     " [twist 1]", lineno)
                e1 = tok[2].rsplit(":", 1)
                e2 = tok[4].rsplit(":", 1)
                twist = 0
                if len(tok) > 7:
                    if tok[7] != "twist":
                        raise ParseError("trailing arc tokens must be 'twist 1'",
                                         lineno)
                    twist = int(tok[8])
                arcs.append(Arc(id=aid,
                                ends=((e1[0], int(e1[1])), (e2[0], int(e2[1]))),
                                face=tok[6], twist=twist))
            elif kw == "rot":
                pass      # rotations are fixed by the port numbering
            elif kw == "bnd":
                head, rest = line.split(":", 1)
                h = head.split()
                entries = tuple(item.strip() for item in rest.split(",")
                                if item.strip())
                bnd_claims.append((lineno, h[1], int(h[2]), int(h[3]), entries))
            elif kw == "label":
                labels[int(tok[1])] = tok[2]
            elif kw == "host":
                root = tok[1]

                def addr(spec, lineno=lineno):
                    if spec == "-":
                        return None
                    aid, endidx, side = spec.rsplit(":", 2)
                    if side not in ("L", "R"):
                        raise ParseError(f"bad region side {side!r}", lineno)
                    return RegionAddr(aid, int(endidx), 1 if side == "L" else -1)

                placements[root] = Placement(addr(tok[2]), addr(tok[3]))
                if placements[root].own_outer is None:
                    raise ParseError("own region address cannot be '-'", lineno)
            else:
                raise ParseError(f"unknown keyword {kw!r}", lineno)
        except ParseError:
            raise
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed {kw!r} line ({exc})", lineno) from None

    if name is None:
        raise ParseError("missing 'diagram <name> on <spine>' header", 1)
    edge_order = {}
    for eid, rk in ranks.items():
        if sorted(rk) != list(range(len(rk))):
            raise ParseError(f"ranks on edge {eid} must be 0..{len(rk) - 1}", 1)
        edge_order[eid] = tuple(rk[i] for i in range(len(rk)))

    d = Diagram(spine=spine, name=name, nodes=nodes, arcs=arcs,
                edge_order=edge_order, labels=labels, placements=placements)
    errs = d.structural_errors()
    if errs:
        raise ParseError(errs[0], 1)
    for (lineno, fid, ci, pi, entries) in bnd_claims:
        derived = _bnd_entries(d, fid, pi)
        if ci != 0:
            raise ParseError("faces have a single boundary circuit", lineno)
        if entries != derived:
            raise ParseError(f"bnd line for {fid} pass {pi} disagrees with the "
                             f"edge orders (expected {', '.join(derived)})", lineno)
    return d


def _bnd_entries(d: Diagram, fid: str, pass_index: int) -> tuple[str, ...]:
    f = d.spine.faces[fid]
    p = f.circuit[pass_index]
    order = d.edge_order.get(p.edge, ())
    seq = list(order) if p.direction > 0 else list(reversed(order))
    out = []
    for nid in seq:
        n = d.nodes[nid]
        for port in range(2):
            if n.wings[port] == p.wing:
                aid, endidx = d.arc_at(nid, port)
                out.append(f"{nid}:{port}")
    return tuple(out)


def serialize_diagram(d: Diagram) -> str:
    out = [f"diagram {d.name} on {d.spine.name}"]
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        if n.kind == CROSSING:
            out.append(f"node {nid} crossing in {n.face} over "
                       f"{'A' if n.over else 'B'}")
        elif n.kind == EDGEPOINT:
            out.append(f"node {nid} edgepoint on {n.edge} rank {d.rank(nid)} "
                       f"wings {n.wings[0]} {n.wings[1]}")
        elif n.kind == HALFTWIST:
            out.append(f"node {nid} halftwist in {n.face} sign "
                       f"{'+' if n.sign > 0 else '-'}")
        else:
            out.append(f"node {nid} marker in {n.face}")
    for aid in sorted(d.arcs):
        a = d.arcs[aid]
        (n1, p1), (n2, p2) = a.ends
        suffix = " twist 1" if a.twist else ""
        out.append(f"arc {aid} {n1}:{p1} -- {n2}:{p2} in {a.face}{suffix}")
    for nid in sorted(d.nodes):
        n = d.nodes[nid]
        ports = " ".join(str(i) for i in range(n.nports))
        out.append(f"rot {nid}: {ports}")
    for fid in sorted(d.spine.faces):
        f = d.spine.faces[fid]
        if not f.is_disc:
            continue
        for pi in range(len(f.circuit)):
            entries = _bnd_entries(d, fid, pi)
            if entries:
                out.append(f"bnd {fid} 0 {pi}: {', '.join(entries)}")
    for idx in sorted(d.labels):
        out.append(f"label {idx} {d.labels[idx]}")
    for root in sorted(d.placements):
        pl = d.placements[root]

        def spec(addr):
            if addr is None:
                return "-"
            return f"{addr.arc}:{addr.endidx}:{'L' if addr.side > 0 else 'R'}"

        out.append(f"host {root} {spec(pl.parent_addr)} {spec(pl.own_outer)}")
    return "\n".join(out) + "\n"
