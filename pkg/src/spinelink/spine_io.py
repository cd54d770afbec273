"""Line-oriented text format for spines.

Canonical serialization lists strata sorted by id with fields in a fixed
order, so serialize(parse(doc)) == doc for canonical documents.
"""

from __future__ import annotations

from .spine import (CIRCLE, INTERVAL, Edge, EdgeEnd, Face, FlowStructure, Pass,
                    Spine)


class ParseError(Exception):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(line: str):
    return line.split()


def parse_spine(text: str) -> Spine:
    name = None
    thickening = None
    vertices: list[str] = []
    edge_decl: dict[str, dict] = {}
    face_decl: dict[str, dict] = {}
    face_order: list[str] = []
    flow_branch: dict[str, tuple[str, str, str]] = {}
    flow_coorient: dict[str, int] = {}
    in_flow = False
    seen_ids: set[str] = set()

    def claim(ident: str, lineno: int):
        if ident in seen_ids:
            raise ParseError(f"duplicate id {ident!r}", lineno)
        seen_ids.add(ident)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = _tokens(line)
        kw = tok[0]
        try:
            if kw == "spine":
                name = tok[1]
            elif kw == "thickening":
                if tok[1] not in ("product", "twisted"):
                    raise ParseError(f"unknown thickening {tok[1]!r}", lineno)
                thickening = tok[1]
            elif kw == "vertex":
                claim(tok[1], lineno)
                vertices.append(tok[1])
            elif kw == "edge":
                eid = tok[1]
                claim(eid, lineno)
                if tok[2] == "interval":
                    if len(tok) != 5:
                        raise ParseError("interval edge needs two vertex:slot ends",
                                         lineno)
                    ends = []
                    for spec in tok[3:5]:
                        v, slot = spec.rsplit(":", 1)
                        ends.append((v, int(slot)))
                    edge_decl[eid] = {"kind": INTERVAL, "ends": ends, "facing": [{}, {}]}
                elif tok[2] == "circle":
                    if tok[3] != "monodromy":
                        raise ParseError("expected 'monodromy'", lineno)
                    edge_decl[eid] = {"kind": CIRCLE,
                                      "monodromy": (int(tok[4]), int(tok[5]))}
                else:
                    raise ParseError(f"unknown edge kind {tok[2]!r}", lineno)
            elif kw == "wings":
                eid = tok[1]
                if eid not in edge_decl:
                    raise ParseError(f"wings for undeclared edge {eid!r}", lineno)
                ws = tuple(tok[2:5])
                if len(set(ws)) != 3:
                    raise ParseError("an edge needs three distinct wings", lineno)
                for w in ws:
                    claim(w, lineno)
                edge_decl[eid]["wings"] = ws
            elif kw == "attach":
                espec, w, kw2, slot = tok[1], tok[2], tok[3], tok[4]
                if kw2 != "faces":
                    raise ParseError("expected 'faces'", lineno)
                eid, endidx = espec.rsplit(":", 1)
                endidx = int(endidx)
                if eid not in edge_decl or edge_decl[eid]["kind"] != INTERVAL:
                    raise ParseError(f"attach for non-interval edge {eid!r}", lineno)
                edge_decl[eid]["facing"][endidx][w] = int(slot)
            elif kw == "face":
                fid = tok[1]
                claim(fid, lineno)
                face_decl[fid] = {}
                face_order.append(fid)
            elif kw == "circuit":
                head, rest = line.split(":", 1)
                fid = _tokens(head)[1]
                if fid not in face_decl:
                    raise ParseError(f"circuit for undeclared face {fid!r}", lineno)
                passes = []
                for item in rest.split(","):
                    item = item.strip()
                    if not item:
                        continue
                    body, wing = item.split("@")
                    direction = +1 if body.endswith("+") else -1
                    if body[-1] not in "+-":
                        raise ParseError(f"pass {item!r} needs a +/- direction", lineno)
                    passes.append(Pass(edge=body[:-1], direction=direction, wing=wing))
                face_decl[fid]["circuit"] = tuple(passes)
            elif kw == "surface":
                fid = tok[1]
                if fid not in face_decl:
                    raise ParseError(f"surface for undeclared face {fid!r}", lineno)
                if tok[2] != "genus" or tok[4] != "orientable":
                    raise ParseError("expected 'genus <g> orientable <0|1>'", lineno)
                face_decl[fid]["genus"] = int(tok[3])
                face_decl[fid]["orientable"] = bool(int(tok[5]))
            elif kw == "flow":
                in_flow = True
            elif kw == "branch":
                if not in_flow:
                    raise ParseError("'branch' outside a flow block", lineno)
                eid = tok[1]
                spec = dict(zip(tok[2::2], tok[3::2]))
                flow_branch[eid] = (spec["free"], spec["under"], spec["over"])
            elif kw == "coorient":
                if not in_flow:
                    raise ParseError("'coorient' outside a flow block", lineno)
                flow_coorient[tok[1]] = +1 if tok[2] == "+" else -1
            else:
                raise ParseError(f"unknown keyword {kw!r}", lineno)
        except ParseError:
            raise
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed {kw!r} line ({exc})", lineno) from None

    if name is None:
        raise ParseError("missing 'spine <name>' header", 1)

    edges = []
    for eid, d in sorted(edge_decl.items()):
        if "wings" not in d:
            raise ParseError(f"edge {eid!r} has no wings line", 1)
        if d["kind"] == INTERVAL:
            ends = tuple(EdgeEnd(vertex=v, slot=s, facing=d["facing"][i])
                         for i, (v, s) in enumerate(d["ends"]))
            for i, end in enumerate(ends):
                if end.vertex not in vertices:
                    raise ParseError(f"edge {eid!r} references unknown vertex "
                                     f"{end.vertex!r}", 1)
            edges.append(Edge(id=eid, kind=INTERVAL, wings=d["wings"], ends=ends))
        else:
            edges.append(Edge(id=eid, kind=CIRCLE, wings=d["wings"],
                              monodromy=d["monodromy"]))

    known_wings = {w for e in edges for w in e.wings}
    faces = []
    for fid in face_order:
        d = face_decl[fid]
        if "circuit" in d and "genus" in d:
            raise ParseError(f"face {fid!r} is both a disc and a surface", 1)
        if "circuit" in d:
            for p in d["circuit"]:
                if p.edge not in edge_decl:
                    raise ParseError(f"face {fid!r} passes unknown edge {p.edge!r}", 1)
                if p.wing not in known_wings:
                    raise ParseError(f"face {fid!r} uses unknown wing {p.wing!r}", 1)
            faces.append(Face(id=fid, circuit=d["circuit"]))
        elif "genus" in d:
            faces.append(Face(id=fid, genus=d["genus"], orientable=d["orientable"]))
        else:
            raise ParseError(f"face {fid!r} has neither circuit nor surface line", 1)

    flow = None
    if flow_branch or flow_coorient or in_flow:
        flow = FlowStructure(branch=flow_branch, coorient=flow_coorient)
    return Spine(name=name, vertices=sorted(vertices), edges=edges, faces=faces,
                 flow=flow, thickening=thickening)


def serialize_spine(s: Spine) -> str:
    out = [f"spine {s.name}"]
    if s.thickening is not None:
        out.append(f"thickening {s.thickening}")
    for v in sorted(s.vertices):
        out.append(f"vertex {v}")
    for eid in sorted(s.edges):
        e = s.edges[eid]
        if e.kind == INTERVAL:
            e0, e1 = e.ends
            out.append(f"edge {eid} interval {e0.vertex}:{e0.slot} {e1.vertex}:{e1.slot}")
        else:
            rot, flip = e.monodromy
            out.append(f"edge {eid} circle monodromy {rot} {flip}")
    for eid in sorted(s.edges):
        e = s.edges[eid]
        out.append(f"wings {eid} {' '.join(e.wings)}")
    for eid in sorted(s.edges):
        e = s.edges[eid]
        if e.kind == INTERVAL:
            for endidx, end in enumerate(e.ends):
                for w in e.wings:
                    out.append(f"attach {eid}:{endidx} {w} faces {end.facing[w]}")
    for fid in sorted(s.faces):
        out.append(f"face {fid}")
    for fid in sorted(s.faces):
        f = s.faces[fid]
        if f.is_disc:
            items = ", ".join(f"{p.edge}{'+' if p.direction > 0 else '-'}@{p.wing}"
                              for p in f.circuit)
            out.append(f"circuit {fid}: {items}")
        else:
            out.append(f"surface {fid} genus {f.genus} orientable {int(f.orientable)}")
    if s.flow is not None:
        out.append("flow")
        for eid in sorted(s.flow.branch):
            fr, un, ov = s.flow.branch[eid]
            out.append(f"branch {eid} free {fr} under {un} over {ov}")
        for fid in sorted(s.flow.coorient):
            sign = "+" if s.flow.coorient[fid] > 0 else "-"
            out.append(f"coorient {fid} {sign}")
    return "\n".join(out) + "\n"
