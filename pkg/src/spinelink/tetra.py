"""Tetrahedral face-pairing complexes and their dual special spines.

A special spine without circle edges is dual to a complex of tetrahedra
with all faces glued in pairs: spine vertices are tetrahedra, spine edges
are face gluings, spine faces are edge classes, and the complementary
regions at a spine vertex are the tetrahedron's own vertices.  The MP move
on spines is the dual of the Pachner 2-3 bistellar flip, which is how it is
implemented here.

Faces of a tetrahedron are labelled 0..3 by the opposite vertex.  A gluing
attaches face ``f`` of tet ``t`` to face ``p[f]`` of tet ``u`` via the
vertex permutation ``p`` (a 4-tuple mapping t-labels to u-labels).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .spine import Edge, EdgeEnd, Face, Pass, Spine


def perm_inverse(p: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    inv = [0] * 4
    for i, v in enumerate(p):
        inv[v] = i
    return tuple(inv)


def perm_compose(p, q):
    """Composite acting as q after p (labels x -> q[p[x]])."""
    return tuple(q[p[x]] for x in range(4))


def perm_parity(p) -> int:
    seen, parity = set(), 1
    for i in range(4):
        if i in seen:
            continue
        j, n = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            n += 1
        if n % 2 == 0:
            parity = -parity
    return parity


@dataclass
class TetComplex:
    """Closed face-pairing complex: every (tet, face) glued to another side."""
    tets: list[str]
    gluings: dict[tuple[str, int], tuple[str, int, tuple[int, int, int, int]]]

    def check(self):
        for t in self.tets:
            for f in range(4):
                if (t, f) not in self.gluings:
                    raise ValueError(f"face {(t, f)} is unglued")
        for (t, f), (u, g, p) in self.gluings.items():
            if p[f] != g:
                raise ValueError(f"gluing perm at {(t, f)} does not carry face to face")
            if (t, f) == (u, g):
                raise ValueError(f"face {(t, f)} glued to itself")
            u2, f2, p2 = self.gluings[(u, g)]
            if (u2, f2) != (t, f) or p2 != perm_inverse(p):
                raise ValueError(f"gluing at {(t, f)} is not an involution")

    # -- classes ---------------------------------------------------------

    def edge_orbit(self, t: str, a: int, b: int):
        """Walk around the tet edge {a,b} of t; yields (tet, a, b, exit_face).

        Starting by exiting through the smaller face label containing the
        edge; each step enters the partner tet and exits through the other
        face around the carried edge.
        """
        rest = [x for x in range(4) if x not in (a, b)]
        state = (t, a, b, rest[0])
        start = state
        out = []
        while True:
            out.append(state)
            cur_t, cur_a, cur_b, exit_face = state
            u, g, p = self.gluings[(cur_t, exit_face)]
            na, nb = p[cur_a], p[cur_b]
            nxt_exit = next(x for x in range(4) if x not in (na, nb, g))
            state = (u, na, nb, nxt_exit)
            if state == start:
                return out

    def edge_classes(self) -> list[list[tuple[str, int, int, int]]]:
        seen: set[tuple[str, frozenset[int]]] = set()
        classes = []
        for t in self.tets:
            for a, b in itertools.combinations(range(4), 2):
                if (t, frozenset((a, b))) in seen:
                    continue
                orbit = self.edge_orbit(t, a, b)
                for (u, x, y, _) in orbit:
                    seen.add((u, frozenset((x, y))))
                classes.append(orbit)
        return classes

    def vertex_classes(self) -> list[set[tuple[str, int]]]:
        parent: dict[tuple[str, int], tuple[str, int]] = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != x:
                parent[x], x = root, parent[x]
            return root

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for t in self.tets:
            for v in range(4):
                parent.setdefault((t, v), (t, v))
        for (t, f), (u, g, p) in self.gluings.items():
            for v in range(4):
                if v != f:
                    union((t, v), (u, p[v]))
        groups: dict[tuple[str, int], set] = {}
        for t in self.tets:
            for v in range(4):
                groups.setdefault(find((t, v)), set()).add((t, v))
        return list(groups.values())

    def vertex_links_are_spheres(self) -> bool:
        # link triangles: one per (tet, vertex); link edges glue through the
        # faces containing the vertex; link corners sit on tet edges
        parent: dict[tuple, tuple] = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != x:
                parent[x], x = root, parent[x]
            return root

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[rx] = ry

        for (t, f), (w, g, p) in self.gluings.items():
            for v in range(4):
                for u in range(4):
                    if v != u and f not in (v, u):
                        union((t, v, u), (w, p[v], p[u]))
        for cls in self.vertex_classes():
            faces = len(cls)
            edges = 3 * faces / 2
            corners = {find((t, v, u)) for (t, v) in cls for u in range(4) if u != v}
            if len(corners) - edges + faces != 2:
                return False
        return True

    def is_orientable(self) -> bool:
        orient: dict[str, int] = {}
        for t0 in self.tets:
            if t0 in orient:
                continue
            orient[t0] = 1
            stack = [t0]
            while stack:
                t = stack.pop()
                for f in range(4):
                    u, g, p = self.gluings[(t, f)]
                    want = orient[t] * (1 if perm_parity(p) < 0 else -1)
                    if u not in orient:
                        orient[u] = want
                        stack.append(u)
                    elif orient[u] != want:
                        return False
        return True


# -- dualization -------------------------------------------------------


def _gluing_pairs(cx: TetComplex) -> list[tuple[tuple[str, int], tuple[str, int]]]:
    pairs, seen = [], set()
    for (t, f), (u, g, _) in sorted(cx.gluings.items()):
        if (t, f) in seen:
            continue
        seen.add((t, f))
        seen.add((u, g))
        pairs.append(((t, f), (u, g)))
    return pairs


def _triangle_edge_cycle(f: int) -> list[tuple[int, int]]:
    """Edges of face f in the cyclic order of its boundary."""
    a, b, c = [x for x in range(4) if x != f]
    return [(a, b), (b, c), (c, a)]


def dual_spine(cx: TetComplex, name: str,
               edge_names: dict[frozenset, str] | None = None,
               face_names: dict[frozenset, str] | None = None,
               vertex_names: dict[str, str] | None = None,
               end0_sides: dict[frozenset, tuple[str, int]] | None = None,
               wing_maps: dict[frozenset, tuple] | None = None,
               face_circuits: dict[str, tuple] | None = None) -> Spine:
    """Dual special spine of a closed face-pairing complex.

    The optional hint maps keep strata ids stable across Pachner moves:
    ``edge_names`` maps ``frozenset({(t,f),(u,g)})`` to spine edge ids,
    ``face_names`` frozensets of ``(tet, tet-edge)`` pairs to face ids,
    ``vertex_names`` tets to vertex ids, ``end0_sides`` picks which gluing
    side is end 0 and ``wing_maps`` fixes the stored wing triple verbatim as
    ``((wing_id, (a, b)), ...)`` with (a, b) the tet edge at end 0.  The
    stored cyclic order of wings is a per-edge convention, so it must be
    carried explicitly for byte-stable round trips.
    """
    cx.check()

    def vname(t: str) -> str:
        if vertex_names and t in vertex_names:
            return vertex_names[t]
        return f"v{t}"

    vertices = [vname(t) for t in cx.tets]

    edge_of_facepair: dict[tuple[str, int], tuple[str, int]] = {}
    edges: list[Edge] = []
    wing_of: dict[tuple[str, frozenset[int], int], str] = {}
    used_edge_ids: set[str] = set()

    for pair in _gluing_pairs(cx):
        key = frozenset(pair)
        if end0_sides and key in end0_sides and end0_sides[key] in pair:
            (t, f) = end0_sides[key]
            (u, g) = next(s for s in pair if s != (t, f))
        else:
            (t, f), (u, g) = pair
        eid = edge_names.get(key) if edge_names else None
        if eid is None or eid in used_edge_ids:
            eid = f"E.{t}.{f}"
            while eid in used_edge_ids:
                eid += "x"
        used_edge_ids.add(eid)
        p = cx.gluings[(t, f)][2]
        if wing_maps and key in wing_maps:
            pairing = [(w, ab) for (w, ab) in wing_maps[key]]
        else:
            pairing = [(f"{eid}.w{k}", ab)
                       for k, ab in enumerate(_triangle_edge_cycle(f))]
        wings = tuple(w for w, _ in pairing)
        facing0, facing1 = {}, {}
        for w, (a, b) in pairing:
            other0 = next(x for x in range(4) if x not in (a, b, f))
            facing0[w] = other0
            ta, tb = p[a], p[b]
            other1 = next(x for x in range(4) if x not in (ta, tb, g))
            facing1[w] = other1
            wing_of[(t, frozenset((a, b)), f)] = w
            wing_of[(u, frozenset((ta, tb)), g)] = w
        ends = (EdgeEnd(vertex=vname(t), slot=f, facing=facing0),
                EdgeEnd(vertex=vname(u), slot=g, facing=facing1))
        edges.append(Edge(id=eid, kind="interval", wings=wings, ends=ends))
        edge_of_facepair[(t, f)] = (eid, 0)
        edge_of_facepair[(u, g)] = (eid, 1)

    faces: list[Face] = []
    used_face_ids: set[str] = set()
    for orbit in cx.edge_classes():
        key = frozenset((t, frozenset((a, b))) for (t, a, b, _) in orbit)
        fid = face_names.get(key) if face_names else None
        if fid is None or fid in used_face_ids:
            t0, a0, b0, _ = orbit[0]
            fid = f"F.{t0}.{min(a0, b0)}{max(a0, b0)}"
            while fid in used_face_ids:
                fid += "x"
        used_face_ids.add(fid)
        passes = []
        for (t, a, b, exit_face) in orbit:
            eid, endidx = edge_of_facepair[(t, exit_face)]
            direction = 1 if endidx == 0 else -1
            w = wing_of[(t, frozenset((a, b)), exit_face)]
            passes.append(Pass(edge=eid, direction=direction, wing=w))
        if face_circuits and fid in face_circuits:
            # keep the stored rotation and travel direction: they fix the
            # face's side and orientation conventions
            hinted = face_circuits[fid]
            if {p.wing for p in hinted} != {p.wing for p in passes}:
                raise ValueError(f"face circuit hint for {fid} does not match "
                                 f"the rebuilt edge class")
            passes = list(hinted)
        faces.append(Face(id=fid, circuit=tuple(passes)))

    return Spine(name=name, vertices=vertices, edges=edges, faces=faces)


def spine_to_tets(s: Spine) -> tuple["TetComplex", dict]:
    """Inverse dualization for special spines without circle edges.

    Returns the complex plus hint maps (see :func:`dual_spine`) so that the
    round trip reproduces the spine verbatim and Pachner surgery keeps the
    surviving strata ids stable.
    """
    if not s.is_special():
        raise ValueError("only special spines dualize to tetrahedra")
    s.analysis()
    gluings = {}
    edge_names = {}
    end0_sides = {}
    wing_maps = {}
    for e in s.edges.values():
        end0, end1 = e.ends
        t, f = end0.vertex, end0.slot
        u, g = end1.vertex, end1.slot
        p = [None] * 4
        p[f] = g
        for w in e.wings:
            p[end0.facing[w]] = end1.facing[w]
        p = tuple(p)
        gluings[(t, f)] = (u, g, p)
        gluings[(u, g)] = (t, f, perm_inverse(p))
        key = frozenset(((t, f), (u, g)))
        edge_names[key] = e.id
        end0_sides[key] = (t, f)
        pairing = []
        for w in e.wings:
            other = end0.facing[w]
            a, b = (x for x in range(4) if x not in (f, other))
            pairing.append((w, (a, b)))
        wing_maps[key] = tuple(pairing)
    cx = TetComplex(tets=list(s.vertices), gluings=gluings)
    cx.check()
    face_names = {}
    wing_key = {}
    for e in s.edges.values():
        for end in e.ends:
            t, f = end.vertex, end.slot
            for w in e.wings:
                other = end.facing[w]
                a, b = (x for x in range(4) if x not in (f, other))
                wing_key[(t, frozenset((a, b)), f)] = w
    for orbit in cx.edge_classes():
        key = frozenset((t, frozenset((a, b))) for (t, a, b, _) in orbit)
        t, a, b, exit_face = orbit[0]
        w = wing_key[(t, frozenset((a, b)), exit_face)]
        face_names[key] = s.pass_site(w).face
    hints = {"edge_names": edge_names, "face_names": face_names,
             "vertex_names": {t: t for t in s.vertices},
             "end0_sides": end0_sides, "wing_maps": wing_maps,
             "face_circuits": {f.id: f.circuit for f in s.faces.values()}}
    return cx, hints


# -- Pachner moves -----------------------------------------------------


def _fresh_tet_names(existing, n: int) -> list[str]:
    out, k = [], 0
    existing = set(existing)
    while len(out) < n:
        cand = f"t{k}"
        if cand not in existing:
            out.append(cand)
            existing.add(cand)
        k += 1
    return out


def _rebuild(cx: TetComplex, dying: list[str], new_tets: list[str],
             translate: dict[tuple[str, int], tuple[tuple[str, int], dict[int, int]]],
             internal: list[tuple[tuple[str, int], tuple[str, int], tuple]]):
    """Assemble a complex after a local move.

    ``translate`` maps each dying external side to its replacement side plus
    a label conversion (old local labels -> new local labels, total on 0..3).
    ``internal`` lists brand-new gluings among the new tets.
    """
    gl: dict[tuple[str, int], tuple[str, int, tuple]] = {}
    handled = set()
    for side in list(cx.gluings):
        if side in handled:
            continue
        u, g, p = cx.gluings[side]
        partner = (u, g)
        handled.add(side)
        handled.add(partner)
        side_gone = side[0] in dying and side not in translate
        partner_gone = partner[0] in dying and partner not in translate
        if side_gone or partner_gone:
            if not (side_gone and partner_gone):
                raise ValueError(f"half-translated site gluing at {side}")
            continue  # interior face of the site
        new_side, conv1 = translate.get(side, (side, None))
        new_partner, conv2 = translate.get(partner, (partner, None))
        q = p
        if conv1 is not None:
            inv1 = {v: k for k, v in conv1.items()}
            q = tuple(q[inv1[x]] for x in range(4))
        if conv2 is not None:
            q = tuple(conv2[x] for x in q)
        gl[new_side] = (new_partner[0], new_partner[1], q)
        gl[new_partner] = (new_side[0], new_side[1], perm_inverse(q))
    for (s1, s2, q) in internal:
        gl[s1] = (s2[0], s2[1], q)
        gl[s2] = (s1[0], s1[1], perm_inverse(q))
    tets = [t for t in cx.tets if t not in dying] + list(new_tets)
    out = TetComplex(tets=tets, gluings=gl)
    out.check()
    return out


def pachner_23(cx: TetComplex, t: str, f: int) -> tuple[TetComplex, list[str]]:
    """Bistellar 2-3 flip across face f of tet t (glued to a distinct tet).

    Returns the new complex and the three new tet names.  New tet ``i``
    carries labels (0: apex of t, 1: apex of u, 2: tri[i+1], 3: tri[i+2]).
    """
    u, g, p = cx.gluings[(t, f)]
    if u == t:
        raise ValueError("2-3 flip needs two distinct tetrahedra")
    tri = [x for x in range(4) if x != f]
    names = _fresh_tet_names(cx.tets, 3)

    translate: dict[tuple[str, int], tuple[tuple[str, int], dict[int, int]]] = {}
    for i in range(3):
        vi, vj, vk = tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]
        conv_t = {f: 0, vj: 2, vk: 3, vi: 1}
        translate[(t, vi)] = ((names[i], 1), conv_t)
        conv_u = {g: 1, p[vj]: 2, p[vk]: 3, p[vi]: 0}
        translate[(u, p[vi])] = ((names[i], 0), conv_u)

    internal = []
    for i in range(3):
        j = (i + 1) % 3
        # shared face (apexes + tri[i+2]); tri[i+2] is local 3 in names[i]
        # and local 2 in names[j]
        internal.append(((names[i], 2), (names[j], 3), (0, 1, 3, 2)))

    out = _rebuild(cx, [t, u], names, translate, internal)
    return out, names


def pachner_32(cx: TetComplex, t: str, a: int, b: int) -> tuple[TetComplex, list[str]]:
    """Bistellar 3-2 flip around the valence-3 tet edge {a,b} of t."""
    orbit = cx.edge_orbit(t, a, b)
    if len(orbit) != 3 or len({o[0] for o in orbit}) != 3:
        raise ValueError("3-2 flip needs a valence-3 edge on three distinct tets")
    names = _fresh_tet_names(cx.tets, 2)
    tnew, unew = names
    # in each T_i the carried edge is (a_i, b_i); exit_face omits c_i, the
    # triangle vertex not shared with T_{i+1}; the remaining label is c_{i+1}
    translate = {}
    for i, (ti, ai, bi, exit_face) in enumerate(orbit):
        ci = exit_face
        cnext = next(x for x in range(4) if x not in (ai, bi, exit_face))
        lab_ci = i + 1
        lab_cnext = ((i + 1) % 3) + 1
        lab_miss = ((i + 2) % 3) + 1
        # face omitting b_i joins the new tet around apex a
        conv_a = {ai: 0, ci: lab_ci, cnext: lab_cnext, bi: lab_miss}
        translate[(ti, bi)] = ((tnew, lab_miss), conv_a)
        conv_b = {bi: 0, ci: lab_ci, cnext: lab_cnext, ai: lab_miss}
        translate[(ti, ai)] = ((unew, lab_miss), conv_b)
    internal = [((tnew, 0), (unew, 0), (0, 1, 2, 3))]
    dying = [o[0] for o in orbit]
    out = _rebuild(cx, dying, names, translate, internal)
    return out, names


def pachner_14(cx: TetComplex, t: str) -> tuple[TetComplex, list[str]]:
    """Subdivide tet t into four around a new interior vertex."""
    names = _fresh_tet_names(cx.tets, 4)
    translate = {}
    for j in range(4):
        translate[(t, j)] = ((names[j], j), {v: v for v in range(4)})
    internal = []
    for j in range(4):
        for k in range(j + 1, 4):
            q = list(range(4))
            q[j], q[k] = k, j
            internal.append(((names[j], k), (names[k], j), tuple(q)))
    out = _rebuild(cx, [t], names, translate, internal)
    return out, names
