"""Small exact linear algebra: GF(2) via bitmasks, integer Smith form.

Sized for desk-scale chain complexes (tens of cells); no external deps.
"""

from __future__ import annotations

from fractions import Fraction


# -- GF(2) -------------------------------------------------------------


def gf2_echelon(rows: list[int]) -> tuple[list[int], list[int]]:
    """Row-reduce; returns (reduced rows, pivot bit positions)."""
    rows = [r for r in rows]
    out: list[int] = []
    pivots: list[int] = []
    for r in rows:
        for p, piv in zip(pivots, out):
            if r >> p & 1:
                r ^= piv
        if r:
            p = r.bit_length() - 1
            # reduce up
            out2, piv2 = [], []
            inserted = False
            for q, row in zip(pivots, out):
                if row >> p & 1:
                    row ^= r
                out2.append(row)
                piv2.append(q)
            out2.append(r)
            piv2.append(p)
            out, pivots = out2, piv2
    return out, pivots


def gf2_rank(rows: list[int]) -> int:
    return len(gf2_echelon(rows)[0])


def gf2_nullspace(rows: list[int], width: int) -> list[int]:
    """Basis of {x : for every row r, parity(r & x) = 0}."""
    reduced, pivots = gf2_echelon(rows)
    pivset = set(pivots)
    basis = []
    for j in range(width):
        if j in pivset:
            continue
        vec = 1 << j
        for p, row in zip(pivots, reduced):
            if row >> j & 1:
                vec |= 1 << p
        basis.append(vec)
    return basis


def gf2_solve(columns: list[int], target: int) -> int | None:
    """Mask s with xor of the s-selected columns == target, or None."""
    basis: list[tuple[int, int]] = []   # (vector, tag), unique leading bits
    for i, vec in enumerate(columns):
        tag = 1 << i
        for bvec, btag in basis:
            if vec >> (bvec.bit_length() - 1) & 1:
                vec ^= bvec
                tag ^= btag
        if vec:
            basis = [(bv ^ vec, bt ^ tag) if bv >> (vec.bit_length() - 1) & 1
                     else (bv, bt) for bv, bt in basis]
            basis.append((vec, tag))
            basis.sort(key=lambda t: -t[0].bit_length())
    cur, curtag = target, 0
    for bvec, btag in basis:
        if cur >> (bvec.bit_length() - 1) & 1:
            cur ^= bvec
            curtag ^= btag
    return None if cur else curtag


# -- integer Smith normal form ------------------------------------------


def smith_normal_form(mat: list[list[int]]):
    """Return (d, U, V) with U @ mat @ V diagonal d (lists), U, V unimodular."""
    m = len(mat)
    n = len(mat[0]) if m else 0
    a = [row[:] for row in mat]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, k):      # row_i -= k * row_j
        for c in range(n):
            a[i][c] -= k * a[j][c]
        for c in range(m):
            U[i][c] -= k * U[j][c]

    def col_op(i, j, k):      # col_i -= k * col_j
        for r in range(m):
            a[r][i] -= k * a[r][j]
        for r in range(n):
            V[r][i] -= k * V[r][j]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in range(m):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    t = 0
    while t < min(m, n):
        # find pivot of least nonzero magnitude
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < best[0]):
                    best = (abs(a[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        dirty = False
        for i in range(t + 1, m):
            if a[i][t]:
                row_op(i, t, a[i][t] // a[t][t])
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, n):
            if a[t][j]:
                col_op(j, t, a[t][j] // a[t][t])
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # divisibility fix-up
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if a[i][j] % a[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            for c in range(n):
                a[t][c] += a[bad][c]
            for c in range(m):
                U[t][c] += U[bad][c]
            continue
        t += 1
    d = [a[i][i] for i in range(min(m, n))]
    return d, U, V


def integer_h1(d1_rows: list[list[int]], d2_cols: list[list[int]]):
    """H1 of a chain complex C2 -> C1 -> C0 given by integer matrices.

    ``d1_rows``: one row per 0-cell, one column per 1-cell.
    ``d2_cols``: one entry-list per 2-cell over the 1-cells.
    Returns (betti rank, list of torsion orders > 1).
    """
    n1 = len(d1_rows[0]) if d1_rows else (len(d2_cols[0]) if d2_cols else 0)
    if not d1_rows:
        d1_rows = [[0] * n1]
    d, U, V = smith_normal_form(d1_rows)
    rank1 = sum(1 for x in d if x)
    kernel_cols = list(range(rank1, n1))
    # express each boundary in V-coordinates: x = V^-1 c
    Vinv = _invert_unimodular(V)
    reduced = []
    for col in d2_cols:
        coords = [sum(Vinv[i][j] * col[j] for j in range(n1)) for i in range(n1)]
        for i in range(rank1):
            if coords[i] != 0:
                raise ValueError("2-cell boundary not contained in ker d1")
        reduced.append([coords[i] for i in kernel_cols])
    k = len(kernel_cols)
    if not reduced:
        return k, []
    mat = [[reduced[c][r] for c in range(len(reduced))] for r in range(k)]
    d2, _, _ = smith_normal_form(mat)
    rank2 = sum(1 for x in d2 if x)
    torsion = [abs(x) for x in d2 if x not in (0, 1, -1)]
    return k - rank2, sorted(torsion)


def _invert_unimodular(V: list[list[int]]) -> list[list[int]]:
    n = len(V)
    a = [[Fraction(V[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = [[a[i][n + j] for j in range(n)] for i in range(n)]
    for row in out:
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


# -- spine chain complexes ----------------------------------------------


def spine_chain_complex(spine):
    """Integer chain complex of a spine's natural CW structure.

    Returns (vertex index, edge index, d1_rows, d2_cols).  Circle edges get
    one base 0-cell each; surface faces use the standard one-vertex polygon.
    """
    from .spine import CIRCLE

    if spine.is_surface_spine:
        f = spine.surface_face
        k = 2 * f.genus if f.orientable else f.genus
        d1 = [[0] * k]
        if f.orientable:
            d2 = [[0] * k]
        else:
            d2 = [[2] * k]
        return {None: 0}, {i: i for i in range(k)}, d1, d2

    verts = {v: i for i, v in enumerate(sorted(spine.vertices))}
    base = len(verts)
    for eid in sorted(spine.edges):
        if spine.edges[eid].kind == CIRCLE:
            verts[f"@{eid}"] = base
            base += 1
    eidx = {eid: i for i, eid in enumerate(sorted(spine.edges))}
    d1 = [[0] * len(eidx) for _ in range(len(verts))]
    for eid, e in spine.edges.items():
        j = eidx[eid]
        if e.kind == CIRCLE:
            continue
        d1[verts[e.ends[1].vertex]][j] += 1
        d1[verts[e.ends[0].vertex]][j] -= 1
    d2 = []
    for fid in sorted(spine.faces):
        f = spine.faces[fid]
        col = [0] * len(eidx)
        for p in f.circuit:
            col[eidx[p.edge]] += p.direction
        d2.append(col)
    return verts, eidx, d1, d2


def spine_h1_integer(spine):
    _, _, d1, d2 = spine_chain_complex(spine)
    return integer_h1(d1, d2)
