"""Tet complexes: dualization round trips and Pachner flips."""

import pytest

from spinelink.homology import spine_h1_integer
from spinelink.library import builtin
from spinelink.spine_io import serialize_spine
from spinelink.tetra import (dual_spine, pachner_14, pachner_23, pachner_32,
                             spine_to_tets)


def test_roundtrip_identity():
    for name in ("abalone", "bing_house", "s2xs1_spine"):
        s = builtin(name)
        cx, hints = spine_to_tets(s)
        s2 = dual_spine(cx, s.name, **hints)
        assert serialize_spine(s2) == serialize_spine(s.without_flow()), name


def _ab_face(cx):
    return next((t, f) for (t, f), (u, g, _) in cx.gluings.items() if u != t)


def test_pachner_23_32_roundtrip():
    s = builtin("abalone")
    cx, _ = spine_to_tets(s)
    t, f = _ab_face(cx)
    cx2, names = pachner_23(cx, t, f)
    sp2 = dual_spine(cx2, "x")
    assert sp2.validate() == []
    assert sp2.euler_characteristic() == s.euler_characteristic()
    assert spine_h1_integer(sp2) == spine_h1_integer(s)
    # the central edge of the flip has valence three on the three new tets
    cx3, _ = pachner_32(cx2, names[0], 0, 1)
    sp3 = dual_spine(cx3, "y")
    assert sp3.validate() == []
    assert len(cx3.tets) == len(cx.tets)
    assert spine_h1_integer(sp3) == spine_h1_integer(s)


def test_pachner_23_needs_distinct_tets():
    s = builtin("abalone")
    cx, _ = spine_to_tets(s)
    t, f = next((t, f) for (t, f), (u, g, _) in cx.gluings.items() if u == t)
    with pytest.raises(ValueError):
        pachner_23(cx, t, f)


def test_pachner_14_properties():
    s = builtin("abalone")
    cx, _ = spine_to_tets(s)
    cx2, _ = pachner_14(cx, cx.tets[0])
    assert cx2.vertex_links_are_spheres()
    assert cx2.is_orientable()
    assert len(cx2.vertex_classes()) == len(cx.vertex_classes()) + 1
    sp = dual_spine(cx2, "z")
    assert sp.validate() == []
    assert sp.euler_characteristic() == s.euler_characteristic() + 1


def test_s2xs1_has_two_boundary_spheres_worth():
    # chi(spine) = chi(M) = number of removed balls for an H1 = Z manifold
    s = builtin("s2xs1_spine")
    assert spine_h1_integer(s) == (1, [])
    assert s.euler_characteristic() == 2
