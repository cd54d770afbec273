"""Spine core: parsing, validation, euler, transport, flow enumeration."""

import itertools
import random

import pytest

from spinelink.library import BUILTIN_NAMES, builtin, builtin_document
from spinelink.spine import (CrossStep, Spine, SpineError, TwistStep,
                             enumerate_flow_structures, orientation_transport)
from spinelink.spine_io import ParseError, parse_spine, serialize_spine

SPHERE_DOC = """spine sphere
thickening product
face f0
surface f0 genus 0 orientable 1
"""


def test_sphere_parse():
    s = parse_spine(SPHERE_DOC)
    assert s.validate() == []
    assert s.euler_characteristic() == 2
    assert len(s.vertices) == 0 and len(s.edges) == 0 and len(s.faces) == 1


def test_builtins_validate():
    for name in BUILTIN_NAMES:
        s = builtin(name)
        assert s.validate() == [], name


def test_euler_values():
    assert builtin("sphere").euler_characteristic() == 2
    assert builtin("bing_house").euler_characteristic() == 1
    assert builtin("s2xs1_spine").euler_characteristic() == 2
    assert builtin("abalone").euler_characteristic() == 1
    assert builtin("klein_surface").euler_characteristic() == 0


def test_roundtrip_builtins():
    for name in BUILTIN_NAMES:
        doc = builtin_document(name)
        assert serialize_spine(parse_spine(doc)) == doc, name


def test_wing_traversed_twice_rejected():
    doc = builtin_document("bing_house")
    bad = doc.replace("circuit m1: E3+@w3m", "circuit m1: E3+@w3m, E3+@w3m")
    s = parse_spine(bad)
    assert any("traversed twice" in v or "circuit" in v for v in s.validate())


def test_corner_permutation_rejected():
    # swapping two facing targets at one end breaks the local model
    doc = builtin_document("bing_house")
    bad = doc.replace("attach E1:0 w1u faces 1\nattach E1:0 w1d faces 2",
                      "attach E1:0 w1u faces 2\nattach E1:0 w1d faces 1")
    s = parse_spine(bad)
    errs = s.validate()
    assert errs and any("p1" in v or "corner" in v or "facing" in v for v in errs)


def test_parse_errors_have_positions():
    with pytest.raises(ParseError) as ei:
        parse_spine("spine x\nedge q interval\n")
    assert ei.value.line == 2


def test_duplicate_id_rejected():
    with pytest.raises(ParseError):
        parse_spine("spine x\nvertex a\nvertex a\n")


# -- circle edges -------------------------------------------------------

TRIPLE_DISC = """spine triple_disc
edge c circle monodromy 0 0
wings c ca cb cc
face fa
face fb
face fc
circuit fa: c+@ca
circuit fb: c+@cb
circuit fc: c+@cc
"""

WOUND_DISC = """spine wound_disc
edge c circle monodromy 1 0
wings c ca cb cc
face fa
circuit fa: c+@ca, c+@cb, c+@cc
"""


def test_circle_edge_spines():
    s = parse_spine(TRIPLE_DISC)
    assert s.validate() == []
    assert s.euler_characteristic() == 2
    s2 = parse_spine(WOUND_DISC)
    assert s2.validate() == []
    assert s2.euler_characteristic() == 0


def test_flipped_monodromy_moebius_face_rejected():
    doc = """spine bad
edge c circle monodromy 0 1
wings c ca cb cc
face fa
face fb
circuit fa: c+@ca
circuit fb: c+@cb, c+@cc
"""
    s = parse_spine(doc)
    assert s.validate() != []


# -- orientation transport ----------------------------------------------


def _random_cross_path(s, rng, length):
    """Random connected path of edge crossings starting anywhere."""
    wings = [w for e in s.edges.values() for w in e.wings]
    w1 = rng.choice(wings)
    steps = []
    for _ in range(length):
        e = s.wing_owner(w1)
        w2 = rng.choice([w for w in e.wings if w != w1])
        steps.append(CrossStep(w1, w2))
        face = s.pass_site(w2).face
        nxt = [w for w in wings if s.pass_site(w).face == face]
        w1 = rng.choice(nxt)
    return steps


def test_transport_empty_path():
    assert orientation_transport(builtin("bing_house"), []) == 1


def test_transport_multiplicative():
    s = builtin("s2xs1_spine")
    rng = random.Random(7)
    for _ in range(50):
        p1 = _random_cross_path(s, rng, 3)
        # continue from where p1 ends
        face = s.pass_site(p1[-1].w_to).face
        wings = [w for e in s.edges.values() for w in e.wings
                 if s.pass_site(w).face == face]
        w1 = rng.choice(wings)
        e = s.wing_owner(w1)
        w2 = rng.choice([w for w in e.wings if w != w1])
        p2 = [CrossStep(w1, w2)]
        assert (orientation_transport(s, p1 + p2)
                == orientation_transport(s, p1) * orientation_transport(s, p2))


def test_transport_orientable_spines_all_positive():
    # both spines are dual to orientable complexes, so every closed loop
    # preserves the ambient orientation
    for name in ("abalone", "s2xs1_spine", "bing_house"):
        s = builtin(name)
        rng = random.Random(13)
        found_closed = 0
        for _ in range(400):
            steps = _random_cross_path(s, rng, rng.randint(1, 8))
            start = s.pass_site(steps[0].w_from).face
            end = s.pass_site(steps[-1].w_to).face
            if start == end:
                found_closed += 1
                assert orientation_transport(s, steps) == 1, (name, steps)
        assert found_closed > 10


def test_transport_klein_core():
    k = builtin("klein_surface")
    assert orientation_transport(k, [TwistStep()]) == -1
    assert orientation_transport(k, [TwistStep(), TwistStep()]) == 1


def test_transport_disconnected_path_rejected():
    s = builtin("abalone")
    wings = sorted(w for e in s.edges.values() for w in e.wings)
    w1 = wings[0]
    e = s.wing_owner(w1)
    w2 = next(w for w in e.wings if w != w1)
    face_reached = s.pass_site(w2).face
    other = next(w for w in wings
                 if s.pass_site(w).face != face_reached)
    e2 = s.wing_owner(other)
    w3 = next(w for w in e2.wings if w != other)
    with pytest.raises(SpineError):
        orientation_transport(s, [CrossStep(w1, w2), CrossStep(other, w3)])


# -- flow structures ----------------------------------------------------


def _flow_oracle(s):
    """Literal brute force over roles x co-orientations, matching the
    branched local model via the two-arrow-sector reading."""
    out = []
    eids = sorted(s.edges)
    fids = sorted(s.faces)
    sites = {w: s.pass_site(w) for e in s.edges.values() for w in e.wings}
    for rolechoice in itertools.product(*[
            list(itertools.permutations(s.edges[e].wings)) for e in eids]):
        for signs in itertools.product((1, -1), repeat=len(fids)):
            coorient = dict(zip(fids, signs))
            ok = True
            for eid, (fr, un, ov) in zip(eids, rolechoice):
                e = s.edges[eid]
                targets = {}
                for w in e.wings:
                    st = sites[w]
                    targets[w] = st.front if coorient[st.face] > 0 else st.back
                # two-arrow sector must be {over, free}; the under wing must
                # point at the sector it shares with over; {free,under} empty
                hits = {sec: 0 for sec in e.sectors()}
                for w in e.wings:
                    hits[targets[w]] += 1
                s2 = [sec for sec, n in hits.items() if n == 2]
                if len(s2) != 1 or s2[0] != frozenset((ov, fr)):
                    ok = False
                    break
                if targets[un] != frozenset((un, ov)):
                    ok = False
                    break
                if hits[frozenset((fr, un))] != 0:
                    ok = False
                    break
                if e.kind == "circle":
                    mu = e.monodromy_map()
                    if (mu[fr], mu[un], mu[ov]) != (fr, un, ov):
                        ok = False
                        break
            if ok:
                out.append((tuple(rolechoice), signs))
    return out


def test_flow_enumeration_matches_bruteforce():
    for name in ("bing_house", "abalone"):
        s = builtin(name)
        mine = enumerate_flow_structures(s)
        oracle = _flow_oracle(s)
        assert len(mine) == len(oracle), name
        mineset = {(tuple(f.branch[e] for e in sorted(s.edges)),
                    tuple(f.coorient[x] for x in sorted(s.faces))) for f in mine}
        oset = {(rc, sg) for rc, sg in oracle}
        assert mineset == oset, name


def test_sphere_has_two_flows():
    assert len(enumerate_flow_structures(builtin("sphere"))) == 2


def test_flow_counts_regression():
    # counts recorded after the first derivation; brute force is the oracle
    assert len(enumerate_flow_structures(builtin("bing_house"))) == 8
    assert len(enumerate_flow_structures(builtin("abalone"))) == 8
    assert len(enumerate_flow_structures(builtin("s2xs1_spine"))) == 10


def test_builtin_unknown_name():
    with pytest.raises(KeyError):
        builtin("torus_house")
