import random

import pytest

from lmfkit import gallery
from lmfkit.embedded_graph import (
    EdgeRecord,
    EmbeddedGraph,
    VertexRecord,
    trace_faces,
    validate_embedding,
)
from lmfkit.isotopy import (
    IsotopyError,
    connectify,
    orbital_equivalence,
    rotation_isomorphism,
    sphere_isotopy,
)
from lmfkit.lmf import build_lmf
from oracles import brute_force_isotopic, mutate, random_arrangement, scramble


def theta(labels=("a", "b", "c"), mirror=False):
    ru = (("e1", "tail"), ("e2", "tail"), ("e3", "tail"))
    rv = (("e1", "head"), ("e3", "head"), ("e2", "head"))
    if mirror:
        ru, rv = tuple(reversed(ru)), tuple(reversed(rv))
    return EmbeddedGraph(
        vertices={"u": VertexRecord(rotation=ru), "v": VertexRecord(rotation=rv)},
        edges={e: EdgeRecord(tail="u", head="v", label=l)
               for e, l in zip(("e1", "e2", "e3"), labels)},
    )


def test_identity_mapping():
    g = theta()
    m = rotation_isomorphism(g, g)
    assert m is not None
    assert m.vertices == {"u": "u", "v": "v"}
    assert m.edges == {"e1": "e1", "e2": "e2", "e3": "e3"}


def test_mirrored_labeled_theta_has_no_mapping():
    # distinct edge labels pin the edges, so the mirror is chiral
    assert rotation_isomorphism(theta(), theta(mirror=True)) is None
    assert brute_force_isotopic(theta(), theta(mirror=True)) is False


def test_mirrored_unlabeled_theta_is_amphichiral():
    g1 = theta(labels=("x", "x", "x"))
    g2 = theta(labels=("x", "x", "x"), mirror=True)
    assert rotation_isomorphism(g1, g2) is not None
    assert brute_force_isotopic(g1, g2) is True


def test_disconnected_input_rejected():
    g = gallery.north_south().embedding
    with pytest.raises(IsotopyError, match="sphere_isotopy"):
        rotation_isomorphism(g, g)


def test_connectify_two_loop_annulus():
    from lmfkit.embedded_graph import Containment

    loop = lambda v, e: ({v: VertexRecord(rotation=((e, "tail"), (e, "head")))},
                         {e: EdgeRecord(tail=v, head=v)})
    va, ea = loop("a", "ea")
    vb, eb = loop("b", "eb")
    g = EmbeddedGraph(vertices={**va, **vb}, edges={**ea, **eb},
                      containment=(Containment("b", "a", 0, 0),))
    ann = next(f for f in trace_faces(g) if f.shape == "annulus")
    c = connectify(g, {ann.key: ((0, 0), (1, 0))})
    assert validate_embedding(c).ok
    assert len(set(c.components().values())) == 1
    assert any(rec.label == "*connect*" for rec in c.edges.values())


from skeleton_transforms import relabel_skeleton as _relabel_skeleton


@pytest.mark.parametrize("name", sorted(gallery.SKELETONS))
def test_reflexive_and_relabel_invariant(name):
    s = gallery.SKELETONS[name]()
    assert orbital_equivalence(s, gallery.SKELETONS[name]()).equivalent
    assert orbital_equivalence(s, _relabel_skeleton(s)).equivalent


def test_heart_vs_lune_not_equivalent():
    v = orbital_equivalence(gallery.heart(), gallery.lune())
    assert not v.equivalent


def test_witness_maps_points_to_points():
    s = gallery.heart()
    v = orbital_equivalence(s, _relabel_skeleton(s))
    assert v.equivalent
    assert set(v.mapping.vertices) == set(s.points) | set(s.cycles)
    assert set(v.mapping.edges) == set(s.separatrices)


def test_marker_edges_never_in_mappings():
    l1 = build_lmf(gallery.north_south())
    v = sphere_isotopy(l1.graph, l1.graph)
    assert v.equivalent
    assert all(not e.startswith("mk_") for e in v.mapping.edges)
    assert all(not e.startswith("mk_") for e in v.mapping.edges.values())


from skeleton_transforms import time_reverse as _time_reverse


def test_time_reversed_heart_not_equivalent():
    s = gallery.heart()
    rev = _time_reverse(s)
    from lmfkit.skeleton import validate_skeleton

    assert validate_skeleton(rev).ok, validate_skeleton(rev).issues
    assert not orbital_equivalence(s, rev).equivalent


def test_extra_cycle_not_equivalent():
    v = orbital_equivalence(gallery.van_der_pol_golden(),
                            gallery.north_south())
    assert not v.equivalent


def test_connectify_preserves_euler():
    lmf = build_lmf(gallery.north_south())
    g = lmf.graph
    faces = trace_faces(g)
    annuli = [f for f in faces if f.shape == "annulus"]
    assert len(annuli) == 3
    choices = {}
    for f in annuli:
        choices[f.key] = ((0, 0), (1, 0))
    c = connectify(g, choices)
    rep = validate_embedding(c)
    assert rep.ok, rep.issues
    comp = c.components()
    assert len(set(comp.values())) == 1
    # connected sphere graph: F = E - V + 2
    assert len(trace_faces(c)) == len(c.edges) - len(c.vertices) + 2


def test_equivalence_symmetric_and_transitive_on_corpus():
    lmfs = {name: build_lmf(builder())
            for name, builder in gallery.SKELETONS.items()}
    names = sorted(lmfs)
    verdicts = {}
    for a in names:
        for b in names:
            verdicts[(a, b)] = sphere_isotopy(lmfs[a].graph,
                                              lmfs[b].graph).equivalent
    for a in names:
        assert verdicts[(a, a)]
        for b in names:
            assert verdicts[(a, b)] == verdicts[(b, a)]
            for c in names:
                if verdicts[(a, b)] and verdicts[(b, c)]:
                    assert verdicts[(a, c)]


def test_small_corpus_agreement():
    rng = random.Random(2024)
    for trial in range(60):
        g1 = random_arrangement(rng)
        g2 = (scramble(g1, rng) if trial % 3 == 0 else
              (mutate(g1, rng) or scramble(g1, rng)) if trial % 3 == 1 else
              random_arrangement(rng))
        assert sphere_isotopy(g1, g2).equivalent == brute_force_isotopic(g1, g2)
