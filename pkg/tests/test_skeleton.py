import json
from dataclasses import replace

import pytest

from lmfkit import gallery
from lmfkit.skeleton import (
    Skeleton,
    SkeletonError,
    canonical_regions,
    nests,
    side_boundaries,
    skeleton_from_json,
    skeleton_to_json,
    validate_skeleton,
)

ALL_FIXTURES = sorted(gallery.SKELETONS)


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_fixture_validates(name):
    s = gallery.SKELETONS[name]()
    rep = validate_skeleton(s)
    assert rep.ok, rep.issues


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_index_sum_is_two(name):
    s = gallery.SKELETONS[name]()
    assert sum(p.index for p in s.points.values()) == 2


def _with_point(s, point):
    points = dict(s.points)
    points[point.id] = point
    return Skeleton(points=points, cycles=s.cycles,
                    separatrices=s.separatrices, regions=s.regions,
                    embedding=s.embedding)


def test_index_mutation_rejected():
    s = gallery.generic_saddle()
    bad = _with_point(s, replace(s.points["sad"], index=1))
    rep = validate_skeleton(bad)
    assert not rep.ok
    assert any("index" in issue for issue in rep.issues)


def test_saddle_pair_index_sum_rejected():
    # two saddles and two sinks only: Poincare-Hopf forces rejection
    s = gallery.generic_saddle()
    bad = _with_point(s, replace(s.points["sigma"],
                                 kind="hyperbolic_saddle",
                                 sector_cycle=("hyperbolic",) * 4, index=-1))
    rep = validate_skeleton(bad)
    assert not rep.ok
    assert any("index sum" in issue for issue in rep.issues)


def test_orphaned_germ_rejected():
    s = gallery.generic_saddle()
    seps = dict(s.separatrices)
    seps["u1"] = replace(seps["u1"], germ_at_alpha=None)
    bad = Skeleton(points=s.points, cycles=s.cycles, separatrices=seps,
                   regions=s.regions, embedding=s.embedding)
    rep = validate_skeleton(bad)
    assert not rep.ok
    assert any("orphan" in issue or "germ" in issue for issue in rep.issues)


def test_scrambled_rotation_rejected():
    from lmfkit.embedded_graph import with_rotation

    s = gallery.heart()
    rot = s.embedding.vertices["p1"].rotation
    swapped = (rot[1], rot[0]) + rot[2:]
    bad = Skeleton(points=s.points, cycles=s.cycles,
                   separatrices=s.separatrices, regions=s.regions,
                   embedding=with_rotation(s.embedding, "p1", swapped))
    rep = validate_skeleton(bad)
    assert not rep.ok


def test_wrong_region_flow_rejected():
    s = gallery.heart()
    regions = dict(s.regions)
    regions["r_int"] = replace(regions["r_int"], flow="strip")
    bad = Skeleton(points=s.points, cycles=s.cycles,
                   separatrices=s.separatrices, regions=regions,
                   embedding=s.embedding)
    rep = validate_skeleton(bad)
    assert not rep.ok
    assert any("flow" in issue for issue in rep.issues)


def test_wrong_region_alpha_rejected():
    from lmfkit.skeleton import LimitObject

    s = gallery.heart()
    regions = dict(s.regions)
    regions["r_s1"] = replace(regions["r_s1"],
                              omega=LimitObject.point("s2"))
    bad = Skeleton(points=s.points, cycles=s.cycles,
                   separatrices=s.separatrices, regions=regions,
                   embedding=s.embedding)
    rep = validate_skeleton(bad)
    assert not rep.ok


# ---------------------------------------------------------------------------
# nests


def test_single_cycle_single_nest():
    s = gallery.semistable_nh()
    got = nests(s)
    assert len(got) == 1
    assert got[0].cycles == ("c",)


def test_nested_pair_is_one_nest():
    s = gallery.nest_pair()
    got = nests(s)
    assert len(got) == 1
    assert got[0].cycles == ("c1", "c2")
    end_points = sorted(sorted(pts) for _, pts in got[0].ends)
    assert end_points == [["n"], ["sig"]]


def test_saddle_between_cycles_splits_nests():
    s = gallery.nest_split()
    got = nests(s)
    assert sorted(n.cycles for n in got) == [("c1",), ("c2",)]


def test_double_semistable_one_nest():
    s = gallery.double_semistable()
    got = nests(s)
    assert len(got) == 1
    assert got[0].cycles == ("c1", "c2")


# ---------------------------------------------------------------------------
# canonical regions and side boundaries


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_regions_match_faces(name):
    s = gallery.SKELETONS[name]()
    regs = canonical_regions(s)
    assert len(regs) == len(s.faces())


def test_north_south_region():
    s = gallery.north_south()
    (r,) = canonical_regions(s)
    assert r.flow == "spiral"
    assert r.alpha.ref == "n" and r.omega.ref == "s"


def test_heart_interior_is_spiral_onto_polycycle():
    s = gallery.heart()
    r = s.regions["r_int"]
    assert r.flow == "spiral"
    assert r.alpha.ref == "f"
    assert r.omega.kind == "polycycle"


def test_heart_side_boundaries():
    s = gallery.heart()
    chains = side_boundaries(s, "r_s1")
    got = sorted((c.separatrices, c.points) for c in chains)
    assert got == [(("st1", "u1"), ("p1",)),
                   (("st2", "gr", "u1"), ("p2", "p1"))]


def test_saddle_saddle_strip_single_connection_chains():
    s = gallery.lips()
    chains = side_boundaries(s, "r_lens")
    assert sorted(c.separatrices for c in chains) == [("glow",), ("gup",)]
    assert all(not c.points for c in chains)


def test_homoclinic_petal_single_chain():
    s = gallery.petal()
    chains = side_boundaries(s, "r_petal")
    assert len(chains) == 1
    assert chains[0].separatrices == ("gam",)
    assert chains[0].points == ()


def test_winding_chains_share_central_separatrix():
    s = gallery.saddlenode_cycle()
    chains = side_boundaries(s, "r_ii")
    got = sorted(c.separatrices for c in chains)
    assert got == [("b1", "cen"), ("b2", "cen")]


def test_chain_can_repeat_a_singular_point():
    # the snail's outer region runs through the homoclinic saddle twice:
    # source -> stp -> p -> lp -> p -> up -> sink
    s = gallery.snail()
    chains = side_boundaries(s, "r_out")
    reps = [c for c in chains if c.points == ("p", "p")]
    assert len(reps) == 1
    assert reps[0].separatrices == ("stp", "lp", "up")


def test_side_boundaries_reject_spiral():
    s = gallery.heart()
    with pytest.raises(SkeletonError, match="spiral"):
        side_boundaries(s, "r_int")


def test_chain_alternation_property():
    # every chain alternates separatrix, point, separatrix ...
    for name in ALL_FIXTURES:
        s = gallery.SKELETONS[name]()
        for r in s.regions.values():
            if r.flow != "strip":
                continue
            for chain in side_boundaries(s, r.id):
                assert len(chain.points) == len(chain.separatrices) - 1
                for p, nxt in zip(chain.points, chain.separatrices[1:]):
                    assert p in s.points


# ---------------------------------------------------------------------------
# serialization


@pytest.mark.parametrize("name", ALL_FIXTURES)
def test_json_roundtrip_bit_exact(name):
    s = gallery.SKELETONS[name]()
    blob = json.dumps(skeleton_to_json(s), sort_keys=True, indent=2)
    s2 = skeleton_from_json(json.loads(blob))
    blob2 = json.dumps(skeleton_to_json(s2), sort_keys=True, indent=2)
    assert blob == blob2
    assert validate_skeleton(s2).ok
