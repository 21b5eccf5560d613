"""Acceptance suite: one test per criterion, each printing a pass line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
report.  Tolerances are pinned here and nowhere else.
"""

import random
import time

import numpy as np

from lmfkit import gallery
from lmfkit.embedded_graph import trace_faces
from lmfkit.isotopy import orbital_equivalence, sphere_isotopy
from lmfkit.lmf import build_lmf, classify_faces
from lmfkit.numeric import NumericSettings, detect_limit_cycles, extract_skeleton, find_singular_points
from lmfkit.numeric.fields import exact_circle, saddle_basins, van_der_pol
from lmfkit.skeleton import skeleton_to_json, validate_skeleton
from lmfkit.support import (
    SubSkeleton,
    boundary_report,
    chain_absorption,
    check_sep_property,
    closure,
    connected_components,
    elbs,
    lbs,
    lbs_star,
)
from oracles import brute_force_isotopic, mutate, random_arrangement, scramble
from skeleton_transforms import relabel_skeleton

EXPECTED_LBS = {
    "lbs_ex_a": SubSkeleton.of(),
    "lbs_ex_b": SubSkeleton.of(points=["sad_i", "sad_o"], cycles=["c"],
                               separatrices=["w1", "w2"]),
    "lbs_ex_c": SubSkeleton.of(points=["sad_i", "sad_o"], cycles=["c1", "c2"],
                               separatrices=["w1", "w2"], regions=["r_ann"]),
    "lbs_ex_d": SubSkeleton.of(points=["sad_o", "sn"], cycles=["c"],
                               separatrices=["b1", "b2", "w1"],
                               regions=["r_par"]),
    "lbs_ex_e": SubSkeleton.of(points=["sn1", "sn2"], cycles=["c"],
                               separatrices=["b1", "b2", "g1", "g2"],
                               regions=["r_par1", "r_par2"]),
    "lbs_ex_f": SubSkeleton.of(points=["sn1", "sn2"],
                               separatrices=["glow", "gup"],
                               regions=["r_lens"]),
}


def report(criterion, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance] criterion {criterion}: {status} {detail}")
    assert ok, f"criterion {criterion} failed: {detail}"


def test_criterion_1_fixture_supports():
    t0 = time.time()
    for name, want in sorted(EXPECTED_LBS.items()):
        fam = gallery.FAMILIES[name]()
        got = lbs(fam)
        assert got == want, (name, got.to_json(), want.to_json())
    elapsed = time.time() - t0
    report(1, elapsed < 1.0,
           f"(all six supports exact, {elapsed:.3f}s < 1s)")


def test_criterion_2_equivalence_soundness():
    t0 = time.time()
    heart, lune = gallery.heart(), gallery.lune()
    assert not orbital_equivalence(heart, lune).equivalent
    assert orbital_equivalence(heart, relabel_skeleton(heart)).equivalent
    for name, builder in sorted(gallery.SKELETONS.items()):
        s = builder()
        assert orbital_equivalence(s, builder()).equivalent, name
        assert orbital_equivalence(s, relabel_skeleton(s)).equivalent, name
    elapsed = time.time() - t0
    report(2, elapsed < 1.0,
           f"(reflexive + relabel-invariant on {len(gallery.SKELETONS)} "
           f"fixtures, heart/lune decided, {elapsed:.3f}s < 1s)")


def test_criterion_3_isotopy_oracle():
    t0 = time.time()
    rng = random.Random(20240)
    pairs = 0
    while pairs < 500:
        g1 = random_arrangement(rng)
        while len(g1.vertices) > 6:
            g1 = random_arrangement(rng)
        kind = pairs % 3
        if kind == 0:
            g2 = scramble(g1, rng)
        elif kind == 1:
            g2 = mutate(g1, rng) or scramble(g1, rng)
        else:
            g2 = random_arrangement(rng)
        want = brute_force_isotopic(g1, g2)
        got = sphere_isotopy(g1, g2).equivalent
        assert want == got, (pairs, want, got)
        pairs += 1
    elapsed = time.time() - t0
    report(3, elapsed < 60.0,
           f"(100% agreement on {pairs} pairs, {elapsed:.1f}s < 60s)")


def test_criterion_4_structural_invariants():
    checked = 0
    for name, builder in sorted(gallery.SKELETONS.items()):
        s = builder()
        rep = validate_skeleton(s)  # includes per-component Euler checks
        assert rep.ok, (name, rep.issues)
        assert sum(p.index for p in s.points.values()) == 2, name
        for g in (s.embedding, build_lmf(s).graph):
            faces = trace_faces(g)
            walked = [d for f in faces for w in f.boundary_walks for d in w]
            assert len(walked) == 2 * len(g.edges), name
            assert len(set(walked)) == len(walked), name
        for f in classify_faces(build_lmf(s)):
            assert f.shape in ("disc", "annulus"), name
        checked += 1
    for name, builder in sorted(gallery.FAMILIES.items()):
        fam = builder()
        for c in boundary_report(fam.base, lbs_star(fam)):
            table = {1: c.index == 0, 2: c.index >= 1, 3: c.index == 1}
            assert table[c.type], (name, c)
    report(4, True, f"(Euler, dart partition, index sum, LMF faces, "
                    f"boundary index table on {checked} fixtures)")


def test_criterion_5_support_properties():
    for name, builder in sorted(gallery.FAMILIES.items()):
        fam = builder()
        small, big, star = lbs(fam), elbs(fam.base), lbs_star(fam)
        assert small <= big, name
        assert star <= small, name
        # removing non-interesting cycles removes whole components
        removed = small.cycles - star.cycles
        for comp in connected_components(fam.base, small):
            if comp.cycles & removed:
                assert comp == SubSkeleton.of(cycles=comp.cycles), name
        assert check_sep_property(fam.base, star).ok, name
        saturated = chain_absorption(fam.base, star)
        assert chain_absorption(fam.base, saturated) == saturated, name
    # idempotence from arbitrary closed seeds on the heart
    s = gallery.heart()
    for seed in (SubSkeleton.of(), SubSkeleton.of(points=["p1"]),
                 SubSkeleton.of(points=["s1", "sigma"])):
        z = chain_absorption(s, closure(s, seed))
        assert chain_absorption(s, z) == z
    report(5, True, "(lbs within elbs, star removes components, "
                    "Sep-property holds, absorption idempotent)")


def test_criterion_6_numeric_end_to_end():
    t0 = time.time()
    vdp = extract_skeleton(van_der_pol())
    kinds = sorted(p.kind for p in vdp.points.values())
    assert kinds == ["hyperbolic_focus_repelling", "hyperbolic_node_repelling"]
    assert [c.stability for c in vdp.cycles.values()] == ["attracting"]
    assert not vdp.separatrices
    assert orbital_equivalence(vdp, gallery.van_der_pol_golden()).equivalent
    t_vdp = time.time() - t0

    t0 = time.time()
    st = NumericSettings()
    f = exact_circle()
    pts = find_singular_points(f, st)
    cycles = detect_limit_cycles(f, pts, st)
    assert len(cycles) == 1
    radii = np.hypot(cycles[0].witness[:, 0], cycles[0].witness[:, 1])
    err = float(np.abs(radii - 1.0).max())
    assert err < 1e-6
    circle = extract_skeleton(f)
    assert validate_skeleton(circle).ok
    t_circ = time.time() - t0
    report(6, t_vdp < 30 and t_circ < 30,
           f"(VdP matches golden in {t_vdp:.1f}s; unit-circle cycle within "
           f"{err:.1e} of the exact orbit in {t_circ:.1f}s; both < 30s)")


def test_criterion_7_tolerance_stability():
    st = NumericSettings()
    halved = st.halved()
    for field in (van_der_pol(), exact_circle(), saddle_basins()):
        a = skeleton_to_json(extract_skeleton(field, st))
        b = skeleton_to_json(extract_skeleton(field, halved))
        assert a == b
    report(7, True, "(halved tolerances reproduce identical combinatorial "
                    "skeletons on all three field fixtures)")
