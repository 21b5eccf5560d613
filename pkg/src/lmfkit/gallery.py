"""Built-in portrait fixtures.

Each builder returns a validated skeleton (or family data) for one of the
reference portraits used across the test suite and the CLI examples: the
heart and lune polycycle portraits, the six support examples (a)-(f), nest
configurations, a homoclinic "snail", and hand-built goldens for the numeric
front end.  Run ``python -m lmfkit.gallery OUTDIR`` to write them all as JSON
files.
"""

from __future__ import annotations

import sys
from pathlib import Path

from .embedded_graph import Containment, EdgeRecord, EmbeddedGraph, VertexRecord, trace_faces
from .skeleton import (
    LimitCycle,
    LimitObject,
    Region,
    Separatrix,
    SingularPoint,
    Skeleton,
    skeleton_to_json,
    validate_skeleton,
)
from .support import FamilyData, SubSkeleton, family_to_json

H = "hyperbolic"
PA = "parabolic_attracting"
PR = "parabolic_repelling"


def _saddle(pid):
    return SingularPoint(pid, "hyperbolic_saddle", (H, H, H, H), -1)


def _source(pid):
    return SingularPoint(pid, "hyperbolic_node_repelling")


def _sink(pid):
    return SingularPoint(pid, "hyperbolic_node_attracting")


def _focus(pid, stability):
    return SingularPoint(pid, f"hyperbolic_focus_{stability}")


def _saddlenode(pid, parabolic):
    # sectors (H, H, P); rays: 0 boundary, 1 central, 2 boundary
    return SingularPoint(pid, "nonhyperbolic", (H, H, parabolic), 0)


def _nh_node(pid, parabolic):
    return SingularPoint(pid, "nonhyperbolic", (parabolic,), 1)


def pt(pid):
    return LimitObject.point(pid)


def cyc(cid):
    return LimitObject.cycle(cid)


def _t(e):
    return (e, "tail")


def _h(e):
    return (e, "head")


def _build(points, cycles, seps, edges, rotations, region_specs, containments=()):
    """Assemble and validate a skeleton.

    `region_specs`: (id, alpha, omega, flow, must_contain, must_not_contain)
    resolved against the traced global faces.  `containments`:
    (child_root, parent_root, parent_must, parent_must_not, child_must,
    child_must_not) resolved against local faces.
    """
    vertices = {}
    for pid in points:
        vertices[pid] = VertexRecord(label="point", rotation=tuple(rotations.get(pid, ())))
    for c in cycles.values():
        a = edges[c.edge][0]
        vertices[a] = VertexRecord(label="anchor", rotation=tuple(rotations.get(a, ())))
    emb_edges = {}
    for eid, (tail, head) in edges.items():
        label = "cycle" if any(c.edge == eid for c in cycles.values()) else "sep"
        emb_edges[eid] = EdgeRecord(tail=tail, head=head, label=label)
    g = EmbeddedGraph(vertices=vertices, edges=emb_edges)

    cont = []
    for child, parent, p_must, p_not, c_must, c_not in containments:
        cont.append(Containment(
            component_root=child, inside_component=parent,
            inside_face=_local_face_index(g, parent, p_must, p_not),
            outer_face=_local_face_index(g, child, c_must, c_not)))
    g = EmbeddedGraph(vertices=vertices, edges=emb_edges, containment=tuple(cont))

    faces = trace_faces(g)
    regions = {}
    for rid, alpha, omega, flow, must, must_not in region_specs:
        match = [f for f in faces
                 if set(must) <= f.elements() and not (set(must_not) & f.elements())]
        if len(match) != 1:
            raise AssertionError(
                f"region {rid}: witness {must}/{must_not} matched "
                f"{[sorted(f.elements()) for f in match]}")
        regions[rid] = Region(rid, match[0].key, alpha, omega, flow)

    s = Skeleton(points={p.id: p for p in points.values()} if isinstance(points, dict)
                 else {p.id: p for p in points},
                 cycles=cycles, separatrices=seps, regions=regions, embedding=g)
    rep = validate_skeleton(s)
    if not rep.ok:
        raise AssertionError(f"fixture failed validation: {rep.issues}")
    return s


def _local_face_index(g, root, must, must_not):
    """Selectors are element ids (strings) or darts (edge, end) that the
    face's walks must contain."""
    hits = []
    for i, f in enumerate(g.local_faces(root)):
        darts = {d for w in f.boundary_walks for d in w}
        ok = True
        for sel in must:
            ok &= (tuple(sel) in darts) if isinstance(sel, tuple) else (sel in f.elements())
        for sel in must_not:
            ok &= not ((tuple(sel) in darts) if isinstance(sel, tuple) else (sel in f.elements()))
        if ok:
            hits.append(i)
    if len(hits) != 1:
        raise AssertionError(f"containment face of {root}: {must}/{must_not} -> {hits}")
    return hits[0]


def _points(*pts):
    return {p.id: p for p in pts}


# ---------------------------------------------------------------------------
# elementary portraits


def north_south() -> Skeleton:
    return _build(
        points=_points(_source("n"), _sink("s")),
        cycles={}, seps={},
        edges={}, rotations={},
        region_specs=[("r", pt("n"), pt("s"), "spiral", ["n", "s"], [])],
        containments=[("s", "n", ["n"], [], ["s"], [])],
    )


def generic_saddle() -> Skeleton:
    """Fixture (a): a structurally stable field with one saddle."""
    seps = {
        "sta": Separatrix("sta", "sta", pt("sigma"), pt("sad"), germ_at_omega=0),
        "stb": Separatrix("stb", "stb", pt("sigma"), pt("sad"), germ_at_omega=2),
        "u1": Separatrix("u1", "u1", pt("sad"), pt("s1"), germ_at_alpha=1),
        "u2": Separatrix("u2", "u2", pt("sad"), pt("s2"), germ_at_alpha=3),
    }
    return _build(
        points=_points(_source("sigma"), _saddle("sad"), _sink("s1"), _sink("s2")),
        cycles={}, seps=seps,
        edges={"sta": ("sigma", "sad"), "stb": ("sigma", "sad"),
               "u1": ("sad", "s1"), "u2": ("sad", "s2")},
        rotations={
            "sad": [_h("sta"), _t("u1"), _h("stb"), _t("u2")],
            "sigma": [_t("sta"), _t("stb")],
            "s1": [_h("u1")], "s2": [_h("u2")],
        },
        region_specs=[
            ("r1", pt("sigma"), pt("s1"), "strip", ["s1"], []),
            ("r2", pt("sigma"), pt("s2"), "strip", ["s2"], []),
        ],
    )


def heart() -> Skeleton:
    """Two saddle connections bounding a monodromic polycycle with an
    interior repelling focus; the exterior drains to two sinks."""
    seps = {
        "gl": Separatrix("gl", "gl", pt("p1"), pt("p2"),
                         germ_at_alpha=3, germ_at_omega=0),
        "gr": Separatrix("gr", "gr", pt("p2"), pt("p1"),
                         germ_at_alpha=3, germ_at_omega=0),
        "st1": Separatrix("st1", "st1", pt("sigma"), pt("p1"), germ_at_omega=2),
        "u1": Separatrix("u1", "u1", pt("p1"), pt("s1"), germ_at_alpha=1),
        "st2": Separatrix("st2", "st2", pt("sigma"), pt("p2"), germ_at_omega=2),
        "u2": Separatrix("u2", "u2", pt("p2"), pt("s2"), germ_at_alpha=1),
    }
    polycycle = LimitObject.polycycle(["gl", "gr"], ["p1", "p2"])
    return _build(
        points=_points(_focus("f", "repelling"), _saddle("p1"), _saddle("p2"),
                       _source("sigma"), _sink("s1"), _sink("s2")),
        cycles={}, seps=seps,
        edges={"gl": ("p1", "p2"), "gr": ("p2", "p1"),
               "st1": ("sigma", "p1"), "u1": ("p1", "s1"),
               "st2": ("sigma", "p2"), "u2": ("p2", "s2")},
        rotations={
            "p1": [_h("gr"), _t("u1"), _h("st1"), _t("gl")],
            "p2": [_h("gl"), _t("u2"), _h("st2"), _t("gr")],
            "sigma": [_t("st1"), _t("st2")],
            "s1": [_h("u1")], "s2": [_h("u2")],
        },
        region_specs=[
            ("r_int", pt("f"), polycycle, "spiral", ["f"], []),
            ("r_s1", pt("sigma"), pt("s1"), "strip", ["s1"], []),
            ("r_s2", pt("sigma"), pt("s2"), "strip", ["s2"], []),
        ],
        containments=[("f", "p1", ["gl", "gr"], ["st1"], ["f"], [])],
    )


def heart_polycycle(s: Skeleton | None = None) -> LimitObject:
    return LimitObject.polycycle(["gl", "gr"], ["p1", "p2"])


def lune() -> Skeleton:
    """Two meridian connections between two saddles; each saddle keeps one
    free separatrix inside the lens and one outside."""
    seps = {
        "m1": Separatrix("m1", "m1", pt("p1"), pt("p2"),
                         germ_at_alpha=1, germ_at_omega=0),
        "m2": Separatrix("m2", "m2", pt("p1"), pt("p2"),
                         germ_at_alpha=3, germ_at_omega=2),
        "sti": Separatrix("sti", "sti", pt("sig_i"), pt("p1"), germ_at_omega=0),
        "sto": Separatrix("sto", "sto", pt("sig_o"), pt("p1"), germ_at_omega=2),
        "uni": Separatrix("uni", "uni", pt("p2"), pt("snk_i"), germ_at_alpha=1),
        "uno": Separatrix("uno", "uno", pt("p2"), pt("snk_o"), germ_at_alpha=3),
    }
    return _build(
        points=_points(_saddle("p1"), _saddle("p2"), _source("sig_i"),
                       _sink("snk_i"), _source("sig_o"), _sink("snk_o")),
        cycles={}, seps=seps,
        edges={"m1": ("p1", "p2"), "m2": ("p1", "p2"),
               "sti": ("sig_i", "p1"), "sto": ("sig_o", "p1"),
               "uni": ("p2", "snk_i"), "uno": ("p2", "snk_o")},
        rotations={
            "p1": [_h("sti"), _t("m1"), _h("sto"), _t("m2")],
            "p2": [_h("m1"), _t("uni"), _h("m2"), _t("uno")],
            "sig_i": [_t("sti")], "sig_o": [_t("sto")],
            "snk_i": [_h("uni")], "snk_o": [_h("uno")],
        },
        region_specs=[
            ("r_in", pt("sig_i"), pt("snk_i"), "strip", ["snk_i"], []),
            ("r_out", pt("sig_o"), pt("snk_o"), "strip", ["snk_o"], []),
        ],
    )


# ---------------------------------------------------------------------------
# cycle portraits (fixtures b-e and the nest examples)


def semistable_saddles() -> Skeleton:
    """Fixture (b): a semistable cycle with saddle separatrices winding onto
    it from both sides."""
    seps = {
        "sta": Separatrix("sta", "sta", pt("sig_o"), pt("sad_o"), germ_at_omega=0),
        "stb": Separatrix("stb", "stb", pt("sig_o"), pt("sad_o"), germ_at_omega=2),
        "w1": Separatrix("w1", "w1", pt("sad_o"), cyc("c"), germ_at_alpha=1),
        "u1": Separatrix("u1", "u1", pt("sad_o"), pt("snk_o"), germ_at_alpha=3),
        "w2": Separatrix("w2", "w2", cyc("c"), pt("sad_i"), germ_at_omega=0),
        "st2b": Separatrix("st2b", "st2b", pt("sig_i"), pt("sad_i"), germ_at_omega=2),
        "un2a": Separatrix("un2a", "un2a", pt("sad_i"), pt("snk_i"), germ_at_alpha=1),
        "un2b": Separatrix("un2b", "un2b", pt("sad_i"), pt("snk_i"), germ_at_alpha=3),
    }
    cycles = {"c": LimitCycle("c", "c", hyperbolic=False, stability="semistable",
                              attracting_side="right")}
    return _build(
        points=_points(_source("sig_o"), _saddle("sad_o"), _sink("snk_o"),
                       _saddle("sad_i"), _source("sig_i"), _sink("snk_i")),
        cycles=cycles, seps=seps,
        edges={"c": ("ac", "ac"), "sta": ("sig_o", "sad_o"),
               "stb": ("sig_o", "sad_o"), "w1": ("sad_o", "ac"),
               "u1": ("sad_o", "snk_o"), "w2": ("ac", "sad_i"),
               "st2b": ("sig_i", "sad_i"), "un2a": ("sad_i", "snk_i"),
               "un2b": ("sad_i", "snk_i")},
        rotations={
            "ac": [_t("c"), _t("w2"), _h("c"), _h("w1")],
            "sad_o": [_h("sta"), _t("w1"), _h("stb"), _t("u1")],
            "sad_i": [_h("w2"), _t("un2a"), _h("st2b"), _t("un2b")],
            "sig_o": [_t("sta"), _t("stb")], "snk_o": [_h("u1")],
            "sig_i": [_t("st2b")], "snk_i": [_h("un2a"), _h("un2b")],
        },
        region_specs=[
            ("r_w", pt("sig_o"), cyc("c"), "strip", ["w1"], []),
            ("r_su", pt("sig_o"), pt("snk_o"), "strip", ["u1"], []),
            ("r_w2", cyc("c"), pt("snk_i"), "strip", ["w2"], []),
            ("r_si", pt("sig_i"), pt("snk_i"), "strip", ["st2b"], []),
        ],
    )


def double_semistable() -> Skeleton:
    """Fixture (c): a nest of two semistable cycles whose clean annulus is a
    spiral region; saddles wind onto the nest from both ends."""
    seps = {
        "w2": Separatrix("w2", "w2", pt("sad_i"), cyc("c1"), germ_at_alpha=0),
        "st2a": Separatrix("st2a", "st2a", pt("sig_i"), pt("sad_i"), germ_at_omega=1),
        "un2": Separatrix("un2", "un2", pt("sad_i"), pt("snk_i"), germ_at_alpha=2),
        "st2b": Separatrix("st2b", "st2b", pt("sig_i"), pt("sad_i"), germ_at_omega=3),
        "w1": Separatrix("w1", "w1", cyc("c2"), pt("sad_o"), germ_at_omega=0),
        "un1a": Separatrix("un1a", "un1a", pt("sad_o"), pt("snk_o"), germ_at_alpha=1),
        "st1": Separatrix("st1", "st1", pt("sig_o"), pt("sad_o"), germ_at_omega=2),
        "un1b": Separatrix("un1b", "un1b", pt("sad_o"), pt("snk_o"), germ_at_alpha=3),
    }
    cycles = {
        "c1": LimitCycle("c1", "c1", hyperbolic=False, stability="semistable",
                         attracting_side="left"),
        "c2": LimitCycle("c2", "c2", hyperbolic=False, stability="semistable",
                         attracting_side="left"),
    }
    return _build(
        points=_points(_saddle("sad_i"), _source("sig_i"), _sink("snk_i"),
                       _saddle("sad_o"), _source("sig_o"), _sink("snk_o")),
        cycles=cycles, seps=seps,
        edges={"c1": ("a1", "a1"), "c2": ("a2", "a2"),
               "w2": ("sad_i", "a1"), "st2a": ("sig_i", "sad_i"),
               "un2": ("sad_i", "snk_i"), "st2b": ("sig_i", "sad_i"),
               "w1": ("a2", "sad_o"), "un1a": ("sad_o", "snk_o"),
               "st1": ("sig_o", "sad_o"), "un1b": ("sad_o", "snk_o")},
        rotations={
            "a1": [_t("c1"), _h("w2"), _h("c1")],
            "a2": [_t("c2"), _h("c2"), _t("w1")],
            "sad_i": [_t("w2"), _h("st2a"), _t("un2"), _h("st2b")],
            "sad_o": [_h("w1"), _t("un1a"), _h("st1"), _t("un1b")],
            "sig_i": [_t("st2a"), _t("st2b")], "snk_i": [_h("un2")],
            "sig_o": [_t("st1")], "snk_o": [_h("un1a"), _h("un1b")],
        },
        region_specs=[
            ("r_ann", cyc("c1"), cyc("c2"), "spiral", ["c1", "c2"], []),
            ("r_wi", pt("sig_i"), cyc("c1"), "strip", ["w2"], []),
            ("r_si", pt("sig_i"), pt("snk_i"), "strip", ["un2"], []),
            ("r_wo", cyc("c2"), pt("snk_o"), "strip", ["w1"], []),
            ("r_so", pt("sig_o"), pt("snk_o"), "strip", ["st1"], []),
        ],
        containments=[("a1", "a2", [("c2", "head")], [], [("c1", "tail")], [])],
    )


def saddlenode_cycle() -> Skeleton:
    """Fixture (d): a semistable cycle feeding the parabolic sector of an
    interior saddlenode; an outer saddle separatrix winds onto the cycle."""
    seps = {
        "sta": Separatrix("sta", "sta", pt("sig_o"), pt("sad_o"), germ_at_omega=0),
        "stb": Separatrix("stb", "stb", pt("sig_o"), pt("sad_o"), germ_at_omega=2),
        "w1": Separatrix("w1", "w1", pt("sad_o"), cyc("c"), germ_at_alpha=1),
        "u1": Separatrix("u1", "u1", pt("sad_o"), pt("snk_o"), germ_at_alpha=3),
        "b1": Separatrix("b1", "b1", cyc("c"), pt("sn"), germ_at_omega=0),
        "b2": Separatrix("b2", "b2", cyc("c"), pt("sn"), germ_at_omega=2),
        "cen": Separatrix("cen", "cen", pt("sn"), pt("f"), germ_at_alpha=1),
    }
    cycles = {"c": LimitCycle("c", "c", hyperbolic=False, stability="semistable",
                              attracting_side="right")}
    return _build(
        points=_points(_source("sig_o"), _saddle("sad_o"), _sink("snk_o"),
                       _saddlenode("sn", PA), _focus("f", "attracting")),
        cycles=cycles, seps=seps,
        edges={"c": ("ac", "ac"), "sta": ("sig_o", "sad_o"),
               "stb": ("sig_o", "sad_o"), "w1": ("sad_o", "ac"),
               "u1": ("sad_o", "snk_o"), "b1": ("ac", "sn"), "b2": ("ac", "sn"),
               "cen": ("sn", "f")},
        rotations={
            "ac": [_t("c"), _t("b1"), _t("b2"), _h("c"), _h("w1")],
            "sad_o": [_h("sta"), _t("w1"), _h("stb"), _t("u1")],
            "sn": [_h("b1"), _t("cen"), _h("b2")],
            "f": [_h("cen")],
            "sig_o": [_t("sta"), _t("stb")], "snk_o": [_h("u1")],
        },
        region_specs=[
            ("r_w", pt("sig_o"), cyc("c"), "strip", ["w1"], []),
            ("r_su", pt("sig_o"), pt("snk_o"), "strip", ["u1"], []),
            ("r_par", cyc("c"), pt("sn"), "strip", ["b1"], ["cen"]),
            ("r_ii", cyc("c"), pt("f"), "strip", ["cen"], []),
        ],
    )


def saddlenode_pair_cycle() -> Skeleton:
    """Fixture (e): a semistable cycle between the parabolic sectors of two
    saddlenodes, with no hyperbolic saddles at all."""
    seps = {
        "b1": Separatrix("b1", "b1", cyc("c"), pt("sn1"), germ_at_omega=0),
        "b2": Separatrix("b2", "b2", cyc("c"), pt("sn1"), germ_at_omega=2),
        "cen1": Separatrix("cen1", "cen1", pt("sn1"), pt("f"), germ_at_alpha=1),
        "g1": Separatrix("g1", "g1", pt("sn2"), cyc("c"), germ_at_alpha=0),
        "g2": Separatrix("g2", "g2", pt("sn2"), cyc("c"), germ_at_alpha=2),
        "cen2": Separatrix("cen2", "cen2", pt("sig_o"), pt("sn2"), germ_at_omega=1),
    }
    cycles = {"c": LimitCycle("c", "c", hyperbolic=False, stability="semistable",
                              attracting_side="right")}
    return _build(
        points=_points(_saddlenode("sn1", PA), _focus("f", "attracting"),
                       _saddlenode("sn2", PR), _source("sig_o")),
        cycles=cycles, seps=seps,
        edges={"c": ("ac", "ac"), "b1": ("ac", "sn1"), "b2": ("ac", "sn1"),
               "cen1": ("sn1", "f"), "g1": ("sn2", "ac"), "g2": ("sn2", "ac"),
               "cen2": ("sig_o", "sn2")},
        rotations={
            "ac": [_t("c"), _t("b1"), _t("b2"), _h("c"), _h("g1"), _h("g2")],
            "sn1": [_h("b1"), _t("cen1"), _h("b2")],
            "sn2": [_t("g1"), _h("cen2"), _t("g2")],
            "f": [_h("cen1")], "sig_o": [_t("cen2")],
        },
        region_specs=[
            ("r_par1", cyc("c"), pt("sn1"), "strip", ["b1"], ["cen1"]),
            ("r_ii", cyc("c"), pt("f"), "strip", ["cen1"], []),
            ("r_par2", pt("sn2"), cyc("c"), "strip", ["g1"], ["cen2"]),
            ("r_oo", pt("sig_o"), cyc("c"), "strip", ["cen2"], []),
        ],
    )


def lips() -> Skeleton:
    """Fixture (f): two saddlenodes with facing parabolic sectors; the lens
    between them is bounded by two separatrix connections."""
    seps = {
        "gup": Separatrix("gup", "gup", pt("sn1"), pt("sn2"),
                          germ_at_alpha=0, germ_at_omega=1),
        "glow": Separatrix("glow", "glow", pt("sn1"), pt("sn2"),
                           germ_at_alpha=2, germ_at_omega=2),
        "wst": Separatrix("wst", "wst", pt("sig"), pt("sn1"), germ_at_omega=1),
        "est": Separatrix("est", "est", pt("sn2"), pt("snk"), germ_at_alpha=0),
    }
    sn2 = SingularPoint("sn2", "nonhyperbolic", (H, PA, H), 0)
    return _build(
        points=_points(_saddlenode("sn1", PR), sn2, _source("sig"), _sink("snk")),
        cycles={}, seps=seps,
        edges={"gup": ("sn1", "sn2"), "glow": ("sn1", "sn2"),
               "wst": ("sig", "sn1"), "est": ("sn2", "snk")},
        rotations={
            "sn1": [_t("gup"), _h("wst"), _t("glow")],
            "sn2": [_t("est"), _h("gup"), _h("glow")],
            "sig": [_t("wst")], "snk": [_h("est")],
        },
        region_specs=[
            ("r_lens", pt("sn1"), pt("sn2"), "strip", ["gup"], ["wst"]),
            ("r_out", pt("sig"), pt("snk"), "strip", ["wst"], []),
        ],
    )


def nest_pair() -> Skeleton:
    """Two nested semistable cycles with a single node inside: a
    non-interesting nest of the second kind."""
    cycles = {
        "c1": LimitCycle("c1", "c1", hyperbolic=False, stability="semistable",
                         attracting_side="right"),
        "c2": LimitCycle("c2", "c2", hyperbolic=False, stability="semistable",
                         attracting_side="right"),
    }
    return _build(
        points=_points(_sink("n"), _source("sig")),
        cycles=cycles, seps={},
        edges={"c1": ("a1", "a1"), "c2": ("a2", "a2")},
        rotations={"a1": [_t("c1"), _h("c1")], "a2": [_t("c2"), _h("c2")]},
        region_specs=[
            ("r_n", cyc("c1"), pt("n"), "spiral", ["n"], []),
            ("r_ann", cyc("c2"), cyc("c1"), "spiral", ["c1", "c2"], []),
            ("r_out", pt("sig"), cyc("c2"), "spiral", ["sig"], []),
        ],
        containments=[
            ("a1", "a2", [("c2", "head")], [], [("c1", "tail")], []),
            ("n", "a1", [("c1", "head")], [], ["n"], []),
            ("sig", "a2", [("c2", "tail")], [], ["sig"], []),
        ],
    )


def nest_split() -> Skeleton:
    """Two cycles separated by a saddle in the annulus between them: two
    one-cycle nests."""
    seps = {
        "v1": Separatrix("v1", "v1", cyc("c2"), pt("sad"), germ_at_omega=0),
        "un1": Separatrix("un1", "un1", pt("sad"), cyc("c1"), germ_at_alpha=1),
        "v2": Separatrix("v2", "v2", cyc("c2"), pt("sad"), germ_at_omega=2),
        "un2": Separatrix("un2", "un2", pt("sad"), pt("smid"), germ_at_alpha=3),
    }
    cycles = {
        "c1": LimitCycle("c1", "c1", hyperbolic=False, stability="semistable",
                         attracting_side="right"),
        "c2": LimitCycle("c2", "c2", hyperbolic=False, stability="semistable",
                         attracting_side="right"),
    }
    return _build(
        points=_points(_sink("n"), _saddle("sad"), _sink("smid"), _source("sig")),
        cycles=cycles, seps=seps,
        edges={"c1": ("a1", "a1"), "c2": ("a2", "a2"), "v1": ("a2", "sad"),
               "un1": ("sad", "a1"), "v2": ("a2", "sad"), "un2": ("sad", "smid")},
        rotations={
            "a1": [_t("c1"), _h("c1"), _h("un1")],
            "a2": [_t("c2"), _t("v1"), _t("v2"), _h("c2")],
            "sad": [_h("v1"), _t("un1"), _h("v2"), _t("un2")],
            "smid": [_h("un2")],
        },
        region_specs=[
            ("r_n", cyc("c1"), pt("n"), "spiral", ["n"], []),
            ("r_w", cyc("c2"), cyc("c1"), "strip", ["un1"], []),
            ("r_m", cyc("c2"), pt("smid"), "strip", ["un2"], []),
            ("r_out", pt("sig"), cyc("c2"), "spiral", ["sig"], []),
        ],
        containments=[
            ("n", "a1", [("c1", "head")], [], ["n"], []),
            ("sig", "a1", [("c2", "tail")], [], ["sig"], []),
        ],
    )


def semistable_nh() -> Skeleton:
    """An interesting semistable cycle between two nonhyperbolic node-like
    points; carries no separatrices at all."""
    cycles = {"c": LimitCycle("c", "c", hyperbolic=False, stability="semistable",
                              attracting_side="left")}
    return _build(
        points=_points(_nh_node("nrep", PR), _nh_node("natt", PA)),
        cycles=cycles, seps={},
        edges={"c": ("ac", "ac")},
        rotations={"ac": [_t("c"), _h("c")]},
        region_specs=[
            ("r_in", pt("nrep"), cyc("c"), "spiral", ["nrep"], []),
            ("r_out", cyc("c"), pt("natt"), "spiral", ["natt"], []),
        ],
        containments=[
            ("nrep", "ac", [("c", "head")], [], ["nrep"], []),
            ("natt", "ac", [("c", "tail")], [], ["natt"], []),
        ],
    )


def snail() -> Skeleton:
    """A homoclinic saddle loop, monodromic inside, with a second saddle
    whose unstable separatrices wind onto the polycycle."""
    pc = LimitObject.polycycle(["lp"], ["p"])
    seps = {
        "lp": Separatrix("lp", "lp", pt("p"), pt("p"),
                         germ_at_alpha=0, germ_at_omega=1),
        "w1": Separatrix("w1", "w1", pt("q"), pc, germ_at_alpha=0),
        "w2": Separatrix("w2", "w2", pt("q"), pc, germ_at_alpha=2),
        "sq1": Separatrix("sq1", "sq1", pt("sig1"), pt("q"), germ_at_omega=1),
        "sq2": Separatrix("sq2", "sq2", pt("sig2"), pt("q"), germ_at_omega=3),
        "stp": Separatrix("stp", "stp", pt("sigo"), pt("p"), germ_at_omega=3),
        "up": Separatrix("up", "up", pt("p"), pt("snko"), germ_at_alpha=2),
    }
    return _build(
        points=_points(_saddle("p"), _saddle("q"), _source("sig1"),
                       _source("sig2"), _source("sigo"), _sink("snko")),
        cycles={}, seps=seps,
        edges={"lp": ("p", "p"), "w1": ("q", "p"), "w2": ("q", "p"),
               "sq1": ("sig1", "q"), "sq2": ("sig2", "q"),
               "stp": ("sigo", "p"), "up": ("p", "snko")},
        rotations={
            "p": [_t("lp"), _h("w1"), _h("w2"), _h("lp"), _t("up"), _h("stp")],
            "q": [_t("w1"), _h("sq1"), _t("w2"), _h("sq2")],
            "sig1": [_t("sq1")], "sig2": [_t("sq2")],
            "sigo": [_t("stp")], "snko": [_h("up")],
        },
        region_specs=[
            ("r_1", pt("sig1"), pc, "strip", ["sq1"], []),
            ("r_2", pt("sig2"), pc, "strip", ["sq2"], []),
            ("r_out", pt("sigo"), pt("snko"), "strip", ["stp"], []),
        ],
    )


def petal() -> Skeleton:
    """A nonhyperbolic point with one hyperbolic and one elliptic sector whose
    homoclinic connection bounds the elliptic petal; the outer side of the
    loop is monodromic and spirals into an attracting node."""
    e = SingularPoint("e", "nonhyperbolic", (H, "elliptic"), 1)
    pc = LimitObject.polycycle(["gam"], ["e"])
    seps = {
        "gam": Separatrix("gam", "gam", pt("e"), pt("e"),
                          germ_at_alpha=0, germ_at_omega=1),
    }
    return _build(
        points=_points(e, _sink("p_att")),
        cycles={}, seps=seps,
        edges={"gam": ("e", "e")},
        rotations={"e": [_t("gam"), _h("gam")], "p_att": []},
        region_specs=[
            ("r_petal", pt("e"), pt("e"), "strip", ["gam"], ["p_att"]),
            ("r_out", pc, pt("p_att"), "spiral", ["p_att"], []),
        ],
        containments=[("p_att", "e", [("gam", "head")], [], ["p_att"], [])],
    )


def double_well_golden() -> Skeleton:
    """Hand-built golden for the double-well extraction: a saddle between two
    repelling foci, both unstable separatrices winding onto one attracting
    cycle, virtual source at infinity."""
    seps = {
        "su_a": Separatrix("su_a", "su_a", pt("sad"), cyc("c"), germ_at_alpha=0),
        "ss_a": Separatrix("ss_a", "ss_a", pt("fl"), pt("sad"), germ_at_omega=1),
        "su_b": Separatrix("su_b", "su_b", pt("sad"), cyc("c"), germ_at_alpha=2),
        "ss_b": Separatrix("ss_b", "ss_b", pt("fr"), pt("sad"), germ_at_omega=3),
    }
    cycles = {"c": LimitCycle("c", "c", hyperbolic=True, stability="attracting",
                              time_orientation="ccw")}
    return _build(
        points=_points(_saddle("sad"), _focus("fl", "repelling"),
                       _focus("fr", "repelling"), _source("infinity")),
        cycles=cycles, seps=seps,
        edges={"c": ("ac", "ac"), "su_a": ("sad", "ac"), "ss_a": ("fl", "sad"),
               "su_b": ("sad", "ac"), "ss_b": ("fr", "sad")},
        rotations={
            "ac": [_t("c"), _h("c"), _h("su_a"), _h("su_b")],
            "sad": [_t("su_a"), _h("ss_a"), _t("su_b"), _h("ss_b")],
            "fl": [_t("ss_a")], "fr": [_t("ss_b")],
        },
        region_specs=[
            ("r_l", pt("fl"), cyc("c"), "strip", ["ss_a"], []),
            ("r_r", pt("fr"), cyc("c"), "strip", ["ss_b"], []),
            ("r_out", pt("infinity"), cyc("c"), "spiral", ["infinity"], []),
        ],
        containments=[("infinity", "ac", [("c", "head")], [], ["infinity"], [])],
    )


def van_der_pol_golden() -> Skeleton:
    """Hand-built golden for the Van der Pol extraction: repelling focus,
    attracting cycle, virtual source at infinity."""
    cycles = {"c": LimitCycle("c", "c", hyperbolic=True, stability="attracting",
                              time_orientation="ccw")}
    return _build(
        points=_points(_focus("f", "repelling"), _source("infinity")),
        cycles=cycles, seps={},
        edges={"c": ("ac", "ac")},
        rotations={"ac": [_t("c"), _h("c")]},
        region_specs=[
            ("r_in", pt("f"), cyc("c"), "spiral", ["f"], []),
            ("r_out", pt("infinity"), cyc("c"), "spiral", ["infinity"], []),
        ],
        containments=[
            ("f", "ac", [("c", "head")], [], ["f"], []),
            ("infinity", "ac", [("c", "tail")], [], ["infinity"], []),
        ],
    )


# ---------------------------------------------------------------------------
# family fixtures (a)-(f)


def _all_seps_closure(s: Skeleton) -> SubSkeleton:
    from .support import closure

    return closure(s, SubSkeleton.of(separatrices=s.separatrices.keys()))


def _all_cycles_closure(s: Skeleton) -> SubSkeleton:
    from .support import closure

    return closure(s, SubSkeleton.of(cycles=s.cycles.keys()))


def _family(s: Skeleton, per_extra: SubSkeleton | None = None,
            sep_extra: SubSkeleton | None = None) -> FamilyData:
    from .support import closure

    per = _all_cycles_closure(s)
    sep = _all_seps_closure(s)
    if per_extra:
        per = closure(s, per | per_extra)
    if sep_extra:
        sep = closure(s, sep | sep_extra)
    return FamilyData(
        base=s, per_closure=per, sep_closure=sep,
        nonhyperbolic_points=frozenset(
            p for p, rec in s.points.items() if not rec.hyperbolic),
        nonhyperbolic_cycles=frozenset(
            c for c, rec in s.cycles.items() if not rec.hyperbolic),
    )


def family_a() -> FamilyData:
    return _family(generic_saddle())


def family_b() -> FamilyData:
    return _family(semistable_saddles())


def family_c() -> FamilyData:
    # connections of nearby fields accumulate onto the whole annulus
    return _family(double_semistable(),
                   sep_extra=SubSkeleton.of(regions=["r_ann"]))


def family_d() -> FamilyData:
    # separatrices accumulate onto the closed parabolic sector
    return _family(saddlenode_cycle(),
                   sep_extra=SubSkeleton.of(regions=["r_par"]))


def family_e() -> FamilyData:
    # cycles accumulate onto both closed parabolic sectors
    return _family(saddlenode_pair_cycle(),
                   per_extra=SubSkeleton.of(regions=["r_par1", "r_par2"]))


def family_f() -> FamilyData:
    # cycles accumulate onto the lens and its bounding connections
    return _family(lips(), per_extra=SubSkeleton.of(regions=["r_lens"]))


def family_heart() -> FamilyData:
    return _family(heart())


SKELETONS = {
    "north_south": north_south,
    "generic_saddle": generic_saddle,
    "heart": heart,
    "lune": lune,
    "semistable_saddles": semistable_saddles,
    "double_semistable": double_semistable,
    "saddlenode_cycle": saddlenode_cycle,
    "saddlenode_pair_cycle": saddlenode_pair_cycle,
    "lips": lips,
    "nest_pair": nest_pair,
    "nest_split": nest_split,
    "semistable_nh": semistable_nh,
    "snail": snail,
    "petal": petal,
    "van_der_pol_golden": van_der_pol_golden,
    "double_well_golden": double_well_golden,
}

FAMILIES = {
    "lbs_ex_a": family_a,
    "lbs_ex_b": family_b,
    "lbs_ex_c": family_c,
    "lbs_ex_d": family_d,
    "lbs_ex_e": family_e,
    "lbs_ex_f": family_f,
    "heart_family": family_heart,
}


def write_all(outdir: str) -> list[str]:
    import json

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, builder in SKELETONS.items():
        path = out / f"{name}.json"
        path.write_text(json.dumps(skeleton_to_json(builder()), indent=2,
                                   sort_keys=True) + "\n")
        written.append(str(path))
    for name, builder in FAMILIES.items():
        path = out / f"{name}.json"
        path.write_text(json.dumps(family_to_json(builder()), indent=2,
                                   sort_keys=True) + "\n")
        written.append(str(path))
    return written


if __name__ == "__main__":
    for path in write_all(sys.argv[1] if len(sys.argv) > 1 else "fixtures"):
        print(path)
