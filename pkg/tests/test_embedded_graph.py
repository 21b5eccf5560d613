from hypothesis import given, settings
from hypothesis import strategies as st

from lmfkit.embedded_graph import (
    Containment,
    EdgeRecord,
    EmbeddedGraph,
    VertexRecord,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    trace_faces,
    validate_embedding,
)


def single_loop(vertex="v", edge="e"):
    return EmbeddedGraph(
        vertices={vertex: VertexRecord(rotation=((edge, "tail"), (edge, "head")))},
        edges={edge: EdgeRecord(tail=vertex, head=vertex)},
    )


def theta():
    # two vertices joined by three parallel edges, planar embedding
    return EmbeddedGraph(
        vertices={
            "u": VertexRecord(rotation=(("e1", "tail"), ("e2", "tail"), ("e3", "tail"))),
            "v": VertexRecord(rotation=(("e1", "head"), ("e3", "head"), ("e2", "head"))),
        },
        edges={e: EdgeRecord(tail="u", head="v") for e in ("e1", "e2", "e3")},
    )


def test_single_loop_two_disc_faces():
    faces = trace_faces(single_loop())
    assert len(faces) == 2
    assert all(f.shape == "disc" for f in faces)


def test_theta_three_disc_faces():
    faces = trace_faces(theta())
    assert len(faces) == 3
    assert all(f.shape == "disc" for f in faces)
    # V - E + F = 2 - 3 + 3 = 2
    assert 2 - 3 + len(faces) == 2


def test_theta_bad_rotation_violates_euler():
    g = theta()
    bad = EmbeddedGraph(
        vertices={**g.vertices,
                  "v": VertexRecord(rotation=(("e1", "head"), ("e2", "head"), ("e3", "head")))},
        edges=g.edges,
    )
    rep = validate_embedding(bad)
    assert not rep.ok
    assert any("Euler" in issue for issue in rep.issues)


def test_missing_dart_reported():
    g = single_loop()
    bad = EmbeddedGraph(
        vertices={"v": VertexRecord(rotation=(("e", "tail"),))},
        edges=g.edges,
    )
    rep = validate_embedding(bad)
    assert not rep.ok
    assert any("unassigned" in issue for issue in rep.issues)


def two_nested_loops():
    a, b = single_loop("a", "ea"), single_loop("b", "eb")
    # place b inside face 0 of a, with b's face 0 toward a
    return EmbeddedGraph(
        vertices={**a.vertices, **b.vertices},
        edges={**a.edges, **b.edges},
        containment=(Containment(component_root="b", inside_component="a",
                                 inside_face=0, outer_face=0),),
    )


def test_two_loops_make_annulus():
    faces = trace_faces(two_nested_loops())
    assert len(faces) == 3
    shapes = sorted(f.shape for f in faces)
    assert shapes == ["annulus", "disc", "disc"]


def test_isolated_vertices_merge_walls():
    g = EmbeddedGraph(
        vertices={"n": VertexRecord(), "s": VertexRecord()},
        containment=(Containment(component_root="s", inside_component="n",
                                 inside_face=0, outer_face=0),),
    )
    faces = trace_faces(g)
    assert len(faces) == 1
    assert faces[0].shape == "annulus"
    assert faces[0].wall_vertices == ("n", "s")


def test_face_dart_partition():
    for g in (single_loop(), theta(), two_nested_loops()):
        faces = trace_faces(g)
        walked = [d for f in faces for w in f.boundary_walks for d in w]
        assert len(walked) == 2 * len(g.edges)
        assert len(set(walked)) == len(walked)


@settings(max_examples=30, deadline=None)
@given(shift_u=st.integers(0, 2), shift_v=st.integers(0, 2))
def test_faces_invariant_under_cyclic_rotation(shift_u, shift_v):
    g = theta()
    ru = g.vertices["u"].rotation
    rv = g.vertices["v"].rotation
    g2 = EmbeddedGraph(
        vertices={
            "u": VertexRecord(rotation=ru[shift_u:] + ru[:shift_u]),
            "v": VertexRecord(rotation=rv[shift_v:] + rv[:shift_v]),
        },
        edges=g.edges,
    )
    part = lambda gr: sorted(
        tuple(sorted(d for w in f.boundary_walks for d in w)) for f in trace_faces(gr))
    assert part(g) == part(g2)


def test_json_roundtrip():
    g = two_nested_loops()
    data = graph_to_json(g)
    g2 = graph_from_json(data)
    assert graph_to_json(g2) == data


def test_dot_export_mentions_rotation():
    text = graph_to_dot(theta())
    assert "digraph" in text
    assert "rotation u" in text
