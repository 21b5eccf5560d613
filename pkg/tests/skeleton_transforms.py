"""Skeleton transformations used by tests: id permutation and time reversal.

Both transformations must repair derived references: containment face indices
follow the lexicographic dart order, and region records point at faces by
their minimal dart, so renaming edges or flipping orientations moves them.
"""

from __future__ import annotations

import json
from dataclasses import replace

from lmfkit.embedded_graph import (
    Containment,
    EdgeRecord,
    EmbeddedGraph,
    VertexRecord,
)
from lmfkit.skeleton import (
    Region,
    Separatrix,
    Skeleton,
    skeleton_from_json,
    skeleton_to_json,
)


def _containment_markers(g: EmbeddedGraph):
    """Surviving identifiers for every containment merge."""
    out = []
    for c in g.containment:
        pair = []
        for root, idx in ((c.inside_component, c.inside_face),
                          (c.component_root, c.outer_face)):
            f = g.local_faces(root)[idx]
            marker = None
            for walk in f.boundary_walks:
                if walk:
                    marker = ("dart", walk[0])
                    break
            pair.append(marker or ("vertex", root))
        out.append(tuple(pair))
    return out


def _rebuild_containment(g: EmbeddedGraph, markers) -> EmbeddedGraph:
    comp = g.components()

    def locate(marker):
        if marker[0] == "vertex":
            root = comp[marker[1]]
            idx = next(i for i, f in enumerate(g.local_faces(root))
                       if () in f.boundary_walks)
            return root, idx
        d = marker[1]
        root = comp[g.dart_vertex(d)]
        idx = next(i for i, f in enumerate(g.local_faces(root))
                   if any(d in w for w in f.boundary_walks))
        return root, idx

    containment = []
    for ma, mb in markers:
        (ra, ia), (rb, ib) = locate(ma), locate(mb)
        containment.append(Containment(component_root=rb, inside_component=ra,
                                       inside_face=ia, outer_face=ib))
    containment.sort(key=lambda c: c.component_root)
    return EmbeddedGraph(vertices=g.vertices, edges=g.edges,
                         containment=tuple(containment))


def _face_key_for(g: EmbeddedGraph, ident) -> tuple:
    """Global face key of the face containing a dart or isolated vertex."""
    from lmfkit.embedded_graph import trace_faces

    for f in trace_faces(g):
        if ident[0] == "dart":
            if any(ident[1] in w for w in f.boundary_walks):
                return f.key
        else:
            if ident[1] in f.wall_roots:
                return f.key
    raise AssertionError(f"no face for {ident}")


def relabel_skeleton(s: Skeleton, suffix: str = "z") -> Skeleton:
    """Rename every element id and repair containment and face references."""
    markers = _containment_markers(s.embedding)
    region_idents = {}
    for rid, r in s.regions.items():
        key = tuple(r.face)
        if key[0] == "dart":
            region_idents[rid] = ("dart", (key[1], key[2]))
        else:
            region_idents[rid] = ("vertex", key[1])

    ids = sorted(set(list(s.points) + list(s.cycles) + list(s.separatrices)
                     + list(s.regions) + list(s.embedding.vertices)
                     + list(s.embedding.edges)), key=len, reverse=True)
    rename = {old: f"q{i}{suffix}" for i, old in enumerate(ids)}

    blob = json.dumps(skeleton_to_json(s))
    for old, new in rename.items():
        blob = blob.replace(f'"{old}"', f'"{new}"')
    out = skeleton_from_json(json.loads(blob))

    def rn_ident(ident):
        if ident[0] == "dart":
            return ("dart", (rename[ident[1][0]], ident[1][1]))
        return ("vertex", rename[ident[1]])

    g = _rebuild_containment(out.embedding,
                             [tuple(rn_ident(m) for m in pair)
                              for pair in markers])
    regions = {}
    for rid, r in out.regions.items():
        old_rid = next(o for o, n in rename.items() if n == rid)
        key = _face_key_for(g, rn_ident(region_idents[old_rid]))
        regions[rid] = replace(r, face=key)
    return Skeleton(points=out.points, cycles=out.cycles,
                    separatrices=out.separatrices, regions=regions,
                    embedding=g)


def time_reverse(s: Skeleton) -> Skeleton:
    """The skeleton of the time-reversed field."""
    markers = _containment_markers(s.embedding)
    flip = {"tail": "head", "head": "tail"}

    kinds = {"hyperbolic_node_attracting": "hyperbolic_node_repelling",
             "hyperbolic_node_repelling": "hyperbolic_node_attracting",
             "hyperbolic_focus_attracting": "hyperbolic_focus_repelling",
             "hyperbolic_focus_repelling": "hyperbolic_focus_attracting"}
    sectors = {"parabolic_attracting": "parabolic_repelling",
               "parabolic_repelling": "parabolic_attracting"}
    points = {pid: replace(p, kind=kinds.get(p.kind, p.kind),
                           sector_cycle=tuple(sectors.get(x, x)
                                              for x in p.sector_cycle))
              for pid, p in s.points.items()}
    stab = {"attracting": "repelling", "repelling": "attracting",
            "semistable": "semistable"}
    side = {"left": "right", "right": "left", None: None}
    # reversing time swaps the cycle's traversal direction, which also swaps
    # which rotation block is its left side; attracting_side stays put in
    # space, so its left/right name flips twice and is preserved
    cycles = {cid: replace(c, stability=stab[c.stability],
                           attracting_side=c.attracting_side)
              for cid, c in s.cycles.items()}
    seps = {sid: Separatrix(sid, sp.edge, alpha=sp.omega, omega=sp.alpha,
                            germ_at_alpha=sp.germ_at_omega,
                            germ_at_omega=sp.germ_at_alpha)
            for sid, sp in s.separatrices.items()}
    edges = {e: EdgeRecord(tail=rec.head, head=rec.tail, label=rec.label,
                           oriented=rec.oriented)
             for e, rec in s.embedding.edges.items()}
    vertices = {v: VertexRecord(label=rec.label,
                                rotation=tuple((e, flip[end])
                                               for e, end in rec.rotation))
                for v, rec in s.embedding.vertices.items()}
    g = EmbeddedGraph(vertices=vertices, edges=edges)
    g = _rebuild_containment(g, [tuple(("dart", (m[1][0], flip[m[1][1]]))
                                       if m[0] == "dart" else m
                                       for m in pair)
                                 for pair in markers])
    regions = {}
    for rid, r in s.regions.items():
        key = tuple(r.face)
        if key[0] == "dart":
            ident = ("dart", (key[1], flip[key[2]]))
        else:
            ident = ("vertex", key[1])
        regions[rid] = Region(rid, _face_key_for(g, ident),
                              alpha=r.omega, omega=r.alpha, flow=r.flow)
    return Skeleton(points=points, cycles=cycles, separatrices=seps,
                    regions=regions, embedding=g)
