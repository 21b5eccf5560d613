"""Sphere-isotopy decisions for embedded labeled graphs.

For connected graphs an orientation-preserving isomorphism is rigid once one
dart correspondence is fixed, so the decision anchors a dart and propagates
through rotation-successor and edge-reversal closure.  Disconnected graphs
whose non-disc faces are annuli are handled by inserting marker edges through
the annuli (in every possible way on one side, canonically on the other) and
deciding the connected problem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .embedded_graph import (
    HEAD,
    TAIL,
    Containment,
    Dart,
    EdgeRecord,
    EmbeddedGraph,
    Face,
    VertexRecord,
    reverse,
    trace_faces,
    validate_embedding,
)

MARKER_LABEL = "*connect*"


class IsotopyError(ValueError):
    pass


@dataclass(frozen=True)
class GraphMapping:
    vertices: dict[str, str]
    edges: dict[str, str]
    faces: dict[tuple, tuple]

    def to_json(self):
        return {"vertices": dict(sorted(self.vertices.items())),
                "edges": dict(sorted(self.edges.items())),
                "faces": {str(list(k)): list(v)
                          for k, v in sorted(self.faces.items())}}


def _single_vertex(g: EmbeddedGraph) -> str | None:
    if not g.edges and len(g.vertices) == 1:
        return next(iter(g.vertices))
    return None


def rotation_isomorphism(g1: EmbeddedGraph, g2: EmbeddedGraph) -> GraphMapping | None:
    """Label-, orientation- and rotation-preserving isomorphism of connected
    valid graphs, or None."""
    for g in (g1, g2):
        rep = validate_embedding(g)
        if not rep.ok:
            raise IsotopyError("invalid embedding: " + "; ".join(rep.issues))
        if len(set(g.components().values())) > 1:
            raise IsotopyError("graph is disconnected; use sphere_isotopy")

    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None

    v1 = _single_vertex(g1)
    if v1 is not None:
        v2 = _single_vertex(g2)
        if v2 is not None and g1.vertices[v1].label == g2.vertices[v2].label:
            return GraphMapping(vertices={v1: v2}, edges={},
                                faces={("vertex", v1): ("vertex", v2)})
        return None

    anchor = min(g1.darts())
    for d2 in sorted(g2.darts()):
        m = _propagate(g1, g2, anchor, d2)
        if m is not None:
            return m
    return None


def _propagate(g1, g2, d1: Dart, d2: Dart) -> GraphMapping | None:
    dmap = {d1: d2}
    stack = [d1]
    while stack:
        d = stack.pop()
        e = dmap[d]
        for f1, f2 in ((reverse(d), reverse(e)),
                       (g1.rotation_successor(d), g2.rotation_successor(e))):
            if f1 in dmap:
                if dmap[f1] != f2:
                    return None
            else:
                dmap[f1] = f2
                stack.append(f1)
    if len(dmap) != 2 * len(g1.edges) or len(set(dmap.values())) != len(dmap):
        return None

    vmap: dict[str, str] = {}
    emap: dict[str, str] = {}
    for d, e in dmap.items():
        v, w = g1.dart_vertex(d), g2.dart_vertex(e)
        if vmap.setdefault(v, w) != w:
            return None
        if emap.setdefault(d[0], e[0]) != e[0]:
            return None
    if len(set(vmap.values())) != len(vmap):
        return None
    for v, w in vmap.items():
        if g1.vertices[v].label != g2.vertices[w].label:
            return None
    for e1, e2 in emap.items():
        r1, r2 = g1.edges[e1], g2.edges[e2]
        if r1.label != r2.label or r1.oriented != r2.oriented:
            return None
        if r1.oriented and dmap[(e1, TAIL)][1] != TAIL:
            return None

    fmap = {}
    root1 = min(g1.vertices)
    root2 = min(g2.vertices)
    faces2 = g2.local_faces(root2)
    dart_to_face2 = {d: f.key for f in faces2 for w in f.boundary_walks for d in w}
    for f in g1.local_faces(root1):
        image = {dart_to_face2[dmap[d]] for w in f.boundary_walks for d in w}
        if len(image) != 1:
            return None
        fmap[f.key] = next(iter(image))
    return GraphMapping(vertices=vmap, edges=emap, faces=fmap)


# ---------------------------------------------------------------------------
# connectify


def _local_face_marker(g: EmbeddedGraph, root: str, idx: int):
    f = g.local_faces(root)[idx]
    for walk in f.boundary_walks:
        if walk:
            return ("dart",) + walk[0]
    return ("vertex", root)


def _find_face_with_marker(g: EmbeddedGraph, root: str, marker) -> int:
    for i, f in enumerate(g.local_faces(root)):
        if marker[0] == "dart":
            if any((marker[1], marker[2]) in w for w in f.boundary_walks):
                return i
        else:
            if () in f.boundary_walks:
                return i
    raise IsotopyError(f"marker {marker} lost while reconnecting")


def connectify(g: EmbeddedGraph,
               choices: dict[tuple, tuple]) -> EmbeddedGraph:
    """Insert one unoriented marker edge through each chosen annular face.

    A choice maps a face key to a pair of wall positions, each
    ``(wall_index, walk_position)``; the marker is spliced into the vertex
    rotation inside the face wedge at that walk position.
    """
    faces = {f.key: f for f in trace_faces(g)}
    for f in faces.values():
        if f.shape == "other":
            raise IsotopyError(f"face {f.key} has more than two boundary circles")

    # remember surviving merges by markers that survive edits
    comp = g.components()
    pierced_walls = set()
    for key in choices:
        face = faces.get(key)
        if face is None or face.shape != "annulus":
            raise IsotopyError(f"choice names a non-annular face {key}")
        for walk, root in zip(face.boundary_walks, face.wall_roots):
            pierced_walls.add(walk[0] if walk else ("vertex", root))
    keep_merges = []
    for c in g.containment:
        ma = _local_face_marker(g, c.inside_component, c.inside_face)
        mb = _local_face_marker(g, c.component_root, c.outer_face)
        face_of = None
        for f in faces.values():
            idents = {w[0] if w else ("vertex", r)
                      for w, r in zip(f.boundary_walks, f.wall_roots)}
            ident_a = (ma[1], ma[2]) if ma[0] == "dart" else ma
            if ident_a in idents:
                face_of = f
                break
        if face_of is not None and face_of.key in choices:
            continue  # this annulus is being pierced
        keep_merges.append((c.inside_component, ma, c.component_root, mb))

    vertices = {v: rec for v, rec in g.vertices.items()}
    edges = dict(g.edges)
    for n, key in enumerate(sorted(choices)):
        face = faces[key]
        mk = f"mk_{n}"
        ends = []
        for wall_idx, pos in choices[key]:
            walk = face.boundary_walks[wall_idx]
            if not walk:
                v = face.wall_roots[wall_idx]
                ends.append((v, None))
            else:
                if not (0 <= pos < len(walk)):
                    raise IsotopyError(f"wall position {pos} out of range")
                ends.append((g.dart_vertex(walk[pos]), walk[pos]))
        (va, da), (vb, db) = ends
        edges[mk] = EdgeRecord(tail=va, head=vb, label=MARKER_LABEL,
                               oriented=False)
        for v, before, end in ((va, da, TAIL), (vb, db, HEAD)):
            rot = list(vertices[v].rotation)
            if before is None:
                rot.append((mk, end))
            else:
                rot.insert(rot.index(before), (mk, end))
            vertices[v] = VertexRecord(label=vertices[v].label,
                                       rotation=tuple(rot))

    out = EmbeddedGraph(vertices=vertices, edges=edges)
    # rebuild the containment forest from the surviving merges
    comp = out.components()
    merges = []
    for old_a, ma, old_b, mb in keep_merges:
        ra = comp[old_a if ma[0] == "vertex" else out.dart_vertex((ma[1], ma[2]))]
        rb = comp[old_b if mb[0] == "vertex" else out.dart_vertex((mb[1], mb[2]))]
        ia = _find_face_with_marker(out, ra, ma)
        ib = _find_face_with_marker(out, rb, mb)
        if ra != rb:
            merges.append(((ra, ia), (rb, ib)))
    roots = sorted(set(comp.values()))
    adj = {r: [] for r in roots}
    for (ra, ia), (rb, ib) in merges:
        adj[ra].append((rb, ib, ia))
        adj[rb].append((ra, ia, ib))
    containment = []
    if roots:
        seen = {roots[0]}
        stack = [roots[0]]
        while stack:
            cur = stack.pop()
            for other, oidx, cidx in adj[cur]:
                if other not in seen:
                    seen.add(other)
                    containment.append(Containment(
                        component_root=other, inside_component=cur,
                        inside_face=cidx, outer_face=oidx))
                    stack.append(other)
        if len(seen) != len(roots):
            raise IsotopyError("connectify left the arrangement disconnected "
                               "in an unexpected way")
    containment.sort(key=lambda c: c.component_root)
    return EmbeddedGraph(vertices=vertices, edges=edges,
                         containment=tuple(containment))


# ---------------------------------------------------------------------------
# sphere isotopy


def _annular_faces(g: EmbeddedGraph) -> list[Face]:
    out = []
    for f in trace_faces(g):
        if f.shape == "other":
            raise IsotopyError(f"face {f.key} has more than two boundary circles")
        if f.shape == "annulus":
            out.append(f)
    return out


def _wall_positions(face: Face, wall_idx: int) -> list[tuple[int, int]]:
    walk = face.boundary_walks[wall_idx]
    if not walk:
        return [(wall_idx, 0)]
    return [(wall_idx, i) for i in range(len(walk))]


def _canonical_position(g: EmbeddedGraph, face: Face, wall_idx: int):
    walk = face.boundary_walks[wall_idx]
    if not walk:
        return (wall_idx, 0)
    best = min(range(len(walk)), key=lambda i: (g.dart_vertex(walk[i]), walk[i], i))
    return (wall_idx, best)


@dataclass(frozen=True)
class IsotopyVerdict:
    equivalent: bool
    mapping: GraphMapping | None
    choices_tried: int

    def to_json(self):
        return {"equivalent": self.equivalent,
                "mapping": self.mapping.to_json() if self.mapping else None,
                "choices_tried": self.choices_tried}


def sphere_isotopy(g1: EmbeddedGraph, g2: EmbeddedGraph) -> IsotopyVerdict:
    """Decide isotopy of arrangements whose non-disc faces are annuli."""
    ann1 = _annular_faces(g1)
    ann2 = _annular_faces(g2)
    if len(ann1) != len(ann2) or len(g1.edges) != len(g2.edges) \
            or len(g1.vertices) != len(g2.vertices):
        return IsotopyVerdict(False, None, 0)

    fixed = {f.key: (_canonical_position(g2, f, 0), _canonical_position(g2, f, 1))
             for f in ann2}
    c2 = connectify(g2, fixed)

    keys1 = [f.key for f in ann1]
    spaces = []
    for f in ann1:
        spaces.append([(p, q) for p in _wall_positions(f, 0)
                       for q in _wall_positions(f, 1)])
    tried = 0
    for combo in itertools.product(*spaces):
        tried += 1
        c1 = connectify(g1, dict(zip(keys1, combo)))
        m = rotation_isomorphism(c1, c2)
        if m is None:
            continue
        vmap = dict(m.vertices)
        emap = {e: f for e, f in m.edges.items()
                if g1.edges.get(e) is not None}
        fmap = _original_face_map(g1, g2, m)
        return IsotopyVerdict(True, GraphMapping(vertices=vmap, edges=emap,
                                                 faces=fmap), tried)
    return IsotopyVerdict(False, None, tried)


def _original_face_map(g1, g2, m: GraphMapping) -> dict:
    faces2 = trace_faces(g2)
    ident_to_face2 = {}
    for f in faces2:
        for walk, root in zip(f.boundary_walks, f.wall_roots):
            if walk:
                for d in walk:
                    ident_to_face2[("dart",) + d] = f.key
            else:
                ident_to_face2[("vertex", root)] = f.key
    out = {}
    for f in trace_faces(g1):
        images = set()
        for walk, root in zip(f.boundary_walks, f.wall_roots):
            if walk:
                for d in walk:
                    e2 = m.edges[d[0]]
                    end = d[1]
                    if g1.edges[d[0]].oriented:
                        images.add(ident_to_face2[("dart", e2, end)])
            else:
                images.add(ident_to_face2[("vertex", m.vertices[root])])
        if len(images) == 1:
            out[f.key] = next(iter(images))
    return out


# ---------------------------------------------------------------------------
# orbital topological equivalence of skeletons


def orbital_equivalence(s1, s2) -> IsotopyVerdict:
    """Equivalence of two skeletons via sphere isotopy of their loop graphs."""
    from .lmf import build_lmf

    l1 = build_lmf(s1)
    l2 = build_lmf(s2)
    verdict = sphere_isotopy(l1.graph, l2.graph)
    if not verdict.equivalent:
        return verdict
    m = verdict.mapping
    points = {}
    cycles = {}
    seps = {}
    for v, w in m.vertices.items():
        p1 = l1.provenance.get(("v", v))
        p2 = l2.provenance.get(("v", w))
        if p1 and p2 and p1[0] == "point" and p2[0] == "point":
            points[p1[1]] = p2[1]
        if p1 and p2 and p1[0] == "cycle" and p2[0] == "cycle":
            cycles[p1[1]] = p2[1]
    for e, f in m.edges.items():
        p1 = l1.provenance.get(("e", e))
        p2 = l2.provenance.get(("e", f))
        if p1 and p2 and p1[0] == "sep" and p2[0] == "sep":
            seps[p1[1]] = p2[1]
    mapping = GraphMapping(vertices={**points, **cycles}, edges=seps,
                           faces=m.faces)
    return IsotopyVerdict(True, mapping, verdict.choices_tried)
