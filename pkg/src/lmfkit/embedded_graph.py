"""Oriented labeled multigraphs combinatorially embedded in the sphere.

A graph is stored as a rotation system: every vertex carries the cyclic,
counterclockwise order of its incident edge-ends (darts).  Disconnected
arrangements carry an explicit containment forest telling which component
sits in which face of which other component; that data cannot be inferred
from rotations alone.

Conventions used throughout the package:

* a dart is a pair ``(edge_id, end)`` with ``end`` in ``{"tail", "head"}``;
  the dart lives at the vertex of that end and points away from it;
* rotations are counterclockwise as seen from outside the sphere;
* face tracing follows ``next(d) = rotation_successor(reverse(d))``, which
  makes every face lie to the *right* of its boundary walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

Dart = tuple[str, str]

TAIL = "tail"
HEAD = "head"


class EmbeddingError(ValueError):
    """Raised when an operation requires a valid embedding and gets none."""


def reverse(dart: Dart) -> Dart:
    edge, end = dart
    return (edge, HEAD if end == TAIL else TAIL)


@dataclass(frozen=True)
class VertexRecord:
    label: str = ""
    rotation: tuple[Dart, ...] = ()


@dataclass(frozen=True)
class EdgeRecord:
    tail: str
    head: str
    label: str = ""
    oriented: bool = True


@dataclass(frozen=True)
class Containment:
    """Places the component rooted at `component_root` inside a face of another.

    `inside_face` is a local face index of the parent component;
    `outer_face` is the local face of the child that abuts the parent.
    """

    component_root: str
    inside_component: str
    inside_face: int
    outer_face: int = 0


@dataclass(frozen=True)
class Face:
    """A global face of the arrangement.

    `boundary_walks` holds one closed dart walk per boundary circle; an
    isolated vertex contributes an empty walk.  `wall_roots` is aligned with
    the walks and names the isolated vertex for empty walls (None otherwise).
    `boundary_elements` collects every edge and vertex id on the boundary.
    """

    boundary_walks: tuple[tuple[Dart, ...], ...]
    wall_roots: tuple[str | None, ...] = ()
    boundary_elements: frozenset[str] = frozenset()

    @property
    def shape(self) -> str:
        n = len(self.boundary_walks)
        if n == 1:
            return "disc"
        if n == 2:
            return "annulus"
        return "other"

    @property
    def wall_vertices(self) -> tuple[str, ...]:
        return tuple(sorted(r for r in self.wall_roots if r is not None))

    @property
    def key(self):
        """Stable identity: lexicographically least dart, else least wall vertex."""
        darts = sorted(d for walk in self.boundary_walks for d in walk)
        if darts:
            return ("dart",) + darts[0]
        return ("vertex", min(self.wall_vertices))

    def elements(self) -> frozenset[str]:
        """Ids of all edges and vertices on this face's boundary."""
        return self.boundary_elements


@dataclass(frozen=True)
class EmbeddedGraph:
    vertices: dict[str, VertexRecord] = field(default_factory=dict)
    edges: dict[str, EdgeRecord] = field(default_factory=dict)
    containment: tuple[Containment, ...] = ()

    # -- basic dart algebra -------------------------------------------------

    def dart_vertex(self, dart: Dart) -> str:
        edge, end = dart
        rec = self.edges[edge]
        return rec.tail if end == TAIL else rec.head

    def darts(self):
        for edge in self.edges:
            yield (edge, TAIL)
            yield (edge, HEAD)

    def rotation_successor(self, dart: Dart) -> Dart:
        rot = self.vertices[self.dart_vertex(dart)].rotation
        i = rot.index(dart)
        return rot[(i + 1) % len(rot)]

    def next_in_face(self, dart: Dart) -> Dart:
        return self.rotation_successor(reverse(dart))

    # -- components ---------------------------------------------------------

    def components(self) -> dict[str, str]:
        """Map vertex -> component root (lexicographically least vertex)."""
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for rec in self.edges.values():
            a, b = find(rec.tail), find(rec.head)
            if a != b:
                parent[max(a, b)] = min(a, b)
        roots = {}
        for v in self.vertices:
            r = find(v)
            roots[v] = r
        # normalize roots to least vertex of each class
        least: dict[str, str] = {}
        for v, r in roots.items():
            least[r] = min(least.get(r, v), v)
        return {v: least[r] for v, r in roots.items()}

    def component_roots(self) -> list[str]:
        return sorted(set(self.components().values()))

    # -- faces ----------------------------------------------------------------

    def _walk_elements(self, walk: tuple[Dart, ...]) -> frozenset[str]:
        out = set()
        for d in walk:
            out.add(d[0])
            out.add(self.dart_vertex(d))
        return frozenset(out)

    def local_faces(self, root: str) -> list[Face]:
        """Local faces of one connected component, sorted by face key."""
        comp = self.components()
        members = {v for v, r in comp.items() if r == root}
        comp_darts = [d for d in self.darts() if self.dart_vertex(d) in members]
        if not comp_darts:
            return [Face(boundary_walks=((),), wall_roots=(root,),
                         boundary_elements=frozenset({root}))]
        faces = []
        seen: set[Dart] = set()
        for start in sorted(comp_darts):
            if start in seen:
                continue
            walk = []
            d = start
            while True:
                walk.append(d)
                seen.add(d)
                d = self.next_in_face(d)
                if d == start:
                    break
                if d in seen:
                    raise EmbeddingError(
                        f"face tracing revisited dart {d} without closing; "
                        f"malformed rotation near vertex {self.dart_vertex(d)!r}"
                    )
            walk = tuple(walk)
            faces.append(Face(boundary_walks=(walk,), wall_roots=(None,),
                              boundary_elements=self._walk_elements(walk)))
        faces.sort(key=lambda f: f.key)
        return faces

    def walk_vertices(self, walk: tuple[Dart, ...]) -> list[str]:
        return [self.dart_vertex(d) for d in walk]


# -- validation ---------------------------------------------------------------


@dataclass
class ValidationReport:
    issues: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues

    def add(self, msg: str) -> None:
        self.issues.append(msg)

    def warn(self, msg: str) -> None:
        self.warnings.append(msg)

    def extend(self, other: "ValidationReport") -> None:
        self.issues.extend(other.issues)
        self.warnings.extend(other.warnings)


def validate_embedding(g: EmbeddedGraph) -> ValidationReport:
    """Check the rotation-system invariants and Euler's formula per component."""
    rep = ValidationReport()
    for eid, rec in g.edges.items():
        for v in (rec.tail, rec.head):
            if v not in g.vertices:
                rep.add(f"edge {eid!r} references missing vertex {v!r}")
    if not rep.ok:
        return rep

    # expected incident darts per vertex
    incident: dict[str, list[Dart]] = {v: [] for v in g.vertices}
    for eid, rec in g.edges.items():
        incident[rec.tail].append((eid, TAIL))
        incident[rec.head].append((eid, HEAD))

    placed: dict[Dart, str] = {}
    for v, vrec in g.vertices.items():
        for d in vrec.rotation:
            if d[0] not in g.edges or d[1] not in (TAIL, HEAD):
                rep.add(f"vertex {v!r}: rotation contains unknown dart {d}")
                continue
            if d in placed:
                rep.add(f"dart {d} appears in rotations of {placed[d]!r} and {v!r}")
            placed[d] = v
            if g.dart_vertex(d) != v:
                rep.add(f"dart {d} sits in rotation of {v!r} but is incident to "
                        f"{g.dart_vertex(d)!r}")
        if sorted(vrec.rotation) != sorted(incident[v]):
            missing = set(incident[v]) - set(vrec.rotation)
            extra = set(vrec.rotation) - set(incident[v])
            if missing:
                rep.add(f"vertex {v!r}: dart unassigned: {sorted(missing)}")
            if extra:
                rep.add(f"vertex {v!r}: foreign darts in rotation: {sorted(extra)}")
    if not rep.ok:
        return rep

    comp = g.components()
    roots = sorted(set(comp.values()))
    faces_by_root = {}
    for root in roots:
        members = [v for v, r in comp.items() if r == root]
        n_edges = sum(1 for rec in g.edges.values() if comp[rec.tail] == root)
        try:
            faces = g.local_faces(root)
        except EmbeddingError as exc:
            rep.add(str(exc))
            continue
        faces_by_root[root] = faces
        euler = len(members) - n_edges + len(faces)
        if euler != 2:
            rep.add(f"component {root!r}: Euler violation V-E+F = "
                    f"{len(members)}-{n_edges}+{len(faces)} = {euler} != 2")

    # containment forest
    roots_set = set(roots)
    children = set()
    for c in g.containment:
        if c.component_root not in roots_set:
            rep.add(f"containment references unknown component {c.component_root!r}")
            continue
        if c.inside_component not in roots_set:
            rep.add(f"containment references unknown parent {c.inside_component!r}")
            continue
        if c.component_root == c.inside_component:
            rep.add(f"component {c.component_root!r} declared inside itself")
            continue
        if c.component_root in children:
            rep.add(f"component {c.component_root!r} has two containment parents")
        children.add(c.component_root)
        for which, root, idx in (("inside_face", c.inside_component, c.inside_face),
                                 ("outer_face", c.component_root, c.outer_face)):
            nf = len(faces_by_root.get(root, []))
            if not (0 <= idx < nf):
                rep.add(f"containment {which}={idx} out of range for component "
                        f"{root!r} with {nf} faces")
    # acyclicity
    parent_of = {c.component_root: c.inside_component for c in g.containment}
    for start in parent_of:
        seen = {start}
        cur = start
        while cur in parent_of:
            cur = parent_of[cur]
            if cur in seen:
                rep.add(f"containment cycle through {start!r}")
                break
            seen.add(cur)
    if len(roots) > 1 and len(children) != len(roots) - 1 and rep.ok:
        rep.add(f"{len(roots)} components need {len(roots) - 1} containment "
                f"entries, got {len(children)}: the arrangement is ambiguous")
    return rep


def trace_faces(g: EmbeddedGraph) -> list[Face]:
    """Global faces of the arrangement: local faces merged across containment."""
    rep = validate_embedding(g)
    if not rep.ok:
        raise EmbeddingError("; ".join(rep.issues))

    comp = g.components()
    roots = sorted(set(comp.values()))
    local = {root: g.local_faces(root) for root in roots}

    # union-find over (root, local face index)
    parent: dict[tuple[str, int], tuple[str, int]] = {}
    for root in roots:
        for i in range(len(local[root])):
            parent[(root, i)] = (root, i)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for c in g.containment:
        a = find((c.inside_component, c.inside_face))
        b = find((c.component_root, c.outer_face))
        if a != b:
            parent[b] = a

    groups: dict[tuple[str, int], list[tuple[str, int]]] = {}
    for key in parent:
        groups.setdefault(find(key), []).append(key)

    faces = []
    for members in groups.values():
        walls = []
        elements: set[str] = set()
        for root, i in members:
            f = local[root][i]
            for walk, wroot in zip(f.boundary_walks, f.wall_roots):
                walls.append((walk, wroot))
            elements |= f.boundary_elements
        walls.sort(key=lambda t: (t[0], t[1] or ""))
        faces.append(Face(boundary_walks=tuple(w for w, _ in walls),
                          wall_roots=tuple(r for _, r in walls),
                          boundary_elements=frozenset(elements)))
    faces.sort(key=lambda f: f.key)
    return faces


# -- serialization ------------------------------------------------------------


def graph_to_json(g: EmbeddedGraph) -> dict:
    return {
        "vertices": [
            {"id": v, "label": rec.label,
             "rotation": [[e, end] for e, end in rec.rotation]}
            for v, rec in sorted(g.vertices.items())
        ],
        "edges": [
            {"id": e, "tail": rec.tail, "head": rec.head,
             "label": rec.label, "oriented": rec.oriented}
            for e, rec in sorted(g.edges.items())
        ],
        "containment": [
            {"component_root": c.component_root,
             "inside_component": c.inside_component,
             "inside_face": c.inside_face,
             "outer_face": c.outer_face}
            for c in sorted(g.containment, key=lambda c: c.component_root)
        ],
    }


def graph_from_json(data: dict) -> EmbeddedGraph:
    vertices = {
        rec["id"]: VertexRecord(
            label=rec.get("label", ""),
            rotation=tuple((e, end) for e, end in rec.get("rotation", [])),
        )
        for rec in data.get("vertices", [])
    }
    edges = {
        rec["id"]: EdgeRecord(
            tail=rec["tail"], head=rec["head"],
            label=rec.get("label", ""), oriented=rec.get("oriented", True),
        )
        for rec in data.get("edges", [])
    }
    containment = tuple(
        Containment(
            component_root=rec["component_root"],
            inside_component=rec["inside_component"],
            inside_face=rec["inside_face"],
            outer_face=rec.get("outer_face", 0),
        )
        for rec in data.get("containment", [])
    )
    return EmbeddedGraph(vertices=vertices, edges=edges, containment=containment)


def graph_to_dot(g: EmbeddedGraph, name: str = "G") -> str:
    """DOT rendering; rotations are emitted as ordered port comments."""
    lines = [f"digraph {name} {{"]
    for v, rec in sorted(g.vertices.items()):
        lines.append(f'  "{v}" [label="{v}:{rec.label}"];')
        ports = ", ".join(f"{e}.{end}" for e, end in rec.rotation)
        lines.append(f"  // rotation {v}: [{ports}]")
    for e, rec in sorted(g.edges.items()):
        attrs = f'label="{e}:{rec.label}"'
        if not rec.oriented:
            attrs += ", dir=none"
        lines.append(f'  "{rec.tail}" -> "{rec.head}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def with_rotation(g: EmbeddedGraph, vertex: str, rotation: tuple[Dart, ...]) -> EmbeddedGraph:
    vertices = dict(g.vertices)
    vertices[vertex] = replace(vertices[vertex], rotation=rotation)
    return replace(g, vertices=vertices)
