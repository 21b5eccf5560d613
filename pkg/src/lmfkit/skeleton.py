"""Data model and validation for extended separatrix skeletons.

A skeleton is the union of singular points, limit cycles and separatrices of
one vector field on the sphere, stored combinatorially: each cycle is a
self-loop edge at an anchor vertex, each separatrix an oriented edge, and a
separatrix that winds onto a cycle or polycycle attaches at the anchor (or a
polycycle point) in a rotation slot recording its cyclic position around the
limit object.  Canonical regions correspond one-to-one to global faces of
this embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .embedded_graph import (
    HEAD,
    TAIL,
    EmbeddedGraph,
    Face,
    ValidationReport,
    graph_from_json,
    graph_to_json,
    trace_faces,
    validate_embedding,
)

POINT_KINDS = (
    "hyperbolic_saddle",
    "hyperbolic_node_attracting",
    "hyperbolic_node_repelling",
    "hyperbolic_focus_attracting",
    "hyperbolic_focus_repelling",
    "nonhyperbolic",
)

SECTORS = ("hyperbolic", "parabolic_attracting", "parabolic_repelling", "elliptic")


class SkeletonError(ValueError):
    pass


@dataclass(frozen=True)
class LimitObject:
    """An alpha- or omega-limit set: a singular point, a cycle, or a polycycle."""

    kind: str  # "singular_point" | "cycle" | "polycycle"
    ref: str = ""
    separatrices: frozenset[str] = frozenset()
    points: frozenset[str] = frozenset()

    @staticmethod
    def point(pid: str) -> "LimitObject":
        return LimitObject(kind="singular_point", ref=pid)

    @staticmethod
    def cycle(cid: str) -> "LimitObject":
        return LimitObject(kind="cycle", ref=cid)

    @staticmethod
    def polycycle(seps, points) -> "LimitObject":
        return LimitObject(kind="polycycle", separatrices=frozenset(seps),
                           points=frozenset(points))

    def to_json(self):
        if self.kind == "polycycle":
            return {"kind": "polycycle",
                    "separatrices": sorted(self.separatrices),
                    "points": sorted(self.points)}
        return {"kind": self.kind, "id": self.ref}

    @staticmethod
    def from_json(data) -> "LimitObject":
        if data["kind"] == "polycycle":
            return LimitObject.polycycle(data["separatrices"], data["points"])
        return LimitObject(kind=data["kind"], ref=data["id"])


@dataclass(frozen=True)
class SingularPoint:
    id: str
    kind: str
    sector_cycle: tuple[str, ...] = ()
    index: int = 1

    @property
    def hyperbolic(self) -> bool:
        return self.kind != "nonhyperbolic"

    @property
    def n_rays(self) -> int:
        return len(self.sector_cycle)

    def germ_rays(self) -> list[int]:
        """Ray slots bounding at least one hyperbolic sector.

        Ray i lies between sector i-1 and sector i of the cyclic sector list.
        """
        m = len(self.sector_cycle)
        return [i for i in range(m)
                if self.sector_cycle[i - 1] == "hyperbolic"
                or self.sector_cycle[i] == "hyperbolic"]

    def attraction(self) -> str:
        """'attracting', 'repelling' or 'neither' (saddle-like)."""
        if self.kind in ("hyperbolic_node_attracting", "hyperbolic_focus_attracting"):
            return "attracting"
        if self.kind in ("hyperbolic_node_repelling", "hyperbolic_focus_repelling"):
            return "repelling"
        if self.kind == "nonhyperbolic" and self.sector_cycle:
            if all(s == "parabolic_attracting" for s in self.sector_cycle):
                return "attracting"
            if all(s == "parabolic_repelling" for s in self.sector_cycle):
                return "repelling"
        return "neither"


@dataclass(frozen=True)
class LimitCycle:
    id: str
    edge: str
    hyperbolic: bool
    stability: str  # attracting | repelling | semistable
    time_orientation: str = "ccw"  # as seen from the disc on the edge's left
    attracting_side: str | None = None  # left | right, required when semistable


@dataclass(frozen=True)
class Separatrix:
    id: str
    edge: str
    alpha: LimitObject
    omega: LimitObject
    germ_at_alpha: int | None = None  # ray slot at the alpha point
    germ_at_omega: int | None = None

    @property
    def is_connection(self) -> bool:
        return self.germ_at_alpha is not None and self.germ_at_omega is not None

    @property
    def stable(self) -> bool:
        return self.germ_at_omega is not None

    @property
    def unstable(self) -> bool:
        return self.germ_at_alpha is not None


@dataclass(frozen=True)
class Region:
    id: str
    face: tuple  # Face.key of the corresponding global face
    alpha: LimitObject
    omega: LimitObject
    flow: str  # strip | spiral


@dataclass(frozen=True)
class Skeleton:
    points: dict[str, SingularPoint]
    cycles: dict[str, LimitCycle]
    separatrices: dict[str, Separatrix]
    regions: dict[str, Region]
    embedding: EmbeddedGraph
    nest_membership: dict[str, str] = field(default_factory=dict)

    def anchor(self, cid: str) -> str:
        return self.embedding.edges[self.cycles[cid].edge].tail

    def cycle_by_edge(self, edge: str) -> LimitCycle | None:
        for c in self.cycles.values():
            if c.edge == edge:
                return c
        return None

    def sep_by_edge(self, edge: str) -> Separatrix | None:
        for s in self.separatrices.values():
            if s.edge == edge:
                return s
        return None

    def limit_vertices(self, obj: LimitObject) -> set[str]:
        if obj.kind == "singular_point":
            return {obj.ref}
        if obj.kind == "cycle":
            return {self.anchor(obj.ref)}
        return set(obj.points)

    def limit_edges(self, obj: LimitObject) -> set[str]:
        if obj.kind == "singular_point":
            return set()
        if obj.kind == "cycle":
            return {self.cycles[obj.ref].edge}
        return {self.separatrices[s].edge for s in obj.separatrices}

    def faces(self) -> list[Face]:
        return trace_faces(self.embedding)

    def region_by_face(self) -> dict[tuple, Region]:
        return {r.face: r for r in self.regions.values()}

    def end_object(self, sep: Separatrix, end: str) -> LimitObject:
        return sep.alpha if end == TAIL else sep.omega


# ---------------------------------------------------------------------------
# validation


def _bendixson_index(sector_cycle) -> int:
    h = sum(1 for s in sector_cycle if s == "hyperbolic")
    e = sum(1 for s in sector_cycle if s == "elliptic")
    if (h - e) % 2:
        raise SkeletonError(f"sector cycle {sector_cycle} has odd h-e")
    return 1 - (h - e) // 2


def _cyclically_increasing(values: list[int]) -> bool:
    if len(values) <= 1:
        return True
    n = len(values)
    for shift in range(n):
        rolled = values[shift:] + values[:shift]
        if all(rolled[i] < rolled[i + 1] for i in range(n - 1)):
            return True
    return False


def validate_skeleton(s: Skeleton) -> ValidationReport:
    """Check all skeleton invariants and the region/face correspondence."""
    rep = validate_embedding(s.embedding)
    if not rep.ok:
        return rep

    g = s.embedding

    # element universe: every edge is a cycle edge or a separatrix edge
    cycle_edges = {c.edge: cid for cid, c in s.cycles.items()}
    sep_edges = {sp.edge: sid for sid, sp in s.separatrices.items()}
    for e in g.edges:
        if (e in cycle_edges) == (e in sep_edges):
            rep.add(f"edge {e!r} must belong to exactly one of cycles/separatrices")
    anchors = {}
    for cid, c in s.cycles.items():
        if c.edge not in g.edges:
            rep.add(f"cycle {cid!r} references missing edge {c.edge!r}")
            continue
        rec = g.edges[c.edge]
        if rec.tail != rec.head:
            rep.add(f"cycle {cid!r}: edge {c.edge!r} is not a self-loop")
        anchors[rec.tail] = cid
        if c.stability not in ("attracting", "repelling", "semistable"):
            rep.add(f"cycle {cid!r}: unknown stability {c.stability!r}")
        if c.hyperbolic and c.stability == "semistable":
            rep.add(f"cycle {cid!r}: hyperbolic cycles cannot be semistable")
        if c.stability == "semistable" and c.attracting_side not in ("left", "right"):
            rep.add(f"cycle {cid!r}: semistable cycle needs attracting_side")
        if c.time_orientation not in ("cw", "ccw"):
            rep.add(f"cycle {cid!r}: bad time_orientation {c.time_orientation!r}")
    for v in g.vertices:
        if (v in s.points) == (v in anchors):
            rep.add(f"vertex {v!r} must be exactly one of singular point/cycle anchor")

    # singular points
    index_sum = 0
    for pid, p in s.points.items():
        if p.kind not in POINT_KINDS:
            rep.add(f"point {pid!r}: unknown kind {p.kind!r}")
            continue
        for sec in p.sector_cycle:
            if sec not in SECTORS:
                rep.add(f"point {pid!r}: unknown sector {sec!r}")
        index_sum += p.index
        if p.kind == "hyperbolic_saddle":
            if tuple(p.sector_cycle) != ("hyperbolic",) * 4:
                rep.add(f"point {pid!r}: saddle must have four hyperbolic sectors")
            if p.index != -1:
                rep.add(f"point {pid!r}: saddle index must be -1, got {p.index}")
        elif p.kind != "nonhyperbolic":
            if p.sector_cycle:
                rep.add(f"point {pid!r}: nodes and foci carry no sector cycle")
            if p.index != 1:
                rep.add(f"point {pid!r}: node/focus index must be +1")
        else:
            if not p.sector_cycle:
                rep.add(f"point {pid!r}: nonhyperbolic point needs a sector cycle "
                        "(centers are not representable)")
            else:
                try:
                    want = _bendixson_index(p.sector_cycle)
                    if p.index != want:
                        rep.add(f"point {pid!r}: index {p.index} contradicts sector "
                                f"cycle (Bendixson gives {want})")
                except SkeletonError as exc:
                    rep.add(f"point {pid!r}: {exc}")
    if index_sum != 2 and s.points:
        rep.add(f"index sum {index_sum} != 2 over the sphere")

    # separatrix ends, germs, rotations
    germ_fill: dict[tuple[str, int], str] = {}
    for sid, sp in s.separatrices.items():
        if sp.edge not in g.edges:
            rep.add(f"separatrix {sid!r} references missing edge {sp.edge!r}")
            continue
        rec = g.edges[sp.edge]
        if not rec.oriented:
            rep.add(f"separatrix {sid!r}: edge must be time-oriented")
        if sp.germ_at_alpha is None and sp.germ_at_omega is None:
            rep.add(f"separatrix {sid!r}: needs a germ at alpha or omega "
                    "(otherwise it is a regular orbit)")
        for end, obj, germ in ((TAIL, sp.alpha, sp.germ_at_alpha),
                               (HEAD, sp.omega, sp.germ_at_omega)):
            vertex = rec.tail if end == TAIL else rec.head
            err = _check_limit_ref(s, obj)
            if err:
                rep.add(f"separatrix {sid!r}: {err}")
                continue
            if vertex not in s.limit_vertices(obj):
                rep.add(f"separatrix {sid!r}: {end} end sits at {vertex!r}, not on "
                        f"its limit object {obj.to_json()}")
            if germ is not None:
                if obj.kind != "singular_point":
                    rep.add(f"separatrix {sid!r}: germ on a non-point end")
                    continue
                p = s.points.get(obj.ref)
                if p is None:
                    continue
                if germ not in p.germ_rays():
                    rep.add(f"separatrix {sid!r}: germ ray {germ} is not a "
                            f"hyperbolic-sector boundary of point {obj.ref!r}")
                key = (obj.ref, germ)
                if key in germ_fill:
                    rep.add(f"point {obj.ref!r}: ray {germ} claimed by both "
                            f"{germ_fill[key]!r} and {sid!r}")
                germ_fill[key] = sid

    # every hyperbolic-sector boundary must carry exactly one germ
    for pid, p in s.points.items():
        for ray in p.germ_rays():
            if (pid, ray) not in germ_fill:
                rep.add(f"point {pid!r}: orphaned germ slot at ray {ray}")

    # hyperbolic sectors: one ingoing and one outgoing boundary ray
    for pid, p in s.points.items():
        m = p.n_rays
        for i, sec in enumerate(p.sector_cycle):
            if sec != "hyperbolic":
                continue
            dirs = []
            for ray in (i, (i + 1) % m):
                sid = germ_fill.get((pid, ray))
                if sid is None:
                    continue
                sp = s.separatrices[sid]
                if sp.germ_at_alpha == ray and sp.alpha == LimitObject.point(pid):
                    dirs.append("out")
                if sp.germ_at_omega == ray and sp.omega == LimitObject.point(pid):
                    dirs.append("in")
            if sorted(dirs) != ["in", "out"]:
                rep.add(f"point {pid!r}: hyperbolic sector {i} has boundary "
                        f"directions {dirs}, needs one in and one out")

    # rotation order at points matches the ray order; classify stray darts
    for pid, p in s.points.items():
        rot = g.vertices[pid].rotation
        ray_seq = []
        for d in rot:
            sid = sep_edges.get(d[0])
            if sid is None:
                rep.add(f"point {pid!r}: rotation dart {d} is not a separatrix")
                continue
            sp = s.separatrices[sid]
            germ = sp.germ_at_alpha if d[1] == TAIL else sp.germ_at_omega
            obj = sp.alpha if d[1] == TAIL else sp.omega
            if germ is not None and obj == LimitObject.point(pid):
                ray_seq.append(germ)
            else:
                # winding or parabolic attachment: object must cover this point
                if pid not in s.limit_vertices(obj):
                    rep.add(f"point {pid!r}: attached dart {d} belongs to "
                            f"{sid!r} whose limit object does not contain it")
                if obj.kind == "singular_point":
                    att = p.attraction()
                    want = "attracting" if d[1] == HEAD else "repelling"
                    if att == "neither" and not any(
                            sec.startswith("parabolic") for sec in p.sector_cycle):
                        rep.add(f"point {pid!r}: non-germ arrival {sid!r} at a "
                                "point with no parabolic sector")
                    elif att != "neither" and att != want:
                        rep.add(f"point {pid!r}: separatrix {sid!r} "
                                f"{'arrives at' if d[1] == HEAD else 'leaves'} a "
                                f"{att} point")
        if not _cyclically_increasing(ray_seq):
            rep.add(f"point {pid!r}: germ darts out of cyclic ray order: {ray_seq}")

    # anchors: exactly two cycle darts plus winding attachments of that cycle
    for anchor, cid in anchors.items():
        c = s.cycles[cid]
        rot = g.vertices[anchor].rotation
        cyc_darts = [d for d in rot if d[0] == c.edge]
        if len(cyc_darts) != 2:
            rep.add(f"anchor {anchor!r}: cycle edge darts missing from rotation")
            continue
        for d in rot:
            if d[0] == c.edge:
                continue
            sid = sep_edges.get(d[0])
            if sid is None:
                rep.add(f"anchor {anchor!r}: dart {d} is not a separatrix")
                continue
            sp = s.separatrices[sid]
            obj = sp.alpha if d[1] == TAIL else sp.omega
            if obj != LimitObject.cycle(cid):
                rep.add(f"anchor {anchor!r}: separatrix {sid!r} attaches here but "
                        f"its limit object is not cycle {cid!r}")

    if not rep.ok:
        return rep

    # region data versus faces
    try:
        faces = s.faces()
    except Exception as exc:  # pragma: no cover - embedding already validated
        rep.add(str(exc))
        return rep
    by_key = {f.key: f for f in faces}
    seen_keys = set()
    for rid, r in s.regions.items():
        if r.flow not in ("strip", "spiral"):
            rep.add(f"region {rid!r}: unknown flow {r.flow!r}")
        f = by_key.get(tuple(r.face))
        if f is None:
            rep.add(f"region {rid!r}: face {r.face} does not exist")
            continue
        if tuple(r.face) in seen_keys:
            rep.add(f"region {rid!r}: face {r.face} claimed twice")
        seen_keys.add(tuple(r.face))
        if f.shape == "other":
            rep.add(f"region {rid!r}: face has more than two boundary circles")
            continue
        if (r.flow == "spiral") != (f.shape == "annulus"):
            rep.add(f"region {rid!r}: flow {r.flow!r} contradicts face shape "
                    f"{f.shape!r}")
            continue
        for role, obj in (("alpha", r.alpha), ("omega", r.omega)):
            err = _check_limit_ref(s, obj)
            if err:
                rep.add(f"region {rid!r}: {role}: {err}")
                continue
            if not _object_touches_face(s, obj, f):
                rep.add(f"region {rid!r}: {role} object {obj.to_json()} does not "
                        "touch the region's boundary")
        if r.flow == "spiral" and f.shape == "annulus":
            if not _spiral_walls_match(s, r, f):
                rep.add(f"region {rid!r}: annulus walls do not match its limit "
                        "objects")
    missing = set(by_key) - seen_keys
    for key in sorted(missing):
        rep.add(f"face {key} has no region record")

    # optional nest cross-check
    if s.nest_membership:
        computed = {}
        for nest in nests(s):
            for cid in nest.cycles:
                computed[cid] = nest.id
        label_map = {}
        for cid, declared in s.nest_membership.items():
            if cid not in computed:
                rep.add(f"nest_membership references unknown cycle {cid!r}")
                continue
            actual = computed[cid]
            if declared in label_map and label_map[declared] != actual:
                rep.add(f"nest_membership groups cycle {cid!r} incorrectly")
            label_map[declared] = actual
        if len(set(label_map.values())) != len(label_map):
            rep.add("nest_membership splits one nest into several")
    return rep


def _check_limit_ref(s: Skeleton, obj: LimitObject) -> str | None:
    if obj.kind == "singular_point":
        return None if obj.ref in s.points else f"unknown point {obj.ref!r}"
    if obj.kind == "cycle":
        return None if obj.ref in s.cycles else f"unknown cycle {obj.ref!r}"
    if obj.kind == "polycycle":
        for sid in obj.separatrices:
            if sid not in s.separatrices:
                return f"unknown separatrix {sid!r} in polycycle"
            if not s.separatrices[sid].is_connection:
                return f"polycycle member {sid!r} is not a separatrix connection"
        for pid in obj.points:
            if pid not in s.points:
                return f"unknown point {pid!r} in polycycle"
        # closed chain: in-degree equals out-degree and weak connectivity
        indeg = {p: 0 for p in obj.points}
        outdeg = {p: 0 for p in obj.points}
        for sid in obj.separatrices:
            sp = s.separatrices[sid]
            if sp.alpha.kind != "singular_point" or sp.alpha.ref not in obj.points:
                return f"polycycle member {sid!r} leaves the point set"
            if sp.omega.kind != "singular_point" or sp.omega.ref not in obj.points:
                return f"polycycle member {sid!r} leaves the point set"
            outdeg[sp.alpha.ref] += 1
            indeg[sp.omega.ref] += 1
        if any(indeg[p] != outdeg[p] or indeg[p] == 0 for p in obj.points):
            return "polycycle connections do not form a closed chain"
        return None
    return f"unknown limit object kind {obj.kind!r}"


def _object_touches_face(s: Skeleton, obj: LimitObject, face: Face) -> bool:
    elems = face.elements()
    if obj.kind == "singular_point":
        return obj.ref in elems
    if obj.kind == "cycle":
        return s.anchor(obj.ref) in elems or s.cycles[obj.ref].edge in elems
    return bool((s.limit_vertices(obj) | s.limit_edges(obj)) & elems)


def _wall_elements(s: Skeleton, face: Face, i: int) -> set[str]:
    walk = face.boundary_walks[i]
    if not walk:
        return {face.wall_roots[i]}
    out = set()
    for d in walk:
        out.add(d[0])
        out.add(s.embedding.dart_vertex(d))
    return out


def _spiral_walls_match(s: Skeleton, r: Region, face: Face) -> bool:
    def covered(obj: LimitObject) -> set[str]:
        return s.limit_vertices(obj) | s.limit_edges(obj)

    e1, e2 = (_wall_elements(s, face, i) for i in (0, 1))
    a, o = covered(r.alpha), covered(r.omega)
    return (e1 <= a and e2 <= o) or (e1 <= o and e2 <= a)


# ---------------------------------------------------------------------------
# nests


@dataclass(frozen=True)
class Nest:
    id: str
    cycles: tuple[str, ...]
    # per end: (boundary cycle id, singular points in the disc beyond it)
    ends: tuple[tuple[str, frozenset[str]], tuple[str, frozenset[str]]]


def _clean_annulus_between(s: Skeleton, face: Face) -> tuple[str, str] | None:
    """Cycle pair bounding this face if it is a bare cycle-to-cycle annulus."""
    if face.shape != "annulus":
        return None
    found = []
    for walk in face.boundary_walks:
        if not walk:
            return None
        edges = {d[0] for d in walk}
        if len(edges) != 1:
            return None
        edge = next(iter(edges))
        c = s.cycle_by_edge(edge)
        if c is None:
            return None
        found.append(c.id)
    if len(found) == 2 and found[0] != found[1]:
        return (found[0], found[1])
    return None


def _face_adjacency(s: Skeleton, faces: list[Face], blocked: set[str]):
    """Face adjacency skipping boundary elements in `blocked`."""
    by_elem: dict[str, set[int]] = {}
    for i, f in enumerate(faces):
        for el in f.elements():
            if el in blocked:
                continue
            by_elem.setdefault(el, set()).add(i)
    adj: dict[int, set[int]] = {i: set() for i in range(len(faces))}
    for members in by_elem.values():
        for i in members:
            adj[i] |= members - {i}
    return adj


def nests(s: Skeleton) -> list[Nest]:
    """Partition the cycles into nests and report the end discs of each."""
    cycles = sorted(s.cycles)
    parent = {c: c for c in cycles}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    faces = s.faces()
    annuli = {}
    for i, f in enumerate(faces):
        pair = _clean_annulus_between(s, f)
        if pair:
            a, b = find(pair[0]), find(pair[1])
            if a != b:
                parent[max(a, b)] = min(a, b)
            annuli[i] = pair

    groups: dict[str, list[str]] = {}
    for c in cycles:
        groups.setdefault(find(c), []).append(c)

    out = []
    for root, members in sorted(groups.items()):
        ends = _nest_ends(s, faces, annuli, members)
        out.append(Nest(id=f"nest_{root}", cycles=tuple(sorted(members)), ends=ends))
    return out


def _nest_ends(s: Skeleton, faces, annuli, members):
    member_edges = {s.cycles[c].edge for c in members}
    member_anchors = {s.anchor(c) for c in members}
    blocked = member_edges | member_anchors
    adj = _face_adjacency(s, faces, blocked)
    internal = {i for i, pair in annuli.items()
                if pair[0] in members and pair[1] in members}

    # end faces: adjacent to an extreme cycle but not internal to the nest
    ends = []
    for cid in members:
        edge = s.cycles[cid].edge
        touching = [i for i, f in enumerate(faces) if edge in f.elements()]
        for i in touching:
            if i not in internal:
                ends.append((cid, i))
    # flood from each end face and collect singular points
    results = []
    seen_regions = set()
    for cid, start in ends:
        if start in seen_regions:
            continue
        stack, comp = [start], {start}
        while stack:
            cur = stack.pop()
            for nxt in adj[cur]:
                if nxt not in comp:
                    comp.add(nxt)
                    stack.append(nxt)
        seen_regions |= comp
        pts = set()
        for i in comp:
            pts |= {el for el in faces[i].elements() if el in s.points}
        results.append((cid, frozenset(pts)))
    if len(results) == 1:  # single cycle whose two sides flooded together
        results.append(results[0])
    results.sort(key=lambda t: (t[0], sorted(t[1])))
    return (results[0], results[-1])


# ---------------------------------------------------------------------------
# canonical regions and side boundaries


def canonical_regions(s: Skeleton) -> list[Region]:
    """Regions in face order, after validating them against the embedding."""
    rep = validate_skeleton(s)
    if not rep.ok:
        raise SkeletonError("; ".join(rep.issues))
    by_face = s.region_by_face()
    return [by_face[f.key] for f in s.faces()]


@dataclass(frozen=True)
class Chain:
    """Side boundary of a strip region: alternating separatrices and points.

    `elements` interleaves separatrix and point ids starting and ending with a
    separatrix; `start` and `end` are the limit objects the chain joins.
    """

    separatrices: tuple[str, ...]
    points: tuple[str, ...]
    start: LimitObject
    end: LimitObject

    def to_json(self):
        return {"separatrices": list(self.separatrices),
                "points": list(self.points),
                "start": self.start.to_json(),
                "end": self.end.to_json()}


def side_boundaries(s: Skeleton, region_id: str) -> tuple[Chain, ...]:
    """The side chains of a strip region, read off its face walk."""
    r = s.regions[region_id]
    if r.flow == "spiral":
        raise SkeletonError(
            f"region {region_id!r}: spiral region has no side boundaries "
            "(its boundary is its two limit sets)")
    face = next(f for f in s.faces() if f.key == tuple(r.face))
    walk = face.boundary_walks[0]
    g = s.embedding

    limit_vertices = s.limit_vertices(r.alpha) | s.limit_vertices(r.omega)
    limit_edges = s.limit_edges(r.alpha) | s.limit_edges(r.omega)

    n = len(walk)
    arcs: list[list[int]] = []
    cur: list[int] = []
    # choose a starting index at a cut so circular arcs are not split
    start = 0
    for i in range(n):
        if g.dart_vertex(walk[i]) in limit_vertices or walk[i][0] in limit_edges:
            start = i
            break
    for k in range(n):
        i = (start + k) % n
        d = walk[i]
        if d[0] in limit_edges:
            if cur:
                arcs.append(cur)
                cur = []
            continue
        if g.dart_vertex(d) in limit_vertices and cur:
            arcs.append(cur)
            cur = []
        cur.append(i)
    if cur:
        arcs.append(cur)

    chains = []
    for arc in arcs:
        seps = []
        pts = []
        for j, i in enumerate(arc):
            d = walk[i]
            sp = s.sep_by_edge(d[0])
            seps.append(sp.id)
            if j:
                pts.append(g.dart_vertex(d))
        first = s.separatrices[seps[0]]
        entry = g.dart_vertex(walk[arc[0]])
        # orient the chain from alpha(R) to omega(R) when that is unambiguous
        start_obj, end_obj = r.alpha, r.omega
        if entry in s.limit_vertices(r.omega) and entry not in s.limit_vertices(r.alpha):
            seps.reverse()
            pts.reverse()
        elif entry in s.limit_vertices(r.alpha):
            pass
        elif walk[arc[0]][0] in s.limit_edges(r.omega):
            seps.reverse()
            pts.reverse()
        chains.append(Chain(separatrices=tuple(seps), points=tuple(pts),
                            start=start_obj, end=end_obj))
    chains.sort(key=lambda c: (c.separatrices, c.points))
    return tuple(chains)


# ---------------------------------------------------------------------------
# serialization


def _face_key_to_json(key: tuple):
    if key[0] == "dart":
        return {"dart": [key[1], key[2]]}
    return {"vertex": key[1]}


def _face_key_from_json(data) -> tuple:
    if "dart" in data:
        return ("dart", data["dart"][0], data["dart"][1])
    return ("vertex", data["vertex"])


def skeleton_to_json(s: Skeleton) -> dict:
    data = graph_to_json(s.embedding)
    data["singular_points"] = [
        {"id": p.id, "kind": p.kind, "sector_cycle": list(p.sector_cycle),
         "index": p.index}
        for p in sorted(s.points.values(), key=lambda p: p.id)
    ]
    data["cycles"] = [
        {k: v for k, v in (
            ("id", c.id), ("edge", c.edge), ("hyperbolic", c.hyperbolic),
            ("stability", c.stability), ("time_orientation", c.time_orientation),
            ("attracting_side", c.attracting_side)) if v is not None}
        for c in sorted(s.cycles.values(), key=lambda c: c.id)
    ]
    data["separatrices"] = [
        {k: v for k, v in (
            ("id", sp.id), ("edge", sp.edge), ("alpha", sp.alpha.to_json()),
            ("omega", sp.omega.to_json()), ("germ_at_alpha", sp.germ_at_alpha),
            ("germ_at_omega", sp.germ_at_omega)) if v is not None}
        for sp in sorted(s.separatrices.values(), key=lambda sp: sp.id)
    ]
    data["regions"] = [
        {"id": r.id, "face": _face_key_to_json(tuple(r.face)),
         "alpha": r.alpha.to_json(), "omega": r.omega.to_json(), "flow": r.flow}
        for r in sorted(s.regions.values(), key=lambda r: r.id)
    ]
    if s.nest_membership:
        data["nests"] = {c: n for c, n in sorted(s.nest_membership.items())}
    return data


def skeleton_from_json(data: dict) -> Skeleton:
    g = graph_from_json(data)
    points = {
        rec["id"]: SingularPoint(
            id=rec["id"], kind=rec["kind"],
            sector_cycle=tuple(rec.get("sector_cycle", [])),
            index=rec.get("index", 1))
        for rec in data.get("singular_points", [])
    }
    cycles = {
        rec["id"]: LimitCycle(
            id=rec["id"], edge=rec["edge"], hyperbolic=rec["hyperbolic"],
            stability=rec["stability"],
            time_orientation=rec.get("time_orientation", "ccw"),
            attracting_side=rec.get("attracting_side"))
        for rec in data.get("cycles", [])
    }
    seps = {
        rec["id"]: Separatrix(
            id=rec["id"], edge=rec["edge"],
            alpha=LimitObject.from_json(rec["alpha"]),
            omega=LimitObject.from_json(rec["omega"]),
            germ_at_alpha=rec.get("germ_at_alpha"),
            germ_at_omega=rec.get("germ_at_omega"))
        for rec in data.get("separatrices", [])
    }
    regions = {
        rec["id"]: Region(
            id=rec["id"], face=_face_key_from_json(rec["face"]),
            alpha=LimitObject.from_json(rec["alpha"]),
            omega=LimitObject.from_json(rec["omega"]), flow=rec["flow"])
        for rec in data.get("regions", [])
    }
    return Skeleton(points=points, cycles=cycles, separatrices=seps,
                    regions=regions, embedding=g,
                    nest_membership=dict(data.get("nests", {})))
