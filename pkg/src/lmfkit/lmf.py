"""Construction of the labeled loop-truncated graph of a skeleton.

The construction inserts one transversal loop per side of each limit cycle,
per monodromic side of each polycycle, and around each attracting or
repelling singular point; truncates every separatrix at the (single) loop it
crosses, splitting the loop at truncation vertices; drops the arc between a
truncation vertex and its limit object; places a marker vertex on each loop
nothing crosses; and adds one homoclinic self-loop per elliptic sector.
Vertices are labeled SP/TV/VLC/VETL, edges SS/US/SC/STS/UTS/LC/OTL/ITL/TES.
"""

from __future__ import annotations

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
    trace_faces,
    validate_embedding,
)
from .skeleton import (
    LimitObject,
    Skeleton,
    SkeletonError,
    validate_skeleton,
)

VERTEX_LABELS = ("SP", "TV", "VLC", "VETL")
EDGE_LABELS = ("SS", "US", "SC", "STS", "UTS", "LC", "OTL", "ITL", "TES")


class LMFError(ValueError):
    pass


@dataclass(frozen=True)
class Loop:
    id: str
    object_key: tuple  # ("point", pid) | ("cycle", cid, side) | ("polycycle", key, role)
    role: str  # "alpha" (outgoing loop) or "omega" (ingoing loop)
    crossings: tuple[str, ...]  # separatrix ids in cyclic order along the loop
    arc_ids: tuple[str, ...]
    vetl: str | None = None

    @property
    def label(self) -> str:
        return "ITL" if self.role == "omega" else "OTL"


@dataclass(frozen=True)
class LMFGraph:
    graph: EmbeddedGraph
    loops: dict[str, Loop]
    provenance: dict[tuple, tuple]
    skeleton: Skeleton

    def tv_of(self, sid: str) -> str:
        return f"tv_{sid}"


def _pc_key(obj: LimitObject) -> tuple:
    return (tuple(sorted(obj.separatrices)), tuple(sorted(obj.points)))


def _rotation_interval(rot, start: Dart, stop: Dart) -> list[Dart]:
    """Darts strictly between start and stop, counterclockwise."""
    i = rot.index(start)
    out = []
    j = (i + 1) % len(rot)
    while rot[j] != stop:
        out.append(rot[j])
        j = (j + 1) % len(rot)
    return out


def _pc_flow_order(s: Skeleton, obj: LimitObject) -> list[str]:
    """Connection ids of a simple polycycle in flow order."""
    out_of = {}
    for sid in obj.separatrices:
        sp = s.separatrices[sid]
        if sp.alpha.ref in out_of:
            raise LMFError(
                "polycycle visits a point twice; winding order on such "
                "polycycles is not supported")
        out_of[sp.alpha.ref] = sid
    start = min(obj.separatrices)
    order = [start]
    cur = s.separatrices[start].omega.ref
    while True:
        nxt = out_of[cur]
        if nxt == start:
            break
        order.append(nxt)
        cur = s.separatrices[nxt].omega.ref
    if len(order) != len(obj.separatrices):
        raise LMFError("polycycle is not a single directed cycle")
    return order


def _pc_side_of_region(s: Skeleton, obj: LimitObject, face: Face) -> str:
    """'left' if the region's walk runs the polycycle backward (head darts)."""
    edges = s.limit_edges(obj)
    ends = {d[1] for w in face.boundary_walks for d in w if d[0] in edges}
    if ends == {HEAD}:
        return "left"
    if ends == {TAIL}:
        return "right"
    raise LMFError("region touches both sides of its polycycle")


def _pc_crossing_block(s: Skeleton, obj: LimitObject, side: str) -> list[Dart]:
    """Winding darts around a polycycle side, in loop order."""
    g = s.embedding
    flow = _pc_flow_order(s, obj)
    visits = []  # (point, departure dart, arrival dart)
    n = len(flow)
    for i, sid in enumerate(flow):
        prev = flow[i - 1]
        p = s.separatrices[sid].alpha.ref
        visits.append((p, (sid, TAIL), (prev, HEAD)))
    if side == "left":
        visits = list(reversed(visits))
    block: list[Dart] = []
    for p, dep, arr in visits:
        rot = g.vertices[p].rotation
        a, b = (dep, arr) if side == "left" else (arr, dep)
        for d in _rotation_interval(rot, a, b):
            sid = _sep_of_edge(s, d[0])
            if sid is None:
                continue
            sp = s.separatrices[sid]
            end_obj = sp.alpha if d[1] == TAIL else sp.omega
            if end_obj.kind == "polycycle" and _pc_key(end_obj) == _pc_key(obj):
                block.append(d)
    return block


def _sep_of_edge(s: Skeleton, edge: str) -> str | None:
    sp = s.sep_by_edge(edge)
    return sp.id if sp else None


def _collect_loops(s: Skeleton) -> list[tuple]:
    """(loop_id, object_key, role, crossing darts at the object)."""
    g = s.embedding
    loops = []

    for pid in sorted(s.points):
        p = s.points[pid]
        att = p.attraction()
        if att == "neither":
            continue
        role = "omega" if att == "attracting" else "alpha"
        block = list(g.vertices[pid].rotation)
        loops.append((f"loop_pt_{pid}", ("point", pid), role, block))

    for cid in sorted(s.cycles):
        c = s.cycles[cid]
        anchor = s.anchor(cid)
        rot = g.vertices[anchor].rotation
        left = _rotation_interval(rot, (c.edge, TAIL), (c.edge, HEAD))
        right = _rotation_interval(rot, (c.edge, HEAD), (c.edge, TAIL))
        for side, block in (("left", left), ("right", right)):
            if c.stability == "attracting":
                role = "omega"
            elif c.stability == "repelling":
                role = "alpha"
            else:
                role = "omega" if c.attracting_side == side else "alpha"
            loops.append((f"loop_cyc_{cid}_{side}", ("cycle", cid, side),
                          role, block))

    # polycycle sides: one loop per (polycycle, role) seen as a region limit
    pc_sides: dict[tuple, LimitObject] = {}
    for r in s.regions.values():
        for role, obj in (("alpha", r.alpha), ("omega", r.omega)):
            if obj.kind == "polycycle":
                pc_sides[(_pc_key(obj), role)] = obj
    for sp in s.separatrices.values():
        for role, obj in (("alpha", sp.alpha), ("omega", sp.omega)):
            if obj.kind == "polycycle" and (_pc_key(obj), role) not in pc_sides:
                raise LMFError(
                    f"separatrix {sp.id!r} winds onto a polycycle side that no "
                    "region declares as its limit set")
    for i, ((key, role), obj) in enumerate(sorted(pc_sides.items())):
        region = next(r for r in s.regions.values()
                      for rr, o in (("alpha", r.alpha), ("omega", r.omega))
                      if rr == role and o.kind == "polycycle" and _pc_key(o) == key)
        face = next(f for f in s.faces() if f.key == tuple(region.face))
        side = _pc_side_of_region(s, obj, face)
        block = _pc_crossing_block(s, obj, side)
        loops.append((f"loop_pc_{i}_{role}", ("polycycle", key, role, side),
                      role, block))
    return loops


def build_lmf(s: Skeleton) -> LMFGraph:
    """Build the labeled loop graph of a valid skeleton."""
    rep = validate_skeleton(s)
    if not rep.ok:
        raise SkeletonError("; ".join(rep.issues))
    g = s.embedding

    raw_loops = _collect_loops(s)
    vertices: dict[str, VertexRecord] = {}
    edges: dict[str, EdgeRecord] = {}
    provenance: dict[tuple, tuple] = {}
    loops: dict[str, Loop] = {}

    # truncation bookkeeping: sep id -> (loop id, dart at object)
    truncated: dict[str, tuple[str, Dart]] = {}
    for lid, key, role, block in raw_loops:
        for d in block:
            sid = _sep_of_edge(s, d[0])
            if sid is None:
                raise LMFError(f"loop {lid}: crossing dart {d} is not a separatrix")
            if sid in truncated:
                raise LMFError(f"separatrix {sid!r} crosses two loops")
            truncated[sid] = (lid, d)

    # separatrix edges
    for sid in sorted(s.separatrices):
        sp = s.separatrices[sid]
        rec = g.edges[sp.edge]
        if sid in truncated:
            lid, d = truncated[sid]
            tv = f"tv_{sid}"
            if d[1] == TAIL:  # alpha end sits on the loop: stable, keep omega arc
                label, tail, head = "STS", tv, rec.head
            else:
                label, tail, head = "UTS", rec.tail, tv
            edges[sid] = EdgeRecord(tail=tail, head=head, label=label)
        else:
            if sp.is_connection:
                label = "SC"
            elif sp.unstable:
                label = "US"
            else:
                label = "SS"
            edges[sid] = EdgeRecord(tail=rec.tail, head=rec.head, label=label)
        provenance[("e", sid)] = ("sep", sid)

    # cycle edges and anchors
    for cid in sorted(s.cycles):
        c = s.cycles[cid]
        anchor = s.anchor(cid)
        edges[c.edge] = EdgeRecord(tail=anchor, head=anchor, label="LC")
        vertices[anchor] = VertexRecord(
            label="VLC", rotation=((c.edge, TAIL), (c.edge, HEAD)))
        provenance[("e", c.edge)] = ("cycle", cid)
        provenance[("v", anchor)] = ("cycle", cid)

    # loops: TVs, arcs, empty-loop vertices
    for lid, key, role, block in raw_loops:
        label = "ITL" if role == "omega" else "OTL"
        if not block:
            vetl = f"etl_{lid}"
            arc = f"arc_{lid}_0"
            vertices[vetl] = VertexRecord(label="VETL",
                                          rotation=((arc, TAIL), (arc, HEAD)))
            edges[arc] = EdgeRecord(tail=vetl, head=vetl, label=label)
            loops[lid] = Loop(id=lid, object_key=key, role=role, crossings=(),
                              arc_ids=(arc,), vetl=vetl)
            provenance[("v", vetl)] = ("loop", lid)
            provenance[("e", arc)] = ("loop", lid)
            continue
        sids = []
        for d in block:
            sids.append(_sep_of_edge(s, d[0]))
        k = len(sids)
        arcs = [f"arc_{lid}_{i}" for i in range(k)]
        for i, sid in enumerate(sids):
            tv = f"tv_{sid}"
            arc_out = arcs[i]
            arc_in = arcs[(i - 1) % k]
            sep_end = HEAD if edges[sid].head == tv else TAIL
            vertices[tv] = VertexRecord(
                label="TV",
                rotation=((arc_out, TAIL), (arc_in, HEAD), (sid, sep_end)))
            edges[arc_out] = EdgeRecord(tail=tv, head=f"tv_{sids[(i + 1) % k]}",
                                        label=label)
            provenance[("v", tv)] = ("tv", sid, lid)
            provenance[("e", arc_out)] = ("loop", lid)
        loops[lid] = Loop(id=lid, object_key=key, role=role,
                          crossings=tuple(sids), arc_ids=tuple(arcs))

    # singular points: rebuilt rotations plus elliptic-sector loops
    looped_points = {key[1] for lid, key, _, _ in raw_loops if key[0] == "point"}
    for pid in sorted(s.points):
        p = s.points[pid]
        if pid in looped_points:
            vertices[pid] = VertexRecord(label="SP", rotation=())
            provenance[("v", pid)] = ("point", pid)
            continue
        rot: list[Dart] = []
        for d in g.vertices[pid].rotation:
            sid = _sep_of_edge(s, d[0])
            sp = s.separatrices[sid]
            end_obj = sp.alpha if d[1] == TAIL else sp.omega
            if end_obj.kind == "polycycle":
                continue  # moved to a truncation vertex on the polycycle loop
            rot.append(d)
        rot = _insert_tes(s, pid, rot, edges, provenance)
        vertices[pid] = VertexRecord(label="SP", rotation=tuple(rot))
        provenance[("v", pid)] = ("point", pid)

    graph = EmbeddedGraph(vertices=vertices, edges=edges)
    graph = _with_containment(s, graph, loops)

    rep = validate_embedding(graph)
    if not rep.ok:
        raise LMFError("constructed graph is invalid: " + "; ".join(rep.issues))
    return LMFGraph(graph=graph, loops=loops, provenance=provenance, skeleton=s)


def _ray_direction(s: Skeleton, pid: str, ray: int,
                   germ_dirs: dict[int, str]) -> str:
    if ray in germ_dirs:
        return germ_dirs[ray]
    prev = s.points[pid].sector_cycle[ray - 1]
    return "in" if prev == "parabolic_attracting" else "out"


def _insert_tes(s: Skeleton, pid: str, rot: list[Dart], edges, provenance):
    p = s.points[pid]
    elliptic = [i for i, sec in enumerate(p.sector_cycle) if sec == "elliptic"]
    if not elliptic:
        return rot
    # germ dart per ray, and its direction
    germ_dart: dict[int, Dart] = {}
    germ_dirs: dict[int, str] = {}
    for d in rot:
        sid = _sep_of_edge(s, d[0])
        sp = s.separatrices[sid]
        if d[1] == TAIL and sp.germ_at_alpha is not None \
                and sp.alpha == LimitObject.point(pid):
            germ_dart[sp.germ_at_alpha] = d
            germ_dirs[sp.germ_at_alpha] = "out"
        if d[1] == HEAD and sp.germ_at_omega is not None \
                and sp.omega == LimitObject.point(pid):
            germ_dart[sp.germ_at_omega] = d
            germ_dirs[sp.germ_at_omega] = "in"
    out = list(rot)
    for i in elliptic:
        tes = f"tes_{pid}_{i}"
        edges[tes] = EdgeRecord(tail=pid, head=pid, label="TES")
        provenance[("e", tes)] = ("tes", pid, i)
        direction = _ray_direction(s, pid, i, germ_dirs)
        pair = [(tes, TAIL), (tes, HEAD)] if direction == "out" \
            else [(tes, HEAD), (tes, TAIL)]
        anchor_dart = germ_dart.get(i)
        if anchor_dart is not None and anchor_dart in out:
            pos = out.index(anchor_dart) + 1
        else:
            pos = len(out)
        out[pos:pos] = pair
    return out


# ---------------------------------------------------------------------------
# containment derivation


def _face_index_with_dart(g: EmbeddedGraph, root: str, dart: Dart) -> int:
    for i, f in enumerate(g.local_faces(root)):
        for walk in f.boundary_walks:
            if dart in walk:
                return i
    raise LMFError(f"no local face of {root!r} contains dart {dart}")


def _with_containment(s: Skeleton, g: EmbeddedGraph,
                      loops: dict[str, Loop]) -> EmbeddedGraph:
    comp = g.components()

    def comp_of_vertex(v: str) -> str:
        return comp[v]

    def loop_vertex(loop: Loop) -> str:
        return loop.vetl if loop.vetl else f"tv_{loop.crossings[0]}"

    merges: list[tuple[tuple[str, int], tuple[str, int]]] = []

    def add_merge(root_a, idx_a, root_b, idx_b):
        if root_a == root_b:
            return
        merges.append(((root_a, idx_a), (root_b, idx_b)))

    # loop <-> object annuli
    for lid in sorted(loops):
        loop = loops[lid]
        lroot = comp_of_vertex(loop_vertex(loop))
        lidx = _face_index_with_dart(g, lroot, (loop.arc_ids[0], HEAD))
        key = loop.object_key
        if key[0] == "point":
            oroot = comp_of_vertex(key[1])
            oidx = _face_index_with_dart(g, oroot, None) \
                if False else _isolated_face_index(g, oroot, key[1])
        elif key[0] == "cycle":
            cid, side = key[1], key[2]
            edge = s.cycles[cid].edge
            oroot = comp_of_vertex(s.anchor(cid))
            oidx = _face_index_with_dart(
                g, oroot, (edge, HEAD if side == "left" else TAIL))
        else:
            _, pckey, role, side = key
            e0 = min(pckey[0])
            oroot = comp_of_vertex(g.edges[e0].tail)
            oidx = _face_index_with_dart(
                g, oroot, (e0, HEAD if side == "left" else TAIL))
        add_merge(lroot, lidx, oroot, oidx)

    # spiral regions become annuli between the far sides of their end loops
    for rid in sorted(s.regions):
        r = s.regions[rid]
        if r.flow != "spiral":
            continue
        face = next(f for f in s.faces() if f.key == tuple(r.face))
        ends = []
        for role, obj in (("alpha", r.alpha), ("omega", r.omega)):
            loop = _loop_facing(s, loops, obj, face, role)
            lroot = comp_of_vertex(loop_vertex(loop))
            lidx = _face_index_with_dart(g, lroot, (loop.arc_ids[0], TAIL))
            ends.append((lroot, lidx))
        add_merge(*ends[0], *ends[1])

    # assemble the forest from the merge edges
    roots = sorted(set(comp.values()))
    if len(merges) != len(roots) - 1:
        raise LMFError(
            f"containment derivation found {len(merges)} annuli for "
            f"{len(roots)} components; expected {len(roots) - 1}")
    adj: dict[str, list] = {r: [] for r in roots}
    for (ra, ia), (rb, ib) in merges:
        adj[ra].append((rb, ib, ia))
        adj[rb].append((ra, ia, ib))
    root = roots[0]
    seen = {root}
    containment = []
    stack = [root]
    while stack:
        cur = stack.pop()
        for other, other_idx, cur_idx in adj[cur]:
            if other in seen:
                continue
            seen.add(other)
            containment.append(Containment(
                component_root=other, inside_component=cur,
                inside_face=cur_idx, outer_face=other_idx))
            stack.append(other)
    if len(seen) != len(roots):
        raise LMFError("containment derivation left components unplaced")
    containment.sort(key=lambda c: c.component_root)
    return EmbeddedGraph(vertices=g.vertices, edges=g.edges,
                         containment=tuple(containment))


def _isolated_face_index(g: EmbeddedGraph, root: str, vertex: str) -> int:
    faces = g.local_faces(root)
    if len(faces) != 1:
        raise LMFError(f"expected isolated vertex {vertex!r}")
    return 0


def _loop_facing(s: Skeleton, loops: dict[str, Loop], obj: LimitObject,
                 face: Face, role: str) -> Loop:
    if obj.kind == "singular_point":
        return loops[f"loop_pt_{obj.ref}"]
    if obj.kind == "cycle":
        edge = s.cycles[obj.ref].edge
        ends = {d[1] for w in face.boundary_walks for d in w if d[0] == edge}
        side = "left" if ends == {HEAD} else "right"
        return loops[f"loop_cyc_{obj.ref}_{side}"]
    key = _pc_key(obj)
    for loop in loops.values():
        if loop.object_key[0] == "polycycle" and loop.object_key[1] == key \
                and loop.role == role:
            return loop
    raise LMFError("no loop for polycycle side")


# ---------------------------------------------------------------------------
# face classification


@dataclass(frozen=True)
class FaceReport:
    key: tuple
    shape: str  # "disc" | "annulus"
    kind: str | None = None  # "object_loop" | "loop_loop" for annuli
    walls: tuple = ()

    def to_json(self):
        return {"face": list(self.key), "shape": self.shape, "kind": self.kind,
                "walls": [list(w) for w in self.walls]}


def _wall_kind(lmf: LMFGraph, walk, wall_root) -> tuple:
    if not walk:
        prov = lmf.provenance.get(("v", wall_root))
        return ("point", wall_root) if prov is None else prov
    labels = {lmf.graph.edges[d[0]].label for d in walk}
    if labels <= {"OTL", "ITL"}:
        arc = next(d[0] for d in walk)
        return lmf.provenance[("e", arc)]
    if labels == {"LC"}:
        return lmf.provenance[("e", next(d[0] for d in walk))]
    if labels <= {"SC", "SS", "US"}:
        return ("polycycle_side", tuple(sorted({d[0] for d in walk})))
    return ("mixed", tuple(sorted(labels)))


def classify_faces(lmf: LMFGraph) -> list[FaceReport]:
    """Report every face as a disc or a tagged annulus."""
    out = []
    for f in trace_faces(lmf.graph):
        if f.shape == "disc":
            out.append(FaceReport(key=f.key, shape="disc"))
            continue
        if f.shape != "annulus":
            raise LMFError(f"face {f.key} is not an LMF face structure")
        walls = tuple(_wall_kind(lmf, w, r)
                      for w, r in zip(f.boundary_walks, f.wall_roots))
        n_loops = sum(1 for w in walls if w[0] == "loop")
        kind = "loop_loop" if n_loops == 2 else "object_loop"
        if n_loops == 0:
            raise LMFError(f"annulus {f.key} has no transversal-loop wall")
        out.append(FaceReport(key=f.key, shape="annulus", kind=kind, walls=walls))
    return out


# ---------------------------------------------------------------------------
# provenance round trip


def untruncate(lmf: LMFGraph) -> EmbeddedGraph:
    """Rebuild the skeleton's embedding from the loop graph: drop loops and
    elliptic-sector edges, reattach truncated separatrices to their objects."""
    s = lmf.skeleton
    g = lmf.graph

    edges: dict[str, EdgeRecord] = {}
    for eid, rec in g.edges.items():
        prov = lmf.provenance[("e", eid)]
        if prov[0] in ("loop", "tes"):
            continue
        if prov[0] == "cycle":
            edges[eid] = EdgeRecord(tail=rec.tail, head=rec.head, label="cycle")
            continue
        orig = s.embedding.edges[eid]
        edges[eid] = EdgeRecord(tail=orig.tail, head=orig.head, label="sep")

    vertices: dict[str, VertexRecord] = {}
    for vid, rec in g.vertices.items():
        prov = lmf.provenance[("v", vid)]
        if prov[0] in ("loop", "tv"):
            continue
        if prov[0] == "cycle":
            cid = prov[1]
            rot = _rebuild_anchor_rotation(lmf, cid)
        else:
            rot = _rebuild_point_rotation(lmf, vid)
        vertices[vid] = VertexRecord(label=s.embedding.vertices[vid].label,
                                     rotation=tuple(rot))
    return EmbeddedGraph(vertices=vertices, edges=edges)


def _loop_block_darts(lmf: LMFGraph, loop: Loop) -> list[Dart]:
    s = lmf.skeleton
    out = []
    for sid in loop.crossings:
        sp = s.separatrices[sid]
        rec = s.embedding.edges[sp.edge]
        # the dart at the object is the end whose limit object is the loop's
        if lmf.graph.edges[sid].label == "UTS":
            out.append((sid, HEAD))
        else:
            out.append((sid, TAIL))
    return out


def _rebuild_anchor_rotation(lmf: LMFGraph, cid: str) -> list[Dart]:
    s = lmf.skeleton
    edge = s.cycles[cid].edge
    left = _loop_block_darts(lmf, lmf.loops[f"loop_cyc_{cid}_left"])
    right = _loop_block_darts(lmf, lmf.loops[f"loop_cyc_{cid}_right"])
    return [(edge, TAIL)] + left + [(edge, HEAD)] + right


def _rebuild_point_rotation(lmf: LMFGraph, pid: str) -> list[Dart]:
    s = lmf.skeleton
    loop = lmf.loops.get(f"loop_pt_{pid}")
    if loop is not None:
        return _loop_block_darts(lmf, loop)
    # saddle-like point: strip TES darts, reinsert polycycle winding darts
    rot = [d for d in lmf.graph.vertices[pid].rotation
           if lmf.provenance[("e", d[0])][0] != "tes"]
    for loop in lmf.loops.values():
        if loop.object_key[0] != "polycycle" or not loop.crossings:
            continue
        _, pckey, role, side = loop.object_key
        obj = LimitObject.polycycle(pckey[0], pckey[1])
        if pid not in obj.points:
            continue
        block = [d for d in _loop_block_darts(lmf, loop)
                 if s.embedding.dart_vertex(d) == pid]
        if not block:
            continue
        # wedge position: right after the departure (left side) or arrival
        # (right side) connection dart of the polycycle at this point
        flow = _pc_flow_order(s, obj)
        dep = next((sid, TAIL) for sid in flow
                   if s.separatrices[sid].alpha.ref == pid)
        arr = next((sid, HEAD) for sid in flow
                   if s.separatrices[sid].omega.ref == pid)
        anchor = dep if side == "left" else arr
        pos = rot.index(anchor) + 1
        rot[pos:pos] = block
    return rot
