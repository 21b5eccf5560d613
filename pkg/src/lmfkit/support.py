"""Bifurcation supports and boundary-component reports.

Implements the interesting/non-interesting classification of cycles and limit
sets, the extra-large support of a single field, the support of a family
(given the orbit-level limits of its cycles and separatrices at the base
parameter), closed-invariant-set utilities, and the combinatorial synthesis
of the boundary components of a small neighborhood of a closed invariant set
with the Sep-property.
"""

from __future__ import annotations

from dataclasses import dataclass

from .embedded_graph import ValidationReport
from .skeleton import (
    Chain,
    LimitObject,
    Skeleton,
    nests,
    side_boundaries,
)


class SupportError(ValueError):
    pass


# ---------------------------------------------------------------------------
# closed invariant subsets


@dataclass(frozen=True)
class SubSkeleton:
    """A closed invariant subset stored at orbit level."""

    points: frozenset[str] = frozenset()
    cycles: frozenset[str] = frozenset()
    separatrices: frozenset[str] = frozenset()
    regions: frozenset[str] = frozenset()

    @staticmethod
    def of(points=(), cycles=(), separatrices=(), regions=()) -> "SubSkeleton":
        return SubSkeleton(frozenset(points), frozenset(cycles),
                           frozenset(separatrices), frozenset(regions))

    @property
    def empty(self) -> bool:
        return not (self.points or self.cycles or self.separatrices or self.regions)

    def __or__(self, other: "SubSkeleton") -> "SubSkeleton":
        return SubSkeleton(self.points | other.points,
                           self.cycles | other.cycles,
                           self.separatrices | other.separatrices,
                           self.regions | other.regions)

    def __le__(self, other: "SubSkeleton") -> bool:
        return (self.points <= other.points and self.cycles <= other.cycles
                and self.separatrices <= other.separatrices
                and self.regions <= other.regions)

    def to_json(self):
        return {"points": sorted(self.points), "cycles": sorted(self.cycles),
                "separatrices": sorted(self.separatrices),
                "regions": sorted(self.regions)}

    @staticmethod
    def from_json(data) -> "SubSkeleton":
        return SubSkeleton.of(data.get("points", ()), data.get("cycles", ()),
                              data.get("separatrices", ()), data.get("regions", ()))


def _object_parts(s: Skeleton, obj: LimitObject) -> SubSkeleton:
    if obj.kind == "singular_point":
        return SubSkeleton.of(points=[obj.ref])
    if obj.kind == "cycle":
        return SubSkeleton.of(cycles=[obj.ref])
    return SubSkeleton.of(points=obj.points, separatrices=obj.separatrices)


def _region_chains(s: Skeleton, rid: str) -> tuple[Chain, ...]:
    if s.regions[rid].flow == "spiral":
        return ()
    return side_boundaries(s, rid)


def closure(s: Skeleton, z: SubSkeleton) -> SubSkeleton:
    """Orbit-level closure: separatrices pull in their limit objects, regions
    pull in their side chains and limit objects."""
    cur = z
    while True:
        nxt = cur
        for sid in cur.separatrices:
            sp = s.separatrices[sid]
            nxt = nxt | _object_parts(s, sp.alpha) | _object_parts(s, sp.omega)
        for rid in cur.regions:
            r = s.regions[rid]
            nxt = nxt | _object_parts(s, r.alpha) | _object_parts(s, r.omega)
            for chain in _region_chains(s, rid):
                nxt = nxt | SubSkeleton.of(points=chain.points,
                                           separatrices=chain.separatrices)
        if nxt == cur:
            return cur
        cur = nxt


def validate_subskeleton(s: Skeleton, z: SubSkeleton) -> ValidationReport:
    rep = ValidationReport()
    for pid in z.points:
        if pid not in s.points:
            rep.add(f"unknown point {pid!r}")
    for cid in z.cycles:
        if cid not in s.cycles:
            rep.add(f"unknown cycle {cid!r}")
    for sid in z.separatrices:
        if sid not in s.separatrices:
            rep.add(f"unknown separatrix {sid!r}")
    for rid in z.regions:
        if rid not in s.regions:
            rep.add(f"unknown region {rid!r}")
    if rep.ok and closure(s, z) != z:
        rep.add("set is not closed at orbit level")
    return rep


def _object_in(s: Skeleton, obj: LimitObject, z: SubSkeleton) -> bool:
    if obj.kind == "singular_point":
        return obj.ref in z.points
    if obj.kind == "cycle":
        return obj.ref in z.cycles
    return obj.points <= z.points and obj.separatrices <= z.separatrices


def _object_meets(s: Skeleton, obj: LimitObject, z: SubSkeleton) -> bool:
    if obj.kind == "singular_point":
        return obj.ref in z.points
    if obj.kind == "cycle":
        return obj.ref in z.cycles
    return bool(obj.points & z.points) or bool(obj.separatrices & z.separatrices)


# ---------------------------------------------------------------------------
# interesting / non-interesting


@dataclass(frozen=True)
class CycleClass:
    interesting: bool
    case: int | None = None  # 1 or 2 when non-interesting


def classify_cycle(s: Skeleton, cid: str) -> CycleClass:
    """Non-interesting case 1: the nest holds an attracting or repelling
    cycle.  Case 2: all nest cycles are semistable and one end disc of the
    nest holds a single singular point, which is hyperbolic."""
    nest = next(n for n in nests(s) if cid in n.cycles)
    stabilities = {s.cycles[c].stability for c in nest.cycles}
    if stabilities & {"attracting", "repelling"}:
        return CycleClass(interesting=False, case=1)
    if stabilities == {"semistable"}:
        for _, disc_points in nest.ends:
            if len(disc_points) == 1:
                (pid,) = disc_points
                if s.points[pid].hyperbolic:
                    return CycleClass(interesting=False, case=2)
    return CycleClass(interesting=True)


def classify_limit_object(s: Skeleton, obj: LimitObject) -> str:
    """'interesting' or 'non_interesting' per the support definitions."""
    if obj.kind == "singular_point":
        p = s.points[obj.ref]
        if p.hyperbolic and p.attraction() in ("attracting", "repelling"):
            return "non_interesting"
        return "interesting"
    if obj.kind == "cycle":
        return "interesting" if classify_cycle(s, obj.ref).interesting \
            else "non_interesting"
    return "interesting"  # polycycles are always interesting


def _interesting(s: Skeleton, obj: LimitObject, cache: dict) -> bool:
    key = (obj.kind, obj.ref, obj.points, obj.separatrices)
    if key not in cache:
        cache[key] = classify_limit_object(s, obj) == "interesting"
    return cache[key]


# ---------------------------------------------------------------------------
# supports


def elbs(s: Skeleton) -> SubSkeleton:
    """Extra-large support of a single field: all nonhyperbolic points and
    cycles, plus the closure of every orbit whose alpha- and omega-limit sets
    are both interesting."""
    cache: dict = {}
    points = {pid for pid, p in s.points.items() if not p.hyperbolic}
    cycles = {cid for cid, c in s.cycles.items() if not c.hyperbolic}
    seps = set()
    for sid, sp in s.separatrices.items():
        if _interesting(s, sp.alpha, cache) and _interesting(s, sp.omega, cache):
            seps.add(sid)
    regions = set()
    for rid, r in s.regions.items():
        if _interesting(s, r.alpha, cache) and _interesting(s, r.omega, cache):
            regions.add(rid)
    return closure(s, SubSkeleton.of(points, cycles, seps, regions))


@dataclass(frozen=True)
class FamilyData:
    """A base skeleton plus the orbit-level limits of the family's cycles and
    separatrices at the base parameter; those limits are input data."""

    base: Skeleton
    per_closure: SubSkeleton
    sep_closure: SubSkeleton
    nonhyperbolic_points: frozenset[str] = frozenset()
    nonhyperbolic_cycles: frozenset[str] = frozenset()


def validate_family(f: FamilyData) -> ValidationReport:
    rep = ValidationReport()
    s = f.base
    for name, z in (("per_closure", f.per_closure), ("sep_closure", f.sep_closure)):
        sub = validate_subskeleton(s, z)
        for issue in sub.issues:
            rep.add(f"{name}: {issue}")
    want_points = {pid for pid, p in s.points.items() if not p.hyperbolic}
    if frozenset(f.nonhyperbolic_points) != want_points:
        rep.add(f"nonhyperbolic point flags {sorted(f.nonhyperbolic_points)} "
                f"disagree with kinds {sorted(want_points)}")
    want_cycles = {cid for cid, c in s.cycles.items() if not c.hyperbolic}
    if frozenset(f.nonhyperbolic_cycles) != want_cycles:
        rep.add(f"nonhyperbolic cycle flags disagree with cycle records")
    if not set(s.cycles) <= f.per_closure.cycles:
        rep.add("per_closure must contain every cycle of the base field")
    if not set(s.separatrices) <= f.sep_closure.separatrices:
        rep.add("sep_closure must contain every separatrix of the base field")
    return rep


def lbs(f: FamilyData) -> SubSkeleton:
    """Support of the family: elbs of the base intersected, element by
    element, with singular points plus the family's cycle and separatrix
    limits."""
    rep = validate_family(f)
    if not rep.ok:
        raise SupportError("; ".join(rep.issues))
    s = f.base
    big = elbs(s)
    given = f.per_closure | f.sep_closure
    out = SubSkeleton(
        points=big.points,  # all singular points are in Sing(base)
        cycles=big.cycles & given.cycles,
        separatrices=big.separatrices & given.separatrices,
        regions=big.regions & given.regions,
    )
    # non-interesting nonhyperbolic cycles must sit alone in their components
    for cid in out.cycles:
        if not classify_cycle(s, cid).interesting:
            comp = _component_of(s, out, ("cycle", cid))
            if comp != SubSkeleton.of(cycles=[cid]):
                raise SupportError(
                    f"non-interesting cycle {cid!r} is not isolated in the "
                    "support; family data is inconsistent")
    return out


def lbs_star(f: FamilyData) -> SubSkeleton:
    """lbs minus its non-interesting cycles (whole connected components)."""
    full = lbs(f)
    drop = {cid for cid in full.cycles
            if not classify_cycle(f.base, cid).interesting}
    return SubSkeleton(full.points, full.cycles - drop,
                       full.separatrices, full.regions)


# ---------------------------------------------------------------------------
# connectivity of subskeletons


def _adjacency(s: Skeleton, z: SubSkeleton):
    nodes = ([("point", p) for p in z.points] + [("cycle", c) for c in z.cycles]
             + [("sep", x) for x in z.separatrices]
             + [("region", r) for r in z.regions])
    edges = []

    def obj_nodes(obj: LimitObject):
        parts = _object_parts(s, obj)
        return ([("point", p) for p in parts.points & z.points]
                + [("cycle", c) for c in parts.cycles & z.cycles]
                + [("sep", x) for x in parts.separatrices & z.separatrices])

    for sid in z.separatrices:
        sp = s.separatrices[sid]
        for other in obj_nodes(sp.alpha) + obj_nodes(sp.omega):
            edges.append((("sep", sid), other))
    for rid in z.regions:
        r = s.regions[rid]
        for other in obj_nodes(r.alpha) + obj_nodes(r.omega):
            edges.append((("region", rid), other))
        for chain in _region_chains(s, rid):
            for p in chain.points:
                if p in z.points:
                    edges.append((("region", rid), ("point", p)))
            for x in chain.separatrices:
                if x in z.separatrices:
                    edges.append((("region", rid), ("sep", x)))
    return nodes, edges


def connected_components(s: Skeleton, z: SubSkeleton) -> list[SubSkeleton]:
    nodes, edges = _adjacency(s, z)
    parent = {n: n for n in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra
    groups: dict = {}
    for n in nodes:
        groups.setdefault(find(n), []).append(n)
    out = []
    for members in groups.values():
        out.append(SubSkeleton.of(
            points=[x for k, x in members if k == "point"],
            cycles=[x for k, x in members if k == "cycle"],
            separatrices=[x for k, x in members if k == "sep"],
            regions=[x for k, x in members if k == "region"]))
    out.sort(key=lambda c: c.to_json().__repr__())
    return out


def _component_of(s: Skeleton, z: SubSkeleton, node) -> SubSkeleton:
    kind, ref = node
    for comp in connected_components(s, z):
        bucket = {"point": comp.points, "cycle": comp.cycles,
                  "sep": comp.separatrices, "region": comp.regions}[kind]
        if ref in bucket:
            return comp
    raise SupportError(f"{node} not in the subskeleton")


# ---------------------------------------------------------------------------
# Sep-property and chain absorption


def check_sep_property(s: Skeleton, z: SubSkeleton) -> ValidationReport:
    """Limit sets of separatrices outside z must be detached from z."""
    rep = validate_subskeleton(s, z)
    if not rep.ok:
        raise SupportError("; ".join(rep.issues))
    out = ValidationReport()
    for sid, sp in s.separatrices.items():
        if sid in z.separatrices:
            continue
        if sp.unstable and _object_meets(s, sp.omega, z):
            out.add(f"unstable separatrix {sid!r} outside the set has its "
                    f"omega-limit inside it")
        if sp.stable and _object_meets(s, sp.alpha, z):
            out.add(f"stable separatrix {sid!r} outside the set has its "
                    f"alpha-limit inside it")
    return out


def chain_absorption(s: Skeleton, z: SubSkeleton) -> SubSkeleton:
    """Saturate z: chains of singular points joined by separatrix connections
    are absorbed whole, as is any limit object the set meets."""
    # connection graph components
    conn_parent: dict[str, str] = {p: p for p in s.points}

    def find(x):
        while conn_parent[x] != x:
            conn_parent[x] = conn_parent[conn_parent[x]]
            x = conn_parent[x]
        return x

    connections = {sid: sp for sid, sp in s.separatrices.items()
                   if sp.is_connection}
    for sp in connections.values():
        a, b = find(sp.alpha.ref), find(sp.omega.ref)
        if a != b:
            conn_parent[max(a, b)] = min(a, b)

    limit_objects = []
    for sp in s.separatrices.values():
        limit_objects += [sp.alpha, sp.omega]
    for r in s.regions.values():
        limit_objects += [r.alpha, r.omega]

    cur = closure(s, z)
    while True:
        nxt = cur
        touched_chains = {find(p) for p in cur.points}
        touched_chains |= {find(connections[sid].alpha.ref)
                           for sid in cur.separatrices if sid in connections}
        for sid, sp in connections.items():
            if find(sp.alpha.ref) in touched_chains:
                nxt = nxt | SubSkeleton.of(points=[sp.alpha.ref, sp.omega.ref],
                                           separatrices=[sid])
        for obj in limit_objects:
            if _object_meets(s, obj, nxt):
                nxt = nxt | _object_parts(s, obj)
        nxt = closure(s, nxt)
        if nxt == cur:
            return cur
        cur = nxt


# ---------------------------------------------------------------------------
# region cases relative to z


CASES = ("case1", "case2", "case3", "case4", "case5", "disjoint")


def classify_regions_wrt(s: Skeleton, z: SubSkeleton) -> dict[str, str]:
    """The five-case analysis of each canonical region against z."""
    sep_rep = check_sep_property(s, z)
    if not sep_rep.ok:
        raise SupportError("Sep-property fails: " + "; ".join(sep_rep.issues))

    # limit-object membership must be all-or-nothing
    objs = []
    for r in s.regions.values():
        objs += [r.alpha, r.omega]
    for obj in objs:
        parts = _object_parts(s, obj)
        meets = _object_meets(s, obj, z)
        inside = _object_in(s, obj, z)
        if meets and not inside:
            raise SupportError(
                f"limit object {obj.to_json()} meets the set without being "
                "contained in it")

    out = {}
    for rid, r in s.regions.items():
        a_in = _object_in(s, r.alpha, z)
        o_in = _object_in(s, r.omega, z)
        if r.flow == "spiral":
            if rid in z.regions:
                out[rid] = "case2"
            elif a_in or o_in:
                out[rid] = "case1"
            else:
                out[rid] = "disjoint"
            continue
        if a_in and o_in:
            out[rid] = "case3"
        elif a_in or o_in:
            out[rid] = "case4"
        else:
            sides = _region_chains(s, rid)
            touches = any(
                any(p in z.points for p in chain.points)
                or any(x in z.separatrices for x in chain.separatrices)
                for chain in sides)
            out[rid] = "case5" if touches else "disjoint"
    return out


# ---------------------------------------------------------------------------
# boundary components of a small neighborhood of z


@dataclass(frozen=True)
class BoundaryComponent:
    type: int  # 1, 2 or 3
    index: int
    crossing_separatrices: tuple[str, ...] = ()
    tangency_count: int = 0
    regions: tuple[str, ...] = ()
    objects: tuple = ()  # json forms of limit objects, Type 3 only

    def to_json(self):
        return {"type": self.type, "index": self.index,
                "crossing_separatrices": list(self.crossing_separatrices),
                "tangency_count": self.tangency_count,
                "regions": list(self.regions),
                "objects": list(self.objects)}


@dataclass(frozen=True)
class _Piece:
    region: str
    ends: tuple[str, str]  # separatrix ids carrying the endpoints
    tangencies: int


def _free_end_seps(chain: Chain, z_end: str) -> str:
    seps = chain.separatrices
    return seps[-1] if z_end == "alpha" else seps[0]


def boundary_report(s: Skeleton, z: SubSkeleton) -> list[BoundaryComponent]:
    """Synthesize the boundary circles of a small neighborhood of z.

    Case-2/3 regions not fully inside z yield disc-bounding components with
    two inner tangencies; case-1 regions yield transversal loops of their
    z-side limit sets; case-4/5 regions yield transversal arcs that are
    stitched into separatrix-crossed components at marked separatrices.
    """
    if z.empty:
        return []
    cases = classify_regions_wrt(s, z)
    components: list[BoundaryComponent] = []

    pieces: list[_Piece] = []
    for rid, case in sorted(cases.items()):
        r = s.regions[rid]
        if case == "case1":
            for role, obj in (("alpha", r.alpha), ("omega", r.omega)):
                if _object_in(s, obj, z):
                    components.append(BoundaryComponent(
                        type=3, index=1, regions=(rid,),
                        objects=(_obj_key(obj),)))
        elif case in ("case2", "case3"):
            if rid not in z.regions:
                components.append(BoundaryComponent(
                    type=1, index=0, tangency_count=2, regions=(rid,)))
        elif case == "case4":
            z_end = "alpha" if _object_in(s, r.alpha, z) else "omega"
            chains = _region_chains(s, rid)
            frees = [_free_end_seps(c, z_end) for c in chains]
            if len(frees) == 1:
                frees = frees * 2
            for sep in frees:
                if sep in z.separatrices:
                    raise SupportError(
                        f"region {rid!r}: its free boundary separatrix "
                        f"{sep!r} lies inside the set; inconsistent input")
            pieces.append(_Piece(region=rid, ends=(frees[0], frees[-1]),
                                 tangencies=0))
        elif case == "case5":
            for chain in _region_chains(s, rid):
                meets = (any(p in z.points for p in chain.points)
                         or any(x in z.separatrices for x in chain.separatrices))
                if meets:
                    ends = (chain.separatrices[0], chain.separatrices[-1])
                    if any(sep in z.separatrices for sep in ends):
                        raise SupportError(
                            f"region {rid!r}: z-meeting chain has an end "
                            "separatrix inside the set; inconsistent input")
                    pieces.append(_Piece(region=rid, ends=ends, tangencies=1))

    components.extend(_stitch_type2(pieces))
    components.sort(key=lambda c: (c.type, c.crossing_separatrices, c.regions))
    return components


def _obj_key(obj: LimitObject):
    if obj.kind == "polycycle":
        return ("polycycle", tuple(sorted(obj.separatrices)),
                tuple(sorted(obj.points)))
    return (obj.kind, obj.ref)


def _stitch_type2(pieces: list[_Piece]) -> list[BoundaryComponent]:
    # every marked separatrix carries exactly one boundary crossing; the two
    # arc-ends landing on it (one per side) are joined there
    ends_at: dict[str, list[tuple[int, int]]] = {}
    for i, piece in enumerate(pieces):
        for j, sep in enumerate(piece.ends):
            ends_at.setdefault(sep, []).append((i, j))
    for sep, ends in ends_at.items():
        if len(ends) != 2:
            raise SupportError(
                f"boundary synthesis: separatrix {sep!r} carries {len(ends)} "
                "arc ends, expected 2")

    out = []
    used: set[int] = set()
    for start in range(len(pieces)):
        if start in used:
            continue
        comp_pieces = []
        crossings = []
        cur, enter_end = start, 0
        while True:
            used.add(cur)
            comp_pieces.append(cur)
            exit_end = 1 - enter_end
            sep = pieces[cur].ends[exit_end]
            crossings.append(sep)
            a, b = ends_at[sep]
            cur, enter_end = b if a == (cur, exit_end) else a
            if (cur, enter_end) == (start, 0):
                break
        tang = sum(pieces[i].tangencies for i in comp_pieces)
        if tang % 2:
            raise SupportError("boundary synthesis produced an odd tangency "
                               "count; region data is inconsistent")
        out.append(BoundaryComponent(
            type=2, index=tang // 2 + 1,
            crossing_separatrices=tuple(sorted(set(crossings))),
            tangency_count=tang,
            regions=tuple(sorted({pieces[i].region for i in comp_pieces}))))
    return out


# ---------------------------------------------------------------------------
# serialization


def family_to_json(f: FamilyData) -> dict:
    from .skeleton import skeleton_to_json

    data = skeleton_to_json(f.base)
    data["nonhyperbolic_points"] = sorted(f.nonhyperbolic_points)
    data["nonhyperbolic_cycles"] = sorted(f.nonhyperbolic_cycles)
    data["per_closure"] = f.per_closure.to_json()
    data["sep_closure"] = f.sep_closure.to_json()
    return data


def family_from_json(data: dict) -> FamilyData:
    from .skeleton import skeleton_from_json

    return FamilyData(
        base=skeleton_from_json(data),
        per_closure=SubSkeleton.from_json(data["per_closure"]),
        sep_closure=SubSkeleton.from_json(data["sep_closure"]),
        nonhyperbolic_points=frozenset(data.get("nonhyperbolic_points", [])),
        nonhyperbolic_cycles=frozenset(data.get("nonhyperbolic_cycles", [])),
    )
