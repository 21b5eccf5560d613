"""Skeleton extraction from planar polynomial vector fields.

The sphere model is a working disc plus a single virtual point at infinity:
the field must be strictly transversal on the disc boundary, which forces the
finite singular-point indices to sum to +1 and makes the virtual point a
source or a sink.  Extraction finds and classifies the singular points,
detects limit cycles through return maps, traces saddle separatrices, and
assembles the combinatorial skeleton with rotations read off the traced
polylines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from ..embedded_graph import (
    Containment,
    EdgeRecord,
    EmbeddedGraph,
    VertexRecord,
    trace_faces,
)
from ..skeleton import (
    LimitCycle,
    LimitObject,
    Region,
    Separatrix,
    SingularPoint,
    Skeleton,
    validate_skeleton,
)
from . import _kernels as K


class NumericError(ValueError):
    pass


class NonhyperbolicPointError(NumericError):
    """Raised when a singular point is non-hyperbolic at tolerance; the
    skeleton must then be supplied manually."""


class ConnectionCandidateError(NumericError):
    """A separatrix approaches another saddle; connections are never asserted
    numerically and need an explicit override."""


@dataclass(frozen=True)
class NumericSettings:
    newton_tol: float = 1e-11
    integ_tol: float = 1e-9
    sep_offset: float = 1e-5
    section_length: float = 0.9
    cycle_tol: float = 1e-8
    max_time: float = 2000.0
    eig_tol: float = 1e-7
    grid_n: int = 31
    capture_radius: float = 0.05
    chunk: int = 2048

    def halved(self) -> "NumericSettings":
        """Halve every tolerance-like field; lengths and budgets stay."""
        return replace(self, newton_tol=self.newton_tol / 2,
                       integ_tol=self.integ_tol / 2,
                       sep_offset=self.sep_offset / 2,
                       cycle_tol=self.cycle_tol / 2,
                       eig_tol=self.eig_tol / 2)

    def to_json(self):
        return {"newton_tol": self.newton_tol, "integ_tol": self.integ_tol,
                "sep_offset": self.sep_offset,
                "section_length": self.section_length,
                "cycle_tol": self.cycle_tol, "max_time": self.max_time,
                "eig_tol": self.eig_tol, "grid_n": self.grid_n,
                "capture_radius": self.capture_radius}

    @staticmethod
    def from_json(data) -> "NumericSettings":
        return NumericSettings(**{k: v for k, v in data.items()
                                  if k in NumericSettings.__dataclass_fields__})


@dataclass(frozen=True)
class PolynomialField:
    """dx/dt = P(x, y), dy/dt = Q(x, y) with monomial term lists [i, j, c]."""

    p_terms: tuple[tuple[int, int, float], ...]
    q_terms: tuple[tuple[int, int, float], ...]
    radius: float

    def arrays(self):
        def split(terms):
            if not terms:
                return (np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64),
                        np.zeros(0))
            i, j, c = zip(*terms)
            return (np.array(i, dtype=np.int64), np.array(j, dtype=np.int64),
                    np.array(c, dtype=float))
        return split(self.p_terms) + split(self.q_terms)

    def reversed(self) -> "PolynomialField":
        return PolynomialField(
            p_terms=tuple((i, j, -c) for i, j, c in self.p_terms),
            q_terms=tuple((i, j, -c) for i, j, c in self.q_terms),
            radius=self.radius)

    def eval(self, x, y):
        pi, pj, pc, qi, qj, qc = self.arrays()
        return K.field_eval(pi, pj, pc, qi, qj, qc, float(x), float(y))

    def jacobian(self, x, y):
        j = np.zeros((2, 2))
        for (ii, jj, c) in self.p_terms:
            if ii:
                j[0, 0] += c * ii * x ** (ii - 1) * y ** jj
            if jj:
                j[0, 1] += c * jj * x ** ii * y ** (jj - 1)
        for (ii, jj, c) in self.q_terms:
            if ii:
                j[1, 0] += c * ii * x ** (ii - 1) * y ** jj
            if jj:
                j[1, 1] += c * jj * x ** ii * y ** (jj - 1)
        return j

    def to_json(self):
        return {"p": [[i, j, c] for i, j, c in self.p_terms],
                "q": [[i, j, c] for i, j, c in self.q_terms],
                "radius": self.radius}

    @staticmethod
    def from_json(data) -> "PolynomialField":
        return PolynomialField(
            p_terms=tuple((int(i), int(j), float(c)) for i, j, c in data["p"]),
            q_terms=tuple((int(i), int(j), float(c)) for i, j, c in data["q"]),
            radius=float(data["radius"]))


def verify_boundary(field: PolynomialField, n_samples: int = 8192) -> str:
    """Certify the sign of the radial component on the working circle.

    Returns 'inward' or 'outward'.  Sampling is backed by a derivative bound
    on the trigonometric polynomial, so a certified answer is rigorous."""
    R = field.radius
    theta = np.linspace(0.0, 2 * np.pi, n_samples, endpoint=False)
    x, y = R * np.cos(theta), R * np.sin(theta)
    pi, pj, pc, qi, qj, qc = field.arrays()
    g = np.zeros(n_samples)
    for k in range(len(pi)):
        g += pc[k] * x ** (pi[k] + 1) * y ** pj[k]
    for k in range(len(qi)):
        g += qc[k] * x ** qi[k] * y ** (qj[k] + 1)
    bound = 0.0
    for (i, j, c) in field.p_terms:
        bound += abs(c) * (i + j + 1) * R ** (i + j + 1)
    for (i, j, c) in field.q_terms:
        bound += abs(c) * (i + j + 1) * R ** (i + j + 1)
    margin = bound * (2 * np.pi / n_samples) / 2
    if np.all(g < -margin):
        return "inward"
    if np.all(g > margin):
        return "outward"
    raise NumericError(
        "field is not certifiably transversal on the working circle; "
        "choose another disc radius")


# ---------------------------------------------------------------------------
# singular points


def find_singular_points(field: PolynomialField, settings: NumericSettings):
    """Common zeros of P and Q inside the disc: grid seeding plus damped
    Newton, deduplicated.  Returns a list of (point, jacobian)."""
    R = field.radius
    n = settings.grid_n
    seeds = []
    for gx in np.linspace(-R, R, n):
        for gy in np.linspace(-R, R, n):
            if gx * gx + gy * gy <= R * R:
                seeds.append((gx, gy))
    roots: list[np.ndarray] = []
    for seed in seeds:
        p = np.array(seed, dtype=float)
        ok = False
        for _ in range(80):
            v = np.array(field.eval(*p))
            nv = np.hypot(*v)
            if nv < settings.newton_tol:
                ok = True
                break
            j = field.jacobian(*p)
            det = j[0, 0] * j[1, 1] - j[0, 1] * j[1, 0]
            if abs(det) < 1e-300:
                break
            step = np.linalg.solve(j, v)
            lam = 1.0
            for _ in range(30):
                q = p - lam * step
                if np.hypot(*field.eval(*q)) < nv:
                    break
                lam /= 2
            else:
                break
            p = p - lam * step
            if not np.isfinite(p).all() or np.hypot(*p) > 4 * R:
                break
        if ok and np.hypot(*p) < R:
            roots.append(p)
    merged: list[np.ndarray] = []
    merge_r = 1e-6 * R
    for p in roots:
        for q in merged:
            if np.hypot(*(p - q)) < merge_r:
                break
        else:
            merged.append(p)
    if len(merged) > 24:
        raise NumericError("non-isolated singularity suspected "
                           f"({len(merged)} distinct Newton limits)")
    for a in range(len(merged)):
        for b in range(a + 1, len(merged)):
            if np.hypot(*(merged[a] - merged[b])) < 1e3 * merge_r:
                mid = (merged[a] + merged[b]) / 2
                if np.hypot(*field.eval(*mid)) < settings.newton_tol * 1e2:
                    raise NumericError("non-isolated singularity suspected "
                                       "(Newton cluster does not separate)")
    for p in merged:
        probe = min(np.hypot(*field.eval(p[0] + 1e-3 * math.cos(th),
                                         p[1] + 1e-3 * math.sin(th)))
                    for th in np.linspace(0.0, 2 * np.pi, 16, endpoint=False))
        if probe < max(settings.newton_tol * 1e3, 1e-12):
            raise NumericError("non-isolated singularity suspected "
                               "(the zero set continues beyond the point)")
    merged.sort(key=lambda p: (round(p[0], 9), round(p[1], 9)))
    return [(p, field.jacobian(*p)) for p in merged]


def classify_point(jacobian: np.ndarray, settings: NumericSettings) -> str:
    """Hyperbolic kind from the eigenvalues, or 'nonhyperbolic'."""
    tr = jacobian[0, 0] + jacobian[1, 1]
    det = float(np.linalg.det(jacobian))
    disc = tr * tr - 4 * det
    scale = max(1.0, float(np.abs(jacobian).max()))
    if disc >= 0:
        s = math.sqrt(disc)
        l1, l2 = (tr - s) / 2, (tr + s) / 2
        if min(abs(l1), abs(l2)) <= settings.eig_tol * scale:
            return "nonhyperbolic"
        if l1 * l2 < 0:
            return "hyperbolic_saddle"
        return ("hyperbolic_node_attracting" if tr < 0
                else "hyperbolic_node_repelling")
    if abs(tr) <= settings.eig_tol * scale:
        return "nonhyperbolic"
    return ("hyperbolic_focus_attracting" if tr < 0
            else "hyperbolic_focus_repelling")


# ---------------------------------------------------------------------------
# integration driver with events


@dataclass
class Flight:
    """Result of integrating until an event."""

    status: str  # "boundary" | "ball" | "section" | "cycle" | "timeout"
    target: int | None  # ball index or cycle index
    point: np.ndarray
    t: float
    s: float | None  # section parameter at a section event
    polyline: np.ndarray


class _Integrator:
    def __init__(self, field: PolynomialField, settings: NumericSettings,
                 backward: bool = False):
        f = field.reversed() if backward else field
        self.args = f.arrays()
        self.R = field.radius
        self.settings = settings

    def _bisect(self, p, fn, h):
        """Event time in (0, h] after state p; returns the event point."""
        pi, pj, pc, qi, qj, qc = self.args
        x, y = p
        lo, hi = 0.0, h
        for _ in range(80):
            mid = (lo + hi) / 2
            mx, my = K.fixed_step(pi, pj, pc, qi, qj, qc, x, y, mid)
            if fn(mx, my) > 0:
                hi = mid
            else:
                lo = mid
            if hi - lo < 1e-15 * max(1.0, h):
                break
        return np.array(K.fixed_step(pi, pj, pc, qi, qj, qc, x, y, hi))

    def run(self, start, *, balls=None, sections=None, arm_dist=0.0,
            max_time=None) -> Flight:
        """Integrate until: leaving the disc, entering a ball, or crossing a
        section segment; 'balls' is (centers, radii), 'sections' a list of
        (a, b) endpoint pairs."""
        pi, pj, pc, qi, qj, qc = self.args
        st = self.settings
        max_time = max_time if max_time is not None else st.max_time
        centers = np.zeros((0, 2))
        radii = np.zeros(0)
        if balls is not None:
            centers, radii = balls
        secs = sections or []
        x, y = float(start[0]), float(start[1])
        t = 0.0
        h = 1e-6
        out = np.empty((st.chunk, 4))
        poly = [np.array([x, y])]
        armed = arm_dist == 0.0
        prev = np.array([x, y])
        side_prev = [_section_side(prev, a, b) for a, b in secs]
        while t < max_time:
            x, y, t, h, count = K.advance(pi, pj, pc, qi, qj, qc, x, y, t, h,
                                          st.integ_tol, self.R / 4, out)
            if count == 0:
                raise NumericError("integrator stalled (step size underflow)")
            pts = out[:count, :2]
            for row in range(count):
                p = pts[row]
                t_row = out[row, 2]
                if not armed and np.hypot(*(p - start)) > arm_dist:
                    armed = True
                # boundary
                if p[0] ** 2 + p[1] ** 2 >= self.R ** 2:
                    hit = self._bisect(prev, lambda ax, ay:
                                       ax * ax + ay * ay - self.R ** 2,
                                       out[row, 3])
                    return Flight("boundary", None, hit, t_row, None,
                                  np.array(poly + [hit]))
                # balls
                if len(radii):
                    d = np.hypot(centers[:, 0] - p[0], centers[:, 1] - p[1])
                    inside = np.nonzero(d < radii)[0]
                    if inside.size and armed:
                        i = int(inside[0])
                        c, r = centers[i], radii[i]
                        hit = self._bisect(prev, lambda ax, ay:
                                           r ** 2 - ((ax - c[0]) ** 2
                                                     + (ay - c[1]) ** 2),
                                           out[row, 3])
                        return Flight("ball", i, hit, t_row, None,
                                      np.array(poly + [hit]))
                # sections
                for si, (a, b) in enumerate(secs):
                    side = _section_side(p, a, b)
                    if armed and side_prev[si] * side < 0:
                        hit = self._bisect(prev, lambda ax, ay, a=a, b=b,
                                           sgn=side:
                                           sgn * _section_side((ax, ay), a, b),
                                           out[row, 3])
                        u = _section_param(hit, a, b)
                        if 0.0 <= u <= 1.0:
                            return Flight("section", si, hit, t_row, u,
                                          np.array(poly + [hit]))
                    side_prev[si] = side
                poly.append(p.copy())
                prev = p.copy()
        return Flight("timeout", None, np.array([x, y]), t, None,
                      np.array(poly))


def _section_side(p, a, b):
    return (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])


def _section_param(p, a, b):
    ab = (b[0] - a[0], b[1] - a[1])
    den = ab[0] ** 2 + ab[1] ** 2
    return ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1]) / den


# ---------------------------------------------------------------------------
# limit cycles


@dataclass
class DetectedCycle:
    anchor: np.ndarray  # point on the cycle (section fixed point)
    section: tuple[np.ndarray, np.ndarray]
    s_star: float
    stability: str  # attracting | repelling
    ccw: bool
    witness: np.ndarray  # one period of the orbit
    period: float


def _first_return(field, settings, start, section, arm, balls=None) -> tuple[float, np.ndarray, float] | None:
    integ = _Integrator(field, settings)
    try:
        fl = integ.run(start, sections=[section], arm_dist=arm, balls=balls)
    except NumericError:
        return None
    if fl.status != "section":
        return None
    return fl.s, fl.point, fl.t


def detect_limit_cycles(field: PolynomialField, points,
                        settings: NumericSettings) -> list[DetectedCycle]:
    """Limit cycles via return-map displacement sign changes on radial
    sections from each focus/node and one section from the disc boundary."""
    R = field.radius
    sections = []
    for (p, jac) in points:
        kind = classify_point(jac, settings)
        if kind in ("hyperbolic_focus_attracting", "hyperbolic_focus_repelling",
                    "hyperbolic_node_attracting", "hyperbolic_node_repelling"):
            a = np.array(p, dtype=float)
            direction = np.array([1.0, 0.0])
            length = settings.section_length * (R - float(np.hypot(*p)))
            sections.append((a, a + direction * length))
    sections.append((np.array([R, 0.0]), np.array([R, 0.0])
                     - np.array([settings.section_length * R, 0.0])))

    # orbits falling into a node or focus cannot return: abort those runs
    sinks = [p for p, jac in points
             if classify_point(jac, settings) != "hyperbolic_saddle"]
    balls = ((np.array(sinks), np.full(len(sinks), settings.capture_radius))
             if sinks else None)

    found: list[DetectedCycle] = []
    for a, b in sections:
        length = float(np.hypot(*(b - a)))
        arm = max(0.02 * length, 2.5 * settings.capture_radius)
        u_min = min(0.3, max(0.03, 3.2 * settings.capture_radius / length))
        samples = np.linspace(u_min, 0.98, 48)
        disp = {}
        for u in samples:
            start = a + u * (b - a)
            ret = _first_return(field, settings, start, (a, b),
                                arm=arm, balls=balls)
            if ret is not None:
                disp[u] = ret[0] - u
        us = sorted(disp)
        for u1, u2 in zip(us, us[1:]):
            if disp[u1] == 0 or disp[u1] * disp[u2] > 0:
                continue
            lo, hi = u1, u2
            dlo = disp[u1]
            for _ in range(70):
                mid = (lo + hi) / 2
                ret = _first_return(field, settings, a + mid * (b - a), (a, b),
                                    arm=arm, balls=balls)
                if ret is None:
                    break
                dm = ret[0] - mid
                if dm == 0 or (hi - lo) * length < settings.cycle_tol:
                    lo = hi = mid
                    break
                if dlo * dm < 0:
                    hi = mid
                else:
                    lo, dlo = mid, dm
            s_star = (lo + hi) / 2
            # contraction test on both sides
            ds = max(50 * settings.cycle_tol / length, 1e-6)
            verdicts = []
            for u in (s_star - ds, s_star + ds):
                ret = _first_return(field, settings, a + u * (b - a), (a, b),
                                    arm=arm, balls=balls)
                if ret is None:
                    verdicts.append(None)
                    continue
                verdicts.append(abs(ret[0] - s_star) < abs(u - s_star))
            if None in verdicts:
                continue
            if verdicts[0] != verdicts[1]:
                raise NumericError(
                    "possible semistable or non-isolated cycle: inconclusive; "
                    "supply the skeleton manually")
            stability = "attracting" if verdicts[0] else "repelling"
            anchor = a + s_star * (b - a)
            ret = _first_return(field, settings, anchor, (a, b),
                                arm=arm, balls=balls)
            if ret is None or np.hypot(*(ret[1] - anchor)) > 1e4 * settings.cycle_tol:
                continue  # the orbit through this point does not close
            fl_poly = _cycle_witness(field, settings, anchor, (a, b))
            area = _signed_area(fl_poly)
            cyc = DetectedCycle(anchor=anchor, section=(a, b), s_star=s_star,
                                stability=stability, ccw=area > 0,
                                witness=fl_poly, period=ret[2])
            if not any(_same_cycle(cyc, other, settings) for other in found):
                found.append(cyc)
        _check_displacement_plateau(field, settings, (a, b), disp, length,
                                    arm, balls)
    return found


def _check_displacement_plateau(field, settings, section, disp, length,
                                arm, balls):
    """A local displacement minimum near zero without a sign change means a
    fold of the return map: report it instead of guessing."""
    a, b = section
    us = sorted(disp)
    for i in range(1, len(us) - 1):
        d0, d1, d2 = (disp[us[i - 1]], disp[us[i]], disp[us[i + 1]])
        if d0 * d1 <= 0 or d1 * d2 <= 0:
            continue  # a sign change nearby was already processed
        if not (abs(d1) <= abs(d0) and abs(d1) <= abs(d2)):
            continue
        if abs(d1) * length > 0.02:
            continue
        lo, hi = us[i - 1], us[i + 1]
        best = abs(d1)
        for _ in range(40):
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            r1 = _first_return(field, settings, a + m1 * (b - a), (a, b),
                               arm=arm, balls=balls)
            r2 = _first_return(field, settings, a + m2 * (b - a), (a, b),
                               arm=arm, balls=balls)
            if r1 is None or r2 is None:
                break
            f1, f2 = abs(r1[0] - m1), abs(r2[0] - m2)
            best = min(best, f1, f2)
            if f1 < f2:
                hi = m2
            else:
                lo = m1
            if best * length < 1e2 * settings.cycle_tol:
                raise NumericError(
                    "possible semistable or non-isolated cycle: inconclusive; "
                    "supply the skeleton manually")


def _cycle_witness(field, settings, anchor, section):
    integ = _Integrator(field, settings)
    fl = integ.run(anchor, sections=[section],
                   arm_dist=0.02 * float(np.hypot(*(section[1] - section[0]))))
    if fl.status != "section":
        raise NumericError("cycle witness orbit failed to return")
    return fl.polyline


def _signed_area(poly):
    x, y = poly[:, 0], poly[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _same_cycle(c1: DetectedCycle, c2: DetectedCycle,
                settings: NumericSettings) -> bool:
    d = np.min(np.hypot(c2.witness[:, 0] - c1.anchor[0],
                        c2.witness[:, 1] - c1.anchor[1]))
    return d < max(1e3 * settings.cycle_tol, 1e-5)


# ---------------------------------------------------------------------------
# separatrices


@dataclass
class TracedSeparatrix:
    saddle: int  # index into the point list
    branch: int  # 0..3 in counterclockwise order
    stable: bool
    terminal: tuple  # ("point", i) | ("cycle", i) | ("infinity",)
    polyline: np.ndarray


def saddle_branches(jacobian: np.ndarray) -> list[tuple[np.ndarray, bool]]:
    """Four branch directions in counterclockwise order, tagged stable."""
    w, v = np.linalg.eig(jacobian)
    dirs = []
    for k in range(2):
        vec = np.real(v[:, k]) / np.hypot(*np.real(v[:, k]))
        stable = np.real(w[k]) < 0
        dirs.append((vec, stable))
        dirs.append((-vec, stable))
    dirs.sort(key=lambda t: math.atan2(t[0][1], t[0][0]))
    return dirs


def trace_separatrix(field: PolynomialField, points, saddle_idx: int,
                     branch: int, settings: NumericSettings,
                     cycles: list[DetectedCycle] | None = None,
                     overrides=None) -> TracedSeparatrix:
    """Integrate one saddle branch to its limit set.

    Terminates at the disc boundary (virtual infinity), inside the capture
    ball of an attracting/repelling point, or on convergence to a detected
    cycle; approaching another saddle raises ConnectionCandidateError unless
    the override list confirms the connection."""
    cycles = cycles or []
    overrides = overrides or []
    p0, jac = points[saddle_idx]
    dirs = saddle_branches(jac)
    vec, stable = dirs[branch]
    start = np.array(p0) + settings.sep_offset * vec
    integ = _Integrator(field, settings, backward=stable)

    centers = np.array([p for p, _ in points])
    radii = np.full(len(points), settings.capture_radius)
    radii_ball = radii.copy()
    kinds = [classify_point(j, settings) for _, j in points]

    sections = [c.section for c in cycles]
    state = start
    poly_parts = [np.array([np.array(p0), start])]
    hits: dict[int, int] = {}
    t_used = 0.0
    while True:
        fl = integ.run(state, balls=(centers, radii_ball), sections=sections,
                       arm_dist=2 * settings.capture_radius,
                       max_time=settings.max_time - t_used)
        poly_parts.append(fl.polyline)
        t_used += fl.t
        if fl.status == "boundary":
            return TracedSeparatrix(saddle_idx, branch, stable, ("infinity",),
                                    np.vstack(poly_parts))
        if fl.status == "ball":
            i = fl.target
            kind = kinds[i]
            if kind == "hyperbolic_saddle":
                for ov in overrides:
                    if (ov.get("saddle") == saddle_idx
                            and ov.get("branch") == branch
                            and ov.get("target") == i):
                        return TracedSeparatrix(saddle_idx, branch, stable,
                                                ("point", i),
                                                np.vstack(poly_parts))
                raise ConnectionCandidateError(
                    f"separatrix of saddle {saddle_idx} branch {branch} "
                    f"approaches saddle {i}: connection candidate; confirm it "
                    "in an override file")
            want = "attracting" if not stable else "repelling"
            if (("attracting" in kind) == (want == "attracting")):
                confirmed = _confirm_capture(integ, fl.point, centers[i],
                                             settings)
                if confirmed:
                    return TracedSeparatrix(saddle_idx, branch, stable,
                                            ("point", i),
                                            np.vstack(poly_parts))
            # passing visitor: shrink this ball and continue from just past it
            radii_ball = radii_ball.copy()
            radii_ball[i] = 0.0
            state = fl.point
            continue
        if fl.status == "section":
            si = fl.target
            key = si
            hits[key] = hits.get(key, 0) + 1
            c = cycles[si]
            if abs(fl.s - c.s_star) * np.hypot(*(c.section[1] - c.section[0])) \
                    < 1e3 * settings.cycle_tol and hits[key] >= 2:
                return TracedSeparatrix(saddle_idx, branch, stable,
                                        ("cycle", si), np.vstack(poly_parts))
            state = fl.point
            continue
        raise NumericError(
            f"unresolved omega-limit for saddle {saddle_idx} branch {branch}")


def _confirm_capture(integ: _Integrator, point, center, settings):
    d0 = np.hypot(*(point - center))
    fl = integ.run(point, balls=(np.array([center]),
                                 np.array([d0 / 4])),
                   max_time=settings.max_time / 10)
    return fl.status == "ball"


# ---------------------------------------------------------------------------
# assembly


def extract_skeleton(field: PolynomialField, settings: NumericSettings | None = None,
                     overrides=None) -> Skeleton:
    """Full numeric pipeline: points, cycles, separatrices, embedding."""
    settings = settings or NumericSettings()
    direction = verify_boundary(field)

    points = find_singular_points(field, settings)
    kinds = []
    for p, jac in points:
        kind = classify_point(jac, settings)
        if kind == "nonhyperbolic":
            raise NonhyperbolicPointError(
                f"singular point at ({p[0]:.6g}, {p[1]:.6g}) is nonhyperbolic "
                "at tolerance: supply the skeleton manually")
        kinds.append(kind)

    index = {"hyperbolic_saddle": -1}
    finite_sum = sum(index.get(k, 1) for k in kinds)
    if finite_sum != 1:
        raise NumericError(
            f"finite singular indices sum to {finite_sum}, not +1: the disc "
            "boundary transversality is violated or points were missed")

    cycles = detect_limit_cycles(field, points, settings)

    traces: list[TracedSeparatrix] = []
    for i, kind in enumerate(kinds):
        if kind != "hyperbolic_saddle":
            continue
        for branch in range(4):
            traces.append(trace_separatrix(field, points, i, branch, settings,
                                           cycles, overrides))

    return _assemble(field, settings, direction, points, kinds, cycles, traces)


def _angle_at_radius(poly: np.ndarray, center, radius) -> float:
    """Angle of the last crossing of the circle around `center`."""
    d = np.hypot(poly[:, 0] - center[0], poly[:, 1] - center[1])
    inside = d < radius
    idx = None
    for k in range(len(poly) - 1, 0, -1):
        if inside[k] and not inside[k - 1]:
            idx = k
            break
    if idx is None:
        p = poly[-1]
        return math.atan2(p[1] - center[1], p[0] - center[0])
    a, b = poly[idx - 1], poly[idx]
    da, db = d[idx - 1], d[idx]
    lam = (da - radius) / (da - db) if da != db else 0.5
    p = a + lam * (b - a)
    return math.atan2(p[1] - center[1], p[0] - center[0])


def _assemble(field, settings, direction, points, kinds, cycles, traces):
    pid = [f"p{i}" for i in range(len(points))]
    cid = [f"c{i}" for i in range(len(cycles))]

    sp: dict[str, SingularPoint] = {}
    for i, kind in enumerate(kinds):
        if kind == "hyperbolic_saddle":
            sp[pid[i]] = SingularPoint(pid[i], kind, ("hyperbolic",) * 4, -1)
        else:
            sp[pid[i]] = SingularPoint(pid[i], kind)
    inf_kind = ("hyperbolic_node_repelling" if direction == "inward"
                else "hyperbolic_node_attracting")
    sp["infinity"] = SingularPoint("infinity", inf_kind)

    lc: dict[str, LimitCycle] = {}
    for k, c in enumerate(cycles):
        lc[cid[k]] = LimitCycle(cid[k], cid[k], hyperbolic=True,
                                stability=c.stability,
                                time_orientation="ccw" if c.ccw else "cw")

    # separatrix records and their terminal data
    seps: dict[str, Separatrix] = {}
    edges: dict[str, EdgeRecord] = {}
    sep_of_trace = {}
    for tr in traces:
        sid = f"s{tr.saddle}_{tr.branch}"
        sep_of_trace[(tr.saddle, tr.branch)] = sid
        own = LimitObject.point(pid[tr.saddle])
        if tr.terminal[0] == "point":
            other = LimitObject.point(pid[tr.terminal[1]])
            other_v = pid[tr.terminal[1]]
        elif tr.terminal[0] == "cycle":
            other = LimitObject.cycle(cid[tr.terminal[1]])
            other_v = f"a_{cid[tr.terminal[1]]}"
        else:
            other = LimitObject.point("infinity")
            other_v = "infinity"
        if tr.stable:
            seps[sid] = Separatrix(sid, sid, alpha=other, omega=own,
                                   germ_at_omega=tr.branch)
            edges[sid] = EdgeRecord(tail=other_v, head=pid[tr.saddle],
                                    label="sep")
        else:
            seps[sid] = Separatrix(sid, sid, alpha=own, omega=other,
                                   germ_at_alpha=tr.branch)
            edges[sid] = EdgeRecord(tail=pid[tr.saddle], head=other_v,
                                    label="sep")

    vertices: dict[str, VertexRecord] = {}

    # saddle rotations follow the counterclockwise branch order
    for i, kind in enumerate(kinds):
        if kind != "hyperbolic_saddle":
            continue
        rot = []
        for branch in range(4):
            sid = sep_of_trace[(i, branch)]
            end = "head" if seps[sid].stable else "tail"
            rot.append((sid, end))
        vertices[pid[i]] = VertexRecord(label="point", rotation=tuple(rot))

    # arrivals at nodes, foci and infinity ordered by crossing angle
    arrivals: dict[str, list] = {v: [] for v in list(sp)}
    for tr in traces:
        sid = sep_of_trace[(tr.saddle, tr.branch)]
        end = "tail" if tr.stable else "head"  # dart at the terminal object
        if tr.terminal[0] == "point":
            j = tr.terminal[1]
            ang = _angle_at_radius(tr.polyline, points[j][0],
                                   settings.capture_radius)
            arrivals[pid[j]].append((ang, (sid, end)))
        elif tr.terminal[0] == "infinity":
            p = tr.polyline[-1]
            ang = math.atan2(p[1], p[0])
            arrivals["infinity"].append((-ang, (sid, end)))
    for i, kind in enumerate(kinds):
        if kind == "hyperbolic_saddle":
            continue
        darts = [d for _, d in sorted(arrivals[pid[i]], key=lambda t: t[0])]
        vertices[pid[i]] = VertexRecord(label="point", rotation=tuple(darts))
    inf_darts = [d for _, d in sorted(arrivals["infinity"], key=lambda t: t[0])]
    vertices["infinity"] = VertexRecord(label="point", rotation=tuple(inf_darts))

    # cycle anchors: winding separatrices per side, ordered by entry phase
    for k, c in enumerate(cycles):
        anchor = f"a_{cid[k]}"
        edges[cid[k]] = EdgeRecord(tail=anchor, head=anchor, label="cycle")
        left, right = [], []
        for tr in traces:
            if tr.terminal != ("cycle", k):
                continue
            sid = sep_of_trace[(tr.saddle, tr.branch)]
            end = "tail" if tr.stable else "head"
            phase, inside = _cycle_entry(tr.polyline, c)
            side_is_left = inside == c.ccw  # left of the flow = inner for ccw
            (left if side_is_left else right).append((phase, (sid, end)))
        rot = ([(cid[k], "tail")] + [d for _, d in sorted(left)]
               + [(cid[k], "head")] + [d for _, d in sorted(right)])
        vertices[anchor] = VertexRecord(label="anchor", rotation=tuple(rot))

    graph = EmbeddedGraph(vertices=vertices, edges=edges)
    graph = _numeric_containment(graph, points, kinds, cycles, pid, cid, field)

    regions = _infer_regions(Skeleton(points=sp, cycles=lc, separatrices=seps,
                                      regions={}, embedding=graph))
    skel = Skeleton(points=sp, cycles=lc, separatrices=seps, regions=regions,
                    embedding=graph)
    rep = validate_skeleton(skel)
    if not rep.ok:
        raise NumericError("assembled skeleton is invalid: "
                           + "; ".join(rep.issues))
    _verify_regions_by_sampling(field, settings, skel, points, cycles, pid, cid)
    return skel


def _cycle_entry(poly: np.ndarray, c: DetectedCycle) -> tuple[float, bool]:
    """Phase (arclength fraction) and side of the first tube entry."""
    W = c.witness
    tube = max(0.02 * _poly_length(W), 1e-4)
    for p in poly:
        d = np.hypot(W[:, 0] - p[0], W[:, 1] - p[1])
        j = int(np.argmin(d))
        if d[j] < tube:
            phase = _arclength_fraction(W, j)
            inside = _winding_inside(W, p)
            return phase, inside
    p = poly[-1]
    d = np.hypot(W[:, 0] - p[0], W[:, 1] - p[1])
    j = int(np.argmin(d))
    return _arclength_fraction(W, j), _winding_inside(W, p)


def _poly_length(W):
    return float(np.sum(np.hypot(np.diff(W[:, 0]), np.diff(W[:, 1]))))


def _arclength_fraction(W, j):
    seg = np.hypot(np.diff(W[:, 0]), np.diff(W[:, 1]))
    total = float(np.sum(seg))
    return float(np.sum(seg[:j])) / total if total else 0.0


def _winding_inside(W, p):
    x = W[:, 0] - p[0]
    y = W[:, 1] - p[1]
    ang = np.unwrap(np.arctan2(y, x))
    return abs(ang[-1] - ang[0]) > math.pi


def _numeric_containment(graph, points, kinds, cycles, pid, cid, field):
    """Arrange disconnected pieces by geometric nesting inside cycle orbits.

    Supported shapes: children are bare cycle components or isolated points;
    non-enclosed components hang off the isolated infinity vertex."""
    comp = graph.components()
    roots = sorted(set(comp.values()))
    if len(roots) == 1:
        return graph

    pos: dict[str, np.ndarray | None] = {comp["infinity"]: None}
    for i, (p, _) in enumerate(points):
        pos.setdefault(comp[pid[i]], np.array(p, dtype=float))
    for k in range(len(cycles)):
        pos.setdefault(comp[f"a_{cid[k]}"], cycles[k].anchor)

    def inside_cycle(k, q):
        return q is not None and _winding_inside(cycles[k].witness, q)

    def inner_dart(k):
        # inner side of a counterclockwise plane cycle is its left face
        return (cid[k], "head") if cycles[k].ccw else (cid[k], "tail")

    def outer_face(root):
        faces = graph.local_faces(root)
        if len(faces) == 1:
            return 0
        ks = [k for k in range(len(cycles)) if comp[f"a_{cid[k]}"] == root]
        outermost = [k for k in ks
                     if not any(inside_cycle(j, np.asarray(cycles[k].anchor))
                                for j in ks if j != k)]
        if len(outermost) != 1:
            raise NumericError("unsupported nesting: a disconnected component "
                               "with no single outermost cycle")
        k = outermost[0]
        for i, (p, _) in enumerate(points):
            if comp.get(pid[i]) == root and not inside_cycle(k, np.asarray(p)):
                raise NumericError(
                    "unsupported nesting: component material outside its "
                    "outermost cycle")
        outward = (cid[k], "tail") if cycles[k].ccw else (cid[k], "head")
        return _face_index_with_dart_local(graph, root, outward)

    containment = []
    inf_root = comp["infinity"]
    for root in roots:
        if root == inf_root:
            continue
        enclosing = None
        for k in range(len(cycles)):
            if comp[f"a_{cid[k]}"] == root:
                continue
            if inside_cycle(k, pos.get(root)):
                if enclosing is None or inside_cycle(enclosing,
                                                     cycles[k].anchor):
                    enclosing = k
        if enclosing is None:
            if len(graph.local_faces(inf_root)) != 1:
                raise NumericError("unsupported nesting around infinity")
            containment.append(Containment(
                component_root=root, inside_component=inf_root,
                inside_face=0, outer_face=outer_face(root)))
        else:
            parent_root = comp[f"a_{cid[enclosing]}"]
            idx = _face_index_with_dart_local(graph, parent_root,
                                              inner_dart(enclosing))
            containment.append(Containment(
                component_root=root, inside_component=parent_root,
                inside_face=idx, outer_face=outer_face(root)))
    containment.sort(key=lambda c: c.component_root)
    return EmbeddedGraph(vertices=graph.vertices, edges=graph.edges,
                         containment=tuple(containment))


def _face_index_with_dart_local(graph, root, dart):
    for i, f in enumerate(graph.local_faces(root)):
        if any(dart in w for w in f.boundary_walks):
            return i
    raise NumericError(f"no face of {root} contains {dart}")


def _infer_regions(skel: Skeleton) -> dict[str, Region]:
    """One region per face; alpha is the unique repelling boundary object,
    omega the unique attracting one."""
    faces = trace_faces(skel.embedding)
    regions = {}
    for n, f in enumerate(faces):
        att, rep = [], []
        seen = set()
        anchors = {skel.anchor(cid): cid for cid in skel.cycles}
        for i, walk in enumerate(f.boundary_walks):
            if not walk:
                v = f.wall_roots[i]
                obj = LimitObject.point(v)
                _classify_end(skel, obj, None, att, rep, seen)
                continue
            for d in walk:
                eid = d[0]
                c = skel.cycle_by_edge(eid)
                if c is not None:
                    side = "left" if d[1] == "head" else "right"
                    _classify_end(skel, LimitObject.cycle(c.id), (c, side),
                                  att, rep, seen)
                v = skel.embedding.dart_vertex(d)
                if v in skel.points:
                    obj = LimitObject.point(v)
                    _classify_end(skel, obj, None, att, rep, seen)
                elif v in anchors and eid not in skel.cycles:
                    # a winding separatrix passes through the anchor: the
                    # region hugs the cycle on the side its block names
                    c = skel.cycles[anchors[v]]
                    side = _anchor_block_side(skel, v, c, d)
                    _classify_end(skel, LimitObject.cycle(c.id), (c, side),
                                  att, rep, seen)
        if len(att) != 1 or len(rep) != 1:
            raise NumericError(
                f"face {f.key}: cannot infer region limits "
                f"(attracting={att}, repelling={rep})")
        flow = "spiral" if f.shape == "annulus" else "strip"
        rid = f"r{n}"
        regions[rid] = Region(rid, f.key, alpha=rep[0], omega=att[0], flow=flow)
    return regions


def _anchor_block_side(skel, anchor, cycle, dart):
    rot = skel.embedding.vertices[anchor].rotation
    i = rot.index((cycle.edge, "tail"))
    j = rot.index(dart)
    k = rot.index((cycle.edge, "head"))
    n = len(rot)
    return "left" if (j - i) % n < (k - i) % n else "right"


def _classify_end(skel, obj, cycle_side, att, rep, seen):
    key = (obj.kind, obj.ref, cycle_side[1] if cycle_side else None)
    if key in seen:
        return
    seen.add(key)
    if obj.kind == "singular_point":
        p = skel.points[obj.ref]
        a = p.attraction()
        if a == "attracting" and obj not in att:
            att.append(obj)
        elif a == "repelling" and obj not in rep:
            rep.append(obj)
        return
    c, side = cycle_side
    if c.stability == "attracting":
        if obj not in att:
            att.append(obj)
    elif c.stability == "repelling":
        if obj not in rep:
            rep.append(obj)
    else:
        if c.attracting_side == side:
            if obj not in att:
                att.append(obj)
        elif obj not in rep:
            rep.append(obj)


def _verify_regions_by_sampling(field, settings, skel, points, cycles, pid, cid):
    """Sample orbits beside each cycle witness and check their limit sets
    appear among the adjacent regions' declared limits."""
    for k, c in enumerate(cycles):
        W = c.witness
        m = len(W) // 2
        p = W[m]
        tang = W[m + 1] - W[m - 1]
        n = np.array([-tang[1], tang[0]])
        n = n / np.hypot(*n)
        offset = 0.03 * _poly_length(W) / (2 * math.pi)
        expected = {"attracting": "omega", "repelling": "alpha"}
        for sgn in (+1, -1):
            q = p + sgn * offset * n
            integ = _Integrator(field, settings,
                                backward=(c.stability == "repelling"))
            centers = np.array([pt for pt, _ in points])
            radii = np.full(len(points), settings.capture_radius)
            fl = integ.run(q, balls=(centers, radii), sections=[c.section],
                           arm_dist=offset / 2,
                           max_time=settings.max_time / 4)
            if fl.status not in ("section", "ball", "boundary"):
                raise NumericError("region sampling near a cycle failed")
