"""Reference polynomial fields for the numeric front end.

Fields that are not transversal on any circle (like Van der Pol) get a high
order inward radial correction that is negligible near the dynamics of
interest but dominates at the working-disc boundary.
"""

from __future__ import annotations

from math import comb

from . import PolynomialField


def _radial_correction(strength: float, power: int):
    """Monomial terms of -strength * (x^2+y^2)^power * (x, y)."""
    p_terms = []
    q_terms = []
    for m in range(power + 1):
        c = -strength * comb(power, m)
        p_terms.append((2 * m + 1, 2 * (power - m), c))
        q_terms.append((2 * m, 2 * (power - m) + 1, c))
    return p_terms, q_terms


def van_der_pol(mu: float = 1.0, radius: float = 3.5,
                damping: float = 1e-6) -> PolynomialField:
    """Van der Pol with an inward-corrected far field.

    dx/dt = y, dy/dt = mu (1 - x^2) y - x, plus a degree-13 radial sink term
    that certifies inward transversality on the working circle while
    perturbing the limit cycle region by less than one percent."""
    pc, qc = _radial_correction(damping, 6)
    return PolynomialField(
        p_terms=tuple([(0, 1, 1.0)] + pc),
        q_terms=tuple([(0, 1, mu), (2, 1, -mu), (1, 0, -1.0)] + qc),
        radius=radius)


def exact_circle(radius: float = 2.0) -> PolynomialField:
    """dx/dt = -y + x(1-x^2-y^2), dy/dt = x + y(1-x^2-y^2): the unit circle
    is an exact hyperbolic attracting cycle."""
    return PolynomialField(
        p_terms=((0, 1, -1.0), (1, 0, 1.0), (3, 0, -1.0), (1, 2, -1.0)),
        q_terms=((1, 0, 1.0), (0, 1, 1.0), (2, 1, -1.0), (0, 3, -1.0)),
        radius=radius)


def saddle_basins(radius: float = 3.0) -> PolynomialField:
    """One saddle, one source, two sinks: the generic portrait of the support
    example (a).

    dx/dt = x - x^3, dy/dt = -y + x^2 - 1 shifted so all points sit inside
    the disc; here we use dx/dt = 1 - x^2 scaled with a radial sink."""
    # saddle at origin, sinks at (+-1, 0), source structure from infinity:
    # dx/dt = x - x^3, dy/dt = -y
    return PolynomialField(
        p_terms=((1, 0, 1.0), (3, 0, -1.0)),
        q_terms=((0, 1, -1.0),),
        radius=3.0)


def linear_sink(radius: float = 2.0) -> PolynomialField:
    return PolynomialField(p_terms=((1, 0, -1.0),), q_terms=((0, 1, -1.0),),
                           radius=radius)


def linear_focus(radius: float = 2.0) -> PolynomialField:
    """dx/dt = -x - y, dy/dt = x - y: attracting focus, no cycles."""
    return PolynomialField(p_terms=((1, 0, -1.0), (0, 1, -1.0)),
                           q_terms=((1, 0, 1.0), (0, 1, -1.0)),
                           radius=radius)


def double_well(mu: float = 1.2, radius: float = 3.0,
                damping: float = 2e-5) -> PolynomialField:
    """dx/dt = y, dy/dt = x - x^3 + y(mu - x^2), inward-corrected far field.

    A saddle between two repelling foci, all surrounded by one attracting
    limit cycle; both unstable saddle separatrices wind onto the cycle."""
    pc, qc = _radial_correction(damping, 6)
    return PolynomialField(
        p_terms=tuple([(0, 1, 1.0)] + pc),
        q_terms=tuple([(1, 0, 1.0), (3, 0, -1.0), (0, 1, mu), (2, 1, -1.0)]
                      + qc),
        radius=radius)


def semistable_circle(radius: float = 2.0) -> PolynomialField:
    """dr/dt = r(1-r^2)^2 with unit rotation: the unit circle is a fold
    cycle, attracting inside and repelling outside.  Cycle detection must
    refuse to classify it."""
    # x' = -y + x(1-r^2)^2, y' = x + y(1-r^2)^2
    def expand(lead_i, lead_j):
        # (1 - 2 r^2 + r^4) * x^lead
        terms = []
        for coeff, (di, dj) in ((1.0, (0, 0)), (-2.0, (2, 0)), (-2.0, (0, 2)),
                                (1.0, (4, 0)), (2.0, (2, 2)), (1.0, (0, 4))):
            terms.append((lead_i + di, lead_j + dj, coeff))
        return terms

    return PolynomialField(
        p_terms=tuple([(0, 1, -1.0)] + expand(1, 0)),
        q_terms=tuple([(1, 0, 1.0)] + expand(0, 1)),
        radius=radius)


def connection_pair(radius: float = 3.0) -> PolynomialField:
    """dx/dt = 1 - x^2, dy/dt = x y: two saddles joined along the x axis.

    Not boundary-transversal; used to exercise the connection-candidate path
    of the separatrix tracer directly."""
    return PolynomialField(p_terms=((0, 0, 1.0), (2, 0, -1.0)),
                           q_terms=((1, 1, 1.0),),
                           radius=radius)
