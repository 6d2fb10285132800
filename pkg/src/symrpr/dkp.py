"""Decoupled direct kinematics.

Eliminating r between the two delta equations turns the forward problem into a
cubic in t = tan(psi); each real branch then fixes r, and g comes from a
quadratic, so a joint point has between 0 and 6 poses.  The t = infinity
branch (psi = +-pi/2) appears exactly when delta2 = 0, i.e. when the cubic's
leading coefficient vanishes.
"""

import math
from dataclasses import dataclass

from .errors import DegeneratePolynomial, LeadingCoefficientZero
from .geometry import (
    HALF_PI,
    GeometryParams,
    GlidePose,
    JointSquares,
    leg_lengths_squared,
)

# roots closer than this (relative) are merged into one multiple root
_CLUSTER_REL = 1e-7
# |cos psi| below this switches r recovery to the formula based on delta3
_COS_BRANCH = 1e-6


@dataclass(frozen=True)
class CharacteristicCubic:
    """Coefficients of the branch cubic in t = tan(psi).

    c3 vanishes exactly when delta2 = 0, which is the degenerate
    t = infinity branch.
    """

    c3: float
    c2: float
    c1: float
    c0: float

    def coefficients(self):
        return (self.c3, self.c2, self.c1, self.c0)

    def __call__(self, t: float) -> float:
        return ((self.c3 * t + self.c2) * t + self.c1) * t + self.c0

    def derivative(self, t: float) -> float:
        return (3.0 * self.c3 * t + 2.0 * self.c2) * t + self.c1


@dataclass(frozen=True)
class DkpSolution:
    """One assembly mode: pose, branch parameter t, root multiplicity and
    whether the pose sits on the g = 0 singular surface."""

    pose: GlidePose
    t: float
    multiplicity: int
    on_s2: bool

    @property
    def on_s1(self) -> bool:
        return self.multiplicity >= 2


def characteristic_cubic(
    geom: GeometryParams, delta2: float, delta3: float
) -> CharacteristicCubic:
    """Branch cubic of the joint point with the given (delta2, delta3)."""
    b, h, d = geom.b, geom.h, geom.d
    return CharacteristicCubic(
        delta2 * h,
        b * h * h - b * delta3 + delta2 * d,
        2.0 * b * d * h - b * b * h + delta2 * h,
        -b * delta3 + delta2 * d + b * d * d - b * b * d,
    )


def discriminant_raw(c3: float, c2: float, c1: float, c0: float) -> float:
    """Discriminant of c3 t^3 + c2 t^2 + c1 t + c0.

    For c3 = 0 this degenerates to c2^2 * (c1^2 - 4 c2 c0), the correct limit
    counting the root at infinity, so it can be used without branching.
    """
    return (
        18.0 * c3 * c2 * c1 * c0
        - 4.0 * c2**3 * c0
        + c2 * c2 * c1 * c1
        - 4.0 * c3 * c1**3
        - 27.0 * c3 * c3 * c0 * c0
    )


def cubic_discriminant(c: CharacteristicCubic, tol: float = 1e-9) -> float:
    """Discriminant of the cubic; positive iff three distinct real roots.

    Raises LeadingCoefficientZero when c3 vanishes within tolerance (the
    caller must handle the t = infinity branch instead).
    """
    scale = max(abs(v) for v in c.coefficients())
    if abs(c.c3) <= tol * scale:
        raise LeadingCoefficientZero("cubic has (near-)zero leading coefficient")
    return discriminant_raw(*c.coefficients())


def _cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _cluster(cands):
    """Merge root candidates closer than the clustering tolerance."""
    out = []
    for t, m in sorted(cands):
        if out and abs(t - out[-1][0]) <= _CLUSTER_REL * (1.0 + abs(t)):
            t0, m0 = out[-1]
            out[-1] = ((t0 * m0 + t * m) / (m0 + m), m0 + m)
        else:
            out.append((t, m))
    return out


def _polish(c: CharacteristicCubic, t: float, mult: int) -> float:
    """Derivative-based polishing: Newton on the cubic for simple roots, on
    its derivative for double roots, exact formula for a triple root."""
    if mult >= 3:
        return -c.c2 / (3.0 * c.c3) if c.c3 != 0.0 else t
    if mult == 2:
        f = c.derivative(t)
        for _ in range(2):
            df = 6.0 * c.c3 * t + 2.0 * c.c2
            if df == 0.0:
                break
            t2 = t - f / df
            f2 = c.derivative(t2)
            if abs(f2) >= abs(f):
                break
            t, f = t2, f2
        return t
    f = c(t)
    for _ in range(2):
        df = c.derivative(t)
        if df == 0.0:
            break
        t2 = t - f / df
        f2 = c(t2)
        if abs(f2) >= abs(f):
            break
        t, f = t2, f2
    return t


def _depressed_candidates(c3, c2, c1, c0, tol):
    """Real roots (with multiplicities) of a true cubic via the closed form."""
    shift = c2 / (3.0 * c3)
    p = c1 / c3 - 3.0 * shift * shift
    q = c0 / c3 + shift * (2.0 * shift * shift - c1 / c3)
    delta = -4.0 * p**3 - 27.0 * q * q
    thr = 1e-13 * (4.0 * abs(p) ** 3 + 27.0 * q * q) + 1e-300

    if delta > thr:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = max(-1.0, min(1.0, arg))
        theta = math.acos(arg) / 3.0
        xs = [(m * math.cos(theta - TWO_THIRDS_PI * k), 1) for k in range(3)]
    elif delta < -thr:
        w = math.sqrt(q * q / 4.0 + p**3 / 27.0)
        u3 = -q / 2.0 - math.copysign(w, q)
        u = _cbrt(u3)
        x = u - p / (3.0 * u) if u != 0.0 else 0.0
        xs = [(x, 1)]
        # a barely-negative discriminant can hide a genuine double root at a
        # critical point of the cubic; recover it when the residual allows
        if p < 0.0:
            xc = math.sqrt(-p / 3.0)
            best = None
            for xstar in (xc, -xc):
                res = abs(q + xstar * (2.0 * p / 3.0))
                lim = tol * (abs(q) + 2.0 * abs(p) * xc / 3.0 + 1e-300)
                if res <= lim and (best is None or res < best[1]):
                    best = (xstar, res)
            if best is not None and abs(best[0] - x) > _CLUSTER_REL * (1.0 + abs(x)):
                xs.append((best[0], 2))
    else:
        if abs(p) <= 1e-10 * (1.0 + shift * shift):
            xs = [(0.0, 3)]
        else:
            xs = [(-3.0 * q / (2.0 * p), 2), (3.0 * q / p, 1)]
    return [(x - shift, m) for x, m in xs]


TWO_THIRDS_PI = 2.0 * math.pi / 3.0


def _quadratic_real(a, b, c, tol):
    """Real roots of a quadratic tail, with near-double recovery."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return []
    if abs(a) <= tol * scale:
        if abs(b) <= tol * scale:
            return []
        return [(-c / b, 1)]
    disc = b * b - 4.0 * a * c
    if disc > 0.0:
        sq = math.sqrt(disc)
        qq = -0.5 * (b + math.copysign(sq, b))
        r1 = qq / a
        r2 = c / qq if qq != 0.0 else 0.0
        return _cluster([(r1, 1), (r2, 1)])
    xstar = -b / (2.0 * a)
    res = abs(c - b * b / (4.0 * a))
    if res <= tol * (abs(c) + abs(b * b / (4.0 * a)) + 1e-300):
        return [(xstar, 2)]
    return []


def solve_cubic_real(c: CharacteristicCubic, tol: float = 1e-9):
    """All real roots of the cubic with multiplicities, as (t, mult) pairs.

    When the leading coefficient vanishes within tol relative to the
    coefficient norm, the root t = infinity is reported (with multiplicity
    equal to the number of vanishing leading coefficients) and the finite
    roots come from the remaining tail.  Raises DegeneratePolynomial when all
    four coefficients vanish.
    """
    c3, c2, c1, c0 = c.coefficients()
    scale = max(abs(c3), abs(c2), abs(c1), abs(c0))
    if scale == 0.0:
        raise DegeneratePolynomial("all cubic coefficients vanish")

    if abs(c3) <= tol * scale:
        if abs(c2) <= tol * scale:
            if abs(c1) <= tol * scale:
                return [(math.inf, 3)]
            return [(-c0 / c1, 1), (math.inf, 2)]
        finite = _quadratic_real(c2, c1, c0, tol)
        return sorted(finite) + [(math.inf, 1)]

    cands = _cluster(_depressed_candidates(c3, c2, c1, c0, tol))
    return sorted((_polish(c, t, m), m) for t, m in cands)


def r_from_psi(
    geom: GeometryParams, psi: float, delta2: float, delta3: float
) -> float:
    """Axis offset r of the branch at angle psi.

    Uses the delta2 equation away from psi = +-pi/2 and the delta3 equation
    near it; the two agree wherever both are defined.
    """
    c = math.cos(psi)
    if abs(c) > _COS_BRANCH:
        bc = geom.b * c
        return 0.5 * (bc - delta2 / bc)
    s = geom.d * c + geom.h * math.sin(psi)
    assert s != 0.0, "d*cos(psi) + h*sin(psi) cannot vanish with cos(psi) ~ 0 and h > 0"
    return (s * s - delta3) / (2.0 * s)


def g_from_r(rho1_sq: float, r: float, tol: float = 1e-9):
    """Glide half-translations compatible with rho1^2 and r.

    Returns the pair (g, -g), the single (0.0,) on the fold rho1^2 = 4 r^2
    (within tol*(1+rho1^2)), or None when no real g exists.
    """
    disc = 0.25 * rho1_sq - r * r
    band = tol * (1.0 + rho1_sq)
    if disc > band:
        g = math.sqrt(disc)
        return (g, -g)
    if disc >= -band:
        return (0.0,)
    return None


def solve_dkp(geom: GeometryParams, j: JointSquares, tol: float = 1e-9):
    """All poses with the given squared leg lengths (0 to 6 of them).

    Every returned pose reproduces the joint point within tol*(1+nu) in the
    max norm.  Poses on the fold g = 0 are reported once with on_s2 set;
    branch multiplicity >= 2 marks contact with the first singular surface.
    """
    nu = j.rho1_sq + j.rho2_sq + j.rho3_sq
    delta2 = 0.25 * (j.rho2_sq - j.rho1_sq)
    delta3 = 0.25 * (j.rho3_sq - j.rho1_sq)
    roots = solve_cubic_real(characteristic_cubic(geom, delta2, delta3), tol)
    bound = tol * (1.0 + nu)
    sols = []
    for t, mult in roots:
        psi = -HALF_PI if math.isinf(t) else math.atan(t)
        r = r_from_psi(geom, psi, delta2, delta3)
        gs = g_from_r(j.rho1_sq, r, tol)
        if gs is None:
            continue
        for g in gs:
            pose = GlidePose(psi, r, g)
            legs = leg_lengths_squared(geom, pose)
            resid = max(
                abs(legs.rho1_sq - j.rho1_sq),
                abs(legs.rho2_sq - j.rho2_sq),
                abs(legs.rho3_sq - j.rho3_sq),
            )
            if resid > bound:
                continue
            sols.append(
                DkpSolution(
                    pose=pose,
                    t=t,
                    multiplicity=mult,
                    on_s2=(len(gs) == 1 or abs(g) <= tol),
                )
            )
    sols.sort(key=lambda s: (s.pose.psi, -s.pose.g))
    return sols
