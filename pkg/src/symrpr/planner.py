"""Joint-space motion planning between same-aspect poses.

A plan is a three-phase piecewise-linear path in (nu, delta2, delta3): lift
the start joint point along (1,1,1) to a working level, traverse at constant
nu in the (delta2, delta3) plane crossing the deltoid only through the arcs
named by the start and goal labels, then descend along (1,1,1) to the goal.
Moves along (1,1,1) keep (psi, r) fixed and only grow |g|, so they are always
singularity-free; the traverse is certified by numerical continuation.
"""

import math
from dataclasses import dataclass, field

from .dkp import solve_dkp
from .errors import (
    AtCusp,
    BranchJump,
    DifferentAspects,
    InvalidJointPoint,
    KinematicsError,
    OnSingularity,
    PlanInfeasible,
    SingularityHit,
)
from .geometry import (
    GeometryParams,
    GlidePose,
    JointSquares,
    NuDelta,
    joint_to_nudelta,
    leg_lengths_squared,
    nudelta_to_joint,
    pose_distance,
)
from .modes import label_pose, aspect_of, _norm_disc_at, merged_pair_angle
from .singularity import (
    DeltoidVerdict,
    classify_arc,
    curve_c,
    cusp_points,
    gamma_r,
    is_inside_deltoid,
)


@dataclass(frozen=True)
class PlanOptions:
    tol: float = 1e-9
    g_margin: float = 1e-4
    pose_tol: float = 1e-6
    jump_bound: float = 0.2
    level_margin: float = 0.05
    max_retries: int = 6
    step_frac: float = 1e-2
    min_step_frac: float = 1e-7
    ring_factor: float = 1.3
    ring_step: float = math.pi / 6.0
    arc_offset_frac: float = 0.1
    # route equal nonzero labels straight through the interior (no crossing)
    # instead of out-and-back through their shared arc
    allow_same_label_direct: bool = False


@dataclass
class JointPath:
    """Waypoints in (nu, delta2, delta3) plus the planning metadata."""

    waypoints: list
    start: GlidePose
    goal: GlidePose
    nu_level: float
    crossings: list


@dataclass(frozen=True)
class TraceSample:
    param: float
    point: NuDelta
    pose: GlidePose
    g_abs: float
    disc: float
    gamma_margin: float


@dataclass(frozen=True)
class CrossingEvent:
    arc: int
    param: float


@dataclass
class ContinuationTrace:
    samples: list = field(default_factory=list)
    events: list = field(default_factory=list)

    @property
    def min_g(self) -> float:
        return min(s.g_abs for s in self.samples)

    @property
    def final_pose(self) -> GlidePose:
        return self.samples[-1].pose


@dataclass
class ValidationReport:
    passed: bool
    endpoint_error: float
    events: list
    expected: list
    min_g: float
    reason: str
    trace: ContinuationTrace


def lift_nu(j: JointSquares, lam: float) -> JointSquares:
    """Shift every squared leg length by lam^2 (a pure (1,1,1) move)."""
    if lam < 0.0:
        raise ValueError("lambda must be nonnegative")
    s = lam * lam
    return JointSquares(j.rho1_sq + s, j.rho2_sq + s, j.rho3_sq + s)


def _lerp(a: NuDelta, b: NuDelta, s: float) -> NuDelta:
    return NuDelta(
        a.nu + (b.nu - a.nu) * s,
        a.delta2 + (b.delta2 - a.delta2) * s,
        a.delta3 + (b.delta3 - a.delta3) * s,
    )


def _label_with_retry(geom, pose, tol):
    for bump in (0.0, 10.0 * tol, -10.0 * tol, 100.0 * tol):
        try:
            return label_pose(geom, GlidePose(pose.psi + bump, pose.r, pose.g), tol)
        except AtCusp:
            continue
    raise AtCusp(f"label of pose {pose} remained cusp-ambiguous after retries")


class _DeltoidFrame:
    """Shared route geometry: cusp centroid, outer radius and arc doors."""

    def __init__(self, geom: GeometryParams, opts: PlanOptions):
        self.geom = geom
        self.opts = opts
        self.cusps = cusp_points(geom)
        corners = [curve_c(geom, c.t_cusp) for c in self.cusps]
        self.center = (
            sum(p[0] for p in corners) / 3.0,
            sum(p[1] for p in corners) / 3.0,
        )
        self.radius = 0.0
        n = 2048
        for i in range(n):
            psi = -0.5 * math.pi + (i + 0.5) * math.pi / n
            p = curve_c(geom, math.tan(psi))
            self.radius = max(self.radius, math.hypot(p[0] - self.center[0],
                                                      p[1] - self.center[1]))
        self._doors = {}

    def _arc_interval(self, arc: int):
        c1, c2, c3 = (c.psi_cusp for c in self.cusps)
        if arc == 1:
            return c1, c2
        if arc == 2:
            return c2, c3
        return c3, c1 + math.pi

    def _arc_length(self, lo, hi, n=256):
        total = 0.0
        prev = None
        for i in range(n + 1):
            psi = lo + (hi - lo) * i / n
            p = curve_c(self.geom, math.tan(psi))
            if prev is not None:
                total += math.hypot(p[0] - prev[0], p[1] - prev[1])
            prev = p
        return total

    def door(self, arc: int):
        """Inside/outside waypoints straddling the mid-parameter of an arc."""
        if arc in self._doors:
            return self._doors[arc]
        lo, hi = self._arc_interval(arc)
        mid = 0.5 * (lo + hi)
        p = curve_c(self.geom, math.tan(mid))
        dpsi = 1e-6
        pa = curve_c(self.geom, math.tan(mid - dpsi))
        pb = curve_c(self.geom, math.tan(mid + dpsi))
        tx, ty = pb[0] - pa[0], pb[1] - pa[1]
        norm = math.hypot(tx, ty)
        nx, ny = -ty / norm, tx / norm
        if nx * (p[0] - self.center[0]) + ny * (p[1] - self.center[1]) < 0.0:
            nx, ny = -nx, -ny
        eps = self.opts.arc_offset_frac * self._arc_length(lo, hi)
        for _ in range(40):
            inside = (p[0] - eps * nx, p[1] - eps * ny)
            outside = (p[0] + eps * nx, p[1] + eps * ny)
            ok_in = is_inside_deltoid(self.geom, *inside, self.opts.tol) is DeltoidVerdict.INSIDE
            ok_out = is_inside_deltoid(self.geom, *outside, self.opts.tol) is DeltoidVerdict.OUTSIDE
            if ok_in and ok_out:
                self._doors[arc] = (inside, outside)
                return self._doors[arc]
            eps *= 0.5
        raise PlanInfeasible(f"could not place a crossing door on arc {arc}")

    def ring_points(self, e, f):
        """Waypoints on the circle around the deltoid from e's angle to f's,
        walking the shorter way in steps bounded by the ring step."""
        radius = self.opts.ring_factor * self.radius
        tha = math.atan2(e[1] - self.center[1], e[0] - self.center[0])
        thb = math.atan2(f[1] - self.center[1], f[0] - self.center[0])
        dth = math.remainder(thb - tha, 2.0 * math.pi)
        steps = max(1, math.ceil(abs(dth) / self.opts.ring_step))
        if math.hypot(e[0] - f[0], e[1] - f[1]) <= 1e-12:
            return []
        pts = []
        for i in range(steps + 1):
            th = tha + dth * i / steps
            pts.append((self.center[0] + radius * math.cos(th),
                        self.center[1] + radius * math.sin(th)))
        return pts


def _route_stations(frame, x_start, x_goal, label_start, label_goal, variant):
    """Ordered (delta2, delta3) stations and the declared arc crossings."""
    if variant == "direct":
        return [x_start, frame.center, x_goal], []
    stations = [x_start]
    declared = []
    if label_start != 0:
        door_in, door_out = frame.door(label_start)
        stations += [frame.center, door_in, door_out]
        declared.append(label_start)
    exit_pt = stations[-1]
    entry_pt = x_goal
    if label_goal != 0:
        entry_pt = frame.door(label_goal)[1]
    stations += frame.ring_points(exit_pt, entry_pt)
    if label_goal != 0:
        door_in, door_out = frame.door(label_goal)
        stations += [door_out, door_in, frame.center]
        declared.append(label_goal)
    stations.append(x_goal)
    deduped = [stations[0]]
    for p in stations[1:]:
        q = deduped[-1]
        if math.hypot(p[0] - q[0], p[1] - q[1]) > 1e-12:
            deduped.append(p)
    return deduped, declared


def plan(geom: GeometryParams, start: GlidePose, goal: GlidePose,
         opts: PlanOptions = None) -> JointPath:
    """Plan a nonsingular joint-space path between two same-aspect poses.

    The returned path has been validated by continuation before returning;
    raises DifferentAspects when the aspect signatures disagree and
    PlanInfeasible when validation keeps failing after all working-level
    increases.
    """
    opts = opts or PlanOptions()
    a_start = aspect_of(geom, start, opts.tol)
    a_goal = aspect_of(geom, goal, opts.tol)
    if a_start != a_goal:
        raise DifferentAspects(
            f"start aspect {tuple(a_start)} differs from goal aspect {tuple(a_goal)}"
        )

    n_start = joint_to_nudelta(leg_lengths_squared(geom, start))
    if pose_distance(start, goal) <= opts.pose_tol:
        return JointPath([n_start], start, goal, n_start.nu, [])
    n_goal = joint_to_nudelta(leg_lengths_squared(geom, goal))

    label_start = _label_with_retry(geom, start, opts.tol)
    label_goal = _label_with_retry(geom, goal, opts.tol)
    x_start = (n_start.delta2, n_start.delta3)
    x_goal = (n_goal.delta2, n_goal.delta3)

    frame = _DeltoidFrame(geom, opts)
    if label_start == label_goal != 0 and opts.allow_same_label_direct:
        variants = ("direct", "doors")
    else:
        variants = ("doors",)

    margin = opts.level_margin
    reason = "no attempt made"
    for _ in range(opts.max_retries + 1):
        nu_level = max(n_start.nu, n_goal.nu) * (1.0 + margin)
        for variant in variants:
            try:
                stations, declared = _route_stations(
                    frame, x_start, x_goal, label_start, label_goal, variant
                )
                waypoints = [n_start]
                for p in stations:
                    waypoints.append(NuDelta(nu_level, p[0], p[1]))
                waypoints.append(n_goal)
                cleaned = [waypoints[0]]
                for w in waypoints[1:]:
                    prev = cleaned[-1]
                    if (abs(w.nu - prev.nu) + abs(w.delta2 - prev.delta2)
                            + abs(w.delta3 - prev.delta3)) > 1e-12:
                        cleaned.append(w)
                for w in cleaned:
                    nudelta_to_joint(w, opts.tol)
                path = JointPath(cleaned, start, goal, nu_level, declared)
                report = validate(geom, path, start, goal, opts)
            except (SingularityHit, BranchJump, AtCusp, InvalidJointPoint,
                    PlanInfeasible) as exc:
                reason = f"{type(exc).__name__}: {exc}"
                continue
            if report.passed:
                return path
            reason = report.reason
        margin *= 2.0
    raise PlanInfeasible(
        f"validation failed after {opts.max_retries} working-level increases ({reason})"
    )


def _nearest_solution(geom, joint, prev_pose, tol):
    best = None
    best_d = math.inf
    for sol in solve_dkp(geom, joint, tol):
        d = pose_distance(prev_pose, sol.pose)
        if d < best_d:
            best, best_d = sol, d
    return best, best_d


def _locate_crossing(geom, a: NuDelta, b: NuDelta, s_lo, s_hi, sign_lo, tol):
    """Bisect a discriminant sign change along the segment a->b."""
    def nd(s):
        p = _lerp(a, b, s)
        return _norm_disc_at(geom, p.delta2, p.delta3)

    lo, hi = s_lo, s_hi
    for _ in range(80):
        if hi - lo <= 1e-13:
            break
        mid = 0.5 * (lo + hi)
        if (nd(mid) >= 0.0) == (sign_lo >= 0.0):
            lo = mid
        else:
            hi = mid
    inside_s = lo if sign_lo >= 0.0 else hi
    p = _lerp(a, b, inside_s)
    return 0.5 * (lo + hi), (p.delta2, p.delta3)


def track_path(geom: GeometryParams, path: JointPath, start: GlidePose,
               opts: PlanOptions = None) -> ContinuationTrace:
    """Continuation of the workspace solution along a joint-space path.

    Steps adaptively, always picking the nearest pose among the exact direct
    solutions at the current joint point; refuses to jump branches and fails
    with SingularityHit when |g| falls under the margin or the tracked branch
    dies at a fold.  Every discriminant sign change is recorded as a crossing
    event with its deltoid arc.
    """
    opts = opts or PlanOptions()
    if not path.waypoints:
        raise ValueError("path has no waypoints")
    j0 = nudelta_to_joint(path.waypoints[0], opts.tol)
    legs0 = leg_lengths_squared(geom, start)
    resid = max(
        abs(legs0.rho1_sq - j0.rho1_sq),
        abs(legs0.rho2_sq - j0.rho2_sq),
        abs(legs0.rho3_sq - j0.rho3_sq),
    )
    if resid > opts.pose_tol * (1.0 + path.waypoints[0].nu):
        raise ValueError("start pose does not solve the path's first waypoint")

    trace = ContinuationTrace()
    pose = start

    def record(param, point, pose):
        nd = _norm_disc_at(geom, point.delta2, point.delta3)
        sample = TraceSample(
            param=param,
            point=point,
            pose=pose,
            g_abs=abs(pose.g),
            disc=nd,
            gamma_margin=abs(pose.r - gamma_r(geom, pose.psi)),
        )
        trace.samples.append(sample)
        return sample

    sample = record(0.0, path.waypoints[0], pose)
    if sample.g_abs < opts.g_margin:
        raise SingularityHit(f"|g| = {sample.g_abs} under margin {opts.g_margin} at start")

    for seg, (a, b) in enumerate(zip(path.waypoints, path.waypoints[1:])):
        seg_len = math.sqrt(
            (b.nu - a.nu) ** 2 + (b.delta2 - a.delta2) ** 2 + (b.delta3 - a.delta3) ** 2
        )
        if seg_len == 0.0:
            continue
        s = 0.0
        ds = opts.step_frac
        prev_disc = trace.samples[-1].disc
        prev_s = 0.0
        while s < 1.0:
            s_try = min(1.0, s + ds)
            point = _lerp(a, b, s_try)
            joint = nudelta_to_joint(point, opts.tol)
            sol, dist = _nearest_solution(geom, joint, pose, opts.tol)
            if sol is None or dist > opts.jump_bound:
                ds *= 0.5
                if ds < opts.min_step_frac:
                    if sol is None or abs(pose.g) < 10.0 * opts.g_margin:
                        raise SingularityHit(
                            f"tracked branch died near segment {seg}, s = {s_try}"
                        )
                    raise BranchJump(
                        f"nearest solution jumped by {dist} > {opts.jump_bound}"
                    )
                continue
            pose = sol.pose
            sample = record(seg + s_try, point, pose)
            if sample.g_abs < opts.g_margin:
                raise SingularityHit(
                    f"|g| = {sample.g_abs} under margin {opts.g_margin} "
                    f"at segment {seg}, s = {s_try}"
                )
            if (sample.disc < 0.0) != (prev_disc < 0.0):
                s_cross, inside_pt = _locate_crossing(
                    geom, a, b, prev_s, s_try, prev_disc, opts.tol
                )
                keep = trace.samples[-2].pose.psi if prev_disc >= 0.0 else pose.psi
                psi_double = merged_pair_angle(geom, inside_pt[0], inside_pt[1],
                                               keep, opts.tol)
                arc = None
                for bump in (0.0, 10.0 * opts.tol, -10.0 * opts.tol):
                    try:
                        arc = classify_arc(geom, psi_double + bump, opts.tol)
                        break
                    except AtCusp:
                        continue
                if arc is None:
                    raise SingularityHit(
                        f"path crosses the deltoid at a cusp (segment {seg})"
                    )
                trace.events.append(CrossingEvent(arc=arc, param=seg + s_cross))
            prev_disc = sample.disc
            prev_s = s_try
            s = s_try
            ds = min(opts.step_frac, ds * 2.0)
    return trace


def validate(geom: GeometryParams, path: JointPath, start: GlidePose,
             goal: GlidePose, opts: PlanOptions = None) -> ValidationReport:
    """Track the path and audit endpoint and crossings against the plan."""
    opts = opts or PlanOptions()
    trace = track_path(geom, path, start, opts)
    err = pose_distance(trace.final_pose, goal)
    arcs = [e.arc for e in trace.events]
    reasons = []
    if err > opts.pose_tol:
        reasons.append(f"endpoint error {err} > {opts.pose_tol}")
    if arcs != list(path.crossings):
        reasons.append(f"crossing audit {arcs} != declared {list(path.crossings)}")
    return ValidationReport(
        passed=not reasons,
        endpoint_error=err,
        events=list(trace.events),
        expected=list(path.crossings),
        min_g=trace.min_g,
        reason="; ".join(reasons) if reasons else "ok",
        trace=trace,
    )


def write_path_csv(path: JointPath, geom: GeometryParams, file_path) -> None:
    """Path file: comment header with geometry and metadata, then
    nu,delta2,delta3 rows at 9 significant digits."""
    from .textio import fmt9

    lines = [
        f"# geom b={fmt9(geom.b)} h={fmt9(geom.h)} d={fmt9(geom.d)}",
        f"# nu_level {fmt9(path.nu_level)}",
        "# crossings " + " ".join(str(a) for a in path.crossings),
        "# start "
        + ",".join(fmt9(v) for v in (path.start.psi, path.start.r, path.start.g)),
        "# goal "
        + ",".join(fmt9(v) for v in (path.goal.psi, path.goal.r, path.goal.g)),
        "nu,delta2,delta3",
    ]
    for w in path.waypoints:
        lines.append(",".join(fmt9(v) for v in w.as_tuple()))
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_path_csv(file_path):
    """Parse a path file back into (JointPath, GeometryParams)."""
    meta = {}
    rows = []
    with open(file_path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                key, _, rest = body.partition(" ")
                meta[key] = rest.strip()
            elif line[0].isdigit() or line[0] in "+-.":
                rows.append([float(v) for v in line.split(",")])
    if "geom" not in meta or "start" not in meta or "goal" not in meta:
        raise ValueError(f"{file_path}: missing path metadata headers")
    gvals = dict(part.split("=") for part in meta["geom"].split())
    geom = GeometryParams(b=float(gvals["b"]), h=float(gvals["h"]), d=float(gvals["d"]))
    start = GlidePose(*(float(v) for v in meta["start"].split(",")))
    goal = GlidePose(*(float(v) for v in meta["goal"].split(",")))
    crossings = [int(v) for v in meta.get("crossings", "").split()] if meta.get("crossings") else []
    nu_level = float(meta.get("nu_level", rows[0][0] if rows else 0.0))
    waypoints = [NuDelta(*row) for row in rows]
    return JointPath(waypoints, start, goal, nu_level, crossings), geom
