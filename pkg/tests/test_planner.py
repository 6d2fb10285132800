import math

import pytest

from symrpr import (
    DifferentAspects,
    GeometryParams,
    GlidePose,
    JointPath,
    JointSquares,
    NuDelta,
    PlanOptions,
    SingularityHit,
    aspect_of,
    joint_to_nudelta,
    label_pose,
    leg_lengths_squared,
    lift_nu,
    plan,
    pose_distance,
    read_path_csv,
    track_path,
    validate,
    write_path_csv,
)

REF = GeometryParams(1.0, 1.0, 0.0)

# a same-aspect pair spanning labels 1 -> 0 (both signatures (-1, -1))
START = GlidePose(math.pi / 4, 0.176777, -1.0)
GOAL = GlidePose(math.pi / 4, -0.3, -0.5)


def lift_segment_path(pose, lam):
    j0 = leg_lengths_squared(REF, pose)
    n0 = joint_to_nudelta(j0)
    n1 = joint_to_nudelta(lift_nu(j0, lam))
    return JointPath([n0, n1], pose, pose, n1.nu, [])


def test_lift_nu_examples():
    assert lift_nu(JointSquares(1, 1, 1), 1.0).as_tuple() == (2.0, 2.0, 2.0)
    assert lift_nu(JointSquares(1, 2, 3), 0.0).as_tuple() == (1.0, 2.0, 3.0)
    with pytest.raises(ValueError):
        lift_nu(JointSquares(1, 1, 1), -0.5)


def test_lift_tracks_g_growth():
    pose = GlidePose(0.3, 0.5, 0.4)
    trace = track_path(REF, lift_segment_path(pose, 1.0), pose)
    final = trace.final_pose
    assert final.psi == pytest.approx(pose.psi, abs=1e-9)
    assert final.r == pytest.approx(pose.r, abs=1e-9)
    assert final.g == pytest.approx(math.sqrt(0.16 + 0.25), abs=1e-9)
    assert all(b.g_abs >= a.g_abs - 1e-12
               for a, b in zip(trace.samples, trace.samples[1:]))
    assert trace.events == []


def test_plan_same_aspect_pair():
    assert label_pose(REF, START) == 1
    assert label_pose(REF, GOAL) == 0
    assert aspect_of(REF, START) == aspect_of(REF, GOAL)
    path = plan(REF, START, GOAL)
    report = validate(REF, path, START, GOAL)
    assert report.passed
    assert [e.arc for e in report.events] == [1]
    assert report.endpoint_error <= 1e-6
    assert report.min_g >= 1e-4
    # three-phase shape: nu rises, stays flat, then descends
    nus = [w.nu for w in path.waypoints]
    top = path.nu_level
    assert nus[0] < top and nus[-1] < top
    assert all(n == pytest.approx(top) for n in nus[1:-1])


def test_plan_trivial_when_start_equals_goal():
    path = plan(REF, START, START)
    assert len(path.waypoints) == 1
    assert path.crossings == []
    report = validate(REF, path, START, START)
    assert report.passed and report.events == []


def test_plan_rejects_opposite_g_signs():
    with pytest.raises(DifferentAspects):
        plan(REF, GlidePose(math.pi / 4, 1.1, -0.4), GlidePose(math.pi / 4, 1.1, 0.4))


def test_plan_rejects_mixed_gamma_sides():
    # the two poses below have labels 1 and 0 but sit on opposite sides of
    # the jacobian curve, so their aspect signatures differ
    with pytest.raises(DifferentAspects):
        plan(REF, GlidePose(math.pi / 4, 0.176777, 1.0), GlidePose(math.pi / 4, 1.1, 0.4))


def test_track_path_descent_through_fold_raises():
    goal = GlidePose(math.pi / 4, 1.1, 0.4)
    n0 = joint_to_nudelta(leg_lengths_squared(REF, goal))
    # descending past the goal's g drives the tracked branch into g = 0
    nu_end = n0.nu - 12.0 * 0.16 - 0.5
    bad = JointPath([n0, NuDelta(nu_end, n0.delta2, n0.delta3)], goal, goal, n0.nu, [])
    with pytest.raises(SingularityHit):
        track_path(REF, bad, goal)


def test_validate_flags_wrong_goal():
    path = plan(REF, START, GOAL)
    flipped = GlidePose(GOAL.psi, GOAL.r, -GOAL.g)
    report = validate(REF, path, START, flipped)
    assert not report.passed
    assert "endpoint" in report.reason


def test_validate_flags_undeclared_crossing():
    path = plan(REF, START, GOAL)
    stripped = JointPath(path.waypoints, START, GOAL, path.nu_level, [])
    report = validate(REF, stripped, START, GOAL)
    assert not report.passed
    assert "crossing" in report.reason


def test_plan_between_nonzero_labels():
    # two interior poses with different labels: exits one arc, re-enters another
    other = GlidePose(-math.pi / 12, 0.35, -0.8)
    l_other = label_pose(REF, other)
    assert l_other in (1, 2, 3) and l_other != 1
    assert aspect_of(REF, other) == aspect_of(REF, START)
    path = plan(REF, START, other)
    report = validate(REF, path, START, other)
    assert report.passed
    assert [e.arc for e in report.events] == [1, l_other]


def test_plan_same_nonzero_labels_uses_double_crossing():
    near = GlidePose(math.pi / 4, 0.12, -0.9)
    assert label_pose(REF, near) == 1
    assert aspect_of(REF, near) == aspect_of(REF, START)
    path = plan(REF, START, near)
    report = validate(REF, path, START, near)
    assert report.passed
    assert [e.arc for e in report.events] == [1, 1]


def test_plan_same_nonzero_labels_direct_option():
    near = GlidePose(math.pi / 4, 0.12, -0.9)
    opts = PlanOptions(allow_same_label_direct=True)
    path = plan(REF, START, near, opts)
    report = validate(REF, path, START, near, opts)
    assert report.passed
    assert report.events == []


def test_path_csv_round_trip(tmp_path):
    path = plan(REF, START, GOAL)
    f = tmp_path / "path.csv"
    write_path_csv(path, REF, f)
    back, geom = read_path_csv(f)
    assert geom == REF
    assert back.crossings == path.crossings
    assert back.nu_level == pytest.approx(path.nu_level, rel=1e-8)
    assert len(back.waypoints) == len(path.waypoints)
    assert pose_distance(back.start, path.start) <= 1e-7
    report = validate(REF, back, back.start, back.goal)
    assert report.passed
