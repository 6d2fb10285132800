"""Kinematics of symmetric planar 3-RPR parallel manipulators.

Forward kinematics decoupled into a cubic plus a quadratic, the full singular
locus geometry (jacobian curve, discriminant deltoid, cusp half-lines and
their bifurcations), assembly-mode labeling within an aspect, and nonsingular
joint-space motion planning between assembly modes.
"""

from .errors import (
    AtCusp,
    BranchJump,
    DegeneratePolynomial,
    DifferentAspects,
    InvalidJointPoint,
    KinematicsError,
    LeadingCoefficientZero,
    OnBifurcationBoundary,
    OnSingularity,
    PlanInfeasible,
    SingularityHit,
)
from .geometry import (
    GeometryParams,
    GlidePose,
    JointSquares,
    NuDelta,
    PlanarPoint,
    RigidPose,
    angle_distance_mod_pi,
    deltas_from_pose,
    glide_to_rigid,
    joint_to_nudelta,
    leg_lengths_squared,
    nudelta_to_joint,
    platform_vertices,
    pose_distance,
    rigid_to_glide,
    wrap_half_angle,
)
from .dkp import (
    CharacteristicCubic,
    DkpSolution,
    characteristic_cubic,
    cubic_discriminant,
    g_from_r,
    r_from_psi,
    solve_cubic_real,
    solve_dkp,
)
from .singularity import (
    Bifurcations,
    CurveSample,
    CuspPoint,
    DeltoidVerdict,
    bifurcation_sweep,
    bifurcation_values,
    classify_arc,
    count_cusps,
    curve_c,
    cusp_cubic_discriminant,
    cusp_points,
    gamma_r,
    is_inside_deltoid,
    on_s2,
    s1_point,
    s2_point,
)
from .modes import AspectId, AssemblyLabel, aspect_of, characteristic_r, label_pose
from .planner import (
    ContinuationTrace,
    CrossingEvent,
    JointPath,
    PlanOptions,
    TraceSample,
    ValidationReport,
    lift_nu,
    plan,
    read_path_csv,
    track_path,
    validate,
    write_path_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")]
