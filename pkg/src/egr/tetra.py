"""Hinged tetrahedra, dense quadruples, and chained link configurations.

A 4-point simplex is treated with vertex 0 as apex and face {1,2,3} as
base.  Rotating the apex around the base plane inside two extra axes
sweeps a circle of congruent copies; two positions on that circle give
a hinge pair whose apex-base-apex angle ranges over (0, 2*theta], with
theta the slope of the apex edge against the base plane.  The builders
below chain such hinges along equilateral polygonal paths: a link
joins two placed copies, the closed-polygon variant glues links around
a seed copy, and the anchor gadget stacks parallelogram extensions and
dense quadruples along a short path between two chosen face vertices.

Paths and hinge completions need room: every leg and every hinge pair
may claim fresh orthogonal axes from a shared workspace, so the output
dimension grows with the construction.  The count of auxiliary axes is
recorded in the configuration notes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    Configuration,
    ConstraintViolation,
    DEFAULT_TOL,
    GeometryError,
    SimplexSpec,
    ToleranceConfig,
    cayley_menger_volume,
    congruence_check,
    embed_from_distances,
    pairwise_sq_dists,
    squared_distance,
)
from .rectangles import path_config

IDENTITY_ROLES = (0, 1, 2, 3)
SWAPPED_ROLES = (2, 3, 0, 1)


def _face_area(spec: SimplexSpec, face) -> float:
    sub = SimplexSpec(spec.sq_dist[np.ix_(face, face)])
    return cayley_menger_volume(sub)


def _face_circumradius(spec: SimplexSpec, face) -> float:
    i, j, k = face
    sq = spec.sq_dist
    area = _face_area(spec, face)
    if area <= 0.0:
        raise ConstraintViolation("degenerate", f"face {face} has zero area")
    return math.sqrt(sq[i][j] * sq[i][k] * sq[j][k]) / (4.0 * area)


def _solve_foot(face2d: np.ndarray, sq_to_vertices, height_sq: float, tol: ToleranceConfig):
    """Planar point at prescribed distances from a 2-D triangle.

    Solves ||f - v_j||^2 = sq_to_vertices[j] - height_sq; two vertex
    differences pin f down and the remaining equation is a consistency
    check.
    """
    rhs = [s - height_sq for s in sq_to_vertices]
    v = face2d
    a = 2.0 * (v[1:] - v[0])
    b = np.array(
        [np.dot(v[j], v[j]) - np.dot(v[0], v[0]) - (rhs[j] - rhs[0]) for j in (1, 2)]
    )
    f = np.linalg.solve(a, b)
    scale = max(abs(x) for x in rhs) + 1.0
    for j in range(3):
        got = float(np.dot(f - v[j], f - v[j]))
        if abs(got - rhs[j]) > tol.sq_slack(scale):
            raise GeometryError(f"apex foot inconsistent at face vertex {j}")
    return f


def _circumcenter_2d(v: np.ndarray) -> np.ndarray:
    ax, ay = v[1] - v[0]
    bx, by = v[2] - v[0]
    d = 2.0 * (ax * by - ay * bx)
    ux = (by * (ax * ax + ay * ay) - ay * (bx * bx + by * by)) / d
    uy = (ax * (bx * bx + by * by) - bx * (ax * ax + ay * ay)) / d
    return v[0] + np.array([ux, uy])


@dataclass(frozen=True)
class TetraProfile:
    """Derived geometry of a 4-point simplex with vertex 0 as apex.

    ``heights[i]`` is the height of vertex i over its opposite face and
    ``face_circumradii[i]`` that face's circumradius; H_max and rho_min
    are their extremes and condition_flag records H_max > rho_min.
    ``base2d`` embeds face {1,2,3} in the plane, ``apex_foot`` is the
    apex projection into it, ``apex_height`` the offset, and theta the
    angle of edge (0,1) against the base plane.
    """

    spec: SimplexSpec
    heights: tuple
    face_circumradii: tuple
    H_max: float
    rho_min: float
    hmax_vertex: int
    rhomin_vertex: int
    condition_flag: bool
    base2d: np.ndarray
    apex_foot: np.ndarray
    apex_height: float
    theta: float

    def cos_two_theta(self) -> float:
        rel = self.base2d[0] - self.apex_foot
        b2 = float(np.dot(rel, rel))
        a2 = self.apex_height**2
        return (b2 - a2) / (b2 + a2)

    def base_in_e4(self) -> np.ndarray:
        out = np.zeros((3, 4))
        out[:, :2] = self.base2d
        return out


def tetra_profile(spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL) -> TetraProfile:
    if spec.k != 4:
        raise GeometryError(f"profile needs 4 points, got {spec.k}")
    volume = cayley_menger_volume(spec, tol=tol)
    scale = float(spec.sq_dist.max())
    if volume <= math.sqrt(tol.sq_slack(scale)) ** 3:
        raise ConstraintViolation("degenerate", "coplanar points have no hinge geometry")

    faces = [tuple(j for j in range(4) if j != i) for i in range(4)]
    heights = tuple(3.0 * volume / _face_area(spec, f) for f in faces)
    radii = tuple(_face_circumradius(spec, f) for f in faces)

    base2d = embed_from_distances(SimplexSpec(spec.sq_dist[np.ix_(faces[0], faces[0])]), tol=tol)
    d = heights[0]
    foot = _solve_foot(base2d, [spec.sq_dist[0][j] for j in faces[0]], d * d, tol)
    theta = math.asin(min(1.0, d / math.sqrt(spec.sq_dist[0][1])))

    return TetraProfile(
        spec=spec,
        heights=heights,
        face_circumradii=radii,
        H_max=max(heights),
        rho_min=min(radii),
        hmax_vertex=int(np.argmax(heights)),
        rhomin_vertex=int(np.argmin(radii)),
        condition_flag=max(heights) > min(radii),
        base2d=base2d,
        apex_foot=foot,
        apex_height=d,
        theta=theta,
    )


def apex_circle(profile: TetraProfile, gamma: float) -> np.ndarray:
    """Apex position at circle parameter gamma, base fixed in {z=w=0}."""
    f = profile.apex_foot
    d = profile.apex_height
    return np.array([f[0], f[1], d * math.cos(gamma), d * math.sin(gamma)])


@dataclass(frozen=True)
class HingePair:
    """Two copies sharing the base face, apexes a and a_prime."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    a_prime: np.ndarray
    phi: float

    def points(self) -> np.ndarray:
        return np.vstack([self.a, self.b, self.c, self.d, self.a_prime])

    def realized_angle(self) -> float:
        u = self.a - self.b
        v = self.a_prime - self.b
        cosang = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
        return math.acos(max(-1.0, min(1.0, cosang)))

    def verify(self, spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        scale = float(spec.sq_dist.max())
        for tetra in ([self.a, self.b, self.c, self.d], [self.a_prime, self.b, self.c, self.d]):
            sq = pairwise_sq_dists(np.vstack(tetra))
            if float(np.abs(sq - spec.sq_dist).max()) > tol.sq_slack(scale):
                raise GeometryError("hinge copy does not match the simplex distances")
        if abs(self.realized_angle() - self.phi) > 1e-9:
            raise GeometryError(
                f"hinge angle {self.realized_angle()} misses requested {self.phi}"
            )

    def as_configuration(self, tol: ToleranceConfig = DEFAULT_TOL) -> Configuration:
        return Configuration(
            points=self.points(),
            labels=["a", "b", "c", "d", "a_prime"],
            named_copies={"tetra": [(0, 1, 2, 3), (4, 1, 2, 3)]},
            notes={"kind": "hinge_pair", "phi": self.phi},
            tol=tol,
        )


def glue_two_copies(
    profile: TetraProfile, phi: float, tol: ToleranceConfig = DEFAULT_TOL
) -> HingePair:
    """Place two copies sharing the base face at apex angle phi.

    The apex circle parameter gap solves
    cos(phi) = (B2 + A2 cos(gap)) / (B2 + A2) with B2 the squared
    apex-foot-to-b distance and A2 the squared apex height, so phi is
    attainable exactly for phi in (0, 2*theta].
    """
    two_theta = 2.0 * profile.theta
    if not 0.0 < phi <= two_theta + 1e-12:
        raise ConstraintViolation(
            "phi_range", f"hinge angle must lie in (0, {two_theta}], got {phi}"
        )
    rel = profile.base2d[0] - profile.apex_foot
    b2 = float(np.dot(rel, rel))
    a2 = profile.apex_height**2
    cos_gap = (math.cos(phi) * (b2 + a2) - b2) / a2
    gap = math.acos(max(-1.0, min(1.0, cos_gap)))
    a = apex_circle(profile, gap / 2.0)
    a_prime = apex_circle(profile, -gap / 2.0)
    if squared_distance(a, a_prime) <= tol.sq_slack(float(profile.spec.sq_dist.max())):
        raise ConstraintViolation("apex_coincidence", f"apexes coincide at phi={phi}")
    base = profile.base_in_e4()
    pair = HingePair(a=a, b=base[0], c=base[1], d=base[2], a_prime=a_prime, phi=phi)
    pair.verify(profile.spec, tol)
    return pair


@dataclass(frozen=True)
class DenseQuadruple:
    """Seven points in E^5 carrying four copies through shared triples.

    x1 x2 x3 realizes the face under the largest height; y1 y2 y3 sit
    on the sphere of apex positions over it, arranged as the face of
    smallest circumradius; z completes y1 y2 y3 to a fourth copy.
    """

    z: np.ndarray
    y: np.ndarray
    x: np.ndarray

    def points(self) -> np.ndarray:
        return np.vstack([self.z, self.y, self.x])

    def tetra_tuples(self):
        return [(0, 1, 2, 3), (1, 4, 5, 6), (2, 4, 5, 6), (3, 4, 5, 6)]

    def y_circumradius(self) -> float:
        center = _circumcenter_2d(self.y[:, 2:4])
        return float(np.linalg.norm(self.y[0, 2:4] - center))

    def as_configuration(self, tol: ToleranceConfig = DEFAULT_TOL) -> Configuration:
        return Configuration(
            points=self.points(),
            labels=["z", "y1", "y2", "y3", "x1", "x2", "x3"],
            named_copies={"tetra": self.tetra_tuples()},
            notes={"kind": "dense_quadruple"},
            tol=tol,
        )


def dense_quadruple(profile: TetraProfile, tol: ToleranceConfig = DEFAULT_TOL) -> DenseQuadruple:
    """Four congruent copies stacked over one face in E^5.

    Needs the largest height to exceed the smallest face circumradius:
    the smallest-circumradius face then fits on the sphere of radius
    H_max around the apex foot, its plane offset by
    sqrt(H_max^2 - rho_min^2).
    """
    if not profile.condition_flag:
        raise ConstraintViolation(
            "condition",
            f"largest height {profile.H_max} does not exceed smallest "
            f"face circumradius {profile.rho_min}",
        )
    sq = profile.spec.sq_dist

    i_h = profile.hmax_vertex
    face_h = tuple(j for j in range(4) if j != i_h)
    big_h = profile.heights[i_h]
    x2d = embed_from_distances(SimplexSpec(sq[np.ix_(face_h, face_h)]), tol=tol)
    f = _solve_foot(x2d, [sq[i_h][j] for j in face_h], big_h * big_h, tol)

    i_r = profile.rhomin_vertex
    face_r = tuple(j for j in range(4) if j != i_r)
    rho = profile.face_circumradii[i_r]
    r2d = embed_from_distances(SimplexSpec(sq[np.ix_(face_r, face_r)]), tol=tol)
    center = _circumcenter_2d(r2d)
    t = r2d - center
    h_r = profile.heights[i_r]
    g = _solve_foot(r2d, [sq[i_r][j] for j in face_r], h_r * h_r, tol) - center

    z0 = math.sqrt(big_h * big_h - rho * rho)
    x = np.zeros((3, 5))
    x[:, :2] = x2d
    y = np.zeros((3, 5))
    y[:, :2] = f
    y[:, 2:4] = t
    y[:, 4] = z0
    z = np.array([f[0], f[1], g[0], g[1], z0 + h_r])

    quad = DenseQuadruple(z=z, y=y, x=x)
    pts = quad.points()
    scale = float(sq.max())
    order_zy = (i_r,) + face_r
    order_yx = (i_h,) + face_h
    checks = [((0, 1, 2, 3), order_zy)] + [((k, 4, 5, 6), order_yx) for k in (1, 2, 3)]
    for tup, order in checks:
        got = pairwise_sq_dists(pts[list(tup)])
        want = sq[np.ix_(order, order)]
        if float(np.abs(got - want).max()) > tol.sq_slack(scale):
            raise GeometryError(f"dense quadruple copy {tup} is not congruent")
    return quad


class Workspace:
    """Growing point store that can allocate fresh orthogonal axes."""

    def __init__(self, dim: int, tol: ToleranceConfig = DEFAULT_TOL):
        self.dim = int(dim)
        self.tol = tol
        self._rows: list[np.ndarray] = []
        self.aux_axes = 0

    def __len__(self) -> int:
        return len(self._rows)

    def add_axis(self) -> int:
        self.dim += 1
        self.aux_axes += 1
        return self.dim - 1

    def add_point(self, coords) -> int:
        row = np.zeros(self.dim)
        c = np.asarray(coords, dtype=float)
        row[: len(c)] = c
        self._rows.append(row)
        return len(self._rows) - 1

    def point(self, idx: int) -> np.ndarray:
        row = self._rows[idx]
        if len(row) == self.dim:
            return row
        return np.concatenate([row, np.zeros(self.dim - len(row))])

    def matrix(self) -> np.ndarray:
        return np.vstack([self.point(i) for i in range(len(self._rows))])


def extend_isometry(
    ws: Workspace,
    src_anchors,
    src_extras,
    dst_anchor_idx,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> list:
    """Add images of extra points matching all distances to the anchors.

    The anchor images must already be placed isometrically.  Each extra
    splits into an affine combination of anchors plus an orthogonal
    residual; the residuals are reproduced along fresh axes, which
    preserves every pairwise distance among anchors and extras.
    """
    src_anchors = np.asarray(src_anchors, dtype=float)
    src_extras = np.atleast_2d(np.asarray(src_extras, dtype=float))
    dst = np.vstack([ws.point(i) for i in dst_anchor_idx])
    scale = float(pairwise_sq_dists(src_anchors).max()) + 1.0
    gap = float(np.abs(pairwise_sq_dists(src_anchors) - pairwise_sq_dists(dst)).max())
    if gap > tol.sq_slack(scale):
        raise GeometryError(f"anchor images are not isometric to the anchors (off by {gap})")

    u = src_anchors[1:] - src_anchors[0]
    coeffs = []
    residuals = []
    for e in src_extras:
        c, *_ = np.linalg.lstsq(u.T, e - src_anchors[0], rcond=None)
        coeffs.append(c)
        residuals.append(e - src_anchors[0] - c @ u)

    # Orthonormalize the residuals; each independent direction costs
    # one fresh axis.
    basis: list[np.ndarray] = []
    axis_ids: list[int] = []
    rows = []
    floor = math.sqrt(tol.sq_slack(scale))
    for res in residuals:
        comps = []
        vec = res.copy()
        for q in basis:
            comp = float(np.dot(vec, q))
            comps.append(comp)
            vec = vec - comp * q
        norm = float(np.linalg.norm(vec))
        if norm > floor:
            basis.append(vec / norm)
            axis_ids.append(ws.add_axis())
            comps.append(norm)
        rows.append(comps)

    v = np.vstack([ws.point(i) for i in dst_anchor_idx])
    origin = v[0]
    v = v[1:] - origin
    out = []
    for c, comps in zip(coeffs, rows):
        img = origin + c @ v
        for comp, axis in zip(comps, axis_ids):
            img[axis] += comp
        out.append(ws.add_point(img))
    return out


def _equilateral_leg(
    ws: Workspace, i_start: int, i_end: int, step: float, min_edges: int, tol: ToleranceConfig
) -> list:
    """Vertex indices of an equal-step path from i_start to i_end.

    Zero-length and single-step legs stay direct; anything else lands
    on a circular arc placed in the plane of the endpoints and one
    fresh axis.
    """
    if i_start == i_end:
        return [i_start]
    gap = math.dist(ws.point(i_start), ws.point(i_end))
    slack = math.sqrt(tol.sq_slack(step * step))
    if abs(gap - step) <= slack and min_edges <= 1:
        return [i_start, i_end]
    t = max(2, min_edges, math.ceil(gap / step))
    while gap >= t * step:
        t += 1
    arc = path_config(t, gap, step, tol=tol)
    axis = ws.add_axis()
    p = ws.point(i_start)
    e1 = (ws.point(i_end) - p) / gap
    out = [i_start]
    for j in range(1, t):
        coords = p + arc.points[j][0] * e1
        coords[axis] += arc.points[j][1]
        out.append(ws.add_point(coords))
    out.append(i_end)
    return out


def _corner_fan(
    ws: Workspace,
    i_prev: int,
    i_center: int,
    i_next: int,
    step: float,
    corner_angle: float,
    tol: ToleranceConfig,
    registry: dict | None = None,
) -> list:
    """Fan of points at radius ``step`` around a path corner.

    Interpolates from the incoming to the outgoing neighbor in angle
    substeps of at most ``corner_angle``; returns the full sequence
    including both neighbors.  A backtracking corner (shared neighbor
    index) needs no fan at all.

    Revisiting the same corner with the same neighbors reproduces the
    same interior points, so those are deduplicated through an exact
    symbolic registry instead of being placed twice.
    """
    if i_prev == i_next:
        return [i_prev]
    c = ws.point(i_center)
    v0 = ws.point(i_prev) - c
    v1 = ws.point(i_next) - c
    n0 = float(np.linalg.norm(v0))
    n1 = float(np.linalg.norm(v1))
    slack = math.sqrt(tol.sq_slack(step * step))
    if abs(n0 - step) > slack or abs(n1 - step) > slack:
        raise GeometryError("corner neighbors are not at the path step distance")
    cos_psi = max(-1.0, min(1.0, float(np.dot(v0, v1)) / (n0 * n1)))
    psi = math.acos(cos_psi)
    substeps = max(1, math.ceil(psi / corner_angle - 1e-12))
    if substeps == 1:
        return [i_prev, i_next]
    lo, hi = sorted((i_prev, i_next))
    if registry is not None and (lo, hi, i_center, substeps, 1) in registry:
        mids = [registry[(lo, hi, i_center, substeps, j)] for j in range(1, substeps)]
        if i_prev != lo:
            mids.reverse()
        return [i_prev] + mids + [i_next]
    e1 = v0 / n0
    w = v1 - float(np.dot(v1, e1)) * e1
    wn = float(np.linalg.norm(w))
    if wn > slack:
        e2 = w / wn
    else:
        # Straight-through corner: rotate inside a fresh plane.
        axis = ws.add_axis()
        c = ws.point(i_center)
        e1 = np.concatenate([e1, np.zeros(ws.dim - len(e1))])
        e2 = np.zeros(ws.dim)
        e2[axis] = 1.0
    out = [i_prev]
    for j in range(1, substeps):
        ang = psi * j / substeps
        idx = ws.add_point(c + step * (math.cos(ang) * e1 + math.sin(ang) * e2))
        if registry is not None:
            key_j = j if i_prev == lo else substeps - j
            registry[(lo, hi, i_center, substeps, key_j)] = idx
        out.append(idx)
    out.append(i_next)
    return out


def _angle_at(ws: Workspace, i_a: int, i_center: int, i_b: int) -> float:
    u = ws.point(i_a) - ws.point(i_center)
    v = ws.point(i_b) - ws.point(i_center)
    cosang = float(np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v)))
    return math.acos(max(-1.0, min(1.0, cosang)))


@dataclass
class LinkedConfig:
    """A configuration together with its ordered tetra copies.

    ``shared_faces`` lists, for consecutive entries of ``tetra_copies``,
    the point indices the two copies have in common.
    """

    cfg: Configuration
    tetra_copies: list
    shared_faces: list

    def verify(self, spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        scale = float(spec.sq_dist.max())
        slack = tol.sq_slack(scale)
        ref = None
        for tup in self.tetra_copies:
            pts = self.cfg.points[list(tup)]
            if float(np.abs(pairwise_sq_dists(pts) - spec.sq_dist).max()) <= slack:
                continue
            if ref is None:
                ref = embed_from_distances(spec, tol=tol)
            if congruence_check(pts, ref, tol=tol) is None:
                raise GeometryError(f"copy {tup} is not congruent to the simplex")
        for i, j, shared in self.shared_faces:
            common = set(self.tetra_copies[i]) & set(self.tetra_copies[j])
            if not set(shared) <= common:
                raise GeometryError(
                    f"declared sharing {shared} absent between copies {i} and {j}"
                )


def _validate_corner_angle(profile: TetraProfile, corner_angle) -> None:
    if corner_angle is None:
        return
    two_theta = 2.0 * profile.theta
    if not 0.0 < corner_angle <= two_theta + 1e-12:
        raise ConstraintViolation(
            "corner_angle", f"corner angle must lie in (0, {two_theta}], got {corner_angle}"
        )


def _role_angle(role_prof: TetraProfile, corner_angle) -> float:
    """Fan substep angle for one vertex role assignment.

    None means the mid-range default theta.  Explicit values are
    clamped into the role's hinge range, backing off a hair from the
    top so measured fan angles never overshoot it.
    """
    if corner_angle is None:
        return role_prof.theta
    return min(float(corner_angle), 2.0 * role_prof.theta * (1.0 - 1e-9))


class _Builder:
    """Shared bookkeeping for the chained constructions.

    All stored copy tuples are labeled in the row order of the original
    simplex; hinge copies built under rotated vertex roles are mapped
    back before storage.
    """

    def __init__(self, profile: TetraProfile, dim: int, tol: ToleranceConfig):
        self.profile = profile
        self.spec = profile.spec
        self.ws = Workspace(dim, tol=tol)
        self.tol = tol
        self.copies: list = []
        self.fan_registry: dict = {}
        self._role_profiles = {IDENTITY_ROLES: profile}

    def role_profile(self, perm) -> TetraProfile:
        if perm not in self._role_profiles:
            idx = list(perm)
            sub = SimplexSpec(self.spec.sq_dist[np.ix_(idx, idx)])
            self._role_profiles[perm] = tetra_profile(sub, tol=self.tol)
        return self._role_profiles[perm]

    def add_copy(self, tup) -> tuple:
        tup = tuple(int(i) for i in tup)
        pts = np.vstack([self.ws.point(i) for i in tup])
        scale = float(self.spec.sq_dist.max())
        err = float(np.abs(pairwise_sq_dists(pts) - self.spec.sq_dist).max())
        if err > self.tol.sq_slack(scale):
            raise GeometryError(f"copy {tup} violates the simplex distances by {err}")
        self.copies.append(tup)
        return tup

    def _place_hinge(self, role_prof: TetraProfile, i_apex1: int, i_center: int, i_apex2: int):
        """Complete two fan neighbors around a corner into a hinge pair."""
        phi = _angle_at(self.ws, i_apex1, i_center, i_apex2)
        pair = glue_two_copies(role_prof, phi, tol=self.tol)
        new_idx = extend_isometry(
            self.ws,
            np.vstack([pair.a, pair.b, pair.a_prime]),
            np.vstack([pair.c, pair.d]),
            [i_apex1, i_center, i_apex2],
            tol=self.tol,
        )
        return new_idx[0], new_idx[1]

    def fan_corner(self, i_prev, i_center, i_next, perm, corner_angle) -> None:
        """Insert the fan at one path corner together with its hinge
        copies, stored in original row order."""
        role_prof = self.role_profile(perm)
        step = math.sqrt(role_prof.spec.sq_dist[0][1])
        fan = _corner_fan(
            self.ws, i_prev, i_center, i_next, step, corner_angle, self.tol,
            registry=self.fan_registry,
        )
        for a1, a2 in zip(fan, fan[1:]):
            z1, z2 = self._place_hinge(role_prof, a1, i_center, a2)
            for apex in (a1, a2):
                roles = (apex, i_center, z1, z2)
                stored = [0, 0, 0, 0]
                for pos in range(4):
                    stored[perm[pos]] = roles[pos]
                self.add_copy(stored)

    def walk_path(self, path, perm, corner_angle) -> None:
        for i in range(1, len(path) - 1):
            self.fan_corner(path[i - 1], path[i], path[i + 1], perm, corner_angle)

    def link(self, t1, t2, k_b, k_d, corner_angle) -> None:
        """Chain copy t1 to copy t2 through hinge corners.

        One path runs t1[1] -> t1[0] -> ... -> t2[0] -> t2[1] at the
        (0,1) edge step, the other t1[2] -> t1[3] -> ... -> t2[3] ->
        t2[2] at the (2,3) edge step with vertex roles rotated; the
        second path's copies are appended in reverse so the stored
        order stays consecutive after t2.
        """
        self.add_copy(t1)
        if tuple(t1) == tuple(t2):
            self.add_copy(t2)
            return
        ang_ab = _role_angle(self.role_profile(IDENTITY_ROLES), corner_angle)
        ang_cd = _role_angle(self.role_profile(SWAPPED_ROLES), corner_angle)

        step_ab = math.sqrt(self.spec.sq_dist[0][1])
        leg = _equilateral_leg(self.ws, t1[0], t2[0], step_ab, k_b, self.tol)
        self.walk_path([t1[1]] + leg + [t2[1]], IDENTITY_ROLES, ang_ab)
        self.add_copy(t2)

        step_cd = math.sqrt(self.spec.sq_dist[2][3])
        leg = _equilateral_leg(self.ws, t1[3], t2[3], step_cd, k_d, self.tol)
        start = len(self.copies)
        self.walk_path([t1[2]] + leg + [t2[2]], SWAPPED_ROLES, ang_cd)
        self.copies[start:] = reversed(self.copies[start:])

    def closed_polygon(self, seed, perm, corner_angle, min_leg_edges) -> int:
        """Equilateral polygon through the seed's vertices in role
        order with a hinge fan at every polygon corner.  The seed edge
        (perm[0], perm[1]) always stays direct.  Returns the number of
        copies added."""
        role_prof = self.role_profile(perm)
        ang = _role_angle(role_prof, corner_angle)
        step = math.sqrt(self.spec.sq_dist[perm[0]][perm[1]])
        order = [seed[p] for p in perm]
        poly = [order[0]]
        for hop, nxt in enumerate(order[1:] + [order[0]]):
            edges = 1 if hop == 0 else min_leg_edges
            leg = _equilateral_leg(self.ws, poly[-1], nxt, step, edges, self.tol)
            poly.extend(leg[1:])
        poly = poly[:-1]
        before = len(self.copies)
        for i in range(len(poly)):
            self.fan_corner(poly[i - 1], poly[i], poly[(i + 1) % len(poly)], perm, ang)
        return len(self.copies) - before

    def glued_polygons(self, seed, corner_angle, min_leg_edges):
        """Both closed polygons of the glued construction plus the
        links chaining consecutive polygon copies.  Returns the copy
        counts (pass one, pass two, links)."""
        phi1 = self.closed_polygon(seed, IDENTITY_ROLES, corner_angle, min_leg_edges)
        phi2 = self.closed_polygon(seed, SWAPPED_ROLES, corner_angle, min_leg_edges)
        polygon_copies = self.copies[len(self.copies) - phi1 - phi2 :]
        before = len(self.copies)
        for t1, t2 in zip(polygon_copies, polygon_copies[1:]):
            self.link(t1, t2, 1, 1, corner_angle)
        return phi1, phi2, len(self.copies) - before

    def finish(self, labels=None, extra_notes=None) -> LinkedConfig:
        notes = {
            "aux_axes": self.ws.aux_axes,
            "dim": self.ws.dim,
            "placement": "paths and hinge completions use fresh orthogonal axes",
        }
        if extra_notes:
            notes.update(extra_notes)
        shared = []
        for i in range(len(self.copies) - 1):
            common = tuple(sorted(set(self.copies[i]) & set(self.copies[i + 1])))
            shared.append((i, i + 1, common))
        cfg = Configuration(
            points=self.ws.matrix(),
            labels=labels,
            named_copies={"tetra": [tuple(t) for t in self.copies]},
            notes=notes,
            tol=self.tol,
        )
        return LinkedConfig(cfg=cfg, tetra_copies=list(self.copies), shared_faces=shared)


def _check_labeled_copy(points: np.ndarray, spec: SimplexSpec, tol: ToleranceConfig) -> None:
    scale = float(spec.sq_dist.max())
    if float(np.abs(pairwise_sq_dists(points) - spec.sq_dist).max()) > tol.sq_slack(scale):
        raise ConstraintViolation("seed_congruence", "points do not realize the simplex rows")


def build_link(
    profile: TetraProfile,
    t1_points,
    t2_points,
    k_b: int = 1,
    k_d: int = 1,
    corner_angle: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> LinkedConfig:
    """Chain two placed copies of the simplex through hinge corners."""
    t1_points = np.asarray(t1_points, dtype=float)
    t2_points = np.asarray(t2_points, dtype=float)
    if t1_points.shape != t2_points.shape or t1_points.shape[0] != 4:
        raise GeometryError("endpoints must be two 4-point arrays of equal dimension")
    if k_b < 1 or k_d < 1:
        raise GeometryError("subdivision counts must be at least 1")
    _check_labeled_copy(t1_points, profile.spec, tol)
    _check_labeled_copy(t2_points, profile.spec, tol)
    _validate_corner_angle(profile, corner_angle)

    b = _Builder(profile, t1_points.shape[1], tol)
    t1 = tuple(b.ws.add_point(p) for p in t1_points)
    # Points shared between the endpoint copies are identified by
    # coordinates once, here at the seam; everything downstream shares
    # by index.
    cross_sq = pairwise_sq_dists(np.vstack([t1_points, t2_points]))[:4, 4:]
    slack = tol.sq_slack(float(profile.spec.sq_dist.max()) + 1.0)
    t2 = tuple(
        int(t1[np.nonzero(cross_sq[:, j] <= slack)[0][0]])
        if bool(np.any(cross_sq[:, j] <= slack))
        else b.ws.add_point(t2_points[j])
        for j in range(4)
    )

    b.link(t1, t2, k_b, k_d, corner_angle)
    out = b.finish(extra_notes={"kind": "link", "k_b": k_b, "k_d": k_d})
    out.verify(profile.spec, tol)
    return out


def build_x1(
    profile: TetraProfile,
    seed_points,
    min_leg_edges: int = 1,
    corner_angle: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> LinkedConfig:
    """Glued links around one placed copy of the simplex.

    Two closed equilateral polygons run through the seed's vertices,
    one at the (0,1) edge step starting along that edge, one at the
    (2,3) edge step with vertex roles rotated accordingly; every
    polygon corner carries a hinge fan, and consecutive fan copies are
    chained with links.
    """
    seed_points = np.asarray(seed_points, dtype=float)
    if seed_points.ndim != 2 or seed_points.shape[0] != 4:
        raise GeometryError("seed must be a 4-point array")
    if min_leg_edges < 1:
        raise GeometryError("subdivision counts must be at least 1")
    _validate_corner_angle(profile, corner_angle)
    perm = congruence_check(embed_from_distances(profile.spec, tol=tol), seed_points, tol=tol)
    if perm is None:
        raise ConstraintViolation("seed_congruence", "seed is not congruent to the simplex")
    seed_points = seed_points[list(perm)]

    b = _Builder(profile, seed_points.shape[1], tol)
    seed = b.add_copy(tuple(b.ws.add_point(p) for p in seed_points))
    phi1, phi2, link_copies = b.glued_polygons(seed, corner_angle, min_leg_edges)
    out = b.finish(
        extra_notes={
            "kind": "x1",
            "phi": [phi1, phi2],
            "polygon_copies": phi1 + phi2,
            "link_copies": link_copies,
        }
    )
    out.verify(profile.spec, tol)
    return out


def build_anchor_gadget(
    profile: TetraProfile,
    edge=None,
    k: int = 1,
    corner_angle: float | None = None,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> LinkedConfig:
    """Parallelogram path gadget anchored at an edge of the
    largest-height face.

    The two edge vertices are joined by a (k+1)-edge path whose step is
    the diagonal of the parallelogram spanned by the face.  Each path
    edge carries that parallelogram, whose two face-congruent triangles
    receive dense-quadruple attachments; every attached copy then gets
    the glued double polygon run on it.
    """
    if not profile.condition_flag:
        raise ConstraintViolation(
            "condition",
            f"largest height {profile.H_max} does not exceed smallest "
            f"face circumradius {profile.rho_min}",
        )
    if k < 1:
        raise GeometryError("path length must be at least 1")
    _validate_corner_angle(profile, corner_angle)
    spec = profile.spec
    i_h = profile.hmax_vertex
    face = tuple(j for j in range(4) if j != i_h)
    if edge is None:
        edge = (face[0], face[1])
    a1, a2 = (int(edge[0]), int(edge[1]))
    if a1 == a2 or {a1, a2} - set(face):
        raise GeometryError(f"edge {edge} must join two vertices of the face {face}")
    a3 = next(j for j in face if j not in (a1, a2))

    # Canonical copy: largest-height face in the plane, apex above it.
    face2d = embed_from_distances(SimplexSpec(spec.sq_dist[np.ix_(face, face)]), tol=tol)
    big_h = profile.heights[i_h]
    foot = _solve_foot(face2d, [spec.sq_dist[i_h][j] for j in face], big_h * big_h, tol)
    pts4 = np.zeros((4, 3))
    for row, j in enumerate(face):
        pts4[j, :2] = face2d[row]
    pts4[i_h, :2] = foot
    pts4[i_h, 2] = big_h

    p1, p2, p3 = pts4[a1], pts4[a2], pts4[a3]
    x = p2 + p3 - p1
    d_step = float(np.linalg.norm(p1 - x))

    b = _Builder(profile, 3, tol)
    idx4 = b.add_copy(tuple(b.ws.add_point(p) for p in pts4))

    bpath = _equilateral_leg(b.ws, idx4[a1], idx4[a2], d_step, k + 1, tol)
    if len(bpath) != k + 2:
        raise GeometryError(f"edge gap admits no {k + 1}-edge path at the diagonal step")

    dq = dense_quadruple(profile, tol=tol)
    face_r = tuple(j for j in range(4) if j != profile.rhomin_vertex)

    def attach_dense(tri_idx):
        """Dense-quadruple attachment over one placed face triangle.

        tri_idx is in face row order; returns the four copy tuples."""
        new = extend_isometry(b.ws, dq.x, np.vstack([dq.y, dq.z]), list(tri_idx), tol=tol)
        ys, z = new[:3], new[3]
        added = []
        for yi in ys:
            tup = [0, 0, 0, 0]
            tup[i_h] = yi
            for row, j in enumerate(face):
                tup[j] = tri_idx[row]
            added.append(b.add_copy(tup))
        ztup = [0, 0, 0, 0]
        ztup[profile.rhomin_vertex] = z
        for row, j in enumerate(face_r):
            ztup[j] = ys[row]
        added.append(b.add_copy(ztup))
        return added

    # Each path edge spans a parallelogram congruent to (a1, a2, x, a3)
    # whose diagonal is the edge; its two triangles are congruent to
    # the face, the second one with the off-diagonal corners swapped.
    row_a1, row_a2, row_a3 = (face.index(a1), face.index(a2), face.index(a3))
    attachments = []
    for i in range(len(bpath) - 1):
        c1, c2 = extend_isometry(
            b.ws, np.vstack([p1, x]), np.vstack([p2, p3]), [bpath[i], bpath[i + 1]], tol=tol
        )
        tri1 = [0, 0, 0]
        tri1[row_a1], tri1[row_a2], tri1[row_a3] = bpath[i], c1, c2
        tri2 = [0, 0, 0]
        tri2[row_a1], tri2[row_a2], tri2[row_a3] = bpath[i + 1], c2, c1
        attachments.extend(attach_dense(tuple(tri1)))
        attachments.extend(attach_dense(tuple(tri2)))

    # Glue the double polygon construction onto every attached copy.
    cap = 2.0 * profile.theta if corner_angle is None else corner_angle
    gluing_counts = []
    for tup in attachments:
        before = len(b.copies)
        b.glued_polygons(tup, cap, 1)
        gluing_counts.append(len(b.copies) - before)

    out = b.finish(
        extra_notes={
            "kind": "anchor_gadget",
            "edge": [a1, a2],
            "k": k,
            "path": [int(i) for i in bpath],
            "attachment_copies": len(attachments),
            "gluing_copy_counts": gluing_counts,
        }
    )
    out.verify(spec, tol)
    return out
