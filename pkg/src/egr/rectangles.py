"""Regular simplices, equilateral arc paths, and orthogonal products.

Three building blocks combine into the product configurations whose
pair census drives the rectangle arguments: ``regular_simplex`` places
n mutually equidistant points, ``path_config`` realizes a polygonal
path with equal edges and a prescribed endpoint gap on a circular arc,
and ``product_config`` forms the orthogonal Cartesian product.  The
census ``count_distance_pairs`` enumerates every pair at the long
distance in such a product and checks the closed-form count
(m+1)*C(3m+1,2) + (3m+1); a pair that is neither a within-fiber pair
nor a path-endpoint pair means the side lengths were not generic, and
the census aborts rather than return a misleading number.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    Configuration,
    DEFAULT_TOL,
    GeometryError,
    SimplexSpec,
    ToleranceConfig,
    embed_from_distances,
    pairwise_sq_dists,
    squared_distance,
)


def regular_simplex(n: int, x: float, tol: ToleranceConfig = DEFAULT_TOL) -> Configuration:
    """n points in E^{n-1} with all pairwise distances equal to x."""
    if n < 2:
        raise GeometryError(f"regular simplex needs at least 2 points, got {n}")
    if x <= 0.0:
        raise GeometryError(f"side length must be positive, got {x}")
    pts = embed_from_distances(SimplexSpec.regular(n, x), tol=tol)
    return Configuration(
        points=pts,
        labels=[f"u{i}" for i in range(n)],
        notes={"kind": "regular_simplex", "n": n, "side": x},
        tol=tol,
    )


@dataclass(frozen=True)
class PathConfig:
    """Equilateral path on a circular arc.

    t+1 coplanar points with consecutive distances y and endpoint
    distance x; ``radius`` and ``step_angle`` describe the arc.
    """

    t: int
    x: float
    y: float
    points: np.ndarray
    radius: float
    step_angle: float

    def verify(self, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        slack = tol.sq_slack(max(self.x, self.y) ** 2)
        for i in range(self.t):
            d = squared_distance(self.points[i], self.points[i + 1])
            if abs(d - self.y * self.y) > slack:
                raise GeometryError(f"edge {i} has squared length {d}, wanted {self.y ** 2}")
        d = squared_distance(self.points[0], self.points[self.t])
        if abs(d - self.x * self.x) > slack:
            raise GeometryError(f"endpoint gap squared is {d}, wanted {self.x ** 2}")

    def as_configuration(self, tol: ToleranceConfig = DEFAULT_TOL) -> Configuration:
        return Configuration(
            points=self.points,
            labels=[f"v{i}" for i in range(self.t + 1)],
            named_copies={
                "endpoint_pair": [(0, self.t)],
                "edges": [(i, i + 1) for i in range(self.t)],
            },
            notes={
                "kind": "arc_path",
                "t": self.t,
                "x": self.x,
                "y": self.y,
                "radius": self.radius,
                "step_angle": self.step_angle,
            },
            tol=tol,
        )


def _arc_span(alpha: float, t: int, y: float) -> float:
    """Endpoint chord of t equal chords y at central step alpha."""
    return y * math.sin(t * alpha / 2.0) / math.sin(alpha / 2.0)


def path_config(t: int, x: float, y: float, tol: ToleranceConfig = DEFAULT_TOL) -> PathConfig:
    """Path of t edges of length y on an arc, endpoints x apart.

    The step angle solves span(alpha) = x by bisection; span is
    strictly decreasing on (0, 2*pi/t), from the straight-line limit
    t*y down to 0, so a root exists exactly when 0 < x < t*y.
    """
    if x <= 0.0 or y <= 0.0:
        raise GeometryError(f"lengths must be positive, got x={x}, y={y}")
    floor = max(2, math.ceil(x / y))
    if t < floor:
        raise GeometryError(f"t={t} is below the floor max(2, ceil(x/y)) = {floor}")
    if x >= t * y:
        raise GeometryError(f"endpoint gap {x} is not reachable by {t} edges of length {y}")

    lo, hi = 1e-12, 2.0 * math.pi / t - 1e-12
    if _arc_span(lo, t, y) < x or _arc_span(hi, t, y) > x:
        raise GeometryError("arc span does not bracket the requested endpoint gap")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _arc_span(mid, t, y) > x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    alpha = 0.5 * (lo + hi)
    radius = y / (2.0 * math.sin(alpha / 2.0))

    raw = np.array(
        [[radius * math.cos(i * alpha), radius * math.sin(i * alpha)] for i in range(t + 1)]
    )
    # Canonical frame: first point at the origin, last on the positive
    # first axis, interior points in the upper half plane.
    shifted = raw - raw[0]
    span = shifted[t]
    norm = math.hypot(span[0], span[1])
    cos_r, sin_r = span[0] / norm, span[1] / norm
    rot = np.array([[cos_r, sin_r], [-sin_r, cos_r]])
    pts = shifted @ rot.T
    if t >= 2 and pts[1][1] < 0.0:
        pts[:, 1] = -pts[:, 1]
    pts[0] = 0.0
    pts[t][1] = 0.0

    path = PathConfig(t=t, x=x, y=y, points=pts, radius=radius, step_angle=alpha)
    path.verify(tol)
    return path


@dataclass(frozen=True)
class ProductConfig:
    """Orthogonal product of two configurations.

    Point (i, j) of the product concatenates left point i with right
    point j and sits at flat index i*|right| + j.  Squared distances
    add across the factors.
    """

    left: Configuration
    right: Configuration
    product: Configuration

    def flat_index(self, i: int, j: int) -> int:
        return i * len(self.right.points) + j

    def verify(self, tol: ToleranceConfig = DEFAULT_TOL) -> None:
        sq_l = pairwise_sq_dists(self.left.points)
        sq_r = pairwise_sq_dists(self.right.points)
        sq_p = pairwise_sq_dists(self.product.points)
        expected = np.kron(sq_l, np.ones_like(sq_r)) + np.kron(np.ones_like(sq_l), sq_r)
        scale = float(expected.max(initial=0.0))
        if float(np.abs(sq_p - expected).max()) > tol.sq_slack(scale):
            raise GeometryError("product squared distances do not split across the factors")


def product_config(
    left: Configuration, right: Configuration, tol: ToleranceConfig = DEFAULT_TOL
) -> ProductConfig:
    """Cartesian product with concatenated coordinates."""
    n_l, d_l = left.points.shape
    n_r, d_r = right.points.shape
    pts = np.zeros((n_l * n_r, d_l + d_r))
    for i in range(n_l):
        for j in range(n_r):
            k = i * n_r + j
            pts[k, :d_l] = left.points[i]
            pts[k, d_l:] = right.points[j]

    def lab(cfg, side, idx):
        return cfg.labels[idx] if cfg.labels else f"{side}{idx}"

    labels = [f"{lab(left, 'l', i)}|{lab(right, 'r', j)}" for i in range(n_l) for j in range(n_r)]

    copies: dict[str, list[tuple[int, ...]]] = {
        "fibers": [tuple(i * n_r + j for i in range(n_l)) for j in range(n_r)]
    }
    for name, tuples in left.named_copies.items():
        copies[f"left_{name}"] = [
            tuple(i * n_r + j for i in tpl) for j in range(n_r) for tpl in tuples
        ]
    for name, tuples in right.named_copies.items():
        copies[f"right_{name}"] = [
            tuple(i * n_r + j for j in tpl) for i in range(n_l) for tpl in tuples
        ]

    prod = Configuration(
        points=pts,
        labels=labels,
        named_copies=copies,
        notes={"kind": "product", "left_size": n_l, "right_size": n_r},
        tol=tol,
    )
    out = ProductConfig(left=left, right=right, product=prod)
    out.verify(tol)
    return out


def _census_classify(
    points: np.ndarray, n_right: int, endpoint_j: int, x: float, tol: ToleranceConfig
) -> tuple[int, int]:
    """Classify every pair at distance x in a product point array.

    Returns (fiber, endpoint) counts.  Fiber pairs share the right
    factor; endpoint pairs share the left factor and join the two path
    endpoints.  Anything else is a coincidence the census cannot
    attribute, so it aborts.
    """
    sq = pairwise_sq_dists(points)
    x_sq = x * x
    close = np.abs(sq - x_sq) <= tol.rel_tol * np.maximum(sq, x_sq) + tol.abs_tol
    fiber = endpoint = 0
    for p, q in zip(*np.nonzero(np.triu(close, k=1))):
        li, ri = divmod(int(p), n_right)
        lj, rj = divmod(int(q), n_right)
        if ri == rj and li != lj:
            fiber += 1
        elif li == lj and {ri, rj} == {0, endpoint_j}:
            endpoint += 1
        else:
            raise GeometryError(
                f"pair ({p}, {q}) at distance {x} is neither fiber nor endpoint type; "
                "side lengths are not generic"
            )
    return fiber, endpoint


def count_distance_pairs(
    m: int, x: float, y: float, tol: ToleranceConfig = DEFAULT_TOL
) -> dict[str, int]:
    """Census of distance-x pairs in S_{3m+1}(x) x B_m(x, y).

    Every such pair is either a within-fiber simplex pair, one of
    (m+1)*C(3m+1, 2), or a path-endpoint pair over a fixed simplex
    point, one of 3m+1.  The enumerated total must match the closed
    form q = (m+1)*C(3m+1, 2) + (3m+1).
    """
    if not x > y > 0.0:
        raise GeometryError(f"census needs x > y > 0, got x={x}, y={y}")
    if m != math.ceil(x / y):
        raise GeometryError(f"m={m} does not equal ceil(x/y) = {math.ceil(x / y)}")
    if x >= m * y:
        raise GeometryError(f"path B_{m}({x}, {y}) is infeasible")

    n = 3 * m + 1
    simplex = regular_simplex(n, x, tol=tol)
    path = path_config(m, x, y, tol=tol).as_configuration(tol=tol)
    prod = product_config(simplex, path, tol=tol)
    fiber, endpoint = _census_classify(prod.product.points, m + 1, m, x, tol)

    formula_q = (m + 1) * math.comb(n, 2) + n
    enumerated = fiber + endpoint
    if enumerated != formula_q:
        raise GeometryError(
            f"census mismatch: enumerated {enumerated} pairs, closed form gives {formula_q}"
        )
    return {
        "enumerated": enumerated,
        "formula_q": formula_q,
        "fiber_pairs": fiber,
        "endpoint_pairs": endpoint,
    }
