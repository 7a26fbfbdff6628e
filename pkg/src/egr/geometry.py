"""Point/configuration kernel.

Everything downstream works with two objects: a ``Configuration`` (an
ordered list of points in some E^n, optionally with labels and named
index tuples) and a ``SimplexSpec`` (a squared-distance matrix for a
small labeled point set).  This module provides the shared tolerance
policy, congruence testing, exhaustive enumeration of congruent copies,
Cayley-Menger volumes, and a deterministic embedding of a realizable
distance matrix into coordinates.
"""

from __future__ import annotations

import itertools
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np


class GeometryError(ValueError):
    """Invalid geometric input or failed construction."""


class NonRealizableError(GeometryError):
    """A distance matrix admits no Euclidean realization."""


class ConstraintViolation(GeometryError):
    """A named precondition inequality failed.

    ``name`` identifies the violated inequality so callers and tests can
    assert on it instead of parsing messages.
    """

    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name = name


@dataclass(frozen=True)
class ToleranceConfig:
    """Comparison policy for squared distances.

    Two squared distances d1, d2 are considered equal when
    ``|d1 - d2| <= rel_tol * max(d1, d2) + abs_tol``.  All congruence and
    copy-enumeration decisions go through this single predicate.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not (0.0 < v < 1e-3):
                raise GeometryError(f"{name} must lie in (0, 1e-3), got {v}")

    def sq_close(self, d1: float, d2: float) -> bool:
        return abs(d1 - d2) <= self.rel_tol * max(d1, d2) + self.abs_tol

    def sq_slack(self, scale: float) -> float:
        """Absolute slack granted to a squared quantity of the given scale."""
        return self.rel_tol * max(scale, 0.0) + self.abs_tol


DEFAULT_TOL = ToleranceConfig()


def as_point(p) -> np.ndarray:
    """Validate and convert an array-like into a 1-D float point."""
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise GeometryError(f"a point must be a 1-D sequence, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise GeometryError("point has non-finite entries")
    return arr


def squared_distance(p, q) -> float:
    p = as_point(p)
    q = as_point(q)
    if p.shape != q.shape:
        raise GeometryError(f"dimension mismatch: {p.shape[0]} vs {q.shape[0]}")
    diff = p - q
    return float(np.dot(diff, diff))


def distance(p, q) -> float:
    return math.sqrt(squared_distance(p, q))


def pairwise_sq_dists(points: np.ndarray) -> np.ndarray:
    """Full n x n matrix of squared distances."""
    pts = np.asarray(points, dtype=float)
    sq_norms = np.einsum("ij,ij->i", pts, pts)
    d = sq_norms[:, None] + sq_norms[None, :] - 2.0 * (pts @ pts.T)
    np.fill_diagonal(d, 0.0)
    return np.maximum(d, 0.0)


def _check_copy_tuples(copies, n: int, name: str):
    out = []
    for tup in copies:
        tup = tuple(int(i) for i in tup)
        for i in tup:
            if not (0 <= i < n):
                raise GeometryError(f"copy index {i} out of range in {name!r}")
        out.append(tup)
    return out


@dataclass
class Configuration:
    """An ordered finite point set in a common E^n.

    ``named_copies`` maps a name to a list of index tuples into
    ``points``; builders use it to record which sub-tuples carry which
    structural role.  Coincident points are rejected unless
    ``allow_coincident`` is set: glued constructions share points by
    index, so an unplanned coordinate collision is treated as a bug.
    """

    points: np.ndarray
    labels: list[str] | None = None
    named_copies: dict[str, list[tuple[int, ...]]] = field(default_factory=dict)
    allow_coincident: bool = False
    notes: dict | None = None
    tol: ToleranceConfig = DEFAULT_TOL

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise GeometryError(f"points must be a non-empty 2-D array, got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise GeometryError("configuration has non-finite coordinates")
        self.points = pts
        if self.labels is not None:
            self.labels = [str(s) for s in self.labels]
            if len(self.labels) != len(pts):
                raise GeometryError("labels length does not match point count")
        self.named_copies = {
            str(k): _check_copy_tuples(v, len(pts), k) for k, v in self.named_copies.items()
        }
        if not self.allow_coincident:
            dup = self._find_coincident()
            if dup is not None:
                raise GeometryError(f"points {dup[0]} and {dup[1]} coincide within tolerance")

    def _find_coincident(self):
        pts = self.points
        n = len(pts)
        scale = float(np.max(np.abs(pts))) if pts.size else 1.0
        thresh = self.tol.sq_slack(scale * scale)
        if n <= 2000:
            d = pairwise_sq_dists(pts)
            iu = np.triu_indices(n, k=1)
            hits = np.nonzero(d[iu] <= thresh)[0]
            if hits.size:
                h = hits[0]
                return int(iu[0][h]), int(iu[1][h])
            return None
        # Large configurations: bucket points on a rounded grid and only
        # compare within buckets.  Catches exact/near-exact collisions,
        # which are the failure mode index-sharing bugs produce.
        buckets: dict[bytes, list[int]] = {}
        rounded = np.round(pts, 6)
        for i in range(n):
            key = rounded[i].tobytes()
            for j in buckets.get(key, ()):
                diff = pts[i] - pts[j]
                if float(np.dot(diff, diff)) <= thresh:
                    return j, i
            buckets.setdefault(key, []).append(i)
        return None

    def __len__(self) -> int:
        return int(self.points.shape[0])

    @property
    def dim(self) -> int:
        return int(self.points.shape[1])

    def point(self, i: int) -> np.ndarray:
        return self.points[i]

    def to_json_dict(self) -> dict:
        out = {
            "dim": self.dim,
            "points": [[float(x) for x in row] for row in self.points],
            "copies": {k: [list(t) for t in v] for k, v in self.named_copies.items()},
        }
        if self.labels is not None:
            out["labels"] = list(self.labels)
        if self.notes:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_json_dict(cls, data: dict, allow_coincident: bool = False) -> "Configuration":
        try:
            pts = np.asarray(data["points"], dtype=float)
            dim = int(data["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GeometryError(f"malformed configuration payload: {exc}") from None
        if pts.ndim != 2 or pts.shape[1] != dim:
            raise GeometryError("declared dim does not match point rows")
        return cls(
            points=pts,
            labels=data.get("labels"),
            named_copies={k: [tuple(t) for t in v] for k, v in data.get("copies", {}).items()},
            allow_coincident=allow_coincident,
            notes=data.get("notes"),
        )

    def save(self, path: str):
        write_json_atomic(path, self.to_json_dict())

    @classmethod
    def load(cls, path: str, allow_coincident: bool = False) -> "Configuration":
        return cls.from_json_dict(read_json(path), allow_coincident=allow_coincident)


def gram_from_sq_dist(sq: np.ndarray) -> np.ndarray:
    """Gram matrix of the vectors p_i - p_0, i = 1..k-1."""
    sq = np.asarray(sq, dtype=float)
    d0 = sq[0, 1:]
    return (d0[:, None] + d0[None, :] - sq[1:, 1:]) / 2.0


def min_gram_eigenvalue(sq: np.ndarray) -> float:
    g = gram_from_sq_dist(sq)
    if g.shape[0] == 0:
        return 0.0
    return float(np.linalg.eigvalsh(g)[0])


def is_realizable(sq: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the squared-distance matrix embeds in Euclidean space."""
    scale = float(np.max(sq)) if sq.size else 1.0
    return min_gram_eigenvalue(sq) >= -tol.sq_slack(scale)


def is_nondegenerate(sq: np.ndarray, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when the k points realizing ``sq`` span a full (k-1)-flat."""
    scale = float(np.max(sq)) if sq.size else 1.0
    return min_gram_eigenvalue(sq) > tol.sq_slack(scale)


@dataclass(frozen=True)
class SimplexSpec:
    """Labeled squared-distance matrix of an abstract k-point simplex."""

    sq_dist: np.ndarray

    def __post_init__(self):
        sq = np.asarray(self.sq_dist, dtype=float)
        if sq.ndim != 2 or sq.shape[0] != sq.shape[1] or sq.shape[0] < 2:
            raise GeometryError(f"sq_dist must be k x k with k >= 2, got {sq.shape}")
        if not np.all(np.isfinite(sq)):
            raise GeometryError("sq_dist has non-finite entries")
        if not np.allclose(sq, sq.T, rtol=0, atol=0):
            raise GeometryError("sq_dist must be exactly symmetric")
        if np.any(np.diag(sq) != 0.0):
            raise GeometryError("sq_dist diagonal must be zero")
        off = sq[~np.eye(sq.shape[0], dtype=bool)]
        if np.any(off <= 0.0):
            raise GeometryError("off-diagonal squared distances must be positive")
        if not is_realizable(sq):
            raise NonRealizableError("squared-distance matrix is not realizable")
        sq = sq.copy()
        sq.flags.writeable = False
        object.__setattr__(self, "sq_dist", sq)

    @property
    def k(self) -> int:
        return int(self.sq_dist.shape[0])

    @classmethod
    def from_points(cls, points) -> "SimplexSpec":
        pts = np.asarray(points, dtype=float)
        return cls(pairwise_sq_dists(pts))

    @classmethod
    def pair(cls, d: float) -> "SimplexSpec":
        if d <= 0:
            raise GeometryError("pair distance must be positive")
        return cls(np.array([[0.0, d * d], [d * d, 0.0]]))

    @classmethod
    def triangle(cls, a: float, b: float, c: float) -> "SimplexSpec":
        """Triangle with |p0 p1| = c, |p0 p2| = b, |p1 p2| = a."""
        sq = np.array(
            [
                [0.0, c * c, b * b],
                [c * c, 0.0, a * a],
                [b * b, a * a, 0.0],
            ]
        )
        return cls(sq)

    @classmethod
    def regular(cls, n: int, side: float) -> "SimplexSpec":
        if n < 2:
            raise GeometryError("a regular simplex needs at least 2 points")
        if side <= 0:
            raise GeometryError("side must be positive")
        sq = np.full((n, n), side * side)
        np.fill_diagonal(sq, 0.0)
        return cls(sq)

    @classmethod
    def rectangle(cls, a: float, b: float) -> "SimplexSpec":
        """Rectangle with side lengths a and b, corners (0,0),(a,0),(0,b),(a,b)."""
        if a <= 0 or b <= 0:
            raise GeometryError("rectangle sides must be positive")
        pts = np.array([[0.0, 0.0], [a, 0.0], [0.0, b], [a, b]])
        return cls.from_points(pts)

    def to_json_dict(self) -> dict:
        return {"sq_dist": [[float(x) for x in row] for row in self.sq_dist]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SimplexSpec":
        try:
            return cls(np.asarray(data["sq_dist"], dtype=float))
        except (KeyError, TypeError) as exc:
            raise GeometryError(f"malformed simplex payload: {exc}") from None

    def save(self, path: str):
        write_json_atomic(path, self.to_json_dict())

    @classmethod
    def load(cls, path: str) -> "SimplexSpec":
        return cls.from_json_dict(read_json(path))


def congruence_check(A, B, tol: ToleranceConfig = DEFAULT_TOL):
    """Search for a bijection making all pairwise squared distances agree.

    Returns a tuple ``perm`` with ``|A_i A_j| == |B_perm[i] B_perm[j]|``
    for all i, j (within tolerance), or None when no such bijection
    exists.  Exhaustive backtracking; capped at 12 points.
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.ndim != 2 or B.ndim != 2:
        raise GeometryError("congruence_check expects 2-D point arrays")
    n = A.shape[0]
    if B.shape[0] != n:
        raise GeometryError(f"point counts differ: {n} vs {B.shape[0]}")
    if n > 12:
        raise GeometryError("congruence_check capped at 12 points")
    if n == 1:
        return (0,)
    da = pairwise_sq_dists(A)
    db = pairwise_sq_dists(B)

    # Quick reject on the sorted distance multisets.
    iu = np.triu_indices(n, k=1)
    ma = np.sort(da[iu])
    mb = np.sort(db[iu])
    for x, y in zip(ma, mb):
        if not tol.sq_close(float(x), float(y)):
            return None

    perm = [-1] * n
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j]:
                continue
            ok = True
            for t in range(i):
                if not tol.sq_close(float(da[i, t]), float(db[j, perm[t]])):
                    ok = False
                    break
            if ok:
                perm[i] = j
                used[j] = True
                if extend(i + 1):
                    return True
                used[j] = False
                perm[i] = -1
        return False

    if extend(0):
        return tuple(perm)
    return None


def enumerate_copies(cfg: Configuration, spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL):
    """All k-subsets of ``cfg`` congruent to ``spec``.

    Returns sorted index tuples in lexicographic order; every subset
    congruent to the spec appears exactly once.  Capped at k <= 6 and
    |cfg| <= 200 to keep exhaustive search honest.
    """
    k = spec.k
    n = len(cfg)
    if k > 6:
        raise GeometryError("enumerate_copies capped at spec size 6")
    if n > 200:
        raise GeometryError("enumerate_copies capped at 200 configuration points")
    if k > n:
        return []
    d = pairwise_sq_dists(cfg.points)
    s = spec.sq_dist
    slack = np.vectorize(lambda x, y: tol.sq_close(float(x), float(y)))
    found: set[frozenset] = set()
    assign: list[int] = []

    def extend(i: int):
        if i == k:
            found.add(frozenset(assign))
            return
        mask = np.ones(n, dtype=bool)
        for t in range(i):
            col = d[:, assign[t]]
            target = s[i, t]
            mask &= np.abs(col - target) <= tol.rel_tol * np.maximum(col, target) + tol.abs_tol
        for t in range(i):
            mask[assign[t]] = False
        for j in np.nonzero(mask)[0]:
            assign.append(int(j))
            extend(i + 1)
            assign.pop()

    extend(0)
    return sorted(tuple(sorted(fs)) for fs in found)


def cayley_menger_volume(spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """(k-1)-dimensional content of the simplex given by ``spec``.

    Zero for degenerate (flat) simplices; raises when the determinant
    certifies non-realizability beyond tolerance.
    """
    sq = spec.sq_dist
    k = spec.k
    j = k - 1
    m = np.ones((k + 1, k + 1))
    m[0, 0] = 0.0
    m[1:, 1:] = sq
    det = float(np.linalg.det(m))
    content2 = (-1.0) ** k * det / (2.0**j * math.factorial(j) ** 2)
    scale = float(np.max(sq)) ** j if sq.size else 1.0
    if content2 < -tol.sq_slack(scale):
        raise NonRealizableError(f"negative squared content {content2}")
    return math.sqrt(max(content2, 0.0))


def embed_from_distances(spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Deterministic coordinates realizing ``spec`` in E^(k-1).

    Point 0 sits at the origin, point 1 on the positive first axis, and
    each later point i gets a nonnegative coordinate on axis i-1
    (triangular pattern).  The result is validated by recomputing all
    pairwise distances; failure raises NonRealizableError.
    """
    sq = spec.sq_dist
    k = spec.k
    dim = max(1, k - 1)
    x = np.zeros((k, dim))
    scale = float(np.max(sq))
    pivot_floor = math.sqrt(tol.sq_slack(scale))
    for i in range(1, k):
        v = np.zeros(dim)
        for m in range(i - 1):
            pivot = x[m + 1, m]
            g = (sq[0, i] + sq[0, m + 1] - sq[i, m + 1]) / 2.0
            proj = float(np.dot(x[m + 1, :m], v[:m]))
            v[m] = (g - proj) / pivot if pivot > pivot_floor else 0.0
        h2 = sq[0, i] - float(np.dot(v[: i - 1], v[: i - 1]))
        if h2 < -tol.sq_slack(scale):
            raise NonRealizableError(f"embedding failed at point {i}: height^2 = {h2}")
        v[i - 1] = math.sqrt(max(h2, 0.0))
        x[i] = v
    got = pairwise_sq_dists(x)
    for i in range(k):
        for j2 in range(i):
            if not tol.sq_close(float(got[i, j2]), float(sq[i, j2])):
                raise NonRealizableError(
                    f"embedding round trip failed on pair ({j2}, {i}): "
                    f"{got[i, j2]} vs {sq[i, j2]}"
                )
    return x


def write_json_atomic(path: str, payload: dict):
    """Write JSON via a temp file plus rename so readers never see a torn file."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)
