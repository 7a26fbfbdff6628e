"""Simplex contraction, the connected subdivision grid, and sphere lifts.

Shrinking every squared side of a simplex by the same amount 2*eps^2 is
the inverse of lifting each vertex onto its own orthogonal eps-sphere
axis: the lift adds eps^2 twice per pair, once for each endpoint, and
there are no cross terms.  ``contract_simplex`` performs the shrink and
certifies the result stays a real nondegenerate simplex;
``eps_max`` locates the collapse threshold by bisection.

``build_perturbation_grid`` realizes the block-matrix point set whose
rows are the simplex vertices (w_i, 0) plus chain rows
((j/m_i) w_i, (eps/2) e_k) subdividing each edge from the origin.  Its
two load-bearing facts are verified directly: the rows are affinely
independent, and the graph joining rows at distance < 2*eps is
connected, so the eps-balls around the rows overlap along every chain.
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
    embed_from_distances,
    is_nondegenerate,
    pairwise_sq_dists,
)


def _contracted_sq(sq: np.ndarray, eps: float) -> np.ndarray:
    out = sq - 2.0 * eps * eps
    np.fill_diagonal(out, 0.0)
    return out


def _contraction_ok(sq: np.ndarray, eps: float, tol: ToleranceConfig) -> bool:
    out = _contracted_sq(sq, eps)
    off = out[np.triu_indices(len(out), k=1)]
    if off.size and off.min() <= 0.0:
        return False
    return is_nondegenerate(out, tol)


def eps_max(spec: SimplexSpec, tol: ToleranceConfig = DEFAULT_TOL) -> float:
    """Largest eps (within 1e-9) whose contraction stays nondegenerate.

    The contracted Gram matrix decreases monotonically in eps, so the
    admissible set is an interval [0, eps_max) and bisection applies.
    """
    sq = spec.sq_dist
    if not is_nondegenerate(sq, tol):
        raise GeometryError("degenerate simplex has no contraction margin")
    off = sq[np.triu_indices(len(sq), k=1)]
    lo, hi = 0.0, math.sqrt(float(off.min()) / 2.0)
    if _contraction_ok(sq, hi, tol):
        raise GeometryError("contraction bracket failed to pin the collapse point")
    while hi - lo > 1e-9:
        mid = 0.5 * (lo + hi)
        if _contraction_ok(sq, mid, tol):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class ContractionResult:
    original: SimplexSpec
    eps: float
    contracted: SimplexSpec
    eps_max: float


def contract_simplex(
    spec: SimplexSpec, eps: float, tol: ToleranceConfig = DEFAULT_TOL
) -> ContractionResult:
    """Shrink every squared side by 2*eps^2."""
    if eps < 0.0:
        raise GeometryError(f"eps must be nonnegative, got {eps}")
    if eps > 0.0 and not _contraction_ok(spec.sq_dist, eps, tol):
        raise ConstraintViolation("eps_too_large", f"contraction by eps={eps} degenerates the simplex")
    contracted = SimplexSpec(_contracted_sq(spec.sq_dist, eps))
    return ContractionResult(
        original=spec, eps=eps, contracted=contracted, eps_max=eps_max(spec, tol)
    )


@dataclass(frozen=True)
class PerturbationGrid:
    """Subdivision grid over a simplex with one chain per edge from w0.

    ``B`` holds the d+1 base rows followed by the chain rows; n1 is the
    ambient (and affine) dimension sum(m_i - 1) + d.
    """

    delta_spec: SimplexSpec
    m_counts: tuple[int, ...]
    eps: float
    n1: int
    eps_steps: tuple[float, ...]
    B: Configuration

    def base_indices(self) -> tuple[int, ...]:
        return tuple(range(len(self.delta_spec.sq_dist)))

    def intersection_graph_edges(self) -> list[tuple[int, int]]:
        """Pairs of rows at distance strictly below 2*eps."""
        sq = pairwise_sq_dists(self.B.points)
        bound = (2.0 * self.eps) ** 2
        out = []
        for i, j in zip(*np.nonzero(np.triu(sq < bound, k=1))):
            out.append((int(i), int(j)))
        return out

    def is_connected(self) -> bool:
        n = len(self.B.points)
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in self.intersection_graph_edges():
            adj[i].append(j)
            adj[j].append(i)
        seen = {0}
        stack = [0]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == n


def build_perturbation_grid(
    delta_spec: SimplexSpec,
    m_counts,
    eps: float,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> PerturbationGrid:
    d = len(delta_spec.sq_dist) - 1
    m_counts = tuple(int(m) for m in m_counts)
    if len(m_counts) != d:
        raise GeometryError(f"need {d} subdivision counts, got {len(m_counts)}")
    if any(m < 2 for m in m_counts):
        raise GeometryError(f"subdivision counts must be at least 2, got {m_counts}")
    if eps <= 0.0:
        raise GeometryError(f"eps must be positive, got {eps}")

    w = embed_from_distances(delta_spec, tol=tol)
    steps = tuple(float(np.linalg.norm(w[i + 1])) / m_counts[i] for i in range(d))
    for i, step in enumerate(steps):
        if step >= eps:
            raise ConstraintViolation(
                "eps_floor", f"chain step ||w_{i + 1}||/m = {step} is not below eps={eps}"
            )

    n1 = sum(m - 1 for m in m_counts) + d
    fiber = n1 - d
    pts = np.zeros((n1 + 1, n1))
    labels = []
    for i in range(d + 1):
        pts[i, :d] = w[i]
        labels.append(f"w{i}")
    chains: list[tuple[int, ...]] = []
    row, axis = d + 1, 0
    for i in range(1, d + 1):
        chain = [0]
        for j in range(1, m_counts[i - 1]):
            pts[row, :d] = (j / m_counts[i - 1]) * w[i]
            pts[row, d + axis] = eps / 2.0
            labels.append(f"w{i}_{j}")
            chain.append(row)
            row += 1
            axis += 1
        chain.append(i)
        chains.append(tuple(chain))
    assert row == n1 + 1 and axis == fiber

    diffs = pts[1:] - pts[0]
    if np.linalg.matrix_rank(diffs) != n1:
        raise GeometryError("grid rows are affinely dependent")

    grid = PerturbationGrid(
        delta_spec=delta_spec,
        m_counts=m_counts,
        eps=eps,
        n1=n1,
        eps_steps=steps,
        B=Configuration(
            points=pts,
            labels=labels,
            named_copies={"base": [tuple(range(d + 1))], "chains": chains},
            notes={
                "kind": "perturbation_grid",
                "eps": eps,
                "m_counts": list(m_counts),
                "n1": n1,
                "eps_steps": list(steps),
            },
            tol=tol,
        ),
    )

    # Each chain must walk from w0 to its vertex in hops below 2*eps;
    # both facts follow from step < eps but are certified directly.
    bound_sq = (2.0 * eps) ** 2
    for chain in chains:
        for u, v in zip(chain, chain[1:]):
            gap = float(np.dot(pts[u] - pts[v], pts[u] - pts[v]))
            if gap >= bound_sq:
                raise GeometryError(f"chain hop ({u}, {v}) has length >= 2*eps")
    if not grid.is_connected():
        raise GeometryError("grid intersection graph is not connected")
    return grid


def lifted_base_copy(
    grid: PerturbationGrid, unit_dir, tol: ToleranceConfig = DEFAULT_TOL
) -> Configuration:
    """Base simplex translated by eps along one fiber direction.

    The translated vertices all sit at distance eps from their base
    counterparts and keep every pairwise distance, so they form a copy
    of the original simplex with each vertex on the sphere of radius
    eps around its base point.
    """
    u = np.asarray(unit_dir, dtype=float)
    fiber = grid.n1 - (len(grid.delta_spec.sq_dist) - 1)
    if u.shape != (fiber,):
        raise GeometryError(f"direction must live in the {fiber}-dimensional fiber")
    if abs(float(np.linalg.norm(u)) - 1.0) > 1e-9:
        raise GeometryError("lift direction must have unit norm")

    d = len(grid.delta_spec.sq_dist) - 1
    base = grid.B.points[: d + 1]
    shift = np.zeros(grid.n1)
    shift[d:] = grid.eps * u
    pts = base + shift

    sq = pairwise_sq_dists(pts)
    scale = float(grid.delta_spec.sq_dist.max())
    if float(np.abs(sq - grid.delta_spec.sq_dist).max()) > tol.sq_slack(scale):
        raise GeometryError("lifted base copy is not congruent to the simplex")
    return Configuration(
        points=pts,
        labels=[f"q{i}" for i in range(d + 1)],
        notes={"kind": "lifted_base_copy", "eps": grid.eps},
        tol=tol,
    )


def orthogonal_lift_check(base_sq: float, eps: float) -> float:
    """Squared distance after both endpoints move eps along fresh axes."""
    if base_sq < 0.0:
        raise GeometryError(f"squared distance must be nonnegative, got {base_sq}")
    return base_sq + 2.0 * eps * eps


def coordinate_lift(points: np.ndarray, eps: float) -> np.ndarray:
    """Append one fresh axis per point and move each point eps along its own.

    Every pairwise squared distance grows by exactly 2*eps^2: the two
    fresh coordinates never interact, so there are no cross terms.
    """
    pts = np.asarray(points, dtype=float)
    n, dim = pts.shape
    out = np.zeros((n, dim + n))
    out[:, :dim] = pts
    out[np.arange(n), dim + np.arange(n)] = eps
    return out
