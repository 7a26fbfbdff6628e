"""Obtuse-triangle machinery.

Given an obtuse triangle with sides a <= b <= c, this module computes
the associated quadratic invariant and height bound, realizes the
five-point gadget that transmits color equality across a sphere of
equal chords, walks equal-hop chains between two points of a sphere,
and assembles the two-sphere certificate used in the wide-angle regime.
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
    ToleranceConfig,
    as_point,
    congruence_check,
    squared_distance,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class TriangleInvariants:
    """Derived quantities of a triangle with sides a <= b <= c.

    Delta is the symmetric quartic 2a^2b^2 + 2b^2c^2 + 2c^2a^2 - a^4 -
    b^4 - c^4 (16 times the squared area); h = sqrt(Delta)/a is twice
    the height over the shortest side; gamma is the largest angle.
    """

    a: float
    b: float
    c: float
    Delta: float
    h: float
    obtuse: bool
    gamma: float
    circumradius: float


def triangle_invariants(a: float, b: float, c: float) -> TriangleInvariants:
    if not (0.0 < a <= b <= c):
        raise GeometryError(f"sides must satisfy 0 < a <= b <= c, got {(a, b, c)}")
    if a + b <= c:
        raise ConstraintViolation("triangle_inequality", f"a + b <= c for {(a, b, c)}")
    delta = (
        2.0 * (a * b) ** 2
        + 2.0 * (b * c) ** 2
        + 2.0 * (c * a) ** 2
        - a**4
        - b**4
        - c**4
    )
    if delta <= 0.0:
        raise ConstraintViolation("degenerate", f"Delta = {delta} is not positive")
    h = math.sqrt(delta) / a
    cos_gamma = (a * a + b * b - c * c) / (2.0 * a * b)
    gamma = math.acos(max(-1.0, min(1.0, cos_gamma)))
    circumradius = c / (2.0 * math.sin(gamma))
    return TriangleInvariants(
        a=a,
        b=b,
        c=c,
        Delta=delta,
        h=h,
        obtuse=(a * a + b * b < c * c),
        gamma=gamma,
        circumradius=circumradius,
    )


@dataclass(frozen=True)
class PerturbedChord:
    """Chord length of the shifted triangle pair and its admissible bound."""

    ell: float
    bound: float
    ok: bool


def perturbed_chord(a: float, b: float, c: float, eps: float) -> PerturbedChord:
    """Length ell of the chord joining the two equal-distance apexes.

    Requires 0 < eps < h.  The bound 2*sqrt(c^2 - (eps/2)^2) always
    exceeds ell; ``ok`` records the comparison explicitly.
    """
    inv = triangle_invariants(a, b, c)
    if not (0.0 < eps < inv.h):
        raise ConstraintViolation("eps_range", f"eps must lie in (0, h={inv.h}), got {eps}")
    num = inv.Delta - (a * eps) ** 2
    den = b * b - (eps / 2.0) ** 2
    ell = math.sqrt(num / den)
    bound = 2.0 * math.sqrt(c * c - (eps / 2.0) ** 2)
    return PerturbedChord(ell=ell, bound=bound, ok=ell < bound)


_FIVE_POINT_ORDER = ("A", "B", "P", "M", "N")


@dataclass(frozen=True)
class FivePointGadget:
    """Five points transmitting color equality between two sphere points.

    A and B sit eps apart; P and M lie on the sphere of points at
    distance c from both, with |PM| = ell; N is at distance b from A
    and B and at distance a from P and M.  Lives in E^3.
    """

    a: float
    b: float
    c: float
    eps: float
    ell: float
    A: np.ndarray
    B: np.ndarray
    P: np.ndarray
    M: np.ndarray
    N: np.ndarray

    def points(self) -> np.ndarray:
        return np.vstack([self.A, self.B, self.P, self.M, self.N])

    def expected_sq_dists(self) -> dict[tuple[int, int], float]:
        a, b, c, eps, ell = self.a, self.b, self.c, self.eps, self.ell
        # Indices follow A, B, P, M, N.
        return {
            (0, 1): eps * eps,
            (0, 2): c * c,
            (0, 3): c * c,
            (1, 2): c * c,
            (1, 3): c * c,
            (2, 3): ell * ell,
            (0, 4): b * b,
            (1, 4): b * b,
            (2, 4): a * a,
            (3, 4): a * a,
        }

    def max_sq_error(self) -> float:
        pts = self.points()
        worst = 0.0
        for (i, j), target in self.expected_sq_dists().items():
            worst = max(worst, abs(squared_distance(pts[i], pts[j]) - target))
        return worst

    def verify(self, tol: ToleranceConfig = DEFAULT_TOL):
        err = self.max_sq_error()
        if err > tol.sq_slack(self.c * self.c):
            raise GeometryError(f"five-point distances off by {err}")

    def triangle_copies(self) -> dict[str, tuple[int, int, int]]:
        return {
            "NPA": (4, 2, 0),
            "NPB": (4, 2, 1),
            "NMA": (4, 3, 0),
            "NMB": (4, 3, 1),
        }

    def as_configuration(self) -> Configuration:
        copies: dict[str, list[tuple[int, ...]]] = {
            f"triangle_{name}": [tri] for name, tri in self.triangle_copies().items()
        }
        copies["tetra_PMAB"] = [(2, 3, 0, 1)]
        return Configuration(
            points=self.points(),
            labels=list(_FIVE_POINT_ORDER),
            named_copies=copies,
            notes={"a": self.a, "b": self.b, "c": self.c, "eps": self.eps, "ell": self.ell},
        )


def build_five_point(a: float, b: float, c: float, eps: float) -> FivePointGadget:
    """Construct the gadget in explicit E^3 coordinates.

    A and B straddle the origin on the first axis; P, M, N lie in the
    perpendicular bisector plane.  The position of N on the axis through
    the two chord midpoints is what makes all four outer triangles
    congruent to (a, b, c).
    """
    inv = triangle_invariants(a, b, c)
    if not inv.obtuse:
        raise ConstraintViolation("obtuse", f"{(a, b, c)} is not an obtuse triple")
    chord = perturbed_chord(a, b, c, eps)
    ell = chord.ell
    c_p = math.sqrt(c * c - (eps / 2.0) ** 2)
    b_p = math.sqrt(b * b - (eps / 2.0) ** 2)
    half = ell / 2.0
    x_sq = c_p * c_p - half * half
    if x_sq <= 0.0:
        raise ConstraintViolation("chord_bound", "chord exceeds sphere diameter")
    x = math.sqrt(x_sq)
    # The algebraic identity behind N's placement; kept as a hard check.
    x_alg = (b_p * b_p + c_p * c_p - a * a) / (2.0 * b_p)
    if abs(x_alg - x) > 1e-6 * max(1.0, c):
        raise GeometryError(f"midpoint identity failed: {x_alg} vs {x}")
    gadget = FivePointGadget(
        a=a,
        b=b,
        c=c,
        eps=eps,
        ell=ell,
        A=np.array([-eps / 2.0, 0.0, 0.0]),
        B=np.array([eps / 2.0, 0.0, 0.0]),
        P=np.array([0.0, x, half]),
        M=np.array([0.0, x, -half]),
        N=np.array([0.0, b_p, 0.0]),
    )
    gadget.verify()
    return gadget


@dataclass(frozen=True)
class SphereChain:
    """Equal-hop node chain between two points of a sphere.

    ``nodes`` runs U, X_1, ..., X_k, V; every consecutive pair is d
    apart and every node lies on the sphere.  ``s_prime`` is the radius
    of the auxiliary circle carrying the nodes (None for the trivial
    single-point chain).
    """

    center: np.ndarray
    s: float
    d: float
    nodes: np.ndarray
    k: int
    s_prime: float | None
    pre_hops: int = 0

    def hops(self) -> list[tuple[int, int]]:
        return [(i, i + 1) for i in range(len(self.nodes) - 1)]

    def verify(self, tol: ToleranceConfig = DEFAULT_TOL):
        s_sq = self.s * self.s
        for node in self.nodes:
            got = squared_distance(node, self.center)
            if not tol.sq_close(got, s_sq):
                raise GeometryError(f"chain node off sphere: |X-center|^2 = {got} vs {s_sq}")
        d_sq = self.d * self.d
        for i, j in self.hops():
            got = squared_distance(self.nodes[i], self.nodes[j])
            if not tol.sq_close(got, d_sq):
                raise GeometryError(f"hop ({i},{j}) has squared length {got} vs {d_sq}")

    def as_configuration(self) -> Configuration:
        return Configuration(
            points=self.nodes,
            named_copies={"hops": [list(h) for h in self.hops()]},
            notes={"s": self.s, "d": self.d, "s_prime": self.s_prime, "k": self.k},
        )


def _unit_orthogonal(vectors: list[np.ndarray], dim: int) -> np.ndarray:
    """First standard basis direction orthogonalized against ``vectors``."""
    basis = []
    for v in vectors:
        w = v.copy()
        for u in basis:
            w = w - np.dot(w, u) * u
        n = np.linalg.norm(w)
        if n > 1e-12:
            basis.append(w / n)
    for axis in range(dim):
        w = np.zeros(dim)
        w[axis] = 1.0
        for u in basis:
            w = w - np.dot(w, u) * u
        n = np.linalg.norm(w)
        if n > 1e-6:
            return w / n
    raise GeometryError("no orthogonal direction available; ambient dimension too small")


def _chain_profile(uv: float, d: float, k: int):
    def f(x: float) -> float:
        return 2.0 * (k + 1) * math.asin(d / (2.0 * x)) - 2.0 * math.asin(uv / (2.0 * x))

    return f


def chain_on_sphere(center, s: float, U, V, d: float, tol: ToleranceConfig = DEFAULT_TOL) -> SphereChain:
    """Connect U to V on the sphere by the smallest workable equal-hop chain.

    Solves f(x) = 2(k+1) asin(d/2x) - 2 asin(|UV|/2x) for a radius
    s' in [p, s] with f(s') an integer multiple of 2 pi, taking the
    smallest k for which such a radius exists (guaranteed once k meets
    the monotonicity and span bounds).  Antipodal endpoints get one
    deterministic pre-hop first.
    """
    center = as_point(center)
    U = as_point(U)
    V = as_point(V)
    dim = center.shape[0]
    if U.shape[0] != dim or V.shape[0] != dim:
        raise GeometryError("center, U, V must share a dimension")
    if dim < 3:
        raise GeometryError("chain_on_sphere needs ambient dimension >= 3")
    if not (0.0 < d < 2.0 * s):
        raise GeometryError(f"step must satisfy 0 < d < 2s, got d={d}, s={s}")
    s_sq = s * s
    for name, pt in (("U", U), ("V", V)):
        got = squared_distance(pt, center)
        if not tol.sq_close(got, s_sq):
            raise GeometryError(f"{name} is off the sphere: |{name}-center|^2 = {got} vs {s_sq}")

    uv_sq = squared_distance(U, V)
    scale_slack = tol.sq_slack(s_sq)
    if uv_sq <= scale_slack:
        # Coincident endpoints: nothing to connect.
        return SphereChain(center=center, s=s, d=d, nodes=U[None, :].copy(), k=0, s_prime=None)

    if tol.sq_close(uv_sq, 4.0 * s_sq):
        # Antipodal endpoints: one deterministic pre-hop off the axis.
        radial = (U - center) / s
        e = _unit_orthogonal([radial], dim)
        xi = 2.0 * math.asin(d / (2.0 * s))
        u_pre = center + math.cos(xi) * (U - center) + math.sin(xi) * s * e
        inner = chain_on_sphere(center, s, u_pre, V, d, tol=tol)
        nodes = np.vstack([U[None, :], inner.nodes])
        return SphereChain(
            center=center,
            s=s,
            d=d,
            nodes=nodes,
            k=inner.k + 1,
            s_prime=inner.s_prime,
            pre_hops=inner.pre_hops + 1,
        )

    uv = math.sqrt(uv_sq)
    half_uv = uv / 2.0
    base = max(d / 2.0, half_uv)
    p = base + 0.01 * (s - base)
    if not (p < s):
        raise GeometryError("no admissible circle radius interval")

    # Hard cap: the smallest k meeting both sufficient bounds always admits
    # a solution, so the scan below terminates well before it.
    ratio = (uv / d) * math.sqrt(
        (1.0 - (d / (2.0 * p)) ** 2) / (1.0 - (uv / (2.0 * p)) ** 2)
    )
    k_cap = int(math.ceil(ratio)) + 8
    while True:
        f_probe = _chain_profile(uv, d, k_cap)
        if f_probe(p) - f_probe(s) > TWO_PI:
            break
        k_cap += max(1, k_cap // 2)

    solution = None
    for k in range(1, k_cap + 1):
        f = _chain_profile(uv, d, k)
        fs = f(s)
        fp = f(p)
        lo, hi = min(fs, fp), max(fs, fp)
        n_lo = max(0, math.ceil(lo / TWO_PI - 1e-9))
        n_hi = math.floor(hi / TWO_PI + 1e-9)
        for n in range(n_lo, n_hi + 1):
            target = TWO_PI * n
            if abs(fs - target) <= 1e-12:
                solution = (k, s, n)
                break
            if abs(fp - target) <= 1e-12:
                solution = (k, p, n)
                break
            if (fp - target) * (fs - target) < 0.0:
                a_x, b_x = p, s
                ga = fp - target
                for _ in range(200):
                    mid = 0.5 * (a_x + b_x)
                    gm = f(mid) - target
                    if abs(gm) <= 1e-12 or (b_x - a_x) <= 1e-15 * s:
                        break
                    if ga * gm <= 0.0:
                        b_x = mid
                    else:
                        a_x = mid
                        ga = gm
                solution = (k, 0.5 * (a_x + b_x), n)
                break
        if solution is not None:
            break
    if solution is None:
        raise GeometryError("no chain radius found; parameter scan exhausted")
    k, s_prime, n = solution

    # Circle of radius s' through U and V on the sphere, tilted off the
    # great-circle plane by a deterministic third direction.
    w_mid = (U + V) / 2.0
    e1 = (V - U) / uv
    m_vec = w_mid - center
    m = math.sqrt(max(s_sq - half_uv * half_uv, 0.0))
    w_hat = m_vec / m
    e3 = _unit_orthogonal([e1, w_hat], dim)
    q_sq = s_prime * s_prime - half_uv * half_uv
    alpha = -q_sq / m
    beta_sq = q_sq * (m * m - q_sq)
    beta = math.sqrt(max(beta_sq, 0.0)) / m
    o_circ = w_mid + alpha * w_hat + beta * e3

    e_a = (U - o_circ) / s_prime
    v_rel = V - o_circ
    e_b = v_rel - np.dot(v_rel, e_a) * e_a
    e_b_norm = np.linalg.norm(e_b)
    if e_b_norm <= 1e-12 * s_prime:
        raise GeometryError("degenerate circle frame")
    e_b = e_b / e_b_norm

    step = 2.0 * math.asin(d / (2.0 * s_prime))
    nodes = [U]
    for i in range(1, k + 1):
        ang = i * step
        nodes.append(o_circ + s_prime * (math.cos(ang) * e_a + math.sin(ang) * e_b))
    nodes.append(V)
    chain = SphereChain(center=center, s=s, d=d, nodes=np.vstack(nodes), k=k, s_prime=s_prime)
    chain.verify(tol)
    return chain


def chain_angle_defect(chain: SphereChain) -> float:
    """Distance from f(s') to the nearest integer multiple of 2 pi.

    For antipodal inputs the profile applies to the segment after the
    deterministic pre-hop, which is where s' was solved.
    """
    if chain.s_prime is None:
        return 0.0
    u = chain.nodes[chain.pre_hops]
    v = chain.nodes[-1]
    uv = math.sqrt(squared_distance(u, v))
    f = _chain_profile(uv, chain.d, chain.k - chain.pre_hops)
    val = f(chain.s_prime)
    return abs(val - TWO_PI * round(val / TWO_PI))


@dataclass(frozen=True)
class MonoSphereWitness:
    """Chain of gadget spheres showing one color must dominate a sphere.

    The sphere is the locus at distance c from both A and B of the
    five-point gadget; consecutive chain nodes are one chord ell apart,
    so each hop, together with A and B, is congruent to {P, M, A, B}.
    """

    gadget: FivePointGadget
    A: np.ndarray
    B: np.ndarray
    chain: SphereChain
    nodes: np.ndarray
    tetra_checked: int

    def as_configuration(self) -> Configuration:
        pts = np.vstack([self.A, self.B, self.nodes])
        hops = [(2 + i, 3 + i) for i in range(len(self.nodes) - 1)]
        copies = {"hop_tetra_ABxy": [(0, 1, i, j) for i, j in hops]}
        return Configuration(points=pts, named_copies=copies, allow_coincident=False)


def equal_chord_sphere(c: float, eps: float) -> tuple[np.ndarray, float]:
    """Center and radius of {Z in E^4 : |ZA| = |ZB| = c} in gadget frame."""
    radius = math.sqrt(c * c - (eps / 2.0) ** 2)
    return np.zeros(4), radius


def mono_sphere_witness(
    a: float,
    b: float,
    c: float,
    eps: float,
    U,
    V,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> MonoSphereWitness:
    """Chain U to V across the equal-distance sphere of the gadget.

    U and V are E^4 points with |UA| = |UB| = |VA| = |VB| = c, where A
    and B straddle the origin on the first axis.  The chain stays in the
    hyperplane orthogonal to AB, hopping by the gadget chord ell, and
    every hop is verified congruent to the gadget's {P, M, A, B}.
    """
    gadget = build_five_point(a, b, c, eps)
    U = as_point(U)
    V = as_point(V)
    if U.shape[0] != 4 or V.shape[0] != 4:
        raise GeometryError("witness endpoints must be E^4 points")
    A4 = np.array([-eps / 2.0, 0.0, 0.0, 0.0])
    B4 = np.array([eps / 2.0, 0.0, 0.0, 0.0])
    c_sq = c * c
    for name, pt in (("U", U), ("V", V)):
        for anchor_name, anchor in (("A", A4), ("B", B4)):
            got = squared_distance(pt, anchor)
            if not tol.sq_close(got, c_sq):
                raise GeometryError(
                    f"{name} is not at distance c from {anchor_name}: {got} vs {c_sq}"
                )
    _, radius = equal_chord_sphere(c, eps)
    chain3 = chain_on_sphere(np.zeros(3), radius, U[1:], V[1:], gadget.ell, tol=tol)
    nodes = np.zeros((len(chain3.nodes), 4))
    nodes[:, 1:] = chain3.nodes

    ref = np.vstack([gadget.P, gadget.M, gadget.A, gadget.B])
    checked = 0
    for i in range(len(nodes) - 1):
        tetra = np.vstack([nodes[i], nodes[i + 1], A4, B4])
        if congruence_check(tetra, ref, tol=tol) is None:
            raise GeometryError(f"hop {i} is not congruent to the gadget tetrahedron")
        checked += 1
    return MonoSphereWitness(
        gadget=gadget, A=A4, B=B4, chain=chain3, nodes=nodes, tetra_checked=checked
    )


@dataclass(frozen=True)
class CaseBCertificate:
    """Concrete two-sphere geometry for the wide-angle regime.

    O is the shared center; Q sits at radius rho - delta, P is reached
    orthogonally from Q, and Z1 (on the outer sphere S) and Z2 (on the
    inner forced sphere W) are both at distance c from P and Q.  The
    ``branch`` records whether rho equals rad_S (P taken on S) or is
    strictly smaller (P taken at the maximal orthogonal offset).
    """

    a: float
    b: float
    c: float
    eps: float
    rho: float
    delta: float
    branch: str
    O: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    K: np.ndarray
    Z1: np.ndarray
    Z2: np.ndarray
    rad_S: float
    rad_W: float

    def pq(self) -> float:
        return math.dist(self.P, self.Q)

    def verify(self, tol: ToleranceConfig = DEFAULT_TOL):
        slack = tol.sq_slack(self.c * self.c)
        oq_sq = squared_distance(self.O, self.Q)
        lo = (self.rho - self.delta) ** 2
        hi = self.rho * self.rho
        if not (lo - slack <= oq_sq <= hi + slack):
            raise GeometryError(f"|OQ|^2 = {oq_sq} outside [{lo}, {hi}]")
        dot = float(np.dot(self.Q - self.O, self.P - self.Q))
        if abs(dot) > math.sqrt(slack) * max(1.0, self.rho):
            raise GeometryError(f"OQ is not orthogonal to QP: dot = {dot}")
        pq_sq = squared_distance(self.P, self.Q)
        if pq_sq > 2.0 * self.rho * self.delta + slack:
            raise GeometryError(f"|PQ|^2 = {pq_sq} exceeds 2 rho delta")
        c_sq = self.c * self.c
        for name, z in (("Z1", self.Z1), ("Z2", self.Z2)):
            for pname, pt in (("P", self.P), ("Q", self.Q)):
                got = squared_distance(z, pt)
                if not tol.sq_close(got, c_sq):
                    raise GeometryError(f"|{name} {pname}|^2 = {got} vs c^2 = {c_sq}")
        if not tol.sq_close(squared_distance(self.Z1, self.O), self.rad_S**2):
            raise GeometryError("Z1 is off the outer sphere")
        if not tol.sq_close(squared_distance(self.Z2, self.O), self.rad_W**2):
            raise GeometryError("Z2 is off the forced sphere")
        op_sq = squared_distance(self.O, self.P)
        if self.branch == "on_sphere":
            if not tol.sq_close(op_sq, self.rad_S**2):
                raise GeometryError("branch on_sphere but P is off S")
        else:
            if not (hi - slack < op_sq < self.rad_S**2 + slack):
                raise GeometryError(f"|OP|^2 = {op_sq} outside (rho^2, rad_S^2)")

    def as_configuration(self) -> Configuration:
        pts = np.vstack([self.O, self.Q, self.P, self.K, self.Z1, self.Z2])
        return Configuration(
            points=pts,
            labels=["O", "Q", "P", "K", "Z1", "Z2"],
            notes={
                "rho": self.rho,
                "delta": self.delta,
                "rad_S": self.rad_S,
                "rad_W": self.rad_W,
                "branch": self.branch,
            },
        )


def forced_sphere_radius(a: float, b: float, c: float, eps: float) -> float:
    """Radius |OZ| of the sphere swept by the apex over a chord of length c.

    C and D sit on the circle of radius rad_S = sqrt(c^2 - eps^2/4) with
    |CD| = c; Z completes them to the (a, b, c) triangle on the far side
    of the chord from O, and |OZ| depends only on a, b, c, eps.
    """
    rad_s_sq = c * c - (eps * eps) / 4.0
    if rad_s_sq <= (c * c) / 4.0:
        raise ConstraintViolation("chord_fit", "chord c does not fit on the sphere")
    dcd = math.sqrt(rad_s_sq - (c * c) / 4.0)
    zx = (a * a - b * b) / (2.0 * c)
    zy_sq = a * a - (zx + c / 2.0) ** 2
    if zy_sq <= 0.0:
        raise ConstraintViolation("apex_height", "triangle apex has no height over the chord")
    zy = math.sqrt(zy_sq)
    return math.hypot(zx, dcd + zy)


def case_b_certificate(
    a: float,
    b: float,
    c: float,
    eps: float,
    rho: float,
    delta: float,
    tol: ToleranceConfig = DEFAULT_TOL,
) -> CaseBCertificate:
    """Assemble the P, Q, Z1, Z2 certificate in explicit E^3 coordinates.

    Every precondition of the regime is checked by name before any
    geometry is built; the finished certificate re-verifies all distance
    and orthogonality claims.
    """
    inv = triangle_invariants(a, b, c)
    if inv.gamma < 5.0 * math.pi / 6.0:
        raise ConstraintViolation("gamma_min", f"largest angle {inv.gamma} below 5*pi/6")
    if not (0.0 < eps < inv.h):
        raise ConstraintViolation("eps_h", f"eps must lie in (0, h={inv.h})")
    if eps >= c / 2.0:
        raise ConstraintViolation("eps_c_half", f"eps must be below c/2 = {c / 2.0}")
    rad_s = math.sqrt(c * c - (eps * eps) / 4.0)
    rho_floor = math.sqrt(3.0 * c * c / 4.0 - (eps * eps) / 4.0)
    if rho <= rho_floor:
        raise ConstraintViolation("rho_min", f"rho must exceed {rho_floor}")
    slack = math.sqrt(tol.sq_slack(rad_s * rad_s))
    if rho > rad_s + slack:
        raise ConstraintViolation("rho_max", f"rho must not exceed rad_S = {rad_s}")
    rho = min(rho, rad_s)
    if delta <= 0.0:
        raise ConstraintViolation("delta_positive", "delta must be positive")
    if delta >= (c * c - rho * rho) / (2.0 * rho):
        raise ConstraintViolation("delta1", f"delta must be below (c^2 - rho^2)/(2 rho)")
    on_sphere = tol.sq_close(rho * rho, rad_s * rad_s)
    if not on_sphere and delta >= (rad_s * rad_s - rho * rho) / (2.0 * rho):
        raise ConstraintViolation("delta2", "delta must be below (rad_S^2 - rho^2)/(2 rho)")
    if delta >= inv.h * inv.h / (2.0 * rho):
        raise ConstraintViolation("delta3", "delta must be below h^2/(2 rho)")

    rad_w = forced_sphere_radius(a, b, c, eps)

    origin = np.zeros(3)
    oq = rho - delta
    q_pt = np.array([oq, 0.0, 0.0])
    if on_sphere:
        pq = math.sqrt(rad_s * rad_s - oq * oq)
        branch = "on_sphere"
    else:
        pq = math.sqrt(2.0 * rho * delta)
        branch = "interior"
    p_pt = np.array([oq, pq, 0.0])
    k_pt = np.array([oq, pq / 2.0, 0.0])

    # The inequality chain guaranteeing both circle intersections.
    mid = ((eps / 2.0) ** 2 + (c / 2.0) ** 2)
    denom = math.sqrt(c * c - rho * delta)
    if not (mid / denom <= mid / rho + 1e-12 and mid / rho <= rho - delta + 1e-12):
        raise ConstraintViolation("ineq_final", "certificate inequality chain failed")

    half_pq_sq = (pq / 2.0) ** 2
    r_c = math.sqrt(c * c - half_pq_sq)

    def _bisector_point(radius: float, name: str) -> np.ndarray:
        # Circle about the projected center meets the circle about K.
        r_slice_sq = radius * radius - half_pq_sq
        if r_slice_sq <= 0.0:
            raise ConstraintViolation(name, "sphere does not reach the bisector plane")
        x = (r_slice_sq - r_c * r_c + oq * oq) / (2.0 * oq)
        z_sq = r_slice_sq - x * x
        if z_sq < 0.0:
            raise ConstraintViolation(name, "bisector circles do not intersect")
        return np.array([x, pq / 2.0, math.sqrt(z_sq)])

    z1 = _bisector_point(rad_s, "z1_intersection")
    z2 = _bisector_point(rad_w, "z2_intersection")

    cert = CaseBCertificate(
        a=a,
        b=b,
        c=c,
        eps=eps,
        rho=rho,
        delta=delta,
        branch=branch,
        O=origin,
        Q=q_pt,
        P=p_pt,
        K=k_pt,
        Z1=z1,
        Z2=z2,
        rad_S=rad_s,
        rad_W=rad_w,
    )
    cert.verify(tol)
    return cert
