import math

import numpy as np
import pytest

from egr.geometry import ConstraintViolation, DEFAULT_TOL, GeometryError, squared_distance
from egr.triangles import (
    build_five_point,
    case_b_certificate,
    chain_angle_defect,
    chain_on_sphere,
    forced_sphere_radius,
    mono_sphere_witness,
    perturbed_chord,
    triangle_invariants,
)


def random_obtuse(rng, lo=0.3, hi=4.0):
    """Sample sides a <= b <= c with the angle opposite c obtuse."""
    while True:
        a, b = sorted(rng.uniform(lo, hi, size=2))
        c_lo = math.hypot(a, b)
        c_hi = a + b
        if c_hi - c_lo < 1e-3:
            continue
        c = rng.uniform(c_lo + 1e-3, c_hi - 1e-3)
        return a, b, c


def test_invariants_2_2_3():
    inv = triangle_invariants(2.0, 2.0, 3.0)
    assert inv.Delta == 63.0
    assert abs(inv.h - math.sqrt(63.0) / 2.0) < 1e-15
    assert inv.obtuse
    assert abs(inv.gamma - math.acos(-1.0 / 8.0)) < 1e-15
    assert abs(inv.circumradius - 12.0 / math.sqrt(63.0)) < 1e-15


def test_invariants_rejects_bad_input():
    with pytest.raises(GeometryError):
        triangle_invariants(3.0, 2.0, 1.0)  # not sorted
    with pytest.raises(ConstraintViolation):
        triangle_invariants(1.0, 1.0, 2.5)  # violates triangle inequality


def test_height_bound_and_chord_on_random_obtuse():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        a, b, c = random_obtuse(rng)
        inv = triangle_invariants(a, b, c)
        assert inv.h < 2.0 * b
        eps = rng.uniform(1e-6, inv.h * (1.0 - 1e-9))
        chord = perturbed_chord(a, b, c, eps)
        assert chord.ok
        assert chord.ell < chord.bound


def test_perturbed_chord_2_2_3_1():
    chord = perturbed_chord(2.0, 2.0, 3.0, 1.0)
    assert abs(chord.ell - math.sqrt(59.0 / 3.75)) < 1e-14
    assert abs(chord.bound - 2.0 * math.sqrt(8.75)) < 1e-14
    assert chord.ok


def test_perturbed_chord_rejects_eps_at_h():
    inv = triangle_invariants(2.0, 2.0, 3.0)
    with pytest.raises(ConstraintViolation):
        perturbed_chord(2.0, 2.0, 3.0, inv.h)


def test_five_point_gadget_2_2_3_1():
    g = build_five_point(2.0, 2.0, 3.0, 1.0)
    g.verify()
    # Midpoint offset from the algebraic identity.
    assert abs(g.P[1] - 2.1947) < 1e-3
    assert g.max_sq_error() <= 1e-9 * g.c * g.c
    cfg = g.as_configuration()
    assert cfg.labels == ["A", "B", "P", "M", "N"]
    assert len(cfg.named_copies["tetra_PMAB"]) == 1


def test_five_point_gadget_random_parameters():
    rng = np.random.default_rng(777)
    built = 0
    while built < 100:
        a, b, c = random_obtuse(rng)
        inv = triangle_invariants(a, b, c)
        eps = rng.uniform(0.05 * inv.h, 0.95 * inv.h)
        g = build_five_point(a, b, c, eps)
        assert g.max_sq_error() <= 1e-9 * c * c
        built += 1


def test_five_point_rejects_acute():
    with pytest.raises(ConstraintViolation):
        build_five_point(1.0, 1.0, 1.2, 0.1)


def test_chain_golden_case():
    u = np.array([0.0, 0.0, 1.0])
    v = np.array([math.sqrt(3.0) / 2.0, 0.0, -0.5])
    chain = chain_on_sphere(np.zeros(3), 1.0, u, v, 1.0)
    assert chain.k == 1
    assert abs(chain.s_prime - 1.0) < 1e-12
    assert chain.nodes.shape == (3, 3)
    for i, j in chain.hops():
        assert abs(squared_distance(chain.nodes[i], chain.nodes[j]) - 1.0) < 1e-12
    assert chain_angle_defect(chain) < 1e-12


def test_chain_identical_endpoints():
    u = np.array([0.0, 0.0, 1.0])
    chain = chain_on_sphere(np.zeros(3), 1.0, u, u.copy(), 0.5)
    assert chain.k == 0
    assert len(chain.nodes) == 1
    assert chain.s_prime is None


def test_chain_antipodal_endpoints():
    u = np.array([0.0, 0.0, 2.0])
    v = np.array([0.0, 0.0, -2.0])
    chain = chain_on_sphere(np.zeros(3), 2.0, u, v, 1.0)
    assert chain.pre_hops == 1
    chain.verify()
    assert chain_angle_defect(chain) < 1e-10


def test_chain_rejects_bad_inputs():
    u = np.array([0.0, 0.0, 1.0])
    v = np.array([0.0, 1.0, 0.0])
    with pytest.raises(GeometryError):
        chain_on_sphere(np.zeros(3), 1.0, u, v, 2.5)  # step too long
    with pytest.raises(GeometryError):
        chain_on_sphere(np.zeros(3), 1.0, u, 2.0 * v, 0.5)  # V off sphere
    with pytest.raises(GeometryError):
        chain_on_sphere(np.zeros(2), 1.0, u[:2], v[:2], 0.5)  # ambient too small


def test_chain_random_instances():
    rng = np.random.default_rng(2718)
    for _ in range(100):
        dim = int(rng.integers(3, 5))
        s = rng.uniform(0.5, 3.0)
        u = rng.standard_normal(dim)
        u = s * u / np.linalg.norm(u)
        v = rng.standard_normal(dim)
        v = s * v / np.linalg.norm(v)
        if np.linalg.norm(u - v) < 1e-3 or np.linalg.norm(u + v) > 2.0 * s - 1e-3:
            continue
        d = rng.uniform(0.1, 1.8) * s
        chain = chain_on_sphere(np.zeros(dim), s, u, v, d)
        chain.verify()
        assert chain_angle_defect(chain) < 1e-10


def test_mono_sphere_witness_generic():
    r = math.sqrt(8.75)
    u = np.array([0.0, r, 0.0, 0.0])
    v = np.array([0.0, 0.0, r, 0.0])
    w = mono_sphere_witness(2.0, 2.0, 3.0, 1.0, u, v)
    assert w.tetra_checked == len(w.nodes) - 1
    assert w.chain.pre_hops == 0


def test_mono_sphere_witness_antipodal():
    r = math.sqrt(8.75)
    u = np.array([0.0, r, 0.0, 0.0])
    v = np.array([0.0, -r, 0.0, 0.0])
    w = mono_sphere_witness(2.0, 2.0, 3.0, 1.0, u, v)
    assert w.chain.pre_hops == 1
    assert w.tetra_checked >= 2


def test_mono_sphere_witness_rejects_off_sphere():
    u = np.array([0.0, 1.0, 0.0, 0.0])
    v = np.array([0.0, 0.0, 1.0, 0.0])
    with pytest.raises(GeometryError):
        mono_sphere_witness(2.0, 2.0, 3.0, 1.0, u, v)


def case_b_params():
    a, b, c, eps = 1.0, 1.0, 1.95, 0.4
    rad_s = math.sqrt(c * c - eps * eps / 4.0)
    return a, b, c, eps, rad_s


def test_case_b_certificate_example():
    a, b, c, eps, rad_s = case_b_params()
    cert = case_b_certificate(a, b, c, eps, rho=rad_s, delta=1e-3)
    cert.verify()
    assert cert.branch == "on_sphere"
    assert abs(cert.rad_S - rad_s) < 1e-12
    assert cert.rad_W > math.sqrt(3.0 * c * c / 4.0 - eps * eps / 4.0)
    assert cert.pq() <= math.sqrt(2.0 * cert.rho * cert.delta) + 1e-12


def test_case_b_interior_branch():
    a, b, c, eps, rad_s = case_b_params()
    rho = 0.99 * rad_s
    cert = case_b_certificate(a, b, c, eps, rho=rho, delta=1e-4)
    cert.verify()
    assert cert.branch == "interior"
    op = math.dist(cert.O, cert.P)
    assert cert.rho < op < cert.rad_S


def test_case_b_named_violations():
    a, b, c, eps, rad_s = case_b_params()
    with pytest.raises(ConstraintViolation) as err:
        case_b_certificate(a, b, c, eps, rho=rad_s, delta=c * c)
    assert err.value.name == "delta1"
    # Thin triangle with h > c/2 so an eps between them reaches the c/2 gate.
    ct = math.sqrt(0.01 + 1.0 + 2.0 * 0.1 * 0.87)
    with pytest.raises(ConstraintViolation) as err:
        case_b_certificate(0.1, 1.0, ct, 0.6, rho=ct, delta=1e-3)
    assert err.value.name == "eps_c_half"
    with pytest.raises(ConstraintViolation) as err:
        case_b_certificate(1.0, 1.0, 1.3, 0.1, rho=1.2, delta=1e-3)
    assert err.value.name == "gamma_min"
    with pytest.raises(ConstraintViolation) as err:
        case_b_certificate(a, b, c, eps, rho=0.5, delta=1e-3)
    assert err.value.name == "rho_min"


def test_forced_sphere_radius_exceeds_floor():
    rng = np.random.default_rng(11)
    for _ in range(50):
        a, b, c = random_obtuse(rng)
        inv = triangle_invariants(a, b, c)
        if inv.gamma < 5.0 * math.pi / 6.0:
            continue
        eps = min(inv.h, c / 2.0) * 0.5
        rw = forced_sphere_radius(a, b, c, eps)
        assert rw > math.sqrt(3.0 * c * c / 4.0 - eps * eps / 4.0)
