import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.services.domains import (
    Annulus,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
    boundary_sample,
    contains,
    delta_dist,
    eps_dist,
    euclid_dist,
    random_points,
    spherical_center,
    spherical_diameter_complement,
    tau_diameter_complement,
    tau_disk,
)
from app.utils.errors import (
    BadParameters,
    InfinityHasNoEuclideanDistance,
    PointNotInDomain,
    SampleTooSmall,
)
from app.utils.sphere import INFINITY, SpherePoint, SphericalIsometry, chordal, tau

# bounded image: the pole of this isometry lies outside D_0.5
BOUNDED_T = SphericalIsometry(0.5, SpherePoint(0.0, 0.3))


# -----------------------------------------------------------------------------
# membership and closed-form distances
# -----------------------------------------------------------------------------

def test_disk_membership_and_distances():
    D2 = EuclideanDisk(0j, 2.0)
    assert contains(D2, 1 + 1j)
    assert not contains(D2, INFINITY)
    assert euclid_dist(D2, 1 + 1j) == pytest.approx(2 - math.sqrt(2))
    # (R - |z|)/(1 + R|z|)
    assert eps_dist(D2, 1) == pytest.approx(1 / 3)
    # (R - |z|)/sqrt((1+R²)(1+|z|²))
    assert delta_dist(D2, 1) == pytest.approx(1 / math.sqrt(10))
    assert eps_dist(EuclideanDisk(0j, 4.0), 0) == pytest.approx(4.0)
    assert delta_dist(EuclideanDisk(0j, 1.0), 0) == pytest.approx(1 / math.sqrt(2))


def test_exterior_disk_at_infinity():
    E = ExteriorDisk(2.0)
    assert contains(E, INFINITY)
    assert eps_dist(E, INFINITY) == pytest.approx(0.5)
    assert eps_dist(E, 4) == pytest.approx(2 / 9)
    with pytest.raises(InfinityHasNoEuclideanDistance):
        euclid_dist(E, INFINITY)


def test_punctured_disk_and_annulus():
    P = PuncturedDisk(1.0)
    assert not contains(P, 0)
    assert euclid_dist(P, 0.5) == pytest.approx(0.5)
    assert eps_dist(P, 0.5) == pytest.approx(1 / 3)
    with pytest.raises(PointNotInDomain):
        eps_dist(P, 0)

    A = Annulus(0.5)
    assert euclid_dist(A, 0.75) == pytest.approx(0.25)
    assert eps_dist(A, 0.75) == pytest.approx(1 / 7)


def test_half_plane_normal_is_normalized():
    H = HalfPlane(2 + 0j, 1.0)
    assert H.normal == 1 + 0j
    assert euclid_dist(H, 3) == pytest.approx(2.0)
    assert H.is_planar and not H.is_hemisphere
    assert HalfPlane(1j, 0.0).is_hemisphere


def test_bad_parameters():
    with pytest.raises(BadParameters):
        EuclideanDisk(0j, -1.0)
    with pytest.raises(BadParameters):
        Annulus(1.5)
    with pytest.raises(BadParameters):
        HalfPlane(0j, 0.0)


def test_spherical_convexity_flags():
    assert EuclideanDisk(0j, 0.5).spherically_convex
    assert EuclideanDisk(0j, 1.0).is_hemisphere
    assert not EuclideanDisk(0j, 2.0).spherically_convex
    assert ExteriorDisk(1.0).is_hemisphere
    assert not PuncturedDisk(1.0).is_spherical_disk
    assert PuncturedDisk(1.0).has_isolated_boundary_point


# -----------------------------------------------------------------------------
# sampled methods agree with closed forms
# -----------------------------------------------------------------------------

@pytest.mark.parametrize(
    "domain,z",
    [
        (EuclideanDisk(0j, 2.0), 1 + 0.5j),
        (EuclideanDisk(0.3 - 0.2j, 0.7), 0.4 - 0.1j),
        (ExteriorDisk(1.0), 1.5j),
        (PuncturedDisk(1.0), 0.3),
        (Annulus(0.2), -0.5j),
        (HalfPlane(1j, 0.5), 2 + 1.5j),
    ],
)
def test_sampled_distances_match_closed_forms(domain, z):
    assert eps_dist(domain, z, "sampled") == pytest.approx(eps_dist(domain, z), abs=1e-8)
    assert euclid_dist(domain, z, "sampled") == pytest.approx(euclid_dist(domain, z), abs=1e-8)


def test_isometry_image_distances_match_boundary_search():
    image = IsometryImage(BOUNDED_T, EuclideanDisk(0j, 0.5))
    z = BOUNDED_T(0.1 + 0.05j)
    assert image.contains(z)
    assert euclid_dist(image, z, "boundary") == pytest.approx(euclid_dist(image, z, "sampled"), abs=1e-8)
    assert eps_dist(image, z, "boundary") == pytest.approx(eps_dist(image, z, "sampled"), abs=1e-8)


@settings(max_examples=40)
@given(
    st.floats(min_value=0.0, max_value=6.28),
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=-3.0, max_value=3.0),
    st.floats(min_value=0.05, max_value=0.45),
    st.floats(min_value=0.0, max_value=6.28),
)
def test_eps_is_isometry_invariant(theta, ax, ay, r, phi):
    base = EuclideanDisk(0j, 0.5)
    T = SphericalIsometry(theta, SpherePoint(ax, ay))
    image = IsometryImage(T, base)
    z = SpherePoint.of(r * complex(math.cos(phi), math.sin(phi)))
    Tz = T(z)
    assume(not Tz.is_infinity and Tz.modulus < 1e3)
    assert eps_dist(image, Tz, "boundary") == pytest.approx(eps_dist(base, z), rel=1e-8, abs=1e-12)


# |z| < sqrt(2) - 1: the puncture is the nearest boundary point
@pytest.mark.parametrize("r", [0.01, 0.05, 0.1, 0.2, 0.35])
@pytest.mark.parametrize("phi", [0.0, 1.3, 2.9, 4.4])
def test_distance_to_transported_puncture_is_exact(r, phi):
    base = PuncturedDisk(1.0)
    T = SphericalIsometry(2.0, SpherePoint(-0.3, 0.8))
    image = IsometryImage(T, base)
    z = SpherePoint.of(r * complex(math.cos(phi), math.sin(phi)))
    assert eps_dist(image, T(z), "boundary") == pytest.approx(eps_dist(base, z), rel=1e-12)


def test_puncture_component_keeps_its_point():
    T = SphericalIsometry(2.0, SpherePoint(-0.3, 0.8))
    image = IsometryImage(T, PuncturedDisk(1.0))
    points = [f.point for f in image.components() if f.point is not None]
    assert len(points) == 1
    assert chordal(points[0], T(0.0)) <= 1e-15


def test_nested_images_are_flattened():
    S = SphericalIsometry(0.2, SpherePoint(0.1, 0.4))
    inner = IsometryImage(BOUNDED_T, Annulus(0.5))
    outer = IsometryImage(S, inner)
    assert isinstance(outer.base, Annulus)
    z = 0.7 + 0j
    assert chordal(outer.T(z), S(BOUNDED_T(z))) <= 1e-12


# -----------------------------------------------------------------------------
# boundary samples and diameters
# -----------------------------------------------------------------------------

def test_boundary_sample_on_unit_circle():
    sample = boundary_sample(EuclideanDisk(0j, 1.0), 16)
    assert sample.n == 16
    assert all(abs(p.modulus - 1.0) < 1e-12 for p in sample.points)
    with pytest.raises(SampleTooSmall):
        boundary_sample(EuclideanDisk(0j, 1.0), 8)


def test_boundary_sample_keeps_the_puncture():
    sample = boundary_sample(PuncturedDisk(1.0), 64)
    assert sample.n == 64
    assert sum(1 for p in sample.points if p.modulus == 0.0) == 1


def test_half_plane_sample_reaches_infinity():
    sample = boundary_sample(HalfPlane(1 + 0j, 0.0), 16)
    assert any(p.is_infinity for p in sample.points)


def test_diameter_of_disk_complements():
    assert spherical_diameter_complement(EuclideanDisk(0j, 0.5)) == pytest.approx(1.0)
    assert spherical_diameter_complement(EuclideanDisk(0j, 2.0)) == pytest.approx(0.8)
    assert spherical_diameter_complement(EuclideanDisk(0j, 2.0), "sampled") == pytest.approx(0.8, abs=1e-8)
    assert spherical_diameter_complement(ExteriorDisk(0.5)) == pytest.approx(0.8)
    # τ(-2, 2) for the complement of D_2: 4/3
    assert tau_diameter_complement(EuclideanDisk(0j, 2.0)) == pytest.approx(4 / 3)


def test_image_diameter_is_invariant():
    image = IsometryImage(BOUNDED_T, EuclideanDisk(0j, 2.0))
    assert spherical_diameter_complement(image, "sampled") == pytest.approx(0.8, abs=1e-8)


# -----------------------------------------------------------------------------
# spherical centers and τ-disks
# -----------------------------------------------------------------------------

def test_spherical_center_of_offset_disk():
    D = EuclideanDisk(0.3 + 0.2j, 0.5)
    c = spherical_center(D)
    assert c is not None and D.contains(c)
    radii = [chordal(c, p) for p in boundary_sample(D, 32).points]
    assert max(radii) - min(radii) < 1e-9
    assert spherical_center(Annulus(0.5)) is None
    assert spherical_center(ExteriorDisk(3.0)).is_infinity


@pytest.mark.parametrize("z,eps", [(0.5 + 0.2j, 0.4), (2j, 0.3), (0.0, 1.5)])
def test_tau_disk_boundary_is_at_tau_eps(z, eps):
    disk = tau_disk(z, eps)
    assert isinstance(disk, EuclideanDisk)
    assert disk.contains(z)
    for p in boundary_sample(disk, 32).points:
        assert tau(p, z) == pytest.approx(eps, rel=1e-9)


def test_tau_disk_limits():
    # ε|z| = 1: the τ-disk is a half-plane
    assert isinstance(tau_disk(2.0, 0.5), HalfPlane)
    with pytest.raises(BadParameters):
        tau_disk(2.0, 0.8)


def test_random_points_are_inside():
    rng = np.random.default_rng(7)
    for domain in (Annulus(0.5), ExteriorDisk(2.0), IsometryImage(BOUNDED_T, PuncturedDisk(1.0))):
        z = random_points(domain, 100, rng)
        assert len(z) == 100
        assert domain.contains_array(z).all()
