import math

import pytest

from app.services.constants import (
    SearchBudget,
    budget_trend,
    domain_constants,
    infimum,
    normalized_constants,
    pointwise_product,
)
from app.services.domains import (
    Annulus,
    EuclideanDisk,
    ExteriorDisk,
    HalfPlane,
    IsometryImage,
    PuncturedDisk,
)
from app.services.example1 import disk_closed_forms, example1_table
from app.utils.errors import BadParameters, BudgetTooSmall, EuclideanKindAtInfinity
from app.utils.sphere import INFINITY, SpherePoint, SphericalIsometry, parse_point

SMALL = SearchBudget(grid=64, refine_iters=200, target_tol=1e-10)


# -----------------------------------------------------------------------------
# pointwise products
# -----------------------------------------------------------------------------

def test_pointwise_products():
    # R(1+x²)/((1+Rx)(R+x)) at R=2, x=1
    assert pointwise_product("eps_mu", EuclideanDisk(0j, 2.0), 1) == pytest.approx(4 / 9)
    assert pointwise_product("d_lambda", EuclideanDisk(0j, 1.0), 0) == pytest.approx(1.0)
    with pytest.raises(EuclideanKindAtInfinity):
        pointwise_product("d_lambda", ExteriorDisk(1.0), INFINITY)


def test_exterior_disk_degenerates():
    # d·λ = R/(|z|+R) → 0
    E = ExteriorDisk(1.0)
    values = [pointwise_product("d_lambda", E, 10.0 ** k) for k in range(1, 7)]
    for k, v in enumerate(values, start=1):
        assert v == pytest.approx(1 / (10.0 ** k + 1), abs=1e-10)
    assert all(a > b for a, b in zip(values, values[1:]))


# -----------------------------------------------------------------------------
# infima on disks
# -----------------------------------------------------------------------------

def test_numeric_infima_on_disks():
    assert infimum("d_lambda", EuclideanDisk(0j, 5.0), closed_form=False).value == pytest.approx(0.5, abs=1e-9)
    assert infimum("delta_mu", EuclideanDisk(0j, 2.0), closed_form=False).value == pytest.approx(0.4, abs=1e-8)
    assert infimum("eps_mu", EuclideanDisk(0j, 2.0), closed_form=False).value == pytest.approx(4 / 9, abs=1e-8)


def test_small_disks_reach_one_half_at_the_boundary():
    for kind in ("delta_mu", "eps_mu"):
        report = infimum(kind, EuclideanDisk(0j, 0.5), closed_form=False)
        assert report.value == pytest.approx(0.5, abs=1e-8)
        assert report.witness.modulus == pytest.approx(0.5, abs=1e-4)


def test_closed_form_report():
    report = infimum("delta_mu", EuclideanDisk(0j, 2.0))
    assert report.closed_form_used
    assert report.value == pytest.approx(0.4)
    # the witness sits at |z| = 1/R
    assert report.witness.modulus == pytest.approx(0.5)


def test_budget_too_small():
    with pytest.raises(BudgetTooSmall):
        infimum("eps_mu", Annulus(0.5), SearchBudget(grid=32))


# -----------------------------------------------------------------------------
# the five constants
# -----------------------------------------------------------------------------

@pytest.mark.parametrize("R", [0.5, 1.0, 2.0, 5.0])
def test_normalized_constants_on_disks(R):
    report = domain_constants(EuclideanDisk(0j, R))
    assert report.Ctilde_prime == pytest.approx(0.5, abs=1e-7)
    assert 0.5 - 1e-12 <= report.Chat_prime < 1.0
    assert report.Ctilde <= report.Chat + 1e-12


def test_constants_of_d2():
    report = domain_constants(EuclideanDisk(0j, 2.0))
    assert report.C == pytest.approx(0.5)
    assert report.Ctilde == pytest.approx(0.4)
    assert report.Chat == pytest.approx(4 / 9)
    assert report.Chat_prime == pytest.approx(5 / 9)
    assert report.sigma_diam_complement == pytest.approx(0.8)
    # both primed constants are normalized by σ, not τ
    assert report.Ctilde_prime == report.Ctilde / report.sigma_diam_complement
    assert report.Chat_prime == report.Chat / report.sigma_diam_complement
    assert all(report.closed_form_used.values())
    for text in report.witnesses.values():
        parse_point(text)


def test_constants_are_isometry_invariant():
    T = SphericalIsometry(0.9, SpherePoint(0.5, -1.0))
    for base in (EuclideanDisk(0j, 2.0), HalfPlane(1 + 0j, 0.0)):
        plain = normalized_constants(base)
        moved = normalized_constants(IsometryImage(T, base))
        assert moved["Ctilde_prime"] == pytest.approx(plain["Ctilde_prime"], abs=1e-7)
        assert moved["Chat_prime"] == pytest.approx(plain["Chat_prime"], abs=1e-7)


def test_main_theorem_on_annulus():
    report = domain_constants(Annulus(0.5), SMALL)
    assert report.Chat <= 0.5 + 1e-7
    assert report.Ctilde <= report.Chat + 1e-9
    assert report.Chat <= 2 * report.C + 1e-7
    assert report.C <= 4 * report.Ctilde_prime + 1e-7
    assert report.C > 0.1


def test_punctured_disk_trend_decreases():
    trend = budget_trend("d_lambda", PuncturedDisk(1.0), steps=3)
    values = [r.value for r in trend]
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
    assert values[-1] < 0.05


def test_report_json_keeps_infinity():
    report = domain_constants(EuclideanDisk(0j, 0.5))
    assert math.isinf(report.tau_diam_complement)
    assert '"Infinity"' in report.model_dump_json()


# -----------------------------------------------------------------------------
# disk table
# -----------------------------------------------------------------------------

def test_disk_closed_forms():
    closed = disk_closed_forms(2.0)
    assert closed["Ctilde"] == pytest.approx(0.4)
    assert closed["Chat"] == pytest.approx(4 / 9)
    assert closed["sigma_diam_complement"] == pytest.approx(0.8)
    small = disk_closed_forms(0.5)
    assert small["Ctilde"] == small["Chat"] == 0.5
    assert small["sigma_diam_complement"] == 1.0


@pytest.mark.parametrize("R", [0.5, 1.0, 2.0, 5.0])
def test_example1_table_passes(R):
    report = example1_table(R)
    assert report.passed, [r for r in report.rows if not r.within_tolerance]
    assert {r.quantity for r in report.rows} >= {"C", "Ctilde", "Chat", "sigma_diam_complement", "Ctilde_prime"}


def test_example1_rejects_bad_radius():
    with pytest.raises(BadParameters):
        example1_table(-1.0)
