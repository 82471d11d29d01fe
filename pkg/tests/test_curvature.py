"""Testes de Levi-Civita, curvatura, Ricci e curvatura escalar."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from nilcurv import scalars as sc
from nilcurv.algebra import projection_onto_center
from nilcurv.corpus import random_algebra
from nilcurv.curvature import (
    LeviCivitaTable,
    curvature_closed_form,
    curvature_definitional,
    curvature_report,
    curvature_tensor,
    einstein_residual,
    euclidean_spectral_report,
    heisenberg_ricci_criterion,
    j_plus_minus,
    levi_civita,
    levi_civita_closed_form,
    levi_civita_koszul,
    levi_civita_violations,
    normalized_ricci_norm,
    ricci_adapted,
    ricci_bruteforce,
    ricci_fast,
    scalar_curvature,
)
from nilcurv.errors import DimensionMismatchError, NilcurvError
from nilcurv.families import euclidean_heisenberg, h_type, quaternion_pair, random_lorentz_heisenberg

HALF = Fraction(1, 2)


def test_levi_civita_of_euclidean_h3(euclidean_h3) -> None:
    table = levi_civita(euclidean_h3)
    gamma = table.gamma
    assert gamma[1, 2, 0] == HALF  # 𝒟_x y = ½e
    assert gamma[2, 1, 0] == -HALF
    assert gamma[1, 0, 2] == -HALF  # 𝒟_x e = −½y
    assert gamma[0, 1, 2] == -HALF
    assert levi_civita_violations(euclidean_h3, table) == []


def test_levi_civita_product_is_bilinear(euclidean_h3) -> None:
    table = levi_civita(euclidean_h3)
    u = sc.as_array([0, 1, 0], True)
    v = sc.as_array([0, 0, 1], True)
    assert list(table.product(u, v)) == [HALF, 0, 0]
    assert list(table.product(2 * u, v)) == [1, 0, 0]


def test_koszul_and_closed_form_agree_on_random_algebras() -> None:
    for seed in range(15):
        rng = np.random.default_rng(seed)
        alg, _ = random_algebra(rng, 6, 2, 1, exact=True)
        assert np.array_equal(levi_civita_koszul(alg), levi_civita_closed_form(alg))
        table = LeviCivitaTable(levi_civita_koszul(alg))
        assert levi_civita_violations(alg, table) == []


def test_curvature_of_euclidean_h3(euclidean_h3) -> None:
    R = curvature_tensor(euclidean_h3)
    assert R[1, 2, 2, 1] == Fraction(3, 4)
    assert R[1, 2, 1, 2] == Fraction(-3, 4)
    assert R[0, 0, 0, 0] == 0


def test_flat_h3_is_flat(flat_h3) -> None:
    assert sc.is_zero(curvature_tensor(flat_h3))
    report = curvature_report(flat_h3)
    assert report.flags["flat"] and report.flags["ricci_flat"]
    assert report.scalar == 0


def test_curvature_closed_form_matches_definition_exactly() -> None:
    for seed in range(10):
        rng = np.random.default_rng(100 + seed)
        alg, _ = random_algebra(rng, 7, 3, 2, exact=True)
        table = LeviCivitaTable(levi_civita_koszul(alg))
        assert np.array_equal(curvature_definitional(alg, table), curvature_closed_form(alg))


def test_ricci_of_euclidean_h3(euclidean_h3) -> None:
    ricci = ricci_bruteforce(euclidean_h3)
    expected = sc.zeros((3, 3), True)
    expected[0, 0], expected[1, 1], expected[2, 2] = HALF, -HALF, -HALF
    assert np.array_equal(ricci, expected)
    assert np.array_equal(ricci_fast(euclidean_h3), expected)
    assert scalar_curvature(euclidean_h3) == -HALF


def test_fast_ricci_matches_brute_force_in_float_mode() -> None:
    for seed in range(10):
        rng = np.random.default_rng(200 + seed)
        alg, _ = random_algebra(rng, 7, 2, 1, exact=False)
        np.testing.assert_allclose(ricci_fast(alg), ricci_bruteforce(alg), atol=1e-9)


def test_j_plus_and_j_minus_annihilate_each_other() -> None:
    rng = np.random.default_rng(7)
    alg, _ = random_algebra(rng, 8, 3, 2, exact=True)
    j_plus, j_minus = j_plus_minus(alg)
    assert sc.is_zero(j_plus @ j_minus)
    assert sc.is_zero(j_minus @ j_plus)


def test_euclidean_h5_spectral_report() -> None:
    h5 = euclidean_heisenberg([1, 2])
    report = euclidean_spectral_report(h5)
    assert report.mu == pytest.approx((2.5,))
    assert report.lambdas == pytest.approx((0.5, 0.5, 2.0, 2.0))
    assert report.scalar == pytest.approx(-2.5)
    assert report.violations(h5.n) == []
    assert scalar_curvature(h5) == Fraction(-5, 2)


def test_spectral_report_rejects_indefinite_metric(flat_h3) -> None:
    with pytest.raises(NilcurvError):
        euclidean_spectral_report(flat_h3)


@pytest.mark.parametrize(
    "structures, scalar",
    [
        ([[[0, -1], [1, 0]]], Fraction(-1, 2)),
        (quaternion_pair()[:1], Fraction(-1)),
        (quaternion_pair(), Fraction(-2)),
    ],
)
def test_h_type_operators(structures, scalar: Fraction) -> None:
    alg = h_type(structures)
    p, m = alg.p, alg.n - alg.p
    j_plus, j_minus = j_plus_minus(alg)
    center_part = projection_onto_center(alg)
    complement = sc.identity(alg.n, True) - center_part
    assert np.array_equal(j_plus, Fraction(m, 4) * center_part)
    assert np.array_equal(j_minus, Fraction(-p, 2) * complement)
    assert scalar_curvature(alg) == scalar
    assert curvature_report(alg).flags["h_type"]


def test_ricci_adapted_matches_brute_force(dim5_lorentz, euclidean_h3) -> None:
    for alg in (dim5_lorentz, euclidean_h3, random_algebra(np.random.default_rng(3), 6, 2, 1)[0]):
        np.testing.assert_allclose(ricci_adapted(alg), sc.to_float(ricci_bruteforce(alg)), atol=1e-8)


def test_heisenberg_criterion(flat_h3, euclidean_h3) -> None:
    assert heisenberg_ricci_criterion(flat_h3) == (0, 0)
    assert heisenberg_ricci_criterion(euclidean_h3) == (1, -2)
    with pytest.raises(DimensionMismatchError):
        heisenberg_ricci_criterion(h_type(quaternion_pair()))


def test_lorentzian_heisenberg_is_never_ricci_flat() -> None:
    for seed in range(1000):
        alg = random_lorentz_heisenberg(2, seed)
        assert normalized_ricci_norm(alg) > 1e-6


def test_lorentzian_h3_reaches_ricci_flatness(flat_h3) -> None:
    """Em dimensão 3 o centro degenerado atinge ‖𝔯‖∞ = 0."""
    assert normalized_ricci_norm(flat_h3) == 0.0
    assert sc.max_abs(ricci_bruteforce(flat_h3)) == 0


def test_einstein_fit(flat_h3, euclidean_h3) -> None:
    flat = einstein_residual(flat_h3)
    assert flat.exact_zero and flat.lam == 0
    assert flat.is_einstein() and flat.consistent()

    curved = einstein_residual(euclidean_h3)
    assert curved.lam == Fraction(-1, 6)
    assert curved.residual > 0.5
    assert not curved.is_einstein()
    assert curved.consistent()


def test_curvature_report_of_euclidean_h3(euclidean_h3) -> None:
    report = curvature_report(euclidean_h3)
    assert report.oracle_deviation == 0.0
    assert report.flags == {
        "ricci_flat": False,
        "flat": False,
        "heisenberg": True,
        "h_type": True,
        "einstein": False,
    }
    assert np.array_equal(report.ricci_endo @ report.ricci_endo, sc.identity(3, True) / 4)


def test_float_report_respects_tolerance_from_environment(monkeypatch, euclidean_h3) -> None:
    monkeypatch.setenv("NILCURV_TOL", "1e-6")
    report = curvature_report(euclidean_h3.with_mode(False))
    assert report.tolerance == 1e-6
    assert report.scalar == pytest.approx(-0.5)
