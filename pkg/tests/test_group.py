"""Testes da lei de grupo e da métrica invariante à esquerda."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from nilcurv import group
from nilcurv import scalars as sc
from nilcurv.corpus import random_algebra
from nilcurv.errors import VerificationError
from nilcurv.families import LorentzFamilyParams, LorentzIndices, lorentz_ricci_flat
from nilcurv.group import (
    LorentzPoint,
    bch_multiply,
    group_inverse,
    left_translation_differential,
    metric_at,
    theorem_main_metric,
    verify_theorem_main,
)


def _random_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return sc.as_array(rng.integers(-5, 6, size=n), True)


def test_identity_and_inverse(rng, dim5_lorentz) -> None:
    x = _random_vector(rng, dim5_lorentz.n)
    zero = sc.zeros(dim5_lorentz.n, True)
    assert np.array_equal(bch_multiply(dim5_lorentz, x, zero), x)
    assert np.array_equal(bch_multiply(dim5_lorentz, zero, x), x)
    assert np.array_equal(bch_multiply(dim5_lorentz, x, group_inverse(dim5_lorentz, x)), zero)


def test_group_law_is_associative() -> None:
    rng = np.random.default_rng(11)
    alg, _ = random_algebra(rng, 7, 2, 1, exact=True)
    for _ in range(25):
        x, y, z = (_random_vector(rng, alg.n) for _ in range(3))
        left = bch_multiply(alg, bch_multiply(alg, x, y), z)
        right = bch_multiply(alg, x, bch_multiply(alg, y, z))
        assert np.array_equal(left, right)


def test_left_translation_differential_matches_difference_quotient(rng, generic_lorentz_params) -> None:
    alg = lorentz_ricci_flat(generic_lorentz_params)
    g = _random_vector(rng, alg.n)
    v = _random_vector(rng, alg.n)
    step = Fraction(1, 1000)
    quotient = (bch_multiply(alg, g, step * v) - g) / step
    assert np.array_equal(quotient, left_translation_differential(alg, g) @ v)


def test_metric_of_flat_h3_in_coordinates(flat_h3) -> None:
    """Em (t, t̄, w): ⟨∂_t̄, ∂_t̄⟩ = w e ⟨∂_t̄, ∂_w⟩ = −t̄/2."""
    at = metric_at(flat_h3, [1, 2, 3])
    assert at.coefficient(0, 0) == 0
    assert at.coefficient(0, 1) == 1
    assert at.coefficient(0, 2) == 0
    assert at.coefficient(1, 1) == 3
    assert at.coefficient(1, 2) == -1
    assert at.coefficient(2, 2) == 1


def test_metric_at_identity_is_the_gram(dim5_lorentz) -> None:
    at = metric_at(dim5_lorentz, sc.zeros(dim5_lorentz.n, True))
    assert np.array_equal(at.gram, dim5_lorentz.gram)


def test_closed_form_metric_of_dim3_instance(flat_h3) -> None:
    params = LorentzFamilyParams(p=0, r=0, q=1, B=[1])
    point = [5, -2, 4]
    assert np.array_equal(theorem_main_metric(params, point), metric_at(flat_h3, point).gram)


def test_lorentz_point_round_trip() -> None:
    ix = LorentzIndices(1, 1, 2)
    vector = sc.as_array(list(range(ix.n)), True)
    point = LorentzPoint.from_vector(ix, vector)
    assert point.t == 0 and point.tbar == 1
    assert list(point.u) == [2]
    assert list(point.v) == [3, 4]
    assert list(point.w) == [5, 6]
    assert np.array_equal(point.to_vector(), vector)


def test_verify_dim3_instance_exactly() -> None:
    report = verify_theorem_main(LorentzFamilyParams(p=0, r=0, q=1, B=[1]), sample_count=30)
    assert report.exact and report.passed
    assert report.max_product_deviation == 0.0
    assert report.max_metric_deviation == 0.0


def test_verify_dim5_instance(dim5_params) -> None:
    report = verify_theorem_main(dim5_params, sample_count=50, seed=3)
    assert report.passed
    assert report.signature_preserved


def test_verify_generic_instance(generic_lorentz_params) -> None:
    report = verify_theorem_main(generic_lorentz_params, sample_count=40, seed=5)
    assert report.passed
    assert report.max_metric_deviation == 0.0


def test_verify_in_float_mode(dim5_params) -> None:
    params = dim5_params.model_copy(update={"exact": False})
    report = verify_theorem_main(params, sample_count=50)
    assert not report.exact
    assert report.max_product_deviation <= 1e-9
    assert report.max_metric_deviation <= 1e-9


def test_verify_reports_disagreement(monkeypatch, dim5_params) -> None:
    monkeypatch.setattr(group, "theorem_main_metric", lambda params, point, data=None: sc.zeros((5, 5), True))
    with pytest.raises(VerificationError) as excinfo:
        verify_theorem_main(dim5_params, sample_count=5)
    assert not excinfo.value.report.passed
    assert excinfo.value.report.max_metric_deviation > 0
