"""Testes do corpus aleatório e do portão de equivalência."""
from __future__ import annotations

import numpy as np
import pandas as pd
import pytest

from nilcurv import scalars as sc
from nilcurv.algebra import derived_ideal, validate
from nilcurv.corpus import check_instance, random_algebra, random_passage, random_shape, run_corpus
from nilcurv.errors import NilcurvError


@pytest.mark.parametrize("n, p, q", [(3, 1, 0), (5, 1, 1), (6, 2, 1), (7, 3, 2), (8, 3, 0)])
def test_random_algebra_is_valid(n: int, p: int, q: int) -> None:
    rng = np.random.default_rng(n * 100 + p * 10 + q)
    alg, rejections = random_algebra(rng, n, p, q)
    assert validate(alg) == []
    assert (alg.n, alg.p, alg.space.q) == (n, p, q)
    assert derived_ideal(alg).dim == p
    assert rejections >= 0


def test_random_algebra_in_exact_mode(rng) -> None:
    alg, _ = random_algebra(rng, 5, 1, 1, exact=True)
    assert alg.exact
    assert validate(alg) == []


def test_random_algebra_rejects_impossible_shape(rng) -> None:
    with pytest.raises(NilcurvError):
        random_algebra(rng, 3, 2, 0)


def test_random_shape_avoids_odd_complement_with_single_center(rng) -> None:
    for _ in range(200):
        n, p, q = random_shape(rng)
        assert 3 <= n <= 8
        assert 1 <= p <= n - 2
        assert 2 * q <= n
        if p == 1:
            assert (n - 1) % 2 == 0


def test_random_passage_is_invertible(rng) -> None:
    for mode in (True, False):
        P = random_passage(rng, 3, mode)
        assert sc.rank(P) == 3
        assert sc.is_exact(P) == mode


def test_check_instance_of_euclidean_h3(rng, euclidean_h3) -> None:
    row = check_instance(euclidean_h3, rng, center_changes=5)
    assert row["ricci_dev"] == 0.0
    assert row["curvature_dev"] == 0.0
    assert row["invariance_dev"] == 0.0
    assert row["scalar"] == pytest.approx(-0.5)
    assert row["euclidean_ok"] is True
    assert row["einstein_ok"]


def test_check_instance_skips_spectral_check_for_indefinite_metric(rng, dim5_lorentz) -> None:
    row = check_instance(dim5_lorentz, rng, center_changes=2)
    assert row["euclidean_ok"] is None
    assert row["scalar"] == 0.0


def test_float_corpus_passes() -> None:
    result = run_corpus(count=6, seed=0, center_changes=5, progress=False)
    summary = result.summary
    assert summary.passed, summary
    assert summary.max_dev <= 1e-9
    assert len(result.table) == 6
    assert list(result.table["seed"]) == list(range(6))


def test_full_float_gate() -> None:
    """200 álgebras, 100 mudanças de base do centro em cada uma."""
    result = run_corpus(count=200, seed=7, center_changes=100, progress=False)
    summary = result.summary
    assert summary.passed, summary
    assert summary.count == 200
    assert summary.max_dev <= 1e-9
    assert set(result.table["q"]) <= {0, 1, 2}
    assert result.table["n"].max() <= 8
    assert result.table["p"].max() <= 3


def test_exact_corpus_has_no_deviation() -> None:
    result = run_corpus(count=3, seed=42, exact=True, center_changes=2, progress=False)
    summary = result.summary
    assert summary.passed
    assert summary.max_dev == 0.0
    assert summary.max_curvature_dev == 0.0
    assert summary.max_scalar_dev == 0.0


def test_corpus_is_deterministic() -> None:
    first = run_corpus(count=3, seed=7, center_changes=2, progress=False)
    second = run_corpus(count=3, seed=7, center_changes=2, progress=False)
    pd.testing.assert_frame_equal(first.table, second.table)


def test_corpus_csv_export(tmp_path) -> None:
    result = run_corpus(count=2, seed=1, center_changes=1, progress=False)
    target = tmp_path / "corpus.csv"
    result.to_csv(target)
    table = pd.read_csv(target)
    assert len(table) == 2
    assert {"n", "p", "q", "ricci_dev", "invariance_dev", "einstein_ok"} <= set(table.columns)


def test_summary_dict_reports_pass_flag() -> None:
    summary = run_corpus(count=1, seed=3, center_changes=1, progress=False).summary
    data = summary.as_dict()
    assert data["passed"] == summary.passed
    assert data["count"] == 1
