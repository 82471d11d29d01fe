"""Testes do codec JSON de álgebras e relatórios."""
from __future__ import annotations

import json
from fractions import Fraction

import numpy as np
import pytest

from nilcurv.curvature import curvature_report
from nilcurv.errors import InvalidAlgebraError, MalformedFileError
from nilcurv.families import HeisFamily3Params, heis_family3
from nilcurv.schemas import AlgebraFile
from nilcurv.serialization import (
    algebra_from_file,
    algebra_to_file,
    dump_algebra,
    encode_scalar,
    load_algebra,
    parse_algebra,
    report_model,
)


def test_encode_scalar() -> None:
    assert encode_scalar(Fraction(-1, 2)) == "-1/2"
    assert encode_scalar(0.25) == 0.25


def test_exact_algebra_survives_a_file(tmp_path) -> None:
    alg = heis_family3(HeisFamily3Params(q=3, a=[2], beta=2))
    target = tmp_path / "heis3.json"
    dump_algebra(alg, target)
    loaded = load_algebra(target)
    assert loaded.exact
    assert loaded.name == alg.name
    assert np.array_equal(loaded.js, alg.js)
    assert np.array_equal(loaded.center, alg.center)
    assert loaded.space.q == 3


def test_file_layout(euclidean_h3) -> None:
    doc = json.loads(dump_algebra(euclidean_h3))
    assert doc["dim"] == 3
    assert doc["q"] == 0
    assert doc["gram"] is None
    assert doc["mode"] == "exact"
    assert doc["js"][0][2][1] == "1/1"


def test_non_canonical_gram_is_kept() -> None:
    text = json.dumps(
        {
            "dim": 3,
            "q": 0,
            "gram": [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
            "center": [[1, 0, 0]],
            "js": [[[0, 0, 0], [0, 0, -1], [0, 1, 0]]],
        }
    )
    alg = algebra_from_file(parse_algebra(text))
    assert not alg.space.canonical
    assert algebra_to_file(alg).gram is not None


def test_declared_signature_must_match_gram() -> None:
    doc = AlgebraFile(
        dim=3,
        q=1,
        gram=[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        center=[[1, 0, 0]],
        js=[[[0, 0, 0], [0, 0, -1], [0, 1, 0]]],
    )
    with pytest.raises(InvalidAlgebraError):
        algebra_from_file(doc)


def test_float_file_can_be_read_exactly() -> None:
    doc = AlgebraFile(
        dim=3,
        center=[[1.0, 0.0, 0.0]],
        js=[[[0.0, 0.0, 0.0], [0.0, 0.0, -0.5], [0.0, 0.5, 0.0]]],
        mode="float",
    )
    floating = algebra_from_file(doc)
    assert not floating.exact
    exact = algebra_from_file(doc, exact=True)
    assert exact.exact
    assert exact.js[0][2, 1] == Fraction(1, 2)


@pytest.mark.parametrize("text", ['{"dim": 3, "center": [[1, 0, 0]]', "[]", '{"dim": 3}', "not json"])
def test_malformed_files(text: str) -> None:
    with pytest.raises(MalformedFileError):
        parse_algebra(text)


def test_missing_file_is_malformed(tmp_path) -> None:
    with pytest.raises(MalformedFileError):
        load_algebra(tmp_path / "missing.json")


def test_invalid_algebra_lists_violations() -> None:
    doc = AlgebraFile(dim=3, center=[[0, 1, 0]], js=[[[0, 0, 0], [0, 0, -1], [0, 1, 0]]])
    with pytest.raises(InvalidAlgebraError) as excinfo:
        algebra_from_file(doc)
    assert "J_1 does not vanish on the declared center" in excinfo.value.violations


def test_wrong_sized_structure_is_invalid() -> None:
    doc = AlgebraFile(dim=3, center=[[1, 0, 0]], js=[[[0, -1], [1, 0]]])
    with pytest.raises(InvalidAlgebraError):
        algebra_from_file(doc)


def test_report_model_of_euclidean_h3(euclidean_h3) -> None:
    model = report_model(euclidean_h3, curvature_report(euclidean_h3))
    assert model.scalar == "-1/2"
    assert model.center_type == "euclidean"
    assert model.ricci[0] == ["1/2", "0/1", "0/1"]
    assert model.einstein.lam == "-1/6"
    assert model.flags["heisenberg"]


@pytest.mark.parametrize(
    "js",
    [
        [[["0", "abc", "0"], ["0", "0", "-1"], ["0", "1", "0"]]],
        [[["0", "1"], ["-1", "0", "0"], ["0", "0", "0"]]],
    ],
)
def test_unreadable_entries_are_malformed(js) -> None:
    text = json.dumps({"dim": 3, "center": [["1/1", "0/1", "0/1"]], "js": js})
    with pytest.raises(MalformedFileError):
        algebra_from_file(parse_algebra(text))
