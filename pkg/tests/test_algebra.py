"""Testes do modelo de álgebra: colchete, validação, centro e base adaptada."""
from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from nilcurv import scalars as sc
from nilcurv.algebra import (
    adapted_basis_violations,
    bracket,
    build_adapted_basis,
    center_type,
    change_center_basis,
    derived_ideal,
    is_heisenberg,
    is_heisenberg_type,
    is_irreducible,
    make_algebra,
    projection_onto_center,
    structure_constants,
    validate,
)
from nilcurv.errors import DimensionMismatchError, InvalidAlgebraError
from nilcurv.families import euclidean_heisenberg, rotation_block
from nilcurv.pseudo_euclidean import make_space

HALF = Fraction(1, 2)


@pytest.fixture()
def timelike_h3():
    """H₃ em ℝ^{(1,2)} com centro v = (1, −1, 0), ⟨v, v⟩ = −2."""
    J = [[0, 0, -HALF], [0, 0, -HALF], [HALF, HALF, 0]]
    return make_algebra(make_space(1, 3), [[1, -1, 0]], [J], name="h3-timelike")


def test_bracket_of_euclidean_h3(euclidean_h3) -> None:
    assert list(bracket(euclidean_h3, [0, 1, 0], [0, 0, 1])) == [1, 0, 0]
    assert list(bracket(euclidean_h3, [0, 0, 1], [0, 1, 0])) == [-1, 0, 0]
    assert list(bracket(euclidean_h3, [1, 0, 0], [0, 1, 0])) == [0, 0, 0]


def test_structure_constants_match_bracket(euclidean_h3) -> None:
    C = structure_constants(euclidean_h3)
    assert list(C[1, 2]) == [1, 0, 0]
    assert list(C[2, 1]) == [-1, 0, 0]
    assert sc.is_zero(C[0])


def test_center_change_keeps_brackets(rng) -> None:
    alg = make_algebra(
        make_space(0, 5),
        [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]],
        [
            np.pad(np.array(rotation_block(1, True), dtype=object), ((3, 0), (3, 0))),
            np.pad(np.array(rotation_block(2, True), dtype=object), ((3, 0), (3, 0))),
        ],
        validate_now=False,
    )
    P = sc.as_array([[2, 1], [1, 1]], True)
    moved = change_center_basis(alg, P)
    for _ in range(20):
        u = sc.as_array(rng.integers(-4, 5, size=5), True)
        v = sc.as_array(rng.integers(-4, 5, size=5), True)
        assert np.array_equal(bracket(moved, u, v), bracket(alg, u, v))


def test_center_change_rejects_wrong_shape(euclidean_h3) -> None:
    with pytest.raises(DimensionMismatchError):
        change_center_basis(euclidean_h3, [[1, 0], [0, 1]])


def test_validate_flags_j_not_vanishing_on_center() -> None:
    J = [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    with pytest.raises(InvalidAlgebraError) as excinfo:
        make_algebra(make_space(0, 3), [[1, 0, 0]], [J])
    assert "J_1 does not vanish on the declared center" in excinfo.value.violations


def test_validate_flags_abelian_algebra() -> None:
    alg = make_algebra(make_space(0, 3), [[1, 0, 0]], [np.zeros((3, 3), dtype=int)], validate_now=False)
    violations = validate(alg)
    assert "derived ideal is trivial (abelian algebra)" in violations
    assert any(v.startswith("kernel ≠ declared center") for v in violations)


def test_validate_flags_non_skew_structure() -> None:
    J = [[0, 0, 0], [0, 1, 0], [0, 0, -1]]
    alg = make_algebra(make_space(0, 3), [[1, 0, 0]], [J], validate_now=False)
    assert "J_1 is not skew-symmetric" in validate(alg)


def test_make_algebra_checks_dimensions() -> None:
    with pytest.raises(DimensionMismatchError):
        make_algebra(make_space(0, 3), [[1, 0]], [np.zeros((3, 3), dtype=int)])


def test_derived_ideal_and_irreducibility(euclidean_h3) -> None:
    assert derived_ideal(euclidean_h3).dim == 1
    assert is_irreducible(euclidean_h3)

    J1 = sc.zeros((4, 4), True)
    J1[1:3, 1:3] = rotation_block(1, True)
    reducible = make_algebra(make_space(0, 4), [[1, 0, 0, 0], [0, 0, 0, 1]], [J1, sc.zeros((4, 4), True)])
    assert derived_ideal(reducible).dim == 1
    assert not is_irreducible(reducible)


def test_center_types(euclidean_h3, flat_h3, timelike_h3) -> None:
    assert center_type(euclidean_h3).kind == "euclidean"
    assert center_type(flat_h3).kind == "degenerate"
    assert center_type(flat_h3).radical == 1
    assert center_type(timelike_h3).kind == "lorentzian"


def test_projection_onto_center(euclidean_h3) -> None:
    expected = sc.zeros((3, 3), True)
    expected[0, 0] = Fraction(1)
    assert np.array_equal(projection_onto_center(euclidean_h3), expected)


def test_heisenberg_predicates(euclidean_h3, timelike_h3) -> None:
    h5 = euclidean_heisenberg([1, 2])
    assert is_heisenberg(euclidean_h3) and is_heisenberg_type(euclidean_h3)
    assert is_heisenberg(h5) and not is_heisenberg_type(h5)
    assert is_heisenberg(timelike_h3) and not is_heisenberg_type(timelike_h3)


@pytest.mark.parametrize("fixture", ["flat_h3", "euclidean_h3", "timelike_h3", "dim5_lorentz"])
def test_adapted_basis_has_normal_form(fixture: str, request: pytest.FixtureRequest) -> None:
    alg = request.getfixturevalue(fixture)
    basis = build_adapted_basis(alg)
    assert adapted_basis_violations(alg, basis) == []
    assert basis.isotropic_pairs == center_type(alg).radical


def test_with_mode_converts_to_float(euclidean_h3) -> None:
    floating = euclidean_h3.with_mode(False)
    assert not floating.exact
    assert floating.js.dtype == np.float64
    np.testing.assert_allclose(bracket(floating, [0, 1, 0], [0, 0, 1]), [1.0, 0.0, 0.0])
