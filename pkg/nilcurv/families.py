"""Construtores das álgebras explícitas: famílias Heisenberg Ricci-planas,
casos genéricos, família lorentziana, H₃ plana e álgebras do tipo H.

Bases canônicas: pares isotrópicos (e_i, ē_i) primeiro, depois a parte
euclidiana na ordem em que cada família a declara.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Type, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import scalars as sc
from .algebra import NilMetricAlgebra, bracket, make_algebra
from .errors import ConstraintViolation, NilcurvError
from .pseudo_euclidean import (
    SkewRepresentation,
    make_space,
    skew_from_form,
    skew_from_representation,
)

logger = logging.getLogger(__name__)

Number = Union[int, float, str, Fraction]


def _flatten(value: Any) -> List[Any]:
    if isinstance(value, (list, tuple)):
        out: List[Any] = []
        for item in value:
            out.extend(_flatten(item))
        return out
    return [value]


class FamilyParams(BaseModel):
    """Base dos parâmetros de família; ``exact`` ausente é inferido dos números."""
    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    exact: Optional[bool] = Field(None, description="Modo racional exato (inferido se ausente)")

    def numbers(self) -> List[Any]:
        values: List[Any] = []
        for name in type(self).model_fields:
            if name == "exact":
                continue
            values.extend(_flatten(getattr(self, name)))
        return values

    def mode(self) -> bool:
        if self.exact is not None:
            return self.exact
        return sc.infer_exact(self.numbers())

    @model_validator(mode="after")
    def _parse_numbers(self) -> "FamilyParams":
        for value in self.numbers():
            if isinstance(value, str):
                Fraction(value.strip())
        return self


class HeisFamily1Params(FamilyParams):
    q: int = Field(..., ge=2)
    r: int = Field(0, ge=0)
    a: List[Number] = Field(..., description="a_2, ..., a_q")
    lambdas: List[Number] = Field(..., description="λ_1 ≤ ... ≤ λ_{r+1}")


class HeisFamily2Params(FamilyParams):
    q: int = Field(..., ge=2)
    r: int = Field(..., ge=1)
    a: List[Number] = Field(default_factory=list, description="a_{r+2} ≤ ... ≤ a_q")
    lambdas: List[Number] = Field(default_factory=list, description="λ_1, ..., λ_r")


class HeisFamily3Params(FamilyParams):
    q: int = Field(..., ge=2)
    a: List[Number] = Field(..., description="a_3 ≤ ... ≤ a_q")
    beta: Number


class GenericCase1Params(FamilyParams):
    q: int = Field(..., ge=1)
    r: int = Field(0, ge=0)
    A: List[List[Number]]
    B: List[List[Number]]
    X: List[List[Number]] = Field(..., description="X_1, ..., X_q")
    Y: List[List[Number]] = Field(..., description="Y_2, ..., Y_q (Y_1 = 0)")


class GenericCase2Params(FamilyParams):
    q: int = Field(..., ge=1)
    r: int = Field(0, ge=0)
    A: List[List[Number]]
    B: List[List[Number]]
    V: List[List[Number]] = Field(..., description="V_1, ..., V_{2r+1} em coordenadas (x_1, y_1, ...)")


class LorentzFamilyParams(FamilyParams):
    p: int = Field(0, ge=0)
    r: int = Field(0, ge=0)
    q: int = Field(0, ge=0)
    M1: List[List[Number]] = Field(default_factory=list, description="2r × p, entradas x_i^l")
    M2: List[List[Number]] = Field(default_factory=list, description="q × p, entradas y_i^l")
    A: List[Number] = Field(default_factory=list)
    B: List[Number] = Field(default_factory=list)
    lambdas: List[Number] = Field(default_factory=list)


class HTypeParams(FamilyParams):
    structures: List[List[List[Number]]] = Field(..., min_length=1)


class EuclideanHeisenbergParams(FamilyParams):
    lambdas: List[Number] = Field(..., min_length=1)


class FlatH3Params(FamilyParams):
    pass


# Auxiliares


def _require(condition: bool, constraint: str, detail: str = "") -> None:
    if not condition:
        raise ConstraintViolation(constraint, detail)


def _equal(a: sc.Scalar, b: sc.Scalar, exact: bool, tol: Optional[float]) -> bool:
    if exact:
        return a == b
    return abs(float(a) - float(b)) <= sc.get_tolerance(tol) * max(1.0, abs(float(a)), abs(float(b)))


def _check_length(values: List[Any], expected: int, name: str) -> None:
    _require(len(values) == expected, f"{name} must have {expected} entries", f"got {len(values)}")


def _check_positive_sorted(values: np.ndarray, name: str) -> None:
    _require(all(v > 0 for v in values), f"{name} must be positive")
    _require(all(values[i] <= values[i + 1] for i in range(len(values) - 1)), f"{name} must be sorted")


def _sum_squares(values: np.ndarray, exact: bool) -> sc.Scalar:
    total = Fraction(0) if exact else 0.0
    for v in np.asarray(values).flat:
        total = total + v * v
    return total


def _matrix(rows: Any, shape: Tuple[int, int], exact: bool, name: str) -> np.ndarray:
    if shape[0] == 0 or shape[1] == 0:
        _require(not _flatten(rows or []), f"{name} must be empty for shape {shape[0]}x{shape[1]}")
        return sc.zeros(shape, exact)
    arr = sc.as_array(rows, exact)
    _require(arr.shape == shape, f"{name} must be {shape[0]}x{shape[1]}", f"got {arr.shape}")
    return arr


class _Builder:
    """Monta colunas J b_k = Σ coef · b_x sobre uma base nomeada."""

    def __init__(self, n: int, exact: bool) -> None:
        self.exact = exact
        self.mat = sc.zeros((n, n), exact)

    def image(self, column: int, *terms: Tuple[int, sc.Scalar]) -> None:
        for row, coefficient in terms:
            self.mat[row, column] = self.mat[row, column] + sc.to_scalar(coefficient, self.exact)


def _heisenberg_algebra(q: int, n: int, mat: np.ndarray, exact: bool, name: str, tol: Optional[float]) -> NilMetricAlgebra:
    space = make_space(q, n, exact)
    return make_algebra(space, [sc.unit_vector(n, 0, exact)], [mat], name=name, tol=tol)


# Família 1: ℝ^{2q} × ℝ^{2q−1} × ℝ^{2(r+1)}


def _family1_indices(q: int, r: int) -> Dict[str, Callable[[int], int]]:
    return {
        "e": lambda i: 2 * (i - 1),
        "ebar": lambda i: 2 * (i - 1) + 1,
        "f": lambda _: 2 * q,
        "fi": lambda i: 2 * q + 2 * i - 1,
        "fbar": lambda i: 2 * q + 2 * i,
        "g": lambda k: 4 * q - 1 + 2 * (k - 1),
        "gbar": lambda k: 4 * q + 2 * (k - 1),
    }


def check_family1(params: HeisFamily1Params, tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    exact = params.mode()
    _check_length(params.a, params.q - 1, "a")
    _check_length(params.lambdas, params.r + 1, "λ")
    a = sc.as_array(params.a, exact)
    lambdas = sc.as_array(params.lambdas, exact)
    _check_positive_sorted(lambdas, "λ")
    lhs, rhs = _sum_squares(a, exact), _sum_squares(lambdas, exact)
    _require(_equal(lhs, rhs, exact, tol), "Σa² ≠ Σλ²", f"{lhs} != {rhs}")
    return a, lambdas


def heis_family1(params: HeisFamily1Params, tol: Optional[float] = None) -> NilMetricAlgebra:
    a, lambdas = check_family1(params, tol)
    exact = params.mode()
    q, r = params.q, params.r
    n = 2 * (2 * q + r) + 1
    ix = _family1_indices(q, r)
    J = _Builder(n, exact)
    J.image(ix["ebar"](1), (ix["f"](0), -1))
    for i in range(2, q + 1):
        ai = a[i - 2]
        J.image(ix["e"](i), (ix["e"](i), ai), (ix["fbar"](i - 1), -1))
        J.image(ix["ebar"](i), (ix["ebar"](i), -ai), (ix["fi"](i - 1), -1))
    J.image(ix["f"](0), (ix["e"](1), 1))
    for i in range(1, q):
        J.image(ix["fi"](i), (ix["e"](i + 1), 1))
        J.image(ix["fbar"](i), (ix["ebar"](i + 1), 1))
    for k in range(1, r + 2):
        lam = lambdas[k - 1]
        J.image(ix["g"](k), (ix["gbar"](k), lam))
        J.image(ix["gbar"](k), (ix["g"](k), -lam))
    logger.debug(f"família 1: q={q}, r={r}, dimensão {n}")
    return _heisenberg_algebra(q, n, J.mat, exact, f"heis1(q={q},r={r})", tol)


def family1_case1_data(params: HeisFamily1Params, tol: Optional[float] = None) -> GenericCase1Params:
    """Os mesmos parâmetros reescritos como dados (A, B, X, Y) do caso 1."""
    a, lambdas = check_family1(params, tol)
    exact = params.mode()
    q, r = params.q, params.r
    m = 2 * q + 2 * r + 1
    A = sc.zeros((2 * q, 2 * q), exact)
    for i in range(2, q + 1):
        A[2 * (i - 1), 2 * (i - 1)] = a[i - 2]
        A[2 * (i - 1) + 1, 2 * (i - 1) + 1] = -a[i - 2]
    B = sc.zeros((m, m), exact)
    for k in range(1, r + 2):
        g = 2 * q - 1 + 2 * (k - 1)
        B[g + 1, g] = lambdas[k - 1]
        B[g, g + 1] = -lambdas[k - 1]
    X = [-sc.unit_vector(m, 0, exact)] + [-sc.unit_vector(m, 2 * i - 3, exact) for i in range(2, q + 1)]
    Y = [-sc.unit_vector(m, 2 * i - 2, exact) for i in range(2, q + 1)]
    return GenericCase1Params(
        q=q,
        r=r,
        A=A.tolist(),
        B=B.tolist(),
        X=[x.tolist() for x in X],
        Y=[y.tolist() for y in Y],
        exact=exact,
    )


# Família 2: ℝ^{2q} × ℝ^{2r+1}


def check_family2(params: HeisFamily2Params, tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    exact = params.mode()
    q, r = params.q, params.r
    _require(1 <= r <= q - 1, "1 ≤ r ≤ q−1", f"q={q}, r={r}")
    _check_length(params.a, q - r - 1, "a")
    _check_length(params.lambdas, r, "λ")
    a = sc.as_array(params.a, exact)
    lambdas = sc.as_array(params.lambdas, exact)
    _check_positive_sorted(a, "a")
    if r == q - 1:
        _require(sc.is_zero(lambdas, tol), "λ = 0 when r = q−1")
    else:
        lhs, rhs = _sum_squares(a, exact), _sum_squares(lambdas, exact)
        _require(_equal(lhs, rhs, exact, tol), "Σa² ≠ Σλ²", f"{lhs} != {rhs}")
    return a, lambdas


def heis_family2(params: HeisFamily2Params, tol: Optional[float] = None) -> NilMetricAlgebra:
    a, lambdas = check_family2(params, tol)
    exact = params.mode()
    q, r = params.q, params.r
    n = 2 * (q + r) + 1
    e = lambda i: 2 * (i - 1)  # noqa: E731
    ebar = lambda i: 2 * (i - 1) + 1  # noqa: E731
    f = 2 * q
    fi = lambda i: 2 * q + 2 * i - 1  # noqa: E731
    fbar = lambda i: 2 * q + 2 * i  # noqa: E731
    J = _Builder(n, exact)
    J.image(ebar(1), (f, -1))
    for i in range(2, r + 2):
        J.image(e(i), (fbar(i - 1), -1))
        J.image(ebar(i), (fi(i - 1), -1))
    for j in range(r + 2, q + 1):
        aj = a[j - r - 2]
        J.image(e(j), (e(j), aj))
        J.image(ebar(j), (ebar(j), -aj))
    J.image(f, (e(1), 1))
    for i in range(1, r + 1):
        J.image(fi(i), (e(i + 1), 1), (fbar(i), lambdas[i - 1]))
        J.image(fbar(i), (ebar(i + 1), 1), (fi(i), -lambdas[i - 1]))
    logger.debug(f"família 2: q={q}, r={r}, dimensão {n}")
    return _heisenberg_algebra(q, n, J.mat, exact, f"heis2(q={q},r={r})", tol)


def family2_case2_data(params: HeisFamily2Params, tol: Optional[float] = None) -> GenericCase2Params:
    a, lambdas = check_family2(params, tol)
    exact = params.mode()
    q, r = params.q, params.r
    m = 2 * r + 1
    A = sc.zeros((2 * q, 2 * q), exact)
    for j in range(r + 2, q + 1):
        A[2 * (j - 1), 2 * (j - 1)] = a[j - r - 2]
        A[2 * (j - 1) + 1, 2 * (j - 1) + 1] = -a[j - r - 2]
    B = sc.zeros((m, m), exact)
    for i in range(1, r + 1):
        B[2 * i, 2 * i - 1] = lambdas[i - 1]
        B[2 * i - 1, 2 * i] = -lambdas[i - 1]
    V = [-sc.unit_vector(2 * q, 0, exact)]
    for i in range(1, r + 1):
        V.append(-sc.unit_vector(2 * q, 2 * i, exact))
        V.append(-sc.unit_vector(2 * q, 2 * i + 1, exact))
    return GenericCase2Params(
        q=q, r=r, A=A.tolist(), B=B.tolist(), V=[v.tolist() for v in V], exact=exact
    )


# Família 3: ℝ^{2q} × ℝ


def check_family3(params: HeisFamily3Params, tol: Optional[float] = None) -> Tuple[np.ndarray, sc.Scalar]:
    exact = params.mode()
    _require(params.q >= 3, "q ≥ 3", "the construction uses e_3 and ē_3")
    _check_length(params.a, params.q - 2, "a")
    a = sc.as_array(params.a, exact)
    _check_positive_sorted(a, "a")
    beta = sc.to_scalar(params.beta, exact)
    lhs = _sum_squares(a, exact)
    _require(_equal(lhs, 2 * beta, exact, tol), "Σa² ≠ 2β", f"{lhs} != {2 * beta}")
    return a, beta


def heis_family3(params: HeisFamily3Params, tol: Optional[float] = None) -> NilMetricAlgebra:
    a, beta = check_family3(params, tol)
    exact = params.mode()
    q = params.q
    n = 2 * q + 1
    e = lambda i: 2 * (i - 1)  # noqa: E731
    ebar = lambda i: 2 * (i - 1) + 1  # noqa: E731
    f = 2 * q
    J = _Builder(n, exact)
    J.image(ebar(1), (e(2), 1))
    J.image(f, (ebar(2), 1))
    J.image(e(2), (ebar(3), 1), (f, -1))
    J.image(ebar(2), (e(1), -1), (e(3), beta))
    J.image(e(3), (ebar(2), -1), (e(3), a[0]))
    J.image(ebar(3), (e(2), -beta), (ebar(3), -a[0]))
    for j in range(4, q + 1):
        J.image(e(j), (e(j), a[j - 3]))
        J.image(ebar(j), (ebar(j), -a[j - 3]))
    return _heisenberg_algebra(q, n, J.mat, exact, f"heis3(q={q})", tol)


# Casos genéricos


def heis_generic_case1(params: GenericCase1Params, tol: Optional[float] = None) -> NilMetricAlgebra:
    """Heisenberg com ker J = span(e_1) e dim 2(2q+r)+1 a partir de (A, B, X, Y)."""
    exact = params.mode()
    q, r = params.q, params.r
    m = 2 * q + 2 * r + 1
    A = _matrix(params.A, (2 * q, 2 * q), exact, "A")
    B = _matrix(params.B, (m, m), exact, "B")
    X = _matrix(params.X, (q, m), exact, "X")
    Y_tail = _matrix(params.Y, (q - 1, m), exact, "Y")
    Y = np.vstack([sc.zeros((1, m), exact), Y_tail])
    family = np.vstack([X[:1], np.stack([row for i in range(1, q) for row in (X[i], Y[i])])]) if q > 1 else X[:1]
    _require(sc.rank(family, tol) == 2 * q - 1, "X/Y family is linearly dependent")
    _require(sc.rank(B, tol) == 2 * (r + 1), "rank B ≠ 2(r+1)", f"rank {sc.rank(B, tol)}")
    _require(
        sc.rank(np.hstack([family.T, B]), tol) == m,
        "span{X, Y} ⊕ Im B ≠ R^m",
    )
    _require(sc.is_zero(A[:, 0], tol), "A e_1 ≠ 0")
    lhs = sc.trace(A @ A) + sc.trace(B @ B)
    rhs = 4 * sum((X[i] @ Y[i] for i in range(q)), Fraction(0) if exact else 0.0)
    _require(_equal(lhs, rhs, exact, tol), "tr(A²) + tr(B²) ≠ 4ΣX_i·Y_i", f"{lhs} != {rhs}")
    space = make_space(q, 2 * q + m, exact)
    J = skew_from_representation(SkewRepresentation(A, B, X, Y), space, tol)
    return make_algebra(space, [sc.unit_vector(space.n, 0, exact)], [J.mat], name=f"heis-case1(q={q},r={r})", tol=tol)


def heis_generic_case2(params: GenericCase2Params, tol: Optional[float] = None) -> NilMetricAlgebra:
    """Heisenberg de dim 2(q+r)+1 a partir de (A, B, V_1, ..., V_{2r+1})."""
    exact = params.mode()
    q, r = params.q, params.r
    m = 2 * r + 1
    A = _matrix(params.A, (2 * q, 2 * q), exact, "A")
    B = _matrix(params.B, (m, m), exact, "B")
    V = _matrix(params.V, (m, 2 * q), exact, "V")
    _require(sc.is_zero(V[:, 1], tol), "V_l ∉ F (ē_1 component must vanish)")
    _require(sc.rank(V, tol) == m, "V family is linearly dependent")
    _require(sc.is_zero(A[:, 0], tol) and sc.is_zero(A[1, :], tol), "Im A ⊄ F or A e_1 ≠ 0")
    _require(sc.rank(A, tol) == 2 * (q - r - 1), "rank A ≠ 2(q−r−1)", f"rank {sc.rank(A, tol)}")
    _require(sc.rank(np.hstack([V.T, A]), tol) == 2 * q - 1, "span{V} ⊕ Im A ≠ F")
    lhs = sc.trace(A @ A) + sc.trace(B @ B)
    rhs = 2 * sum((_split_square(V[l]) for l in range(m)), Fraction(0) if exact else 0.0)
    _require(_equal(lhs, rhs, exact, tol), "tr(A²) + tr(B²) ≠ 2Σ⟨V_i,V_i⟩_q", f"{lhs} != {rhs}")
    X = np.ascontiguousarray(V[:, 0::2].T)
    Y = np.ascontiguousarray(V[:, 1::2].T)
    space = make_space(q, 2 * q + m, exact)
    J = skew_from_representation(SkewRepresentation(A, B, X, Y), space, tol)
    return make_algebra(space, [sc.unit_vector(space.n, 0, exact)], [J.mat], name=f"heis-case2(q={q},r={r})", tol=tol)


def _split_square(v: np.ndarray) -> sc.Scalar:
    """⟨v, v⟩_q = 2Σ x_i y_i."""
    return 2 * sum((v[2 * i] * v[2 * i + 1] for i in range(len(v) // 2)), v[0] * 0)


# Lorentz


@dataclass(frozen=True)
class LorentzIndices:
    p: int
    r: int
    q: int

    e: int = 0
    ebar: int = 1

    @property
    def n(self) -> int:
        return 2 + self.p + 2 * self.r + self.q

    def f(self, l: int) -> int:
        return 2 + l - 1

    def g(self, i: int) -> int:
        return 2 + self.p + i - 1

    def h(self, i: int) -> int:
        return 2 + self.p + 2 * self.r + i - 1


def check_lorentz(params: LorentzFamilyParams, tol: Optional[float] = None) -> Dict[str, Any]:
    exact = params.mode()
    p, r, q = params.p, params.r, params.q
    M1 = _matrix(params.M1, (2 * r, p), exact, "M1")
    M2 = _matrix(params.M2, (q, p), exact, "M2")
    _check_length(params.A, 2 * r, "A")
    _check_length(params.B, q, "B")
    _check_length(params.lambdas, r, "λ")
    A = sc.as_array(params.A, exact) if r else sc.zeros(0, exact)
    B = sc.as_array(params.B, exact) if q else sc.zeros(0, exact)
    lambdas = sc.as_array(params.lambdas, exact) if r else sc.zeros(0, exact)
    _check_positive_sorted(lambdas, "λ")
    if q:
        _require(sc.rank(np.hstack([B.reshape(q, 1), M2]), tol) == q, "span{B, Y_1..Y_p} ≠ R^q")
    lhs = _sum_squares(M1, exact) + _sum_squares(M2, exact)
    rhs = _sum_squares(lambdas, exact)
    _require(_equal(lhs, rhs, exact, tol), "ΣM1² + ΣM2² ≠ Σλ²", f"{lhs} != {rhs}")
    return {"M1": M1, "M2": M2, "A": A, "B": B, "lambdas": lambdas}


def lorentz_forms(params: LorentzFamilyParams, data: Dict[str, Any]) -> List[np.ndarray]:
    """Formas de colchete Ω_K, Ω_1, ..., Ω_p da tabela lorentziana."""
    exact = params.mode()
    ix = LorentzIndices(params.p, params.r, params.q)
    n = ix.n

    def put(omega: np.ndarray, a: int, b: int, value: sc.Scalar) -> None:
        omega[a, b] = omega[a, b] + value
        omega[b, a] = omega[b, a] - value

    omega_k = sc.zeros((n, n), exact)
    for i in range(1, 2 * params.r + 1):
        put(omega_k, ix.ebar, ix.g(i), data["A"][i - 1])
    for i in range(1, params.q + 1):
        put(omega_k, ix.ebar, ix.h(i), data["B"][i - 1])
    for i in range(1, params.r + 1):
        put(omega_k, ix.g(2 * i - 1), ix.g(2 * i), data["lambdas"][i - 1])
    forms = [omega_k]
    for l in range(params.p):
        omega = sc.zeros((n, n), exact)
        for i in range(1, 2 * params.r + 1):
            put(omega, ix.ebar, ix.g(i), data["M1"][i - 1, l])
        for i in range(1, params.q + 1):
            put(omega, ix.ebar, ix.h(i), data["M2"][i - 1, l])
        forms.append(omega)
    return forms


def lorentz_ricci_flat(params: LorentzFamilyParams, tol: Optional[float] = None, check: bool = True) -> NilMetricAlgebra:
    """Família lorentziana com centro degenerado span(e, f_1, ..., f_p).

    ``check=False`` pula as restrições de parâmetros (ainda valida a álgebra),
    para estudar instâncias perturbadas.
    """
    exact = params.mode()
    if check:
        data = check_lorentz(params, tol)
    else:
        p, r, q = params.p, params.r, params.q
        data = {
            "M1": _matrix(params.M1, (2 * r, p), exact, "M1"),
            "M2": _matrix(params.M2, (q, p), exact, "M2"),
            "A": sc.as_array(params.A, exact) if r else sc.zeros(0, exact),
            "B": sc.as_array(params.B, exact) if q else sc.zeros(0, exact),
            "lambdas": sc.as_array(params.lambdas, exact) if r else sc.zeros(0, exact),
        }
    ix = LorentzIndices(params.p, params.r, params.q)
    space = make_space(1, ix.n, exact)
    js = [skew_from_form(omega, space) for omega in lorentz_forms(params, data)]
    center = [sc.unit_vector(ix.n, ix.e, exact)] + [sc.unit_vector(ix.n, ix.f(l), exact) for l in range(1, params.p + 1)]
    name = f"lorentz(p={params.p},r={params.r},q={params.q})"
    return make_algebra(space, center, js, name=name, tol=tol)


def flat_h3_lorentz(exact: bool = True) -> NilMetricAlgebra:
    """H₃ na base (e, ē, w): [ē, w] = e, ⟨e, ē⟩ = ⟨w, w⟩ = 1."""
    space = make_space(1, 3, exact)
    K = [[0, 0, -1], [0, 0, 0], [0, 1, 0]]
    return make_algebra(space, [[1, 0, 0]], [K], name="h3-flat")


# Euclidianas: tipo H e Heisenberg


def rotation_block(lam: Any, exact: bool) -> np.ndarray:
    lam = sc.to_scalar(lam, exact)
    return sc.as_array([[0, -lam], [lam, 0]], exact)


def block_diagonal(blocks: List[np.ndarray], exact: bool) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = sc.zeros((size, size), exact)
    offset = 0
    for block in blocks:
        k = block.shape[0]
        out[offset : offset + k, offset : offset + k] = block
        offset += k
    return out


def h_type(structures: List[Any], exact: Optional[bool] = None, tol: Optional[float] = None) -> NilMetricAlgebra:
    """Álgebra euclidiana com centro primeiro e J_i = 0 ⊕ L_i sobre 𝔷^⊥."""
    if exact is None:
        exact = sc.infer_exact(_flatten([np.asarray(s, dtype=object).tolist() for s in structures]))
    Ls = [sc.as_array(s, exact) for s in structures]
    p = len(Ls)
    m = Ls[0].shape[0]
    for i, L in enumerate(Ls):
        _require(L.shape == (m, m), f"J_{i + 1} must be {m}x{m}")
        _require(sc.allclose(L.T, -L, tol), f"J_{i + 1} is not skew-symmetric")
        _require(sc.allclose(L @ L, -sc.identity(m, exact), tol), f"J_{i + 1}² ≠ −I on the complement")
        for j in range(i + 1, p):
            _require(
                sc.allclose(L @ Ls[j], -(Ls[j] @ L), tol),
                f"J_{i + 1} J_{j + 1} ≠ −J_{j + 1} J_{i + 1}",
            )
    n = p + m
    space = make_space(0, n, exact)
    js = []
    for L in Ls:
        J = sc.zeros((n, n), exact)
        J[p:, p:] = L
        js.append(J)
    center = [sc.unit_vector(n, i, exact) for i in range(p)]
    return make_algebra(space, center, js, name=f"htype(p={p},m={m})", tol=tol)


def quaternion_pair(exact: bool = True) -> List[np.ndarray]:
    """Par anticomutante de estruturas complexas em ℝ⁴ (i e j dos quatérnios)."""
    i = sc.zeros((4, 4), exact)
    j = sc.zeros((4, 4), exact)
    for column, (row, sign) in enumerate([(1, 1), (0, -1), (3, 1), (2, -1)]):
        i[row, column] = sc.to_scalar(sign, exact)
    for column, (row, sign) in enumerate([(2, 1), (3, -1), (0, -1), (1, 1)]):
        j[row, column] = sc.to_scalar(sign, exact)
    return [i, j]


def euclidean_heisenberg(lambdas: List[Any], exact: Optional[bool] = None, tol: Optional[float] = None) -> NilMetricAlgebra:
    """H_{2k+1} euclidiana com J = 0 ⊕ rot(λ_1) ⊕ ... ⊕ rot(λ_k)."""
    if exact is None:
        exact = sc.infer_exact(lambdas)
    k = len(lambdas)
    n = 2 * k + 1
    J = block_diagonal([sc.zeros((1, 1), exact)] + [rotation_block(lam, exact) for lam in lambdas], exact)
    return make_algebra(make_space(0, n, exact), [sc.unit_vector(n, 0, exact)], [J], name=f"euclid-heis(k={k})", tol=tol)


# Heisenberg lorentziana aleatória


def random_lorentz_heisenberg(k: int, seed: int, tol: Optional[float] = None) -> NilMetricAlgebra:
    """H_{2k+1} com colchete canônico transportado por uma mudança de base aleatória.

    O espaço é ℝ^{(1, 2k)} canônico; a álgebra é isomorfa a H_{2k+1} via Q.
    """
    if k < 1:
        raise NilcurvError("k must be at least 1")
    n = 2 * k + 1
    rng = np.random.default_rng(seed)
    omega_h = np.zeros((n, n))
    for i in range(k):
        omega_h[1 + 2 * i, 2 + 2 * i] = 1.0
        omega_h[2 + 2 * i, 1 + 2 * i] = -1.0
    draws = 0
    while True:
        draws += 1
        Q = rng.standard_normal((n, n))
        if sc.rank(Q, tol) == n:
            break
        logger.debug(f"matriz de passagem singular na tentativa {draws}; nova amostra")
    space = make_space(1, n, exact=False)
    omega = Q.T @ omega_h @ Q
    center = np.linalg.solve(Q, np.eye(n)[:, 0])
    J = skew_from_form(omega, space)
    return make_algebra(space, [center], [J], name=f"random-lorentz-heis(k={k},seed={seed})", tol=tol)


# Bases de Heisenberg


@dataclass(frozen=True, eq=False)
class HeisenbergFrame:
    """E e pares (X_k, X̄_k) com [X_k, X̄_k] = c_k E e demais colchetes nulos."""
    E: np.ndarray
    pairs: List[Tuple[np.ndarray, np.ndarray]]
    scales: List[sc.Scalar]

    def matrix(self) -> np.ndarray:
        columns = [self.E] + [v for pair in self.pairs for v in pair]
        return np.stack(columns, axis=1)

    def normalized(self) -> "HeisenbergFrame":
        """Versão float com c_k = 1 (divide cada par por √c_k)."""
        pairs = []
        for (x, xbar), c in zip(self.pairs, self.scales):
            c = float(c)
            if c <= 0:
                raise NilcurvError("cannot normalize a non-positive scale")
            root = np.sqrt(c)
            pairs.append((sc.to_float(x) / root, sc.to_float(xbar) / root))
        return HeisenbergFrame(sc.to_float(self.E), pairs, [1.0] * len(pairs))


def _combo(n: int, exact: bool, *terms: Tuple[int, sc.Scalar]) -> np.ndarray:
    v = sc.zeros(n, exact)
    for index, coefficient in terms:
        v[index] = v[index] + sc.to_scalar(coefficient, exact)
    return v


def heisenberg_frame(kind: str, params: FamilyParams, tol: Optional[float] = None) -> HeisenbergFrame:
    """Reetiquetagem das famílias 1, 2, 3 para a tabela canônica de Heisenberg (não normalizada)."""
    exact = params.mode()
    one = sc.to_scalar(1, exact)
    if kind == "heis1":
        a, lambdas = check_family1(params, tol)
        q, r = params.q, params.r
        n = 2 * (2 * q + r) + 1
        ix = _family1_indices(q, r)
        vec = lambda *terms: _combo(n, exact, *terms)  # noqa: E731
        pairs = [(vec((ix["f"](0), 1)), vec((ix["ebar"](1), 1)))]
        scales: List[sc.Scalar] = [one]
        for i in range(2, q + 1):
            pairs.append((vec((ix["fi"](i - 1), 1)), vec((ix["ebar"](i), 1), (ix["fbar"](i - 1), a[i - 2]))))
            scales.append(one)
        for i in range(1, q):
            pairs.append((vec((ix["fbar"](i), 1)), vec((ix["e"](i + 1), 1))))
            scales.append(one)
        for k in range(1, r + 2):
            pairs.append((vec((ix["g"](k), 1)), vec((ix["gbar"](k), 1))))
            scales.append(lambdas[k - 1])
        return HeisenbergFrame(vec((0, 1)), pairs, scales)
    if kind == "heis2":
        a, lambdas = check_family2(params, tol)
        q, r = params.q, params.r
        n = 2 * (q + r) + 1
        vec = lambda *terms: _combo(n, exact, *terms)  # noqa: E731
        e = lambda i: 2 * (i - 1)  # noqa: E731
        f = 2 * q
        pairs = [(vec((f, 1)), vec((e(1) + 1, 1)))]
        scales = [one]
        for i in range(2, r + 2):
            pairs.append((vec((e(i), lambdas[i - 2]), (2 * q + 2 * (i - 1) - 1, 1)), vec((e(i) + 1, 1))))
            scales.append(one)
        for i in range(1, r + 1):
            pairs.append((vec((2 * q + 2 * i, 1)), vec((e(i + 1), 1))))
            scales.append(one)
        for j in range(r + 2, q + 1):
            pairs.append((vec((e(j), 1)), vec((e(j) + 1, 1))))
            scales.append(a[j - r - 2])
        return HeisenbergFrame(vec((0, 1)), pairs, scales)
    if kind == "heis3":
        a, beta = check_family3(params, tol)
        q = params.q
        n = 2 * q + 1
        vec = lambda *terms: _combo(n, exact, *terms)  # noqa: E731
        f = 2 * q
        pairs = [
            (vec((f, 1)), vec((2, 1))),
            (vec((1, 1)), vec((3, 1))),
            (vec((f, 1), (4, 1)), vec((1, beta), (5, 1))),
        ]
        scales = [one, one, a[0]]
        for j in range(4, q + 1):
            pairs.append((vec((2 * (j - 1), 1)), vec((2 * (j - 1) + 1, 1))))
            scales.append(a[j - 3])
        return HeisenbergFrame(vec((0, 1)), pairs, scales)
    raise NilcurvError(f"no Heisenberg frame for family {kind!r}")


def frame_violations(alg: NilMetricAlgebra, frame: HeisenbergFrame, tol: Optional[float] = None) -> List[str]:
    """Confere todos os colchetes entre vetores da base de Heisenberg."""
    problems = []
    basis = frame.matrix()
    if sc.rank(basis, tol) != alg.n:
        problems.append("frame is not a basis")
    vectors = [basis[:, k] for k in range(basis.shape[1])]
    expected: Dict[Tuple[int, int], sc.Scalar] = {}
    for k, c in enumerate(frame.scales):
        expected[(1 + 2 * k, 2 + 2 * k)] = c
    for s in range(len(vectors)):
        for t in range(s + 1, len(vectors)):
            target = frame.E * expected.get((s, t), 0)
            if not sc.allclose(bracket(alg, vectors[s], vectors[t]), target, tol):
                problems.append(f"bracket of frame vectors {s} and {t} is off")
    return problems


# Registro usado pela CLI


@dataclass(frozen=True)
class FamilyEntry:
    params: Type[FamilyParams]
    build: Callable[[Any, Optional[float]], NilMetricAlgebra]
    description: str


FAMILIES: Dict[str, FamilyEntry] = {
    "heis1": FamilyEntry(HeisFamily1Params, heis_family1, "Heisenberg Ricci-plana, família 1"),
    "heis2": FamilyEntry(HeisFamily2Params, heis_family2, "Heisenberg Ricci-plana, família 2"),
    "heis3": FamilyEntry(HeisFamily3Params, heis_family3, "Heisenberg Ricci-plana, família 3"),
    "heis-case1": FamilyEntry(GenericCase1Params, heis_generic_case1, "caso genérico 1 (A, B, X, Y)"),
    "heis-case2": FamilyEntry(GenericCase2Params, heis_generic_case2, "caso genérico 2 (A, B, V)"),
    "lorentz": FamilyEntry(LorentzFamilyParams, lorentz_ricci_flat, "família lorentziana de centro degenerado"),
    "h3-flat": FamilyEntry(FlatH3Params, lambda params, tol: flat_h3_lorentz(params.mode()), "H₃ lorentziana plana"),
    "htype": FamilyEntry(
        HTypeParams, lambda params, tol: h_type(params.structures, params.mode(), tol), "álgebra euclidiana do tipo H"
    ),
    "euclid-heis": FamilyEntry(
        EuclideanHeisenbergParams,
        lambda params, tol: euclidean_heisenberg(params.lambdas, params.mode(), tol),
        "Heisenberg euclidiana",
    ),
}


def build_family(name: str, raw: Dict[str, Any], tol: Optional[float] = None) -> NilMetricAlgebra:
    try:
        entry = FAMILIES[name]
    except KeyError:
        raise NilcurvError(f"unknown family {name!r}; expected one of {sorted(FAMILIES)}") from None
    params = entry.params.model_validate(raw)
    return entry.build(params, tol)
