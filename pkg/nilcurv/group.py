"""Grupo simplesmente conexo em coordenadas exponenciais e métrica invariante à esquerda."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Dict, Optional

import numpy as np

from . import scalars as sc
from .algebra import NilMetricAlgebra, ad_matrix, bracket
from .errors import VerificationError
from .families import LorentzFamilyParams, LorentzIndices, check_lorentz, lorentz_ricci_flat

logger = logging.getLogger(__name__)


def bch_multiply(alg: NilMetricAlgebra, x: Any, y: Any) -> np.ndarray:
    """x·y = x + y + ½[x, y] (BCH truncado, exato para 2 passos)."""
    x = alg.vector(x)
    y = alg.vector(y)
    return x + y + sc.frac(1, 2, alg.exact) * bracket(alg, x, y)


def group_inverse(alg: NilMetricAlgebra, x: Any) -> np.ndarray:
    return -alg.vector(x)


def left_translation_differential(alg: NilMetricAlgebra, g: Any) -> np.ndarray:
    """d(L_g) na identidade: I + ½ad_g."""
    return sc.identity(alg.n, alg.exact) + sc.frac(1, 2, alg.exact) * ad_matrix(alg, g)


@dataclass(frozen=True, eq=False)
class MetricAtPoint:
    point: np.ndarray
    gram: np.ndarray

    def coefficient(self, a: int, b: int) -> sc.Scalar:
        return self.gram[a, b]


def metric_at(alg: NilMetricAlgebra, g: Any) -> MetricAtPoint:
    """Métrica invariante nos campos coordenados em g: M⁻ᵀ G M⁻¹, M⁻¹ = I − ½ad_g."""
    g = alg.vector(g)
    # ad_g é nilpotente de ordem 2
    inverse = sc.identity(alg.n, alg.exact) - sc.frac(1, 2, alg.exact) * ad_matrix(alg, g)
    return MetricAtPoint(g, inverse.T @ alg.gram @ inverse)


# Família lorentziana em coordenadas (t, t̄, u, v, w)


@dataclass(frozen=True, eq=False)
class LorentzPoint:
    t: sc.Scalar
    tbar: sc.Scalar
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @classmethod
    def from_vector(cls, ix: LorentzIndices, x: np.ndarray) -> "LorentzPoint":
        return cls(
            t=x[ix.e],
            tbar=x[ix.ebar],
            u=x[ix.f(1) : ix.f(1) + ix.p],
            v=x[ix.g(1) : ix.g(1) + 2 * ix.r],
            w=x[ix.h(1) : ix.h(1) + ix.q],
        )

    def to_vector(self) -> np.ndarray:
        head = np.array([self.t, self.tbar], dtype=self.u.dtype)
        return np.concatenate([head, self.u, self.v, self.w])


def _dot(a: np.ndarray, b: np.ndarray, exact: bool) -> sc.Scalar:
    total = sc.frac(0, 1, exact)
    for x, y in zip(a, b):
        total = total + x * y
    return total


def theorem_main_product(params: LorentzFamilyParams, x: Any, y: Any, data: Optional[Dict[str, Any]] = None) -> np.ndarray:
    """Lei de grupo fechada da família lorentziana, componente a componente."""
    exact = params.mode()
    data = data or check_lorentz(params)
    ix = LorentzIndices(params.p, params.r, params.q)
    one = LorentzPoint.from_vector(ix, sc.as_array(x, exact))
    two = LorentzPoint.from_vector(ix, sc.as_array(y, exact))
    half = sc.frac(1, 2, exact)
    M1, M2 = data["M1"], data["M2"]
    cross_v = one.tbar * two.v - two.tbar * one.v
    cross_w = one.tbar * two.w - two.tbar * one.w

    T = one.t + two.t
    for i in range(params.r):
        lam = data["lambdas"][i]
        T = T + half * lam * (one.v[2 * i] * two.v[2 * i + 1] - two.v[2 * i] * one.v[2 * i + 1])
    T = T + half * _dot(data["A"], cross_v, exact) + half * _dot(data["B"], cross_w, exact)
    U = one.u + two.u
    for l in range(params.p):
        U[l] = U[l] + half * _dot(M1[:, l], cross_v, exact) + half * _dot(M2[:, l], cross_w, exact)
    return LorentzPoint(T, one.tbar + two.tbar, U, one.v + two.v, one.w + two.w).to_vector()


def theorem_main_metric(params: LorentzFamilyParams, point: Any, data: Optional[Dict[str, Any]] = None) -> np.ndarray:
    """Tabela fechada dos coeficientes ⟨∂_a, ∂_b⟩ no ponto (t, t̄, u, v, w)."""
    exact = params.mode()
    data = data or check_lorentz(params)
    ix = LorentzIndices(params.p, params.r, params.q)
    x = LorentzPoint.from_vector(ix, sc.as_array(point, exact))
    M1, M2, lambdas = data["M1"], data["M2"], data["lambdas"]
    half = sc.frac(1, 2, exact)
    quarter = sc.frac(1, 4, exact)
    tb = x.tbar
    gram = sc.zeros((ix.n, ix.n), exact)

    def put(a: int, b: int, value: sc.Scalar) -> None:
        gram[a, b] = value
        gram[b, a] = value

    # c_l = X_l·V + Y_l·W, isto é Σ v_j X^j + Σ w_j Y^j lido em ℝ^p
    c = [_dot(M1[:, l], x.v, exact) + _dot(M2[:, l], x.w, exact) for l in range(params.p)]

    put(ix.e, ix.ebar, sc.to_scalar(1, exact))
    tt = _dot(data["A"], x.v, exact) + _dot(data["B"], x.w, exact)
    put(ix.ebar, ix.ebar, tt + quarter * _dot(c, c, exact))
    for l in range(1, params.p + 1):
        put(ix.f(l), ix.f(l), sc.to_scalar(1, exact))
        put(ix.ebar, ix.f(l), half * c[l - 1])
        for i in range(1, 2 * params.r + 1):
            put(ix.f(l), ix.g(i), -half * tb * M1[i - 1, l - 1])
        for j in range(1, params.q + 1):
            put(ix.f(l), ix.h(j), -half * tb * M2[j - 1, l - 1])
    for i in range(1, 2 * params.r + 1):
        if i % 2 == 0:
            s = lambdas[i // 2 - 1] * x.v[i - 2]
        else:
            s = -lambdas[(i + 1) // 2 - 1] * x.v[i]
        value = -half * (s + data["A"][i - 1] * tb) - quarter * tb * _dot(M1[i - 1], c, exact)
        put(ix.ebar, ix.g(i), value)
    for i in range(1, params.q + 1):
        value = -half * tb * data["B"][i - 1] - quarter * tb * _dot(M2[i - 1], c, exact)
        put(ix.ebar, ix.h(i), value)
    rows = [(ix.g(i), M1[i - 1]) for i in range(1, 2 * params.r + 1)]
    rows += [(ix.h(j), M2[j - 1]) for j in range(1, params.q + 1)]
    for a, (ia, ra) in enumerate(rows):
        for ib, rb in rows[a:]:
            delta = sc.to_scalar(1 if ia == ib else 0, exact)
            put(ia, ib, delta + quarter * tb * tb * _dot(ra, rb, exact))
    return gram


@dataclass(frozen=True)
class TheoremMainReport:
    samples: int
    seed: int
    exact: bool
    max_product_deviation: float
    max_metric_deviation: float
    signature_preserved: bool
    tolerance: float

    @property
    def passed(self) -> bool:
        if self.exact:
            return self.max_product_deviation == 0 and self.max_metric_deviation == 0 and self.signature_preserved
        return (
            self.max_product_deviation <= self.tolerance
            and self.max_metric_deviation <= self.tolerance
            and self.signature_preserved
        )


def _random_point(rng: np.random.Generator, n: int, exact: bool) -> np.ndarray:
    if exact:
        return sc.as_array([int(v) for v in rng.integers(-5, 6, size=n)], True)
    return rng.standard_normal(n)


def _negative_count(gram: np.ndarray) -> int:
    values = np.linalg.eigvalsh(sc.to_float(gram))
    return int(np.sum(values < 0))


def verify_theorem_main(
    params: LorentzFamilyParams,
    sample_count: int = 100,
    seed: int = 0,
    tol: Optional[float] = None,
) -> TheoremMainReport:
    """Compara BCH e métrica empurrada com as fórmulas fechadas em pontos aleatórios."""
    exact = params.mode()
    data = check_lorentz(params, tol)
    alg = lorentz_ricci_flat(params, tol)
    rng = np.random.default_rng(seed)
    expected_negative = _negative_count(alg.gram)
    product_dev = 0.0
    metric_dev = 0.0
    signature_ok = True
    for _ in range(sample_count):
        x = _random_point(rng, alg.n, exact)
        y = _random_point(rng, alg.n, exact)
        product_dev = max(product_dev, sc.deviation(bch_multiply(alg, x, y), theorem_main_product(params, x, y, data)))
        pushed = metric_at(alg, x).gram
        metric_dev = max(metric_dev, sc.deviation(pushed, theorem_main_metric(params, x, data)))
        if _negative_count(pushed) != expected_negative:
            signature_ok = False
    report = TheoremMainReport(
        samples=sample_count,
        seed=seed,
        exact=exact,
        max_product_deviation=product_dev,
        max_metric_deviation=metric_dev,
        signature_preserved=signature_ok,
        tolerance=sc.get_tolerance(tol),
    )
    logger.info(f"lei de grupo: desvio {product_dev}, métrica: desvio {metric_dev} em {sample_count} pontos")
    if not report.passed:
        raise VerificationError("closed-form group law or metric disagrees with the pushforward", report)
    return report
