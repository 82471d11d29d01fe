"""Produto de Levi-Civita, curvatura, Ricci (força bruta e rápido), 𝒥± e escalar.

Convenção de sinal: R(u, v)w = 𝒟_[u,v]w − 𝒟_u𝒟_v w + 𝒟_v𝒟_u w, o oposto da
convenção usual de livros-texto. Tensores são indexados na base distinguida:
Γ[a, b, x] = (𝒟_{b_a} b_b)_x e R[a, b, c, x] = (R(b_a, b_b) b_c)_x.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import eigh

from . import scalars as sc
from .algebra import (
    NilMetricAlgebra,
    build_adapted_basis,
    bracket_forms,
    derived_ideal,
    is_heisenberg,
    is_heisenberg_type,
    structure_constants,
)
from .errors import ConsistencyError, DimensionMismatchError, NilcurvError

logger = logging.getLogger(__name__)


def _half(alg: NilMetricAlgebra):
    return sc.frac(1, 2, alg.exact)


def _quarter(alg: NilMetricAlgebra):
    return sc.frac(1, 4, alg.exact)


def _check(what: str, a: np.ndarray, b: np.ndarray, tol: Optional[float]) -> None:
    if not sc.allclose(a, b, tol):
        raise ConsistencyError(what, sc.deviation(a, b))


# Levi-Civita


@dataclass(frozen=True, eq=False)
class LeviCivitaTable:
    gamma: np.ndarray  # n × n × n

    def product(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """𝒟_u v."""
        return np.tensordot(np.tensordot(u, self.gamma, axes=([0], [0])), v, axes=([0], [0]))


def levi_civita_koszul(alg: NilMetricAlgebra) -> np.ndarray:
    """2⟨𝒟_u v, w⟩ = ⟨[u,v],w⟩ + ⟨[w,u],v⟩ + ⟨[w,v],u⟩, resolvido com G⁻¹."""
    C = structure_constants(alg)
    L = np.tensordot(C, alg.gram, axes=([2], [0]))  # L[a,b,c] = ⟨[b_a,b_b], b_c⟩
    rhs = L + L.transpose(1, 2, 0) + L.transpose(2, 1, 0)
    return _half(alg) * np.tensordot(rhs, alg.space.gram_inverse, axes=([2], [1]))


def levi_civita_closed_form(alg: NilMetricAlgebra) -> np.ndarray:
    """2𝒟_u v = Σ_i (⟨J_i u, v⟩e_i − ⟨e_i, v⟩J_i u − ⟨e_i, u⟩J_i v)."""
    forms = bracket_forms(alg)
    alpha = alg.coframe
    images = alg.js.transpose(0, 2, 1)  # images[i, a, :] = J_i b_a
    bracket_term = np.tensordot(forms, alg.center, axes=([0], [1]))
    left_term = np.tensordot(alpha, images, axes=([0], [0]))  # ⟨e_i, u⟩ J_i v
    right_term = left_term.transpose(1, 0, 2)  # ⟨e_i, v⟩ J_i u
    return _half(alg) * (bracket_term - right_term - left_term)


def levi_civita(alg: NilMetricAlgebra, tol: Optional[float] = None) -> LeviCivitaTable:
    koszul = levi_civita_koszul(alg)
    closed = levi_civita_closed_form(alg)
    _check("Levi-Civita (Koszul vs closed form)", koszul, closed, tol)
    return LeviCivitaTable(closed)


def levi_civita_violations(alg: NilMetricAlgebra, table: LeviCivitaTable, tol: Optional[float] = None) -> List[str]:
    """Compatibilidade métrica e ausência de torção em todas as triplas da base."""
    gamma = table.gamma
    violations = []
    lowered = np.tensordot(gamma, alg.gram, axes=([2], [0]))
    if not sc.is_zero(lowered + lowered.transpose(0, 2, 1), tol):
        violations.append("Levi-Civita product is not metric")
    if not sc.is_zero(gamma - gamma.transpose(1, 0, 2) - structure_constants(alg), tol):
        violations.append("Levi-Civita product has torsion")
    return violations


# Curvatura


def curvature_definitional(alg: NilMetricAlgebra, table: LeviCivitaTable) -> np.ndarray:
    gamma = table.gamma
    C = structure_constants(alg)
    along_bracket = np.tensordot(C, gamma, axes=([2], [0]))
    # Σ_k Γ[b,c,k] Γ[a,k,x] indexado como [b,c,a,x]
    composed = np.tensordot(gamma, gamma, axes=([2], [1])).transpose(2, 0, 1, 3)
    return along_bracket - composed + composed.transpose(1, 0, 2, 3)


def curvature_closed_form(alg: NilMetricAlgebra) -> np.ndarray:
    """Fórmula fechada para 2-nilpotentes, termo a termo."""
    quarter = _quarter(alg)
    half = _half(alg)
    G = alg.gram
    E = alg.center
    alpha = alg.coframe
    js = alg.js
    forms = bracket_forms(alg)
    p = alg.p

    JJ = np.stack([np.stack([js[j] @ js[i] for i in range(p)]) for j in range(p)])  # [j,i,x,a]
    commutators = JJ - JJ.transpose(1, 0, 2, 3)
    pairings = np.stack([np.stack([js[j].T @ G @ js[i] for i in range(p)]) for j in range(p)])
    commutator_forms = np.stack(
        [np.stack([commutators[j, i].T @ G for i in range(p)]) for j in range(p)]
    )

    # Σ_ij ⟨e_i,e_j⟩ (¼⟨J_i v,w⟩J_j u − ¼⟨J_i u,w⟩J_j v − ½⟨J_i u,v⟩J_j w)
    weighted = np.tensordot(alg.center_gram, forms, axes=([0], [0]))  # [j,a,b]
    spread = np.tensordot(weighted, js, axes=([0], [0]))  # [a,b,x,c] = Σ_j weighted[j,a,b] (J_j b_c)_x
    total = quarter * spread.transpose(3, 0, 1, 2)
    total = total - quarter * spread.transpose(0, 3, 1, 2)
    total = total - half * spread.transpose(0, 1, 3, 2)

    # ¼Σ_ij (⟨e_i,w⟩⟨e_j,v⟩ J_jJ_i u − ⟨e_i,w⟩⟨e_j,u⟩ J_jJ_i v)
    paired = np.tensordot(alpha, np.tensordot(alpha, JJ, axes=([0], [0])), axes=([0], [1]))  # [c,b,x,a]
    total = total + quarter * paired.transpose(3, 1, 0, 2)
    total = total - quarter * paired.transpose(1, 3, 0, 2)

    # ¼Σ_ij ⟨e_i,u⟩⟨e_j,v⟩ [J_j, J_i] w
    swept = np.tensordot(alpha, np.tensordot(alpha, commutators, axes=([0], [0])), axes=([0], [1]))  # [a,b,x,c]
    total = total + quarter * swept.transpose(0, 1, 3, 2)

    # ¼Σ_ij ⟨e_i,w⟩⟨[J_j,J_i]u, v⟩ e_j
    central = np.tensordot(np.tensordot(alpha, commutator_forms, axes=([0], [1])), E, axes=([1], [1]))  # [c,a,b,x]
    total = total + quarter * central.transpose(1, 2, 0, 3)

    # ¼Σ_ij (⟨e_i,v⟩⟨J_j u, J_i w⟩ − ⟨e_i,u⟩⟨J_j v, J_i w⟩) e_j
    crossed = np.tensordot(np.tensordot(alpha, pairings, axes=([0], [1])), E, axes=([1], [1]))  # [b,a,c,x]
    total = total + quarter * crossed.transpose(1, 0, 2, 3)
    total = total - quarter * crossed
    return total


def curvature_tensor(
    alg: NilMetricAlgebra,
    tol: Optional[float] = None,
    table: Optional[LeviCivitaTable] = None,
) -> np.ndarray:
    table = table or levi_civita(alg, tol)
    definitional = curvature_definitional(alg, table)
    closed = curvature_closed_form(alg)
    _check("curvature (definition vs closed form)", definitional, closed, tol)
    return definitional


# Ricci


def ricci_from_tensor(R: np.ndarray) -> np.ndarray:
    """𝔯(b_a, b_c) = Σ_b R[a, b, c, b]."""
    n = R.shape[0]
    out = np.empty((n, n), dtype=R.dtype)
    for a in range(n):
        for c in range(n):
            out[a, c] = sum(R[a, b, c, b] for b in range(n))
    return out


def ricci_bruteforce(alg: NilMetricAlgebra, tol: Optional[float] = None, R: Optional[np.ndarray] = None) -> np.ndarray:
    R = curvature_tensor(alg, tol) if R is None else R
    ricci = ricci_from_tensor(R)
    _check("Ricci symmetry", ricci, ricci.T, tol)
    return ricci


def j_plus_minus(alg: NilMetricAlgebra) -> Tuple[np.ndarray, np.ndarray]:
    """𝒥⁺ = −¼Σ⟨e_i,·⟩tr(J_iJ_j)e_j e 𝒥⁻ = ½Σ⟨e_i,e_j⟩J_iJ_j."""
    js = alg.js
    p = alg.p
    products = np.stack([np.stack([js[i] @ js[j] for j in range(p)]) for i in range(p)])
    traces = sc.zeros((p, p), alg.exact)
    for i in range(p):
        for j in range(p):
            traces[i, j] = sc.trace(products[i, j])
    j_minus = _half(alg) * np.tensordot(alg.center_gram, products, axes=([0, 1], [0, 1]))
    j_plus = -_quarter(alg) * (alg.center @ traces.T @ alg.coframe)
    return j_plus, j_minus


def form_of(alg: NilMetricAlgebra, endomorphism: np.ndarray) -> np.ndarray:
    """(u, v) ↦ ⟨𝒥u, v⟩."""
    return endomorphism.T @ alg.gram


def endomorphism_of(alg: NilMetricAlgebra, form: np.ndarray) -> np.ndarray:
    return alg.space.gram_inverse @ form.T


def ricci_fast(alg: NilMetricAlgebra) -> np.ndarray:
    j_plus, j_minus = j_plus_minus(alg)
    return form_of(alg, j_plus + j_minus)


def scalar_curvature(alg: NilMetricAlgebra, tol: Optional[float] = None) -> sc.Scalar:
    """𝔰 = tr 𝒥, conferido contra ½tr𝒥⁻ e −tr𝒥⁺."""
    j_plus, j_minus = j_plus_minus(alg)
    scalar = sc.trace(j_plus + j_minus)
    half_minus = _half(alg) * sc.trace(j_minus)
    minus_plus = -sc.trace(j_plus)
    values = sc.as_array([scalar, half_minus, minus_plus], alg.exact)
    _check("scalar curvature identities", values, np.full(3, scalar, dtype=values.dtype), tol)
    return scalar


def ricci_adapted(alg: NilMetricAlgebra, R: Optional[np.ndarray] = None, tol: Optional[float] = None) -> np.ndarray:
    """Ricci expandido na base adaptada (ponto flutuante), para conferência."""
    R = sc.to_float(curvature_tensor(alg, tol) if R is None else R)
    G = sc.to_float(alg.gram)
    basis = build_adapted_basis(alg, tol)
    terms = []
    for i in range(basis.isotropic_pairs):
        terms.append((basis.e[:, i], basis.ebar[:, i], 1.0))
        terms.append((basis.ebar[:, i], basis.e[:, i], 1.0))
    for k, sign in enumerate(basis.f_signs):
        terms.append((basis.f[:, k], basis.f[:, k], float(sign)))
    for k, sign in enumerate(basis.g_signs):
        terms.append((basis.g[:, k], basis.g[:, k], float(sign)))
    ricci = np.zeros((alg.n, alg.n))
    for w, partner, weight in terms:
        applied = np.tensordot(R, w, axes=([1], [0]))  # [a, c, x]
        ricci += weight * np.tensordot(applied, G @ partner, axes=([2], [0]))
    return ricci


def heisenberg_ricci_criterion(alg: NilMetricAlgebra) -> Tuple[sc.Scalar, sc.Scalar]:
    """(⟨e,e⟩, tr J²) para p = 1; 𝔯 = 0 sse ambos se anulam."""
    if alg.p != 1:
        raise DimensionMismatchError("criterion needs a one-dimensional center")
    e = alg.center[:, 0]
    return alg.space.inner(e, e), sc.trace(alg.js[0] @ alg.js[0])


def normalized_ricci_norm(alg: NilMetricAlgebra, ricci: Optional[np.ndarray] = None) -> float:
    """‖𝔯‖∞ dividido por Σ‖e_i‖²·Σ‖J_i‖²_F (mesma homogeneidade do Ricci)."""
    ricci = ricci_fast(alg) if ricci is None else ricci
    E = sc.to_float(alg.center)
    js = sc.to_float(alg.js)
    scale = float(np.sum(E * E)) * float(np.sum(js * js))
    if scale == 0.0:
        return 0.0
    return float(sc.max_abs(ricci)) / scale


# Proposição euclidiana


@dataclass(frozen=True, eq=False)
class EuclideanSpectralReport:
    p: int
    r: int
    mu: Tuple[float, ...]
    lambdas: Tuple[float, ...]
    basis: np.ndarray
    scalar: float
    rank_plus: int
    rank_minus: int

    def violations(self, n: int, tol: Optional[float] = None) -> List[str]:
        tolerance = sc.get_tolerance(tol)
        problems = []
        if self.rank_plus != self.r:
            problems.append(f"rank J+ = {self.rank_plus} but dim[N,N] = {self.r}")
        if self.rank_minus != n - self.p:
            problems.append(f"rank J- = {self.rank_minus} but n - p = {n - self.p}")
        if abs(self.scalar + 0.5 * sum(self.lambdas)) > tolerance * max(1.0, abs(self.scalar)):
            problems.append("s != -1/2 sum(lambda)")
        if abs(self.scalar + sum(self.mu)) > tolerance * max(1.0, abs(self.scalar)):
            problems.append("s != -sum(mu)")
        if not self.scalar < 0:
            problems.append("scalar curvature is not negative")
        return problems


def euclidean_spectral_report(alg: NilMetricAlgebra, tol: Optional[float] = None) -> EuclideanSpectralReport:
    if alg.space.q != 0:
        raise NilcurvError("spectral report needs a Euclidean metric")
    tolerance = sc.get_tolerance(tol)
    G = sc.to_float(alg.gram)
    j_plus, j_minus = (sc.to_float(m) for m in j_plus_minus(alg))
    # G𝒥 simétrica: problema generalizado com base G-ortonormal
    values, vectors = eigh(G @ (j_plus + j_minus), G)
    scale = max(1.0, float(np.max(np.abs(values)))) if values.size else 1.0
    mu = tuple(float(v) for v in np.sort(np.linalg.eigvals(j_plus).real) if v > tolerance * scale)
    lambdas = tuple(
        sorted(float(-v) for v in np.linalg.eigvals(j_minus).real if v < -tolerance * scale)
    )
    return EuclideanSpectralReport(
        p=alg.p,
        r=derived_ideal(alg, tol).dim,
        mu=mu,
        lambdas=lambdas,
        basis=vectors,
        scalar=float(np.trace(j_plus + j_minus)),
        rank_plus=int(np.linalg.matrix_rank(j_plus, tol=tolerance * scale)),
        rank_minus=int(np.linalg.matrix_rank(j_minus, tol=tolerance * scale)),
    )


# Einstein


@dataclass(frozen=True)
class EinsteinFit:
    lam: sc.Scalar
    residual: float
    exact_zero: bool

    def is_einstein(self, tol: Optional[float] = None) -> bool:
        return self.exact_zero or self.residual <= sc.get_tolerance(tol)

    def consistent(self, tol: Optional[float] = None) -> bool:
        """Einstein implica λ = 0."""
        if not self.is_einstein(tol):
            return True
        return abs(float(self.lam)) <= sc.get_tolerance(tol)


def einstein_residual(alg: NilMetricAlgebra, ricci: Optional[np.ndarray] = None) -> EinsteinFit:
    """λ̂ = ⟨𝔯, G⟩_F / ⟨G, G⟩_F e o resíduo de Frobenius (norma euclidiana dos coeficientes)."""
    ricci = ricci_fast(alg) if ricci is None else ricci
    G = alg.gram
    lam = sc.frobenius_inner(ricci, G) / sc.frobenius_inner(G, G)
    difference = ricci - lam * G
    squares = sc.frobenius_inner(difference, difference)
    return EinsteinFit(lam=lam, residual=math.sqrt(float(squares)), exact_zero=alg.exact and squares == 0)


# Relatório completo


@dataclass(frozen=True, eq=False)
class CurvatureReport:
    gamma: np.ndarray
    R: np.ndarray
    ricci: np.ndarray
    ricci_fast: np.ndarray
    jplus: np.ndarray
    jminus: np.ndarray
    ricci_endo: np.ndarray
    scalar: sc.Scalar
    einstein: EinsteinFit
    tolerance: float
    exact: bool
    flags: dict = field(default_factory=dict)

    @property
    def oracle_deviation(self) -> float:
        return sc.deviation(self.ricci, self.ricci_fast)


def curvature_report(alg: NilMetricAlgebra, tol: Optional[float] = None) -> CurvatureReport:
    table = levi_civita(alg, tol)
    R = curvature_tensor(alg, tol, table)
    ricci = ricci_bruteforce(alg, tol, R)
    fast = ricci_fast(alg)
    _check("Ricci (brute force vs fast)", ricci, fast, tol)
    j_plus, j_minus = j_plus_minus(alg)
    _check("J+ J- = 0", j_plus @ j_minus, sc.zeros(j_plus.shape, alg.exact), tol)
    _check("J- J+ = 0", j_minus @ j_plus, sc.zeros(j_plus.shape, alg.exact), tol)
    scalar = scalar_curvature(alg, tol)
    fit = einstein_residual(alg, ricci)
    if not fit.consistent(tol):
        logger.error(f"ajuste de Einstein com λ não nulo: {fit}")
    flags = {
        "ricci_flat": sc.is_zero(ricci, tol),
        "flat": sc.is_zero(R, tol),
        "heisenberg": is_heisenberg(alg, tol),
        "h_type": is_heisenberg_type(alg, tol),
        "einstein": fit.is_einstein(tol),
    }
    return CurvatureReport(
        gamma=table.gamma,
        R=R,
        ricci=ricci,
        ricci_fast=fast,
        jplus=j_plus,
        jminus=j_minus,
        ricci_endo=endomorphism_of(alg, ricci),
        scalar=scalar,
        einstein=fit,
        tolerance=sc.get_tolerance(tol),
        exact=alg.exact,
        flags=flags,
    )
