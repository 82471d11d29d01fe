"""Álgebras de Lie 2-nilpotentes pseudo-euclidianas no modelo de endomorfismos de estrutura.

O colchete é [u, v] = Σ_i ⟨J_i u, v⟩ e_i, onde (e_1, ..., e_p) é a base
declarada do centro e cada J_i é antissimétrico.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, List, Optional, Sequence

import numpy as np
from scipy.linalg import null_space as orthonormal_null_space
from scipy.linalg import orth

from . import scalars as sc
from .errors import DimensionMismatchError, InvalidAlgebraError
from .pseudo_euclidean import PseudoEuclideanSpace, SkewEndomorphism, is_skew

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class NilMetricAlgebra:
    space: PseudoEuclideanSpace
    center: np.ndarray  # n × p, colunas e_i
    js: np.ndarray  # p × n × n
    name: str = ""

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def p(self) -> int:
        return self.center.shape[1]

    @property
    def exact(self) -> bool:
        return self.space.exact

    @property
    def gram(self) -> np.ndarray:
        return self.space.gram

    @property
    def center_gram(self) -> np.ndarray:
        """(⟨e_i, e_j⟩)."""
        return self.center.T @ self.gram @ self.center

    @property
    def coframe(self) -> np.ndarray:
        """Linhas u ↦ ⟨e_i, u⟩."""
        return self.center.T @ self.gram

    @property
    def center_vectors(self) -> List[np.ndarray]:
        return [self.center[:, i] for i in range(self.p)]

    def structure(self, i: int) -> SkewEndomorphism:
        return SkewEndomorphism(self.space, self.js[i])

    def vector(self, data: Any) -> np.ndarray:
        vec = sc.as_array(data, self.exact)
        if vec.shape != (self.n,):
            raise DimensionMismatchError(f"expected a vector of length {self.n}, got {vec.shape}")
        return vec

    def with_mode(self, exact: bool) -> "NilMetricAlgebra":
        if exact == self.exact:
            return self
        return NilMetricAlgebra(
            self.space.with_mode(exact), sc.convert(self.center, exact), sc.convert(self.js, exact), self.name
        )


def make_algebra(
    space: PseudoEuclideanSpace,
    center: Sequence[Any],
    js: Sequence[Any],
    name: str = "",
    validate_now: bool = True,
    tol: Optional[float] = None,
) -> NilMetricAlgebra:
    """Monta a álgebra a partir de p vetores do centro e p matrizes J_i."""
    exact = space.exact
    center_rows = sc.as_array(center, exact)
    structure = sc.as_array(js, exact)
    if center_rows.ndim != 2 or center_rows.shape[1] != space.n:
        raise DimensionMismatchError(f"center vectors must have length {space.n}")
    p = center_rows.shape[0]
    if structure.shape != (p, space.n, space.n):
        raise DimensionMismatchError(
            f"expected {p} structure matrices of size {space.n}, got shape {structure.shape}"
        )
    alg = NilMetricAlgebra(space, center_rows.T.copy(), structure, name)
    if validate_now:
        require_valid(alg, tol)
    return alg


def bracket(alg: NilMetricAlgebra, u: Any, v: Any) -> np.ndarray:
    u = alg.vector(u)
    v = alg.vector(v)
    gv = alg.gram @ v
    coefficients = np.array([(alg.js[i] @ u) @ gv for i in range(alg.p)], dtype=alg.js.dtype)
    return alg.center @ coefficients


def bracket_forms(alg: NilMetricAlgebra) -> np.ndarray:
    """Formas Ω_i(u, v) = ⟨J_i u, v⟩, isto é J_iᵀG (p × n × n)."""
    return np.stack([alg.js[i].T @ alg.gram for i in range(alg.p)])


def structure_constants(alg: NilMetricAlgebra) -> np.ndarray:
    """C[a, b, :] = [b_a, b_b] na base distinguida."""
    return np.tensordot(bracket_forms(alg), alg.center, axes=([0], [1]))


def ad_matrix(alg: NilMetricAlgebra, g: Any) -> np.ndarray:
    g = alg.vector(g)
    weights = np.stack([(alg.js[i] @ g) @ alg.gram for i in range(alg.p)])
    return alg.center @ weights


def center_kernel(alg: NilMetricAlgebra, tol: Optional[float] = None) -> np.ndarray:
    """∩ ker J_i, via núcleo das matrizes empilhadas."""
    stacked = alg.js.reshape(alg.p * alg.n, alg.n)
    return sc.null_space(stacked, tol)


def validate(alg: NilMetricAlgebra, tol: Optional[float] = None) -> List[str]:
    violations: List[str] = []
    if alg.p == 0:
        return ["no center vectors declared"]
    if sc.rank(alg.center, tol) < alg.p:
        violations.append("center basis is not linearly independent")
    for i in range(alg.p):
        if not is_skew(alg.js[i], alg.space, tol):
            violations.append(f"J_{i + 1} is not skew-symmetric")
        if not sc.is_zero(alg.js[i] @ alg.center, tol):
            violations.append(f"J_{i + 1} does not vanish on the declared center")
    kernel = center_kernel(alg, tol)
    if not sc.same_span(kernel, alg.center, tol):
        violations.append(
            f"kernel ≠ declared center (dim ∩ker J_i = {kernel.shape[1]}, declared {alg.p})"
        )
    if all(sc.is_zero(alg.js[i], tol) for i in range(alg.p)):
        violations.append("derived ideal is trivial (abelian algebra)")
    if violations:
        logger.debug(f"álgebra {alg.name or '<sem nome>'} inválida: {violations}")
    return violations


def require_valid(alg: NilMetricAlgebra, tol: Optional[float] = None) -> NilMetricAlgebra:
    violations = validate(alg, tol)
    if violations:
        raise InvalidAlgebraError(violations)
    return alg


def change_center_basis(alg: NilMetricAlgebra, P: Any, tol: Optional[float] = None) -> NilMetricAlgebra:
    """f_j = Σ_i P_ij e_i e K_j = Σ_i (P⁻¹)_ji J_i; os colchetes não mudam."""
    passage = sc.as_array(P, alg.exact)
    if passage.shape != (alg.p, alg.p):
        raise DimensionMismatchError(f"passage matrix must be {alg.p}x{alg.p}")
    inverse = sc.inverse(passage, tol)
    new_center = alg.center @ passage
    new_js = np.tensordot(inverse, alg.js, axes=([1], [0]))
    return NilMetricAlgebra(alg.space, new_center, new_js, alg.name)


@dataclass(frozen=True, eq=False)
class Subspace:
    basis: np.ndarray  # colunas

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def derived_ideal(alg: NilMetricAlgebra, tol: Optional[float] = None) -> Subspace:
    """[𝔑, 𝔑] como subespaço do centro."""
    coefficients = bracket_forms(alg).reshape(alg.p, alg.n * alg.n)
    independent = sc.column_basis(coefficients, tol)
    return Subspace(alg.center @ independent)


def is_irreducible(alg: NilMetricAlgebra, tol: Optional[float] = None) -> bool:
    """Falso quando alguma direção central não aparece em colchetes."""
    return derived_ideal(alg, tol).dim == alg.p


@dataclass(frozen=True)
class CenterType:
    dim: int
    radical: int
    negative: int
    positive: int

    @property
    def kind(self) -> str:
        if self.radical:
            return "degenerate"
        if self.negative == 0:
            return "euclidean"
        if self.negative == 1:
            return "lorentzian"
        return "indefinite"


def center_type(alg: NilMetricAlgebra, tol: Optional[float] = None) -> CenterType:
    """Assinatura de ⟨,⟩ restrito ao centro e dimensão de 𝔷 ∩ 𝔷^⊥."""
    gram = alg.center_gram
    radical = alg.p - sc.rank(gram, tol)
    eigenvalues = np.linalg.eigvalsh(sc.to_float(gram))
    threshold = sc.get_tolerance(tol) * max(float(sc.max_abs(gram)), 1.0)
    return CenterType(
        dim=alg.p,
        radical=radical,
        negative=int(np.sum(eigenvalues < -threshold)),
        positive=int(np.sum(eigenvalues > threshold)),
    )


def projection_onto_center(alg: NilMetricAlgebra, tol: Optional[float] = None) -> np.ndarray:
    """P_𝔷 = E (EᵀGE)⁻¹ EᵀG; exige centro não degenerado."""
    return alg.center @ sc.inverse(alg.center_gram, tol) @ alg.coframe


def is_heisenberg(alg: NilMetricAlgebra, tol: Optional[float] = None) -> bool:
    return alg.p == 1 and derived_ideal(alg, tol).dim == 1 and alg.n % 2 == 1


def is_heisenberg_type(alg: NilMetricAlgebra, tol: Optional[float] = None) -> bool:
    """J_a J_b + J_b J_a = −2 (EᵀGE)⁻¹_ab P_{𝔷^⊥}, métrica euclidiana.

    Equivale a J_i² = −P_{𝔷^⊥} e J_iJ_j = −J_jJ_i numa base ortonormal do
    centro, sem extrair raízes.
    """
    if alg.space.q != 0:
        return False
    inverse_gram = sc.inverse(alg.center_gram, tol)
    complement = sc.identity(alg.n, alg.exact) - projection_onto_center(alg, tol)
    for a in range(alg.p):
        for b in range(a, alg.p):
            anticommutator = alg.js[a] @ alg.js[b] + alg.js[b] @ alg.js[a]
            if not sc.allclose(anticommutator, -2 * inverse_gram[a, b] * complement, tol):
                return False
    return True


# Base adaptada


@dataclass(frozen=True, eq=False)
class AdaptedBasis:
    """Pares isotrópicos (e_i, ē_i), base ortogonal f de 𝔉 ⊂ 𝔷 e g de 𝔊 ⊂ 𝔷^⊥."""

    e: np.ndarray
    ebar: np.ndarray
    f: np.ndarray
    f_signs: np.ndarray
    g: np.ndarray
    g_signs: np.ndarray

    @property
    def isotropic_pairs(self) -> int:
        return self.e.shape[1]

    def matrix(self) -> np.ndarray:
        columns = []
        for i in range(self.isotropic_pairs):
            columns.extend([self.e[:, i], self.ebar[:, i]])
        columns.extend(self.f.T)
        columns.extend(self.g.T)
        n = self.e.shape[0]
        return np.column_stack(columns) if columns else np.zeros((n, 0))

    def expected_gram(self) -> np.ndarray:
        k = self.isotropic_pairs
        size = 2 * k + len(self.f_signs) + len(self.g_signs)
        out = np.zeros((size, size))
        for i in range(k):
            out[2 * i, 2 * i + 1] = out[2 * i + 1, 2 * i] = 1.0
        diagonal = np.concatenate([self.f_signs, self.g_signs])
        out[2 * k :, 2 * k :] = np.diag(diagonal)
        return out


def _diagonalize(vectors: np.ndarray, gram: np.ndarray) -> tuple:
    """Base ⟨,⟩-ortonormal (sinais ±1) do espaço gerado por colunas não degenerado."""
    if vectors.shape[1] == 0:
        return vectors, np.zeros(0)
    restricted = vectors.T @ gram @ vectors
    values, eigvecs = np.linalg.eigh(restricted)
    scaled = vectors @ eigvecs / np.sqrt(np.abs(values))
    return scaled, np.sign(values)


def _range(matrix: np.ndarray, tol: float) -> np.ndarray:
    if matrix.size == 0:
        return np.zeros((matrix.shape[0], 0))
    return orth(matrix, rcond=tol)


def build_adapted_basis(alg: NilMetricAlgebra, tol: Optional[float] = None) -> AdaptedBasis:
    """Constrói a base adaptada em ponto flutuante.

    𝔷∩𝔷^⊥ vem do núcleo de EᵀGE; 𝔉 e 𝔊 são complementos não degenerados
    diagonalizados; os parceiros ē_i completam uma base de Witt de (𝔉⊕𝔊)^⊥.
    """
    tolerance = sc.get_tolerance(tol)
    G = sc.to_float(alg.gram)
    E = sc.to_float(alg.center)
    n = alg.n

    center_gram = E.T @ G @ E
    radical = E @ orthonormal_null_space(center_gram, rcond=tolerance)
    F0 = E @ _range(center_gram, tolerance)
    f, f_signs = _diagonalize(F0, G)

    perp = orthonormal_null_space(E.T @ G, rcond=tolerance)
    perp_gram = perp.T @ G @ perp
    G0 = perp @ _range(perp_gram, tolerance)
    g, g_signs = _diagonalize(G0, G)

    k = radical.shape[1]
    if k == 0:
        empty = np.zeros((n, 0))
        return AdaptedBasis(empty, empty, f, f_signs, g, g_signs)

    used = np.hstack([f, g])
    witt = orthonormal_null_space(used.T @ G, rcond=tolerance) if used.shape[1] else np.eye(n)
    projector = np.eye(n) - radical @ np.linalg.pinv(radical)
    complement = _range(projector @ witt, tolerance)[:, :k]
    pairing = radical.T @ G @ complement
    ebar = complement @ np.linalg.inv(pairing)
    residual = ebar.T @ G @ ebar
    ebar = ebar - 0.5 * radical @ residual
    return AdaptedBasis(radical, ebar, f, f_signs, g, g_signs)


def adapted_basis_violations(
    alg: NilMetricAlgebra, basis: AdaptedBasis, tol: Optional[float] = None
) -> List[str]:
    tolerance = sc.get_tolerance(tol) * 1e3
    G = sc.to_float(alg.gram)
    E = sc.to_float(alg.center)
    violations: List[str] = []
    full = basis.matrix()
    if full.shape != (alg.n, alg.n) or np.linalg.matrix_rank(full) < alg.n:
        violations.append("adapted vectors do not form a basis")
        return violations
    if not np.allclose(full.T @ G @ full, basis.expected_gram(), atol=tolerance):
        violations.append("adapted basis Gram is not the expected normal form")
    inside_center = np.hstack([basis.e, basis.f])
    if inside_center.shape[1] and np.linalg.matrix_rank(np.hstack([E, inside_center]), tol=tolerance) > alg.p:
        violations.append("e/f vectors are not central")
    if basis.g.shape[1] and not np.allclose(E.T @ G @ basis.g, 0.0, atol=tolerance):
        violations.append("g vectors are not orthogonal to the center")
    return violations
