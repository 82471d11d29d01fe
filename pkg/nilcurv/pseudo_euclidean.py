"""Espaços pseudo-euclidianos, endomorfismos antissimétricos e suas representações em blocos.

Convenção de base: (e_1, ē_1, ..., e_q, ē_q, f_1, ..., f_{n-2q}), com
⟨e_i, ē_j⟩ = δ_ij e os f_l ortonormais. A matriz de Gram canônica é
blockdiag([[0,1],[1,0]] × q, I_{n-2q}).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.linalg import null_space as orthonormal_null_space

from . import scalars as sc
from .errors import (
    DimensionMismatchError,
    InvalidSignatureError,
    NotSkewError,
    RepresentationError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Signature:
    q: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSignatureError(f"dimension must be positive, got n={self.n}")
        if self.q < 0 or 2 * self.q > self.n:
            raise InvalidSignatureError(f"need 0 <= 2q <= n, got q={self.q}, n={self.n}")

    @property
    def plus(self) -> int:
        return self.n - self.q


@dataclass(frozen=True, eq=False)
class PseudoEuclideanSpace:
    sig: Signature
    gram: np.ndarray
    canonical: bool = True

    @property
    def n(self) -> int:
        return self.sig.n

    @property
    def q(self) -> int:
        return self.sig.q

    @property
    def exact(self) -> bool:
        return sc.is_exact(self.gram)

    @property
    def gram_inverse(self) -> np.ndarray:
        if self.canonical:
            # G² = I na base distinguida
            return self.gram
        return sc.inverse(self.gram)

    def inner(self, u: np.ndarray, v: np.ndarray) -> sc.Scalar:
        return np.asarray(u) @ self.gram @ np.asarray(v)

    def same_as(self, other: "PseudoEuclideanSpace") -> bool:
        if self is other:
            return True
        return self.n == other.n and self.q == other.q and np.array_equal(
            sc.to_float(self.gram), sc.to_float(other.gram)
        )

    def with_mode(self, exact: bool) -> "PseudoEuclideanSpace":
        if exact == self.exact:
            return self
        return PseudoEuclideanSpace(self.sig, sc.convert(self.gram, exact), self.canonical)


def canonical_gram(q: int, n: int, exact: bool = True) -> np.ndarray:
    gram = sc.zeros((n, n), exact)
    one = Fraction(1) if exact else 1.0
    for i in range(q):
        gram[2 * i, 2 * i + 1] = one
        gram[2 * i + 1, 2 * i] = one
    for k in range(2 * q, n):
        gram[k, k] = one
    return gram


def make_space(q: int, n: int, exact: bool = True) -> PseudoEuclideanSpace:
    sig = Signature(q, n)
    return PseudoEuclideanSpace(sig, canonical_gram(q, n, exact), canonical=True)


def space_from_gram(gram: Any, exact: Optional[bool] = None, tol: Optional[float] = None) -> PseudoEuclideanSpace:
    """Espaço com uma Gram simétrica não degenerada qualquer."""
    raw = np.array(gram, dtype=object)
    if exact is None:
        exact = sc.infer_exact(raw.flat)
    g = sc.as_array(raw, exact)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatchError(f"gram must be square, got shape {g.shape}")
    n = g.shape[0]
    if not sc.allclose(g, g.T, tol):
        raise InvalidSignatureError("gram is not symmetric")
    if sc.rank(g, tol) < n:
        raise InvalidSignatureError("gram is degenerate")
    eigenvalues = np.linalg.eigvalsh(sc.to_float(g))
    q = int(np.sum(eigenvalues < 0))
    sig = Signature(q, n)
    canonical = sc.allclose(g, canonical_gram(q, n, exact), tol)
    return PseudoEuclideanSpace(sig, g if not canonical else canonical_gram(q, n, exact), canonical)


# Endomorfismos antissimétricos


@dataclass(frozen=True, eq=False)
class SkewEndomorphism:
    space: PseudoEuclideanSpace
    mat: np.ndarray


def _matrix_of(J: Any) -> np.ndarray:
    return J.mat if isinstance(J, SkewEndomorphism) else np.asarray(J)


def is_skew(J: Any, space: PseudoEuclideanSpace, tol: Optional[float] = None) -> bool:
    """matᵀG + G·mat = 0 (exato no modo racional)."""
    mat = _matrix_of(J)
    if mat.shape != (space.n, space.n):
        raise DimensionMismatchError(f"expected {space.n}x{space.n}, got {mat.shape}")
    g = space.gram
    return sc.is_zero(mat.T @ g + g @ mat, tol)


def skew_endomorphism(mat: Any, space: PseudoEuclideanSpace, tol: Optional[float] = None) -> SkewEndomorphism:
    m = sc.as_array(mat, space.exact)
    if not is_skew(m, space, tol):
        raise NotSkewError("matrix is not skew-symmetric for the given inner product")
    return SkewEndomorphism(space, m)


def skew_from_form(omega: np.ndarray, space: PseudoEuclideanSpace) -> np.ndarray:
    """Único J com ⟨Ju, v⟩ = Ω(u, v) para Ω antissimétrica."""
    return -(space.gram_inverse @ omega)


def star_product(J: SkewEndomorphism, K: SkewEndomorphism) -> sc.Scalar:
    """⟨J, K⟩* = −tr(J∘K)."""
    if not J.space.same_as(K.space):
        raise DimensionMismatchError("skew endomorphisms live in different spaces")
    return -sc.trace(J.mat @ K.mat)


# Representação (A, B, X, Y)


@dataclass(frozen=True, eq=False)
class SkewRepresentation:
    A: np.ndarray
    B: np.ndarray
    X: np.ndarray  # q × (n − 2q), linha i = X_{i+1}
    Y: np.ndarray

    @property
    def q(self) -> int:
        return self.A.shape[0] // 2

    @property
    def m(self) -> int:
        return self.B.shape[0]

    @property
    def exact(self) -> bool:
        return sc.is_exact(self.B) if self.B.size else sc.is_exact(self.A)

    @property
    def v_rows(self) -> np.ndarray:
        """Linhas V_l = (X_1[l], Y_1[l], ..., X_q[l], Y_q[l]) em ℝ^{(q,q)}."""
        rows = sc.zeros((self.m, 2 * self.q), self.exact)
        for i in range(self.q):
            rows[:, 2 * i] = self.X[i]
            rows[:, 2 * i + 1] = self.Y[i]
        return rows

    def a_block(self, i: int, j: int) -> np.ndarray:
        return self.A[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]


def check_a_block(A: np.ndarray, tol: Optional[float] = None) -> List[str]:
    """Violações da estrutura de A (blocos diag(a, −a) e pares A_ji / A_ij)."""
    violations: List[str] = []
    q = A.shape[0] // 2
    for i in range(q):
        block = A[2 * i : 2 * i + 2, 2 * i : 2 * i + 2]
        residue = np.array([block[0, 1], block[1, 0], block[1, 1] + block[0, 0]], dtype=A.dtype)
        if not sc.is_zero(residue, tol):
            violations.append(f"A diagonal block {i + 1} is not diag(a, -a)")
        for j in range(i + 1, q):
            upper = A[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
            lower = A[2 * j : 2 * j + 2, 2 * i : 2 * i + 2]
            expected = np.array(
                [[-upper[1, 1], -upper[0, 1]], [-upper[1, 0], -upper[0, 0]]], dtype=A.dtype
            )
            if not sc.allclose(lower, expected, tol):
                violations.append(f"A blocks ({j + 1},{i + 1}) and ({i + 1},{j + 1}) are not paired")
    return violations


def representation_of(J: SkewEndomorphism, tol: Optional[float] = None) -> SkewRepresentation:
    space = J.space
    if not space.canonical:
        raise RepresentationError("block representations need the canonical pseudo-Euclidean basis")
    if not is_skew(J, space, tol):
        raise NotSkewError("matrix is not skew-symmetric for the given inner product")
    q, n = space.q, space.n
    mat = J.mat
    A = np.array(mat[: 2 * q, : 2 * q], copy=True)
    B = np.array(mat[2 * q :, 2 * q :], copy=True)
    X = sc.zeros((q, n - 2 * q), space.exact)
    Y = sc.zeros((q, n - 2 * q), space.exact)
    for i in range(q):
        X[i] = -mat[2 * i, 2 * q :]
        Y[i] = -mat[2 * i + 1, 2 * q :]
    return SkewRepresentation(A, B, X, Y)


def validate_representation(rep: SkewRepresentation, tol: Optional[float] = None) -> List[str]:
    violations = check_a_block(rep.A, tol)
    if not sc.allclose(rep.B.T, -rep.B, tol):
        violations.append("B is not Euclidean-skew")
    if rep.X.shape != (rep.q, rep.m) or rep.Y.shape != (rep.q, rep.m):
        violations.append("X/Y shapes do not match (q, n - 2q)")
    return violations


def skew_from_representation(
    rep: SkewRepresentation, space: PseudoEuclideanSpace, tol: Optional[float] = None
) -> SkewEndomorphism:
    if not space.canonical:
        raise RepresentationError("block representations need the canonical pseudo-Euclidean basis")
    if rep.q != space.q or rep.q * 2 + rep.m != space.n:
        raise DimensionMismatchError(
            f"representation with q={rep.q}, m={rep.m} does not fit (q={space.q}, n={space.n})"
        )
    violations = validate_representation(rep, tol)
    if violations:
        raise RepresentationError("; ".join(violations))
    q, n = space.q, space.n
    mat = sc.zeros((n, n), space.exact)
    mat[: 2 * q, : 2 * q] = rep.A
    mat[2 * q :, 2 * q :] = rep.B
    for i in range(q):
        mat[2 * i, 2 * q :] = -rep.X[i]
        mat[2 * i + 1, 2 * q :] = -rep.Y[i]
        mat[2 * q :, 2 * i] = rep.Y[i]
        mat[2 * q :, 2 * i + 1] = rep.X[i]
    return SkewEndomorphism(space, sc.convert(mat, space.exact))


def q_product(u: np.ndarray, v: np.ndarray) -> sc.Scalar:
    """⟨u, v⟩_q = Σ (x_i y'_i + y_i x'_i); em particular ⟨u, u⟩_q = 2Σ x_i y_i."""
    u = np.asarray(u)
    v = np.asarray(v)
    return u[0::2] @ v[1::2] + u[1::2] @ v[0::2]


def bar(u: np.ndarray) -> np.ndarray:
    """(x_1, y_1, ..., x_q, y_q) ↦ (y_1, x_1, ..., y_q, x_q)."""
    out = np.array(u, copy=True)
    out[0::2] = u[1::2]
    out[1::2] = u[0::2]
    return out


def trace_pair_formula(rep1: SkewRepresentation, rep2: SkewRepresentation) -> sc.Scalar:
    """tr(J₁∘J₂) calculado só com os blocos das representações."""
    if rep1.q != rep2.q or rep1.m != rep2.m:
        raise DimensionMismatchError("representations of different spaces")
    q = rep1.q
    exact = rep1.exact
    total = Fraction(0) if exact else 0.0
    for i in range(q):
        total += 2 * rep1.A[2 * i, 2 * i] * rep2.A[2 * i, 2 * i]
    for l in range(q):
        for k in range(l + 1, q):
            b1 = rep1.a_block(l, k)
            b2 = rep2.a_block(l, k)
            total -= 2 * (
                b1[0, 0] * b2[1, 1] + b1[1, 1] * b2[0, 0] + b1[0, 1] * b2[1, 0] + b1[1, 0] * b2[0, 1]
            )
    for i in range(q):
        total -= 2 * (rep1.X[i] @ rep2.Y[i] + rep2.X[i] @ rep1.Y[i])
    total += sc.trace(rep1.B @ rep2.B)
    return total


def composition_blocks(rep1: SkewRepresentation, rep2: SkewRepresentation) -> Dict[str, np.ndarray]:
    """Os quatro blocos de Mat(J₁∘J₂).

    P₁P̂₂ vem da tabela de produtos escalares entre X's e Y's, P̂₁P₂ da tabela
    −⟨V¹_l, V²_k⟩_q.
    """
    if rep1.q != rep2.q or rep1.m != rep2.m:
        raise DimensionMismatchError("representations of different spaces")
    q, m, exact = rep1.q, rep1.m, rep1.exact
    p_phat = sc.zeros((2 * q, 2 * q), exact)
    for i in range(q):
        for j in range(q):
            p_phat[2 * i, 2 * j] = -(rep1.X[i] @ rep2.Y[j])
            p_phat[2 * i, 2 * j + 1] = -(rep1.X[i] @ rep2.X[j])
            p_phat[2 * i + 1, 2 * j] = -(rep1.Y[i] @ rep2.Y[j])
            p_phat[2 * i + 1, 2 * j + 1] = -(rep1.Y[i] @ rep2.X[j])
    v1 = rep1.v_rows
    v2 = rep2.v_rows
    phat_p = sc.zeros((m, m), exact)
    for l in range(m):
        for k in range(m):
            phat_p[l, k] = -q_product(v1[l], v2[k])

    P1, Phat1 = _off_diagonal(rep1)
    P2, Phat2 = _off_diagonal(rep2)
    return {
        "upper_left": rep1.A @ rep2.A + p_phat,
        "upper_right": rep1.A @ P2 + P1 @ rep2.B,
        "lower_left": Phat1 @ rep2.A + rep1.B @ Phat2,
        "lower_right": phat_p + rep1.B @ rep2.B,
    }


def _off_diagonal(rep: SkewRepresentation) -> Tuple[np.ndarray, np.ndarray]:
    q, m = rep.q, rep.m
    P = sc.zeros((2 * q, m), rep.exact)
    Phat = sc.zeros((m, 2 * q), rep.exact)
    for i in range(q):
        P[2 * i] = -rep.X[i]
        P[2 * i + 1] = -rep.Y[i]
        Phat[:, 2 * i] = rep.Y[i]
        Phat[:, 2 * i + 1] = rep.X[i]
    return P, Phat


# Sym⁻(V) e a forma ⟨,⟩*


@dataclass(frozen=True)
class SymMinusReport:
    q: int
    n: int
    dim: int
    sig_minus: int
    sig_plus: int
    degenerate: int = 0

    @property
    def matches_formula(self) -> bool:
        return (self.sig_minus, self.sig_plus) == expected_sym_minus_signature(self.q, self.n)


def expected_sym_minus_signature(q: int, n: int) -> Tuple[int, int]:
    """(negativos, positivos) = (q(n−q), (n(n−1) + 2q(q−n))/2)."""
    return q * (n - q), (n * (n - 1) + 2 * q * (q - n)) // 2


def sym_minus_basis(space: PseudoEuclideanSpace) -> List[SkewEndomorphism]:
    """J_ab = G⁻¹(E_ab − E_ba), a < b."""
    n = space.n
    ginv = space.gram_inverse
    basis = []
    for a in range(n):
        for b in range(a + 1, n):
            form = sc.zeros((n, n), space.exact)
            form[a, b] = Fraction(1) if space.exact else 1.0
            form[b, a] = -form[a, b]
            basis.append(SkewEndomorphism(space, ginv @ form))
    return basis


def sym_minus_signature(space: PseudoEuclideanSpace, tol: Optional[float] = None) -> SymMinusReport:
    if space.n < 2:
        raise InvalidSignatureError("Sym-(V) is trivial for n < 2")
    basis = sym_minus_basis(space)
    size = len(basis)
    gram = np.zeros((size, size))
    for i, J in enumerate(basis):
        for j in range(i, size):
            value = float(star_product(J, basis[j]))
            gram[i, j] = value
            gram[j, i] = value
    eigenvalues = np.linalg.eigvalsh(gram)
    threshold = sc.get_tolerance(tol) * float(np.max(np.abs(gram)))
    negative = int(np.sum(eigenvalues < -threshold))
    positive = int(np.sum(eigenvalues > threshold))
    degenerate = size - negative - positive
    if degenerate:
        logger.warning(f"Gram de <,>* com {degenerate} autovalores nulos (q={space.q}, n={space.n})")
    return SymMinusReport(space.q, space.n, size, negative, positive, degenerate)


# Forma normal euclidiana


@dataclass(frozen=True, eq=False)
class EuclideanNormalForm:
    angles: Tuple[float, ...]
    basis: np.ndarray  # colunas: (u_1, ū_1, ..., u_r, ū_r, núcleo)

    @property
    def rank(self) -> int:
        return 2 * len(self.angles)

    def block_matrix(self) -> np.ndarray:
        m = self.basis.shape[0]
        out = np.zeros((m, m))
        for k, lam in enumerate(self.angles):
            out[2 * k + 1, 2 * k] = lam
            out[2 * k, 2 * k + 1] = -lam
        return out


def euclidean_skew_normal_form(B: Any, tol: Optional[float] = None) -> EuclideanNormalForm:
    """Ângulos 0 < λ_1 ≤ … ≤ λ_r e base ortonormal onde B vira blockdiag([[0,−λ],[λ,0]], 0).

    Pares de mesmo λ ficam na ordem de construção; cada par é orientado para
    que a primeira componente não nula de u_k seja positiva.
    """
    b = sc.as_array(B, exact=False)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got {b.shape}")
    m = b.shape[0]
    tolerance = sc.get_tolerance(tol)
    scale = max(float(sc.max_abs(b)), 1.0)
    if not sc.allclose(b.T, -b, tolerance * scale):
        raise NotSkewError("matrix is not Euclidean-skew")
    if m == 0:
        return EuclideanNormalForm((), np.zeros((0, 0)))

    values, vectors = np.linalg.eigh(1j * b)
    # eigh devolve μ crescente, logo λ = −μ decrescente; grupos de λ iguais
    # (dentro da tolerância) são invertidos em bloco, sem mexer na ordem interna
    clusters: List[List[Tuple[float, np.ndarray, np.ndarray]]] = []
    for idx in range(m):
        mu = values[idx]
        if mu >= -tolerance * scale:
            continue
        w = vectors[:, idx]
        entry = (-float(mu), math.sqrt(2) * w.imag, math.sqrt(2) * w.real)
        if clusters and abs(clusters[-1][0][0] - entry[0]) <= tolerance * scale:
            clusters[-1].append(entry)
        else:
            clusters.append([entry])
    planes = [entry for cluster in reversed(clusters) for entry in cluster]

    columns = []
    for lam, u1, u2 in planes:
        lead = next((x for x in u1 if abs(x) > tolerance), 1.0)
        if lead < 0:
            u1, u2 = -u1, -u2
        columns.extend([u1, u2])
    if columns:
        plane_basis = np.column_stack(columns)
        kernel = orthonormal_null_space(plane_basis.T)
        basis = np.hstack([plane_basis, kernel])
    else:
        basis = np.eye(m)
    return EuclideanNormalForm(tuple(lam for lam, _, _ in planes), basis)
