"""Corpus de álgebras aleatórias e o portão de equivalência dos oráculos."""
from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd
from tqdm import tqdm

from . import scalars as sc
from .algebra import NilMetricAlgebra, change_center_basis, make_algebra, validate
from .curvature import (
    LeviCivitaTable,
    curvature_closed_form,
    curvature_definitional,
    einstein_residual,
    euclidean_spectral_report,
    j_plus_minus,
    levi_civita_closed_form,
    levi_civita_koszul,
    ricci_fast,
    ricci_from_tensor,
)
from .errors import NilcurvError
from .pseudo_euclidean import PseudoEuclideanSpace, SkewRepresentation, make_space, skew_from_representation

logger = logging.getLogger(__name__)

MAX_DRAWS = 25


def _draw(rng: np.random.Generator, shape: Union[int, Tuple[int, ...]], exact: bool) -> np.ndarray:
    if exact:
        return sc.as_array(rng.integers(-3, 4, size=shape), True)
    return rng.standard_normal(shape)


def random_representation(rng: np.random.Generator, q: int, m: int, exact: bool) -> SkewRepresentation:
    """Blocos (A, B, X, Y) aleatórios respeitando a estrutura de A e B."""
    A = sc.zeros((2 * q, 2 * q), exact)
    for i in range(q):
        a = _draw(rng, 1, exact)[0]
        A[2 * i, 2 * i] = a
        A[2 * i + 1, 2 * i + 1] = -a
        for j in range(i + 1, q):
            block = _draw(rng, (2, 2), exact)
            A[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block
            A[2 * j, 2 * i] = -block[1, 1]
            A[2 * j, 2 * i + 1] = -block[0, 1]
            A[2 * j + 1, 2 * i] = -block[1, 0]
            A[2 * j + 1, 2 * i + 1] = -block[0, 0]
    upper = _draw(rng, (m, m), exact)
    B = sc.zeros((m, m), exact)
    for a in range(m):
        for b in range(a + 1, m):
            B[a, b] = upper[a, b]
            B[b, a] = -upper[a, b]
    return SkewRepresentation(A, B, _draw(rng, (q, m), exact), _draw(rng, (q, m), exact))


def random_skew(rng: np.random.Generator, space: PseudoEuclideanSpace) -> np.ndarray:
    rep = random_representation(rng, space.q, space.n - 2 * space.q, space.exact)
    return skew_from_representation(rep, space).mat


def random_algebra(
    rng: np.random.Generator,
    n: int,
    p: int,
    q: int,
    exact: bool = False,
    tol: Optional[float] = None,
) -> Tuple[NilMetricAlgebra, int]:
    """Álgebra 2-passos válida com centro de dimensão p; devolve (álgebra, rejeições).

    Cada J_i = G⁻¹ΠᵀSΠ com S = G·J_0 aleatória e Π o projetor euclidiano que
    anula o centro candidato; amostras cujo núcleo comum excede o centro são
    descartadas.
    """
    if p < 1 or n - p < 2:
        raise NilcurvError(f"need 1 <= p <= n - 2, got n={n}, p={p}")
    space = make_space(q, n, exact)
    G = space.gram
    rejections = 0
    for draw in range(MAX_DRAWS):
        Z = _draw(rng, (n, p), exact)
        if sc.rank(Z, tol) < p:
            rejections += 1
            continue
        projector = sc.identity(n, exact) - Z @ sc.inverse(Z.T @ Z, tol) @ Z.T
        js = []
        for _ in range(p):
            S = G @ random_skew(rng, space)
            js.append(space.gram_inverse @ (projector.T @ S @ projector))
        alg = make_algebra(space, list(Z.T), js, name=f"random(n={n},p={p},q={q})", validate_now=False)
        if not validate(alg, tol):
            return alg, rejections
        rejections += 1
        logger.debug(f"amostra {draw} rejeitada (n={n}, p={p}, q={q})")
    raise NilcurvError(f"no valid algebra after {MAX_DRAWS} draws (n={n}, p={p}, q={q})")


def random_shape(rng: np.random.Generator, max_n: int = 8, max_p: int = 3, max_q: int = 2) -> Tuple[int, int, int]:
    """(n, p, q) com n ≤ max_n; p = 1 exige n − 1 par (senão o núcleo nunca fecha)."""
    while True:
        n = int(rng.integers(3, max_n + 1))
        p = int(rng.integers(1, min(max_p, n - 2) + 1))
        if p == 1 and (n - 1) % 2:
            continue
        q = int(rng.integers(0, min(max_q, n // 2) + 1))
        return n, p, q


def random_passage(rng: np.random.Generator, p: int, exact: bool, tol: Optional[float] = None) -> np.ndarray:
    """Matriz de passagem inteira invertível, no modo pedido."""
    while True:
        P = sc.convert(_draw(rng, (p, p), True), exact)
        if sc.rank(P, tol) == p:
            return P


@dataclass(frozen=True)
class CorpusSummary:
    count: int
    seed: int
    exact: bool
    max_dev: float
    max_curvature_dev: float
    max_scalar_dev: float
    max_invariance_dev: float
    max_composition_dev: float
    einstein_violations: int
    euclidean_checked: int
    euclidean_violations: int
    rejections: int
    tolerance: float

    @property
    def passed(self) -> bool:
        worst = max(
            self.max_dev,
            self.max_curvature_dev,
            self.max_scalar_dev,
            self.max_invariance_dev,
            self.max_composition_dev,
        )
        limit = 0.0 if self.exact else self.tolerance
        return worst <= limit and self.einstein_violations == 0 and self.euclidean_violations == 0

    def as_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["passed"] = self.passed
        return data


@dataclass(frozen=True, eq=False)
class CorpusResult:
    summary: CorpusSummary
    table: pd.DataFrame

    def to_csv(self, path: Union[str, Path]) -> None:
        self.table.to_csv(path, index=False)
        logger.info(f"tabela do corpus gravada em {path}")


def check_instance(
    alg: NilMetricAlgebra,
    rng: np.random.Generator,
    center_changes: int = 100,
    tol: Optional[float] = None,
) -> Dict[str, Any]:
    """Todas as comparações de uma instância, como desvios máximos."""
    exact = alg.exact
    koszul = levi_civita_koszul(alg)
    closed = levi_civita_closed_form(alg)
    R = curvature_definitional(alg, LeviCivitaTable(koszul))
    ricci = ricci_from_tensor(R)
    fast = ricci_fast(alg)
    j_plus, j_minus = j_plus_minus(alg)
    scalar = sc.trace(j_plus + j_minus)
    half = sc.frac(1, 2, exact)
    scalar_dev = max(abs(float(scalar - half * sc.trace(j_minus))), abs(float(scalar + sc.trace(j_plus))))
    composition_dev = max(float(sc.max_abs(j_plus @ j_minus)), float(sc.max_abs(j_minus @ j_plus)))
    invariance_dev = 0.0
    for _ in range(center_changes):
        moved = change_center_basis(alg, random_passage(rng, alg.p, exact, tol), tol)
        moved_plus, moved_minus = j_plus_minus(moved)
        invariance_dev = max(invariance_dev, sc.deviation(moved_plus, j_plus), sc.deviation(moved_minus, j_minus))
    fit = einstein_residual(alg, ricci)
    row: Dict[str, Any] = {
        "n": alg.n,
        "p": alg.p,
        "q": alg.space.q,
        "gamma_dev": sc.deviation(koszul, closed),
        "curvature_dev": sc.deviation(R, curvature_closed_form(alg)),
        "ricci_dev": sc.deviation(ricci, fast),
        "scalar_dev": scalar_dev,
        "composition_dev": composition_dev,
        "invariance_dev": invariance_dev,
        "scalar": float(scalar),
        "einstein_lambda": float(fit.lam),
        "einstein_residual": fit.residual,
        "einstein_ok": fit.consistent(tol),
        "euclidean_ok": None,
    }
    if alg.space.q == 0:
        report = euclidean_spectral_report(alg, tol)
        problems = report.violations(alg.n, tol)
        row["euclidean_ok"] = not problems
        if problems:
            logger.warning(f"proposição euclidiana falhou em {alg.name}: {problems}")
    return row


def run_corpus(
    count: int = 200,
    seed: int = 0,
    exact: bool = False,
    tol: Optional[float] = None,
    center_changes: int = 100,
    progress: bool = True,
) -> CorpusResult:
    """Instâncias com semente seed + índice; resumo dos piores desvios."""
    rows: List[Dict[str, Any]] = []
    total_rejections = 0
    for index in tqdm(range(count), desc="corpus", disable=not progress):
        rng = np.random.default_rng(seed + index)
        n, p, q = random_shape(rng)
        alg, rejections = random_algebra(rng, n, p, q, exact, tol)
        total_rejections += rejections
        row = check_instance(alg, rng, center_changes, tol)
        row.update({"index": index, "seed": seed + index, "rejections": rejections})
        rows.append(row)
    table = pd.DataFrame(rows)

    def worst(column: str) -> float:
        return float(table[column].max()) if not table.empty else 0.0

    euclidean = table[table["euclidean_ok"].notna()] if not table.empty else table
    summary = CorpusSummary(
        count=count,
        seed=seed,
        exact=exact,
        max_dev=worst("ricci_dev"),
        max_curvature_dev=max(worst("curvature_dev"), worst("gamma_dev")),
        max_scalar_dev=worst("scalar_dev"),
        max_invariance_dev=worst("invariance_dev"),
        max_composition_dev=worst("composition_dev"),
        einstein_violations=int((~table["einstein_ok"].astype(bool)).sum()) if not table.empty else 0,
        euclidean_checked=int(len(euclidean)),
        euclidean_violations=int((~euclidean["euclidean_ok"].astype(bool)).sum()) if len(euclidean) else 0,
        rejections=total_rejections,
        tolerance=sc.get_tolerance(tol),
    )
    logger.info(f"corpus de {count} álgebras: desvio máximo do Ricci {summary.max_dev}")
    return CorpusResult(summary, table)
