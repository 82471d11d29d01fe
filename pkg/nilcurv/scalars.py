"""Escalares em dois modos (racional exato / float64) e álgebra linear básica.

No modo exato as matrizes são arrays numpy de ``dtype=object`` contendo
``fractions.Fraction``; no modo float são arrays ``float64`` comuns. As
funções aqui aceitam os dois e decidem o modo pelo ``dtype``.
"""
from __future__ import annotations

import logging
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from dotenv import load_dotenv

from .errors import DimensionMismatchError, SingularMatrixError

BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(dotenv_path=BASE_DIR / ".env", override=False)

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-9

Scalar = Union[Fraction, float]


def get_tolerance(tol: Optional[float] = None) -> float:
    """Tolerância efetiva: argumento explícito, depois NILCURV_TOL, depois 1e-9."""
    if tol is not None:
        return float(tol)
    raw = os.getenv("NILCURV_TOL")
    if not raw:
        return DEFAULT_TOLERANCE
    try:
        value = float(raw)
    except ValueError:
        logger.warning(f"NILCURV_TOL inválido ({raw!r}); usando {DEFAULT_TOLERANCE}")
        return DEFAULT_TOLERANCE
    if value <= 0:
        logger.warning(f"NILCURV_TOL deve ser positivo ({raw!r}); usando {DEFAULT_TOLERANCE}")
        return DEFAULT_TOLERANCE
    return value


def to_scalar(value: Any, exact: bool) -> Scalar:
    """Converte números ou strings "num/den" para o modo pedido."""
    if exact:
        if isinstance(value, Fraction):
            return value
        if isinstance(value, (bool, np.bool_)):
            return Fraction(int(value))
        if isinstance(value, (int, np.integer)):
            return Fraction(int(value))
        if isinstance(value, (float, np.floating)):
            return Fraction(float(value))
        if isinstance(value, str):
            return Fraction(value.strip())
        return Fraction(value)
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


def is_rational_input(value: Any) -> bool:
    """Verdadeiro quando o valor pode entrar no modo exato sem arredondamento."""
    if isinstance(value, (Fraction, int, np.integer)):
        return True
    if isinstance(value, str):
        try:
            Fraction(value.strip())
        except ValueError:
            return False
        return True
    return False


def infer_exact(values: Iterable[Any]) -> bool:
    return all(is_rational_input(v) for v in values)


def frac(num: int, den: int, exact: bool) -> Scalar:
    return Fraction(num, den) if exact else num / den


def is_exact(arr: np.ndarray) -> bool:
    return np.asarray(arr).dtype == object


def as_array(data: Any, exact: bool) -> np.ndarray:
    """Array no modo pedido, convertendo entrada a entrada."""
    raw = np.array(data, dtype=object)
    out = np.empty(raw.shape, dtype=object if exact else float)
    for idx in np.ndindex(raw.shape):
        out[idx] = to_scalar(raw[idx], exact)
    return out


def convert(arr: np.ndarray, exact: bool) -> np.ndarray:
    if is_exact(arr) == exact:
        return arr
    return as_array(arr, exact)


def to_float(arr: np.ndarray) -> np.ndarray:
    return np.asarray(arr).astype(float)


def zeros(shape: Union[int, Sequence[int]], exact: bool) -> np.ndarray:
    if not exact:
        return np.zeros(shape, dtype=float)
    out = np.empty(shape, dtype=object)
    out.fill(Fraction(0))
    return out


def identity(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    one = Fraction(1) if exact else 1.0
    for i in range(n):
        out[i, i] = one
    return out


def unit_vector(n: int, index: int, exact: bool) -> np.ndarray:
    out = zeros(n, exact)
    out[index] = Fraction(1) if exact else 1.0
    return out


def max_abs(arr: np.ndarray) -> Scalar:
    """Maior valor absoluto das entradas (0 para arrays vazios)."""
    arr = np.asarray(arr)
    if arr.size == 0:
        return Fraction(0) if is_exact(arr) else 0.0
    if is_exact(arr):
        return max(abs(x) for x in arr.flat)
    return float(np.max(np.abs(arr)))


def is_zero(arr: np.ndarray, tol: Optional[float] = None) -> bool:
    arr = np.asarray(arr)
    if is_exact(arr):
        return all(x == 0 for x in arr.flat)
    return max_abs(arr) <= get_tolerance(tol)


def deviation(a: np.ndarray, b: np.ndarray) -> float:
    """max|a - b| como float, para relatórios."""
    return float(max_abs(np.asarray(a) - np.asarray(b)))


def allclose(a: np.ndarray, b: np.ndarray, tol: Optional[float] = None) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        return False
    return is_zero(a - b, tol)


def row_echelon(matrix: np.ndarray, tol: Optional[float] = None) -> Tuple[np.ndarray, List[int]]:
    """Forma escalonada reduzida e colunas pivô.

    Modo exato: primeiro pivô não nulo. Modo float: pivoteamento parcial,
    entradas abaixo de tol·max(‖M‖, 1) contam como zero.
    """
    m = np.array(matrix, copy=True)
    if m.ndim != 2:
        raise DimensionMismatchError(f"expected a matrix, got shape {m.shape}")
    exact = is_exact(m)
    if not exact:
        m = m.astype(float)
        threshold = get_tolerance(tol) * max(float(max_abs(m)), 1.0)
    rows, cols = m.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        if exact:
            candidates = [i for i in range(r, rows) if m[i, c] != 0]
            if not candidates:
                continue
            p = candidates[0]
        else:
            p = r + int(np.argmax(np.abs(m[r:, c])))
            if abs(m[p, c]) <= threshold:
                m[r:, c] = 0.0
                continue
        if p != r:
            m[[r, p]] = m[[p, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r and m[i, c] != 0:
                m[i] = m[i] - m[i, c] * m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(matrix: np.ndarray, tol: Optional[float] = None) -> int:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0
    return len(row_echelon(matrix, tol)[1])


def null_space(matrix: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Base do núcleo em colunas (n × k), pela forma escalonada."""
    matrix = np.asarray(matrix)
    exact = is_exact(matrix)
    cols = matrix.shape[1]
    if matrix.shape[0] == 0:
        return identity(cols, exact)
    reduced, pivots = row_echelon(matrix, tol)
    free = [c for c in range(cols) if c not in pivots]
    basis = zeros((cols, len(free)), exact)
    one = Fraction(1) if exact else 1.0
    for k, f in enumerate(free):
        basis[f, k] = one
        for row, pc in enumerate(pivots):
            basis[pc, k] = -reduced[row, f]
    return basis


def column_basis(matrix: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    """Colunas independentes de ``matrix`` que geram seu espaço coluna."""
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return matrix.reshape(matrix.shape[0], 0)
    _, pivots = row_echelon(matrix, tol)
    return matrix[:, pivots]


def same_span(u: np.ndarray, v: np.ndarray, tol: Optional[float] = None) -> bool:
    """Compara subespaços gerados por colunas via posto da justaposição."""
    ru = rank(u, tol)
    rv = rank(v, tol)
    if ru != rv:
        return False
    if ru == 0:
        return True
    return rank(np.hstack([u, v]), tol) == ru


def inverse(matrix: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    matrix = np.asarray(matrix)
    n, m = matrix.shape
    if n != m:
        raise DimensionMismatchError(f"cannot invert a {n}x{m} matrix")
    if not is_exact(matrix):
        if rank(matrix, tol) < n:
            raise SingularMatrixError("matrix is singular")
        return np.linalg.inv(matrix)
    augmented = np.hstack([matrix, identity(n, True)])
    reduced, pivots = row_echelon(augmented)
    if pivots[:n] != list(range(n)):
        raise SingularMatrixError("matrix is singular")
    return reduced[:, n:]


def solve(matrix: np.ndarray, rhs: np.ndarray, tol: Optional[float] = None) -> np.ndarray:
    return inverse(matrix, tol) @ rhs


def trace(matrix: np.ndarray) -> Scalar:
    matrix = np.asarray(matrix)
    total = Fraction(0) if is_exact(matrix) else 0.0
    for i in range(min(matrix.shape)):
        total = total + matrix[i, i]
    return total


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> Scalar:
    exact = is_exact(a)
    total = Fraction(0) if exact else 0.0
    for x, y in zip(np.asarray(a).flat, np.asarray(b).flat):
        total = total + x * y
    return total
