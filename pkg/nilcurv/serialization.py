"""Codec JSON: racionais como "num/den", floats pela representação mais curta."""
from __future__ import annotations

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from pydantic import BaseModel, ValidationError

from .algebra import NilMetricAlgebra, center_type, make_algebra
from .curvature import CurvatureReport
from .errors import InvalidAlgebraError, MalformedFileError, NilcurvError
from .pseudo_euclidean import make_space, space_from_gram
from .schemas import AlgebraFile, CurvatureReportModel, EinsteinModel

logger = logging.getLogger(__name__)


def encode_scalar(value: Any) -> Union[str, float]:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}"
    return float(value)


def encode_array(arr: np.ndarray) -> Any:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return encode_scalar(arr.item())
    return [encode_array(item) for item in arr]


def _mode_name(exact: bool) -> str:
    return "exact" if exact else "float"


def algebra_to_file(alg: NilMetricAlgebra) -> AlgebraFile:
    return AlgebraFile(
        dim=alg.n,
        q=alg.space.q,
        gram=None if alg.space.canonical else encode_array(alg.gram),
        center=encode_array(alg.center.T),
        js=encode_array(alg.js),
        mode=_mode_name(alg.exact),
        name=alg.name,
    )


def algebra_from_file(doc: AlgebraFile, exact: Optional[bool] = None, tol: Optional[float] = None) -> NilMetricAlgebra:
    """Reconstrói e valida; ``exact`` força o modo (floats viram racionais binários exatos)."""
    exact = doc.mode == "exact" if exact is None else exact
    try:
        if doc.gram is None:
            space = make_space(doc.q, doc.dim, exact)
        else:
            space = space_from_gram(doc.gram, exact, tol)
            if space.q != doc.q or space.n != doc.dim:
                raise InvalidAlgebraError(
                    [f"declared (q={doc.q}, n={doc.dim}) but gram has (q={space.q}, n={space.n})"]
                )
        return make_algebra(space, doc.center, doc.js, name=doc.name, tol=tol)
    except InvalidAlgebraError:
        raise
    except NilcurvError as exc:
        raise InvalidAlgebraError([str(exc)]) from exc
    except (ValueError, TypeError) as exc:
        # entrada ilegível ("abc") ou linha irregular
        raise MalformedFileError(f"unreadable matrix entry: {exc}") from exc


def parse_algebra(text: str) -> AlgebraFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"invalid JSON: {exc}") from exc
    try:
        return AlgebraFile.model_validate(raw)
    except ValidationError as exc:
        raise MalformedFileError(f"invalid algebra file: {exc}") from exc


def load_algebra(path: Union[str, Path], exact: Optional[bool] = None, tol: Optional[float] = None) -> NilMetricAlgebra:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise MalformedFileError(f"cannot read {path}: {exc}") from exc
    return algebra_from_file(parse_algebra(text), exact, tol)


def to_json(model: BaseModel) -> str:
    """JSON determinístico (chaves na ordem do schema, indentado)."""
    return json.dumps(model.model_dump(mode="json"), indent=2, ensure_ascii=False)


def dump_algebra(alg: NilMetricAlgebra, path: Optional[Union[str, Path]] = None) -> str:
    text = to_json(algebra_to_file(alg))
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
        logger.info(f"álgebra gravada em {path}")
    return text


def report_model(alg: NilMetricAlgebra, report: CurvatureReport) -> CurvatureReportModel:
    return CurvatureReportModel(
        name=alg.name,
        dim=alg.n,
        q=alg.space.q,
        mode=_mode_name(report.exact),
        tolerance=report.tolerance,
        ricci=encode_array(report.ricci),
        scalar=encode_scalar(report.scalar),
        jplus=encode_array(report.jplus),
        jminus=encode_array(report.jminus),
        einstein=EinsteinModel(lam=encode_scalar(report.einstein.lam), residual=report.einstein.residual),
        flags=dict(report.flags),
        center_type=center_type(alg, report.tolerance).kind,
        oracle_deviation=report.oracle_deviation,
    )
