"""Schemas pydantic dos arquivos de álgebra e dos relatórios JSON."""
from __future__ import annotations

from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field

# "num/den" no modo exato, número no modo float
Entry = Union[str, float, int]


class AlgebraFile(BaseModel):
    """Arquivo de álgebra: base distinguida, centro e endomorfismos de estrutura."""
    dim: int = Field(..., ge=1, description="Dimensão n")
    q: int = Field(0, ge=0, description="Número de pares isotrópicos (índice negativo)")
    gram: Optional[List[List[Entry]]] = Field(None, description="Gram n×n; ausente = canônica")
    center: List[List[Entry]] = Field(..., min_length=1, description="Vetores e_1, ..., e_p")
    js: List[List[List[Entry]]] = Field(..., min_length=1, description="Matrizes J_1, ..., J_p")
    mode: Literal["exact", "float"] = "exact"
    name: str = ""


class EinsteinModel(BaseModel):
    lam: Entry
    residual: float


class CurvatureReportModel(BaseModel):
    name: str
    dim: int
    q: int
    mode: Literal["exact", "float"]
    tolerance: float
    ricci: List[List[Entry]]
    scalar: Entry
    jplus: List[List[Entry]]
    jminus: List[List[Entry]]
    einstein: EinsteinModel
    flags: Dict[str, bool]
    center_type: str
    oracle_deviation: float


class SymMinusModel(BaseModel):
    q: int
    n: int
    dim: int
    sig: List[int] = Field(..., description="[negativos, positivos]")
    degenerate: int
    matches_formula: bool


class TheoremMainModel(BaseModel):
    samples: int
    seed: int
    mode: Literal["exact", "float"]
    max_product_deviation: float
    max_metric_deviation: float
    max_dev: float
    signature_preserved: bool
    passed: bool


class CorpusSummaryModel(BaseModel):
    count: int
    seed: int
    mode: Literal["exact", "float"]
    max_dev: float = Field(..., description="max |ricci_fast − ricci_bruteforce|")
    max_curvature_dev: float
    max_scalar_dev: float
    max_invariance_dev: float
    max_composition_dev: float
    einstein_violations: int
    euclidean_checked: int
    euclidean_violations: int
    rejections: int
    passed: bool


class RunStatsModel(BaseModel):
    total_runs: int
    passed_runs: int
    failed_runs: int
    pass_rate: float
    by_command: Dict[str, Dict[str, Optional[Union[int, float]]]]
