"""Curvatura de álgebras de Lie 2-nilpotentes com métricas pseudo-euclidianas."""
from .algebra import NilMetricAlgebra, bracket, make_algebra, validate
from .curvature import curvature_report, ricci_bruteforce, ricci_fast, scalar_curvature
from .errors import NilcurvError
from .pseudo_euclidean import PseudoEuclideanSpace, make_space

__all__ = [
    "NilMetricAlgebra",
    "NilcurvError",
    "PseudoEuclideanSpace",
    "bracket",
    "curvature_report",
    "make_algebra",
    "make_space",
    "ricci_bruteforce",
    "ricci_fast",
    "scalar_curvature",
    "validate",
]
