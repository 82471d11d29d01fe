"""Linha de comando: verify, family, signature, group-metric, corpus e runs.

Códigos de saída: 0 aprovado, 1 falha semântica, 2 erro de leitura/formato.
O JSON vai para stdout; logs e diagnósticos para stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from . import runs
from .corpus import run_corpus
from .curvature import curvature_report
from .errors import (
    ConsistencyError,
    ConstraintViolation,
    InvalidAlgebraError,
    MalformedFileError,
    NilcurvError,
    VerificationError,
)
from .families import FAMILIES, LorentzFamilyParams, build_family
from .group import TheoremMainReport, verify_theorem_main
from .pseudo_euclidean import make_space, sym_minus_signature
from .schemas import CorpusSummaryModel, RunStatsModel, SymMinusModel, TheoremMainModel
from .serialization import dump_algebra, load_algebra, report_model, to_json

BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(dotenv_path=BASE_DIR / ".env", override=False)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_MALFORMED = 2


@dataclass
class Outcome:
    code: int
    output: Optional[str] = None
    max_deviation: Optional[float] = None
    details: Dict[str, Any] = field(default_factory=dict)


def _read_params(raw: Optional[str]) -> Dict[str, Any]:
    """Parâmetros inline (JSON) ou caminho de arquivo JSON."""
    if raw is None:
        return {}
    text = raw
    if not raw.lstrip().startswith("{"):
        try:
            text = Path(raw).read_text(encoding="utf-8")
        except OSError as exc:
            raise MalformedFileError(f"cannot read params {raw}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"invalid params JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise MalformedFileError("params must be a JSON object")
    return data


def cmd_verify(args: argparse.Namespace) -> Outcome:
    alg = load_algebra(args.file, exact=True if args.exact else None, tol=args.tol)
    report = curvature_report(alg, args.tol)
    model = report_model(alg, report)
    return Outcome(EXIT_OK, to_json(model), report.oracle_deviation, {"name": alg.name, "flags": model.flags})


def cmd_family(args: argparse.Namespace) -> Outcome:
    raw = _read_params(args.params)
    if args.exact:
        raw["exact"] = True
    try:
        alg = build_family(args.name, raw, args.tol)
    except ValidationError as exc:
        raise MalformedFileError(f"invalid parameters for {args.name}: {exc}") from exc
    text = dump_algebra(alg, args.output)
    return Outcome(EXIT_OK, None if args.output else text, None, {"family": args.name, "dim": alg.n})


def cmd_signature(args: argparse.Namespace) -> Outcome:
    report = sym_minus_signature(make_space(args.q, args.n, exact=False), args.tol)
    model = SymMinusModel(
        q=report.q,
        n=report.n,
        dim=report.dim,
        sig=[report.sig_minus, report.sig_plus],
        degenerate=report.degenerate,
        matches_formula=report.matches_formula,
    )
    code = EXIT_OK if report.matches_formula else EXIT_FAILED
    return Outcome(code, to_json(model), None, {"q": args.q, "n": args.n})


def _theorem_model(report: TheoremMainReport) -> TheoremMainModel:
    return TheoremMainModel(
        samples=report.samples,
        seed=report.seed,
        mode="exact" if report.exact else "float",
        max_product_deviation=report.max_product_deviation,
        max_metric_deviation=report.max_metric_deviation,
        max_dev=max(report.max_product_deviation, report.max_metric_deviation),
        signature_preserved=report.signature_preserved,
        passed=report.passed,
    )


def cmd_group_metric(args: argparse.Namespace) -> Outcome:
    raw = _read_params(args.params)
    if args.exact:
        raw["exact"] = True
    try:
        params = LorentzFamilyParams.model_validate(raw)
    except ValidationError as exc:
        raise MalformedFileError(f"invalid lorentz parameters: {exc}") from exc
    try:
        report = verify_theorem_main(params, args.samples, args.seed, args.tol)
        code = EXIT_OK
    except VerificationError as exc:
        logger.error(str(exc))
        report = exc.report
        code = EXIT_FAILED
    model = _theorem_model(report)
    return Outcome(code, to_json(model), model.max_dev, {"samples": args.samples, "seed": args.seed})


def cmd_corpus(args: argparse.Namespace) -> Outcome:
    result = run_corpus(
        count=args.count,
        seed=args.seed,
        exact=args.exact,
        tol=args.tol,
        center_changes=args.center_changes,
        progress=not args.no_progress,
    )
    if args.csv:
        result.to_csv(args.csv)
    summary = result.summary
    data = summary.as_dict()
    model = CorpusSummaryModel(
        mode="exact" if summary.exact else "float",
        **{k: v for k, v in data.items() if k in CorpusSummaryModel.model_fields and k != "mode"},
    )
    code = EXIT_OK if summary.passed else EXIT_FAILED
    return Outcome(code, to_json(model), summary.max_dev, {"count": args.count, "seed": args.seed})


def cmd_runs(args: argparse.Namespace) -> Outcome:
    if args.action == "stats":
        return Outcome(EXIT_OK, to_json(RunStatsModel(**runs.get_run_stats())))
    return Outcome(EXIT_OK, runs.export_runs(args.format, args.command).rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="tolerância (padrão: NILCURV_TOL ou 1e-9)")
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", dest="text", action="store_false", default=False, help="saída JSON (padrão)")
    output.add_argument("--text", dest="text", action="store_true", default=False, help="saída \"chave: valor\", uma linha por campo")
    common.add_argument("--record", action="store_true", help="grava a execução no banco de execuções")

    parser = argparse.ArgumentParser(prog="nilcurv", description="Curvatura de álgebras de Lie 2-nilpotentes pseudo-euclidianas")
    sub = parser.add_subparsers(dest="cmd", required=True)

    verify = sub.add_parser("verify", parents=[common], help="valida uma álgebra e emite o relatório de curvatura")
    verify.add_argument("file")
    verify.add_argument("--exact", action="store_true", help="converte entradas float para racionais exatos")
    verify.set_defaults(handler=cmd_verify)

    family = sub.add_parser("family", parents=[common], help="constrói uma álgebra de família nomeada")
    family.add_argument("name", choices=sorted(FAMILIES))
    family.add_argument("--params", default=None, help="JSON inline ou caminho de arquivo")
    family.add_argument("-o", "--output", default=None)
    family.add_argument("--exact", action="store_true")
    family.set_defaults(handler=cmd_family)

    signature = sub.add_parser("signature", parents=[common], help="assinatura de ⟨,⟩* em Sym⁻")
    signature.add_argument("--q", type=int, required=True)
    signature.add_argument("--n", type=int, required=True)
    signature.set_defaults(handler=cmd_signature)

    group = sub.add_parser("group-metric", parents=[common], help="confere lei de grupo e métrica da família lorentziana")
    group.add_argument("--params", default=None)
    group.add_argument("--samples", type=int, default=100)
    group.add_argument("--seed", type=int, default=0)
    group.add_argument("--exact", action="store_true")
    group.set_defaults(handler=cmd_group_metric)

    corpus = sub.add_parser("corpus", parents=[common], help="portão de equivalência sobre álgebras aleatórias")
    corpus.add_argument("--count", type=int, default=200)
    corpus.add_argument("--seed", type=int, default=0)
    corpus.add_argument("--exact", action="store_true")
    corpus.add_argument("--center-changes", type=int, default=100)
    corpus.add_argument("--csv", default=None, help="grava a tabela por instância")
    corpus.add_argument("--no-progress", action="store_true")
    corpus.set_defaults(handler=cmd_corpus)

    runs_parser = sub.add_parser("runs", parents=[common], help="estatísticas e exportação do registro de execuções")
    runs_parser.add_argument("action", choices=["stats", "export"])
    runs_parser.add_argument("--format", choices=["json", "csv"], default="json")
    runs_parser.add_argument("--command", default=None)
    runs_parser.set_defaults(handler=cmd_runs)
    return parser


def _render_text(output: str) -> str:
    """Objeto JSON de topo vira linhas "chave: valor"; o resto passa intacto (CSV)."""
    try:
        data = json.loads(output)
    except json.JSONDecodeError:
        return output
    if not isinstance(data, dict):
        return output
    lines = []
    for key, value in data.items():
        shown = value if isinstance(value, str) else json.dumps(value, ensure_ascii=False)
        lines.append(f"{key}: {shown}")
    return "\n".join(lines)


def _configure_logging() -> None:
    level = os.getenv("NILCURV_LOG_LEVEL", "INFO").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def _dispatch(args: argparse.Namespace) -> Outcome:
    try:
        return args.handler(args)
    except MalformedFileError as exc:
        logger.error(f"Erro de leitura: {exc}")
        return Outcome(EXIT_MALFORMED, details={"error": str(exc)})
    except InvalidAlgebraError as exc:
        logger.error(f"Álgebra inválida: {exc.violations}")
        return Outcome(EXIT_FAILED, details={"violations": exc.violations})
    except ConstraintViolation as exc:
        logger.error(f"Restrição violada: {exc}")
        return Outcome(EXIT_FAILED, details={"constraint": exc.constraint})
    except ConsistencyError as exc:
        logger.error(f"Inconsistência: {exc}")
        return Outcome(EXIT_FAILED, max_deviation=float(exc.deviation), details={"what": exc.what})
    except NilcurvError as exc:
        logger.error(f"Erro: {exc}")
        return Outcome(EXIT_FAILED, details={"error": str(exc)})


def main(argv: Optional[List[str]] = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    try:
        outcome = _dispatch(args)
    except Exception:
        logger.exception("Erro inesperado")
        outcome = Outcome(EXIT_FAILED)
    if outcome.output is not None:
        print(_render_text(outcome.output) if args.text else outcome.output)
    if args.cmd != "runs" and (args.record or runs.recording_enabled()):
        elapsed_ms = (time.perf_counter() - started) * 1000
        try:
            runs.record_run(
                args.cmd,
                outcome.code,
                outcome.code == EXIT_OK,
                outcome.max_deviation,
                round(elapsed_ms, 2),
                outcome.details,
            )
        except Exception as exc:
            logger.warning(f"Erro ao gravar execução: {exc}")
    return outcome.code


if __name__ == "__main__":
    raise SystemExit(main())
