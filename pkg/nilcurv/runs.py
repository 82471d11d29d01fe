"""Registro opcional das execuções de verificação em SQLite."""
from __future__ import annotations

import csv
import io
import json
import logging
import os
import sqlite3
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

BASE_DIR = Path(__file__).resolve().parent.parent
load_dotenv(dotenv_path=BASE_DIR / ".env", override=False)

logger = logging.getLogger(__name__)

RUNS_DB_PATH = Path(os.getenv("NILCURV_RUNS_DB", str(BASE_DIR / "runs.db")))

RUN_FIELDS = ["id", "command", "exit_code", "passed", "max_deviation", "elapsed_ms", "details", "created_at"]


def recording_enabled() -> bool:
    """Gravação ligada quando NILCURV_RUNS_DB está definido."""
    return bool(os.getenv("NILCURV_RUNS_DB"))


def get_db_connection() -> sqlite3.Connection:
    """Cria e retorna uma conexão com o banco de execuções."""
    RUNS_DB_PATH.parent.mkdir(parents=True, exist_ok=True)
    conn = sqlite3.connect(str(RUNS_DB_PATH))
    conn.row_factory = sqlite3.Row
    return conn


def init_runs_db() -> None:
    conn = get_db_connection()
    try:
        conn.execute(
            """
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT NOT NULL,
                exit_code INTEGER NOT NULL,
                passed BOOLEAN,
                max_deviation REAL,
                elapsed_ms REAL,
                details TEXT,
                created_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP
            )
            """
        )
        conn.execute("CREATE INDEX IF NOT EXISTS idx_runs_command ON runs(command)")
        conn.commit()
    finally:
        conn.close()


def record_run(
    command: str,
    exit_code: int,
    passed: bool,
    max_deviation: Optional[float] = None,
    elapsed_ms: Optional[float] = None,
    details: Optional[Dict[str, Any]] = None,
) -> int:
    """Registra uma execução e retorna o ID."""
    init_runs_db()
    conn = get_db_connection()
    try:
        cursor = conn.execute(
            """
            INSERT INTO runs (command, exit_code, passed, max_deviation, elapsed_ms, details)
            VALUES (?, ?, ?, ?, ?, ?)
            """,
            (
                command,
                exit_code,
                passed,
                max_deviation,
                elapsed_ms,
                json.dumps(details or {}, ensure_ascii=False, sort_keys=True),
            ),
        )
        conn.commit()
        return cursor.lastrowid
    finally:
        conn.close()


def get_runs_raw(command: Optional[str] = None, limit: Optional[int] = None) -> List[Dict[str, Any]]:
    """Histórico bruto de execuções, mais recentes primeiro."""
    init_runs_db()
    conn = get_db_connection()
    try:
        where_sql = "WHERE command = ?" if command else ""
        params: List[Any] = [command] if command else []
        limit_sql = ""
        if limit:
            limit_sql = "LIMIT ?"
            params.append(limit)
        rows = conn.execute(
            f"""
            SELECT id, command, exit_code, passed, max_deviation, elapsed_ms, details, created_at
            FROM runs
            {where_sql}
            ORDER BY id DESC
            {limit_sql}
            """,
            tuple(params),
        ).fetchall()
        return [
            {
                "id": row["id"],
                "command": row["command"],
                "exit_code": row["exit_code"],
                "passed": bool(row["passed"]),
                "max_deviation": row["max_deviation"],
                "elapsed_ms": row["elapsed_ms"],
                "details": json.loads(row["details"]) if row["details"] else {},
                "created_at": row["created_at"],
            }
            for row in rows
        ]
    finally:
        conn.close()


def get_run_stats() -> Dict[str, Any]:
    """Totais, taxa de aprovação e pior desvio por comando."""
    init_runs_db()
    conn = get_db_connection()
    try:
        total_row = conn.execute("SELECT COUNT(*) as count FROM runs").fetchone()
        total = total_row["count"] if total_row else 0
        passed_row = conn.execute("SELECT COUNT(*) as count FROM runs WHERE passed = 1").fetchone()
        passed = passed_row["count"] if passed_row else 0
        rows = conn.execute(
            """
            SELECT command, COUNT(*) as count, SUM(passed) as passed, MAX(max_deviation) as worst
            FROM runs
            GROUP BY command
            ORDER BY command
            """
        ).fetchall()
        by_command = {
            row["command"]: {
                "count": row["count"],
                "passed": row["passed"] or 0,
                "worst_deviation": row["worst"],
            }
            for row in rows
        }
        return {
            "total_runs": total,
            "passed_runs": passed,
            "failed_runs": total - passed,
            "pass_rate": round(passed / total * 100, 2) if total else 0.0,
            "by_command": by_command,
        }
    finally:
        conn.close()


def serialize_to_csv(records: List[Dict[str, Any]], fieldnames: List[str]) -> str:
    output = io.StringIO()
    writer = csv.DictWriter(output, fieldnames=fieldnames)
    writer.writeheader()
    for record in records:
        row = {field: record.get(field) for field in fieldnames}
        if isinstance(row.get("details"), dict):
            row["details"] = json.dumps(row["details"], ensure_ascii=False, sort_keys=True)
        writer.writerow(row)
    return output.getvalue()


def export_runs(export_format: str = "json", command: Optional[str] = None) -> str:
    records = get_runs_raw(command=command)
    if export_format == "json":
        return json.dumps(records, ensure_ascii=False, indent=2)
    if export_format == "csv":
        return serialize_to_csv(records, RUN_FIELDS)
    raise ValueError(f"Formato de exportação inválido: {export_format}")
