"""Fixtures compartilhadas para a suíte de testes."""
from __future__ import annotations

import tempfile
from pathlib import Path
from typing import Iterator

import numpy as np
import pytest

from nilcurv import runs
from nilcurv.families import (
    LorentzFamilyParams,
    euclidean_heisenberg,
    flat_h3_lorentz,
    lorentz_ricci_flat,
)


@pytest.fixture(autouse=True)
def isolated_environment(monkeypatch: pytest.MonkeyPatch) -> None:
    """Nenhum teste depende de NILCURV_TOL ou grava execuções por acidente."""
    monkeypatch.delenv("NILCURV_TOL", raising=False)
    monkeypatch.delenv("NILCURV_RUNS_DB", raising=False)


@pytest.fixture()
def runs_db_path(monkeypatch: pytest.MonkeyPatch) -> Iterator[Path]:
    """Banco de execuções isolado para cada teste."""
    with tempfile.TemporaryDirectory() as tmp_dir:
        db_path = Path(tmp_dir) / "runs_test.db"
        monkeypatch.setattr(runs, "RUNS_DB_PATH", db_path)
        runs.init_runs_db()
        yield db_path


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture()
def flat_h3():
    return flat_h3_lorentz()


@pytest.fixture()
def euclidean_h3():
    return euclidean_heisenberg([1])


@pytest.fixture()
def dim5_params() -> LorentzFamilyParams:
    """Instância pitagórica (3, 4, 5) de dimensão 5."""
    return LorentzFamilyParams(p=1, r=1, q=0, M1=[[3], [4]], A=[1, 2], lambdas=[5])


@pytest.fixture()
def dim5_lorentz(dim5_params):
    return lorentz_ricci_flat(dim5_params)


@pytest.fixture()
def generic_lorentz_params() -> LorentzFamilyParams:
    """p=2, r=1, q=2 com Σx² + Σy² = 9 + 16 = λ² e span{B, Y} = ℝ²."""
    return LorentzFamilyParams(
        p=2,
        r=1,
        q=2,
        M1=[[1, 2], [2, 0]],
        M2=[[2, 2], [2, -2]],
        A=[1, -1],
        B=[1, 1],
        lambdas=[5],
    )
