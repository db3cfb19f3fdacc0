from __future__ import annotations

from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def smiles_corpus() -> list[str]:
    lines = (DATA_DIR / "corpus_smiles.txt").read_text().splitlines()
    return [line.strip() for line in lines if line.strip()]


@pytest.fixture(scope="session")
def re3c_text() -> str:
    return (DATA_DIR / "re3c.poscar").read_text()


@pytest.fixture(scope="session")
def os3re_text() -> str:
    return (DATA_DIR / "os3re.poscar").read_text()
