import csv
from pathlib import Path

import numpy as np
import pytest

import mvcable
from mvcable import PILC_TABLE1, XLPE_TABLE1, Insulation

DATA = Path(mvcable.__file__).parent / "data"
PAPER = DATA / "paper"
SCENARIOS = DATA / "scenarios"


def load_table(name):
    """Numeric columns of a bundled CSV as a dict of arrays."""
    path = name if isinstance(name, Path) else PAPER / name
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    return {k: np.array([float(r[k]) for r in rows]) for k in rows[0]}


@pytest.fixture
def pilc():
    return PILC_TABLE1


@pytest.fixture
def xlpe():
    return XLPE_TABLE1


@pytest.fixture
def specs():
    return {Insulation.PILC: PILC_TABLE1, Insulation.XLPE: XLPE_TABLE1}


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
