import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from susy_trm import trm

settings.register_profile("default", deadline=None, derandomize=True, print_blob=True)
settings.load_profile("default")

REFERENCE = Path(__file__).parent / "reference" / "reference.json"


def cplx(pair):
    return complex(pair[0], pair[1])


def energy(pair):
    """Frozen energies are stored as [re, im]; real ones come back as float."""
    e = cplx(pair)
    return e.real if e.imag == 0 else e


@pytest.fixture(scope="session")
def ref():
    return json.loads(REFERENCE.read_text())


@pytest.fixture(scope="session")
def p50():
    return trm.TrmParams(2.0, 50.0)


@pytest.fixture(scope="session")
def p10():
    return trm.TrmParams(2.0, 10.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ------------------------------------------------------------- acceptance lines

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """record(n, ok, detail): one PASS/FAIL line per criterion, repeated in the summary."""
    def record(n, ok, detail):
        line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
        _ACCEPTANCE[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
