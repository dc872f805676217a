import json
import random
from fractions import Fraction
from importlib import resources
from pathlib import Path

import pytest

from koszulres.blocks import make_system, parse_monomial_key
from koszulres.io import mep_from_document, system_from_document

FIXTURES = Path(__file__).parent / "fixtures"

# criterion id -> list of (test name, passed)
_CRITERIA: dict = {}


def load_document(name: str) -> dict:
    return json.loads(resources.files("koszulres").joinpath("data", name).read_text())


def load_system(name: str):
    return system_from_document(load_document(name))


def load_mep(name: str):
    return mep_from_document(load_document(name))


def load_symbol_maps() -> dict:
    return json.loads((FIXTURES / "symbol_maps.json").read_text())


def load_printed(name: str) -> list:
    """Printed matrix as rows of tokens like ``a1``, ``-b3`` or ``0``."""
    return [line.split() for line in (FIXTURES / name).read_text().splitlines() if line.strip()]


def specialize(system, symbol_maps, rng: random.Random, bound: int = 50):
    """Random integer values for the named coefficients of a symbolic system.

    Returns ``(numeric_system, values)``.
    """
    s = system.structure
    values, polys = {}, []
    for d, names in zip(system.degrees, symbol_maps):
        coeffs = {}
        for sym, key in names.items():
            values[sym] = Fraction(rng.randint(-bound, bound))
            coeffs[parse_monomial_key(s, key)] = values[sym]
        polys.append((d, coeffs))
    return make_system(s, polys), values


def printed_numeric(rows, values) -> list:
    def cell(tok):
        if tok == "0":
            return Fraction(0)
        if tok.startswith("-"):
            return -values[tok[1:]]
        return values[tok]

    return [[cell(t) for t in row] for row in rows]


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(id): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.user_properties and dict(report.user_properties).get("criterion")
    if marker:
        _CRITERIA.setdefault(marker, []).append((report.nodeid, report.outcome == "passed"))


@pytest.fixture(autouse=True)
def _record_criterion(request):
    m = request.node.get_closest_marker("criterion")
    if m:
        request.node.user_properties.append(("criterion", m.args[0]))
    yield


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for cid in _CRITERIA:
        results = _CRITERIA[cid]
        ok = all(passed for _, passed in results)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {cid} ({len(results)} checks)")
