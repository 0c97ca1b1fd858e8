from __future__ import annotations

import pytest

from oak import (HashedBagOfWordsProvider, OakService, PropertyGraph, ServiceConfig,
                 VectorIndex, generate_defect_benchmark)

# --- shared fixtures ---------------------------------------------------------


@pytest.fixture
def provider() -> HashedBagOfWordsProvider:
    return HashedBagOfWordsProvider()


@pytest.fixture
def graph() -> PropertyGraph:
    return PropertyGraph()


@pytest.fixture
def index(graph) -> VectorIndex:
    return VectorIndex(graph)


@pytest.fixture
def service() -> OakService:
    """Fully in-memory service with builtin providers."""
    return OakService(ServiceConfig())


@pytest.fixture
def catalog_path(tmp_path):
    """A 28-defect synthetic catalog materialized on disk (seed 0)."""
    return generate_defect_benchmark(0).materialize(tmp_path / "catalog")


@pytest.fixture
def loaded_service(catalog_path) -> OakService:
    svc = OakService(ServiceConfig())
    svc.ingest_catalog(catalog_path)
    return svc


# --- acceptance criteria reporting -----------------------------------------------
#
# Every test in test_acceptance.py represents one acceptance criterion; the
# terminal summary prints one PASS/FAIL line per criterion so a suite run
# doubles as the acceptance report.

_acceptance_reports: dict[str, object] = {}
_acceptance_labels: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance" in item.nodeid:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _acceptance_labels[item.nodeid] = doc


def pytest_runtest_logreport(report):
    if report.when == "call" and report.nodeid in _acceptance_labels:
        _acceptance_reports[report.nodeid] = report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_reports:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid in sorted(_acceptance_reports):
        report = _acceptance_reports[nodeid]
        status = "PASS" if report.passed else "FAIL"
        terminalreporter.write_line(f"{status}: {_acceptance_labels[nodeid]}")
