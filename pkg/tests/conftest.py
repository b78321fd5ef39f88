from __future__ import annotations

import sys

import pytest

from proequip import catalog
from proequip.equip import CatEquipment, SpanEquipment, finite_set, truncate_instance


@pytest.fixture(scope="session")
def cat_inst():
    return CatEquipment()


@pytest.fixture(scope="session")
def span_inst():
    return SpanEquipment()


@pytest.fixture(scope="session")
def cat12(cat_inst):
    """The truncated Cat equipment on the point and the walking arrow."""
    return truncate_instance(cat_inst, [catalog.category("1"), catalog.category("2")])


@pytest.fixture(scope="session")
def span01(span_inst):
    return truncate_instance(span_inst, [finite_set(0), finite_set(1)])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
