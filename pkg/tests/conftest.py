# tests/conftest.py
# ─────────────────────────────────────────────────────────────────────────────
"""Shared fixtures: the shipped contracts, a weaving helper and seeded RNGs."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from compiler.dsl import parse_contract
from compiler.weaver import apply_plugins, relax_for_plugins
from models.contract import Contract
from models.plugins import AugmentedContract, PluginSet

ROOT = Path(__file__).resolve().parents[1]
CONTRACTS = ROOT / "contracts"
SCHEDULES = CONTRACTS / "schedules"
GOLDEN = Path(__file__).resolve().parent / "golden"

BLINDED = "0x" + "ab" * 32
CREATION_TIME = 1_000
CREATOR = "creator"


def pytest_addoption(parser):
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="rewrite tests/golden/*.sol from the current emitter output",
    )


@pytest.fixture
def update_golden(request) -> bool:
    return request.config.getoption("--update-golden")


def load_contract(name: str) -> Contract:
    return parse_contract((CONTRACTS / f"{name}.fsm").read_text(encoding="utf-8"))


def weave(contract: Contract, plugins: PluginSet | str = "") -> AugmentedContract:
    """Relax what the plugin set cannot honour, then weave (the CLI default)."""
    if isinstance(plugins, str):
        plugins = PluginSet.from_names(plugins.split(","))
    relaxed, _ = relax_for_plugins(contract, plugins)
    return apply_plugins(relaxed, plugins)


@pytest.fixture(scope="session")
def auction() -> Contract:
    return load_contract("blind_auction")


@pytest.fixture(scope="session")
def vulnerable_auction() -> Contract:
    return load_contract("blind_auction_vulnerable")


@pytest.fixture(scope="session")
def timed_auction() -> Contract:
    return load_contract("blind_auction_timed")


@pytest.fixture(scope="session")
def phases() -> Contract:
    return load_contract("phases")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20_171_017)
