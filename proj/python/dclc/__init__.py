"""Datacenter lifecycle TCO simulator."""

import os
from pathlib import Path

from ._core import (
    OPERATIONS,
    Error,
    ModelDoesNotFit,
    ModelUnservable,
    ParseError,
    Scenario,
    ValidationError,
    __version__,
    amortize,
    stranded_power,
)

__all__ = [
    "OPERATIONS",
    "Error",
    "ModelDoesNotFit",
    "ModelUnservable",
    "ParseError",
    "Scenario",
    "ValidationError",
    "__version__",
    "amortize",
    "data_dir",
    "load",
    "stranded_power",
]


def data_dir() -> Path:
    env = os.environ.get("DCLC_DATA_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def load(name_or_path) -> Scenario:
    """Load a scenario file, or a shipped scenario by bare name."""
    p = Path(name_or_path)
    if p.suffix != ".json" and p.parent == Path("."):
        p = data_dir() / "scenarios" / f"{p}.json"
    return Scenario.load(p)
