"""Three-level concept framework: ensembles, concept trees and a layered
symbolic network built from CPL process scripts."""
from __future__ import annotations

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def bundled_path(name: str) -> Path:
    """Path of a bundled example script, e.g. ``cook_an_egg.cpl``."""
    path = Path(str(resources.files(__package__).joinpath("data", name)))
    if not path.is_file():
        raise FileNotFoundError(name)
    return path


def bundled_names() -> list[str]:
    return sorted(p.name for p in Path(str(resources.files(__package__).joinpath("data"))).iterdir())
