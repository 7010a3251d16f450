"""Bundled presentations.

``sigma5`` and the ``sl2_*`` files are the main test cases; the rest are
small groups with known homology used as oracles.
"""

from __future__ import annotations

from importlib import resources

from ..presentation import Presentation, parse_presentation

# name -> (group order if finite, else None)
ORDERS = {
    "sigma5": 120,
    "sigma3": 6,
    "z4": 4,
    "z6": 6,
    "z4_redundant": 4,
    "z2xz2": 4,
    "zxz": None,
    "free1": None,
    "free2": None,
    "free3": None,
    "sl2_3": None,
    "sl2_5": None,
    "sl2_7": None,
}


def fixture_names() -> list[str]:
    return sorted(ORDERS)


def fixture_text(name: str) -> str:
    if name not in ORDERS:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    return resources.files(__package__).joinpath(f"{name}.pres").read_text(encoding="utf-8")


def load_fixture(name: str) -> Presentation:
    return parse_presentation(fixture_text(name))
