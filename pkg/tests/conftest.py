from pathlib import Path

import pytest

from qmqv.quiver import Quiver

ROOT = Path(__file__).resolve().parent.parent
QUIVER_DIR = ROOT / "quivers"


def kron(a: int, b: int) -> Quiver:
    return Quiver.build({"u": a, "v": b}, [("e", "u", "v")])


def jordan(n: int) -> Quiver:
    return Quiver.build({"v": n}, [("l", "v", "v")])


def calogero_moser(n: int) -> Quiver:
    return Quiver.build({"u": 1, "v": n}, [("e", "u", "v"), ("l", "v", "v")])


def star(legs: int = 2, node: int = 1) -> Quiver:
    verts = {"v0": node}
    edges = []
    for k in range(1, legs + 1):
        verts[f"v{k}1"] = 1
        edges.append((f"e{k}0", f"v{k}1", "v0"))
    return Quiver.build(verts, edges)


def a2() -> Quiver:
    return Quiver.build({"x": 1, "y": 1}, [("e", "x", "y")])


@pytest.fixture
def quiver_dir() -> Path:
    return QUIVER_DIR
