import pathlib

import pytest

from latsieve.arith import Poly
from latsieve.lattice import Basis3

REPO = pathlib.Path(__file__).resolve().parent.parent

# Skewed basis used across docs and demos: its reduced frame covers the
# demo box in 6 plane translates while the z-baseline needs 101 levels.
DEMO_COLS = ((10, -12, -7), (18, 18, -22), (35, 13, 18))

# Committed toy pair: f1 = 16*f0 modulo 65537, both irreducible.
TOY_P = 65537
TOY_F0 = Poly([4097, 1, 0, 0, 0, 0, 1])
TOY_F1 = Poly([15, 16, 0, 0, 0, 0, 16])


@pytest.fixture
def demo_basis():
    return Basis3(DEMO_COLS)


@pytest.fixture
def toy_pair():
    return TOY_F0, TOY_F1


@pytest.fixture
def toy_config_path():
    return str(REPO / "configs" / "toy.cfg")


@pytest.fixture
def tiny_config_path():
    return str(REPO / "configs" / "tiny.cfg")
