import pytest

from heartforge.algebra import Quiver, build_algebra
from heartforge.linalg import FieldSpec


def make_lambda_algebra(p=2, m=2):
    """kQ/(alpha·beta) for Q: 1 <=> 2; the running two-vertex example."""
    Q = Quiver([1, 2], [("a", 1, 2), ("b", 2, 1)])
    return build_algebra(Q, [[(1, ("a", "b"))]], FieldSpec(p), m)


def make_a3_algebra(p=2, m=2):
    """Hereditary kQ for Q: 1 -> 2 -> 3."""
    Q = Quiver([1, 2, 3], [("a", 1, 2), ("b", 2, 3)])
    return build_algebra(Q, [], FieldSpec(p), m)


def make_xy3_algebra(p=2, m=2):
    """Three-vertex algebra with doubled arrows and relations x1x2, y1y2."""
    Q = Quiver(
        [1, 2, 3],
        [("x1", 1, 2), ("y1", 1, 2), ("x2", 2, 3), ("y2", 2, 3)],
    )
    return build_algebra(
        Q, [[(1, ("x1", "x2"))], [(1, ("y1", "y2"))]], FieldSpec(p), m
    )


@pytest.fixture(scope="session")
def lam():
    return make_lambda_algebra()


@pytest.fixture(scope="session")
def a3():
    return make_a3_algebra()


@pytest.fixture(scope="session")
def xy3():
    return make_xy3_algebra()
