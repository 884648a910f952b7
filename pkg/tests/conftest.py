"""Hand-built instances shared across test modules."""

import pytest

from tfnp_lab.core import equality_relation, table_map
from tfnp_lab.problems import QuotientPigeonInstance


def qp_equality(n, c_table, v_star=1):
    """Quotient-pigeon instance over plain equality."""
    return QuotientPigeonInstance(
        n=n,
        C=table_map(1, n, n, list(c_table)),
        E=equality_relation(n),
        v_star=v_star,
    )


@pytest.fixture
def walk_instance():
    # 1 -> 2 -> 3 -> 2: the image walk folds back on its second element
    return qp_equality(2, [2, 3, 2, 1])


@pytest.fixture
def cycle_instance():
    # a single 8-cycle keeps the hole's orbit collision-free for 2n hops
    # and no point maps to itself, so the long-choice reduction applies
    # without any de-fixing
    return qp_equality(3, [2, 3, 4, 5, 6, 7, 8, 1])
