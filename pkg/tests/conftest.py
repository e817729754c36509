from __future__ import annotations

import pytest

from latticecft.lattice import SplitSpace, build_lattice, build_rank2_family
from latticecft.scalars import ScalarBackend


@pytest.fixture(scope="session")
def rational() -> ScalarBackend:
    return ScalarBackend()


@pytest.fixture(scope="session")
def rank2():
    """Self-dual rank-2 lattice at R^2 = 1: gramIndef [[0, 1], [1, 0]]."""
    return build_rank2_family(1)


@pytest.fixture(scope="session")
def isotropic(rational):
    """Totally isotropic rank-1 lattice spanned by (1, 1)."""
    return build_lattice(SplitSpace(1, 1), [((1,), (1,))], backend=rational)


@pytest.fixture(scope="session")
def a1():
    """A1 root lattice, purely chiral."""
    return build_lattice(SplitSpace(1, 0), [(("sqrt2",), ())], backend=ScalarBackend(kind="quadratic", radicand=2))


def random_even_lattice(rng, rank: int, *, bound: int = 6):
    """Rank-n even lattice in an (n, n) split space from small integer chiral and antichiral rows."""
    from latticecft.errors import DependentGenerators, OddNorm

    backend = ScalarBackend()
    while True:
        plus = rng.integers(-1, 2, size=(rank, rank))
        minus = rng.integers(-1, 2, size=(rank, rank))
        gens = [(tuple(int(x) for x in p), tuple(int(x) for x in m)) for p, m in zip(plus, minus)]
        try:
            lattice = build_lattice(SplitSpace(rank, rank), gens, backend=backend)
        except (DependentGenerators, OddNorm):
            continue
        if max(abs(v) for row in lattice.gram_indef for v in row) <= bound:
            return lattice
