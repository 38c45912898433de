import numpy as np
import pytest

from gospaces import builders
from gospaces.liealg import homogeneous_space
from gospaces.natred import decompose_ideals


def so_basis_raw(n):
    """Unnormalized so(n) basis E_ij - E_ji, i < j (test-local oracle helper)."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = np.zeros((n, n))
            m[i, j], m[j, i] = 1.0, -1.0
            out.append(m)
    return np.array(out)


@pytest.fixture(scope="session")
def su2_double():
    su2 = builders.build_su(2)
    g = builders.direct_sum(su2, su2, name="su(2)+su(2)")
    h = builders.diagonal_subalgebra(g, su2, 2)
    space = homogeneous_space(g, h, name="diag/su2^2")
    return g, h, space, decompose_ideals(g, h, seed=0)


@pytest.fixture(scope="session")
def su2_triple():
    su2 = builders.build_su(2)
    g = builders.direct_sum(su2, su2, su2, name="su(2)^3")
    h = builders.diagonal_subalgebra(g, su2, 3)
    space = homogeneous_space(g, h, name="diag/su2^3")
    return g, h, space, decompose_ideals(g, h, seed=0)
