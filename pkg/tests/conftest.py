"""Shared fixtures: the recurring polynomial pairs and switched systems.

The sextic pair is the derivative pair of the two-subsystem cubic switched
system; the quartic/sextic sector gallery spans sector angles from pi to a
full plane; the cubic pair shares a zero along the diagonal.  All of them
are exercised repeatedly across the test modules, so they live here.
"""

import numpy as np
import pytest

from slemma import Dilation, GeneralizedPolynomial, SwitchedSystem

GP = GeneralizedPolynomial


def quad_form(Q):
    """Quadratic form x^T Q x as a polynomial (Q symmetric)."""
    Q = np.asarray(Q, dtype=float)
    n = Q.shape[0]
    terms = []
    for i in range(n):
        for j in range(i, n):
            c = Q[i, i] if i == j else Q[i, j] + Q[j, i]
            powers = [0] * n
            powers[i] += 1
            powers[j] += 1
            terms.append((c, tuple(powers)))
    return GP.from_terms(n, terms)


def random_symmetric(rng, n):
    A = rng.normal(size=(n, n))
    return (A + A.T) / 2.0


@pytest.fixture(scope="session")
def d2():
    return Dilation.standard(2)


@pytest.fixture(scope="session")
def sextic_pair():
    """(-Vdot|S1, Vdot|S2) for the cubic two-subsystem benchmark."""
    f = GP.from_terms(2, [(-7, (6, 0)), (-2, (3, 3)), (5, (0, 6)), (-2, (4, 2))])
    g = GP.from_terms(2, [(-5, (6, 0)), (-1, (3, 3)), (1, (0, 6)), (-1, (4, 2))])
    return f, g


@pytest.fixture(scope="session")
def cubic_pair():
    """Odd cubic pair with a shared zero along the (1, 1) diagonal."""
    f = GP.from_terms(2, [(-1, (3, 0)), (1, (0, 3))])
    g = GP.from_terms(2, [(1, (0, 3)), (-0.5, (3, 0)), (-0.5, (1, 2))])
    return f, g


@pytest.fixture(scope="session")
def sector_gallery():
    """Four same-degree pairs with sector angles pi, ~1.1pi, ~1.56pi, 2pi."""
    p1 = (GP.from_terms(2, [(1, (4, 0)), (-1, (0, 4)), (-1, (2, 2))]),
          GP.from_terms(2, [(-1, (4, 0)), (1, (0, 4))]))
    p2 = (GP.from_terms(2, [(-1, (4, 0)), (1, (0, 4)), (-1, (1, 3))]),
          GP.from_terms(2, [(1, (4, 0)), (-1, (0, 4)), (1, (3, 1))]))
    p3 = (GP.from_terms(2, [(1, (6, 0)), (-1, (0, 6)), (20, (5, 1)), (-20, (3, 3))]),
          GP.from_terms(2, [(-1, (6, 0)), (1, (0, 6)), (-10, (1, 5))]))
    p4 = (GP.from_terms(2, [(1, (6, 0)), (-1, (0, 6))]),
          GP.from_terms(2, [(-1, (6, 0)), (1, (0, 6)), (-1, (3, 3))]))
    return p1, p2, p3, p4


@pytest.fixture(scope="session")
def wide_copositive_pair():
    """Strictly copositive quartic pair whose sector is wider than pi.

    Built from circle harmonics f + i*g = c0 + c2 e^{2it} + c4 e^{4it};
    the direction set spans about 1.017*pi, so a positive multiplier
    cannot exist even though f > 0 on all of {g >= 0}.
    """
    f = GP.from_terms(2, [(1.07, (4, 0)), (3.40, (3, 1)), (-0.18, (2, 2)),
                          (-0.04, (1, 3)), (0.19, (0, 4))])
    g = GP.from_terms(2, [(-1.81, (4, 0)), (1.60, (3, 1)), (1.50, (2, 2)),
                          (0.16, (1, 3)), (-0.13, (0, 4))])
    return f, g


@pytest.fixture(scope="session")
def sextic_system():
    """Two cubic planar subsystems, individually unstable."""
    s1 = (GP.from_terms(2, [(7, (3, 0)), (-3, (0, 3)), (2, (1, 2))]),
          GP.from_terms(2, [(5, (3, 0)), (-5, (0, 3))]))
    s2 = (GP.from_terms(2, [(-5, (3, 0)), (-1, (1, 2))]),
          GP.from_terms(2, [(-1, (3, 0)), (1, (0, 3))]))
    return SwitchedSystem((s1, s2))


@pytest.fixture(scope="session")
def sextic_V():
    return GP.from_terms(2, [(0.25, (4, 0)), (0.25, (0, 4))])


@pytest.fixture(scope="session")
def frac_dilation():
    return Dilation((3, 1))


@pytest.fixture(scope="session")
def frac_system():
    """Planar pair with fractional signed powers, weights (3, 1)."""
    s1 = (GP.from_terms(2, [(-4, (1, 0))]),
          GP.from_terms(2, [(4, ((2, 3), 1)), (4, (0, 3))]))
    s2 = (GP.from_terms(2, [(2, (1, 0)), (1, ((1, 3), 2))]),
          GP.from_terms(2, [(-8, (0, 3))]))
    return SwitchedSystem((s1, s2))


@pytest.fixture(scope="session")
def frac_V():
    return GP.from_terms(2, [(3, ((4, 3), 0)), (1, (0, 2))])


@pytest.fixture(scope="session")
def linear3_matrices():
    r3 = np.sqrt(3.0)
    A1 = np.array([[1.0, 0.0], [0.0, -1.0]])
    A2 = np.array([[-r3, -1.0], [-1.0, r3]])
    A3 = np.array([[-r3, 1.0], [1.0, r3]])
    return [A1, A2, A3]


@pytest.fixture(scope="session")
def linear3_system(linear3_matrices):
    def field(A):
        return tuple(
            GP.from_terms(2, [(A[i, 0], (1, 0)), (A[i, 1], (0, 1))])
            for i in range(2)
        )

    return SwitchedSystem(tuple(field(A) for A in linear3_matrices))


@pytest.fixture(scope="session")
def norm_V():
    return GP.from_terms(2, [(0.5, (2, 0)), (0.5, (0, 2))])


@pytest.fixture(scope="session")
def problems_dir():
    from pathlib import Path

    return Path(__file__).resolve().parent.parent / "problems"
