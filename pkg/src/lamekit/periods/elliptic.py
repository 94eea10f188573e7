"""
Complete elliptic integral of the first kind.

K(k) = pi / (2 * AGM(1, sqrt(1 - k^2))) for complex modulus inside the unit
disk, plus a scipy quadrature oracle used by the tests and the acceptance
suite.
"""

import cmath
import math
from typing import Union

import numpy as np
from scipy.integrate import quad

from ..exceptions import PeriodError

Modulus = Union[float, complex]

AGM_MAX_ITERATIONS = 64


def _agm(a: complex, b: complex) -> complex:
    """Arithmetic-geometric mean with the right choice of square root at every step"""
    for _ in range(AGM_MAX_ITERATIONS):
        if abs(a - b) <= 4 * np.finfo(float).eps * abs(a):
            break
        mean = (a + b) / 2
        root = cmath.sqrt(a * b)
        if abs(mean - root) > abs(mean + root):
            root = -root
        a, b = mean, root
    return (a + b) / 2


def elliptic_K(k: Modulus) -> complex:
    """Complete elliptic integral of the first kind K(k), 0 <= |k| < 1 branch"""
    k2 = complex(k) ** 2
    complement = 1 - k2
    if abs(complement) < 1e-300:
        raise PeriodError(f"K(k) diverges at k^2 = 1 (k = {k})")
    return math.pi / (2 * _agm(1 + 0j, cmath.sqrt(complement)))


def elliptic_K_quad(k: Modulus) -> complex:
    """Adaptive-quadrature oracle for the integral from 0 to pi/2 of 1/sqrt(1 - k^2 sin^2)"""
    k2 = complex(k) ** 2

    def integrand(theta: float) -> complex:
        return 1 / np.sqrt(1 - k2 * np.sin(theta) ** 2 + 0j)

    options = dict(epsabs=1e-15, epsrel=1e-14, limit=200)
    real = quad(lambda t: integrand(t).real, 0.0, math.pi / 2, **options)[0]
    imag = quad(lambda t: integrand(t).imag, 0.0, math.pi / 2, **options)[0]
    return complex(real, imag)


def random_moduli(rng: np.random.Generator, count: int) -> np.ndarray:
    """count // 2 real moduli in (0, 1), the rest complex with |k| <= 0.9"""
    real = rng.uniform(0.01, 0.99, count // 2)
    radius = 0.9 * np.sqrt(rng.uniform(0.0, 1.0, count - count // 2))
    return np.concatenate([real, radius * np.exp(1j * rng.uniform(-np.pi, np.pi, radius.size))])
