"""
Riemann theta functions with rational characteristics.

One convention is used everywhere:

    Theta[a; b](v, tau) = sum_n exp(i pi (n+a)^T tau (n+a) + 2 pi i (n+a)^T (v+b))

The Jacobi thetas are its genus-1 specializations.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np

from ..config import get_settings
from ..exceptions import ThetaError
from ..periods.models import encode_complex

Rationalish = Union[Fraction, int, str, float]


def _fraction(value: Rationalish) -> Fraction:
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10 ** 6)
    return Fraction(value)


@dataclass(frozen=True)
class SiegelMatrix:
    """Symmetric genus x genus matrix with positive-definite imaginary part"""

    tau: np.ndarray
    tolerance: float = 1e-9

    def __post_init__(self):
        tau = np.atleast_2d(np.asarray(self.tau, dtype=complex))
        if tau.ndim != 2 or tau.shape[0] != tau.shape[1]:
            raise ThetaError(f"tau must be square, got shape {tau.shape}")
        if not np.all(np.isfinite(tau)):
            raise ThetaError("tau has non-finite entries")
        asymmetry = float(np.abs(tau - tau.T).max())
        if asymmetry > self.tolerance * max(1.0, float(np.abs(tau).max())):
            raise ThetaError(f"tau is not symmetric (residual {asymmetry:.2e})")
        tau = (tau + tau.T) / 2
        if np.linalg.eigvalsh(tau.imag).min() <= 0:
            raise ThetaError(f"Im tau is not positive definite (smallest eigenvalue {np.linalg.eigvalsh(tau.imag).min():.3e})")
        object.__setattr__(self, "tau", tau)

    @classmethod
    def of(cls, value: Union["SiegelMatrix", complex, Sequence, np.ndarray]) -> "SiegelMatrix":
        return value if isinstance(value, SiegelMatrix) else cls(np.asarray(value, dtype=complex))

    @property
    def genus(self) -> int:
        return int(self.tau.shape[0])

    @property
    def lambda_min(self) -> float:
        return float(np.linalg.eigvalsh(self.tau.imag).min())

    def to_dict(self) -> Dict[str, Any]:
        return {"genus": self.genus, "tau": encode_complex(self.tau)}


@dataclass(frozen=True)
class ThetaChar:
    """Characteristic [a; b] with rational entries"""

    a: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ThetaError(f"Characteristic rows differ in length: {len(self.a)} vs {len(self.b)}")
        object.__setattr__(self, "a", tuple(_fraction(x) for x in self.a))
        object.__setattr__(self, "b", tuple(_fraction(x) for x in self.b))

    @classmethod
    def zero(cls, genus: int) -> "ThetaChar":
        return cls((Fraction(0),) * genus, (Fraction(0),) * genus)

    @classmethod
    def parse(cls, text: str) -> "ThetaChar":
        """'a1,a2;b1,b2' with entries like 0, 1/2"""
        try:
            top, bottom = text.split(";")
            return cls(tuple(Fraction(x.strip()) for x in top.split(",")),
                       tuple(Fraction(x.strip()) for x in bottom.split(",")))
        except ValueError as e:
            raise ThetaError(f"Cannot parse characteristic {text!r}: {e}") from e

    @property
    def genus(self) -> int:
        return len(self.a)

    def reduced(self) -> Tuple["ThetaChar", complex]:
        """
        Entries moved into [0, 1) and the phase c with
        Theta[a; b] = c * Theta[reduced]. Shifting a by integers changes
        nothing; shifting b by integers n costs exp(2 pi i a.n).
        """
        a = tuple(x - math.floor(x) for x in self.a)
        shifts = tuple(math.floor(x) for x in self.b)
        b = tuple(x - n for x, n in zip(self.b, shifts))
        phase = complex(np.exp(2j * np.pi * sum(float(x) * n for x, n in zip(a, shifts))))
        return ThetaChar(a, b), phase

    def vectors(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.array([float(x) for x in self.a]), np.array([float(x) for x in self.b])

    def __str__(self) -> str:
        return f"[{','.join(str(x) for x in self.a)};{','.join(str(x) for x in self.b)}]"


def truncation_radius(tau: SiegelMatrix, eps: float) -> int:
    """Box radius around the dominant lattice point so the Gaussian tail is below eps"""
    if eps <= 0:
        raise ThetaError(f"eps must be positive, got {eps}")
    g = tau.genus
    r = math.sqrt(max(0.0, -math.log(eps)) / (math.pi * tau.lambda_min))
    # margin for the number of lattice points on each shell
    r = math.sqrt(r ** 2 + g * math.log(2 * r + 3) / (math.pi * tau.lambda_min))
    return int(math.ceil(r)) + 1


def theta(v: Union[complex, Sequence[complex], np.ndarray], tau: Union[SiegelMatrix, np.ndarray, complex],
          char: Optional[ThetaChar] = None, eps: Optional[float] = None, radius: Optional[int] = None) -> complex:
    """Theta[a; b](v, tau) by a truncated lattice sum; radius overrides the eps-derived box"""
    tau = SiegelMatrix.of(tau)
    g = tau.genus
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    if v.shape != (g,):
        raise ThetaError(f"v must have length {g}, got shape {v.shape}")
    char = char or ThetaChar.zero(g)
    if char.genus != g:
        raise ThetaError(f"Characteristic of genus {char.genus} used with tau of genus {g}")
    eps = get_settings().theta.eps if eps is None else eps
    if eps <= 0:
        raise ThetaError(f"eps must be positive, got {eps}")
    a, b = char.vectors()

    # the summand peaks near n + a = -Y^{-1} Im v
    Y = tau.tau.imag
    center = -np.linalg.solve(Y, v.imag) - a
    radius = truncation_radius(tau, eps) if radius is None else radius
    axes = [np.arange(int(round(c)) - radius, int(round(c)) + radius + 1) for c in center]
    n = np.array(list(itertools.product(*axes)), dtype=float) + a
    exponent = 1j * np.pi * np.einsum("ki,ij,kj->k", n, tau.tau, n) + 2j * np.pi * n @ (v + b)
    return complex(np.exp(exponent).sum())


def jacobi_thetas(v: complex, tau: complex, eps: Optional[float] = None) -> Tuple[complex, complex, complex, complex]:
    """(theta1, theta2, theta3, theta4) in the unscaled convention"""
    if complex(tau).imag <= 0:
        raise ThetaError(f"Jacobi thetas need Im tau > 0, got {tau}")
    half, zero = Fraction(1, 2), Fraction(0)
    args = ([v], [[tau]])
    theta1 = -theta(*args, ThetaChar((half,), (half,)), eps)
    theta2 = theta(*args, ThetaChar((half,), (zero,)), eps)
    theta3 = theta(*args, ThetaChar((zero,), (zero,)), eps)
    theta4 = theta(*args, ThetaChar((zero,), (half,)), eps)
    return theta1, theta2, theta3, theta4


def genus1_theta(char: Tuple[Rationalish, Rationalish], v: complex, tau: complex,
                 eps: Optional[float] = None, convention: str = "unscaled") -> complex:
    """
    theta[a; b](v, tau) for genus 1.

    convention "pi_scaled" reads v as the argument of the classical
    q-series theta, which equals the unscaled function at v / pi.
    """
    if convention == "pi_scaled":
        v = v / np.pi
    elif convention != "unscaled":
        raise ThetaError(f"Unknown theta argument convention {convention!r}")
    return theta([v], [[tau]], ThetaChar((char[0],), (char[1],)), eps)
