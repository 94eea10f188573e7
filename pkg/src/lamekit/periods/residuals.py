"""
Consistency residuals of period matrices and the tau-candidate selection rule.
"""

from typing import Dict, Mapping, Optional, Tuple

import numpy as np
from loguru import logger

from ..exceptions import PeriodError
from .models import PeriodData, PeriodResiduals


def symmetry_residual(tau: np.ndarray) -> float:
    tau = np.atleast_2d(np.asarray(tau, dtype=complex))
    return float(np.abs(tau - tau.T).max())


def positivity(tau: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetric part of Im tau"""
    imag = np.atleast_2d(np.asarray(tau, dtype=complex)).imag
    return float(np.linalg.eigvalsh((imag + imag.T) / 2).min())


def bilinear_residual(A: np.ndarray, B: np.ndarray, cycle_signs: Optional[np.ndarray] = None) -> float:
    """
    Riemann bilinear residual.

    With cycle_signs H, the a-period rows x, b, c of the first three
    differentials must satisfy x^T H b = x^T H c = 0; the residual is
    |x^T H b| + |x^T H c|. Without H, max |A B^T - B A^T|.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if cycle_signs is not None:
        x = A[0]
        return float(sum(abs(x @ cycle_signs @ A[row]) for row in range(1, A.shape[0])))
    return float(np.abs(A @ B.T - B @ A.T).max())


def riemann_residuals(data: PeriodData, raw_tau: Optional[np.ndarray] = None) -> PeriodResiduals:
    """
    Residuals of a period matrix. The symmetry residual is taken on raw_tau,
    the quotient before symmetrization, when it is given.
    """
    return PeriodResiduals(
        symmetry=symmetry_residual(data.tau if raw_tau is None else raw_tau),
        positivity=positivity(data.tau),
        bilinear=bilinear_residual(data.A_periods, data.B_periods, data.cycle_signs),
    )


def select_tau(candidates: Mapping[str, np.ndarray], tol: float) -> Tuple[str, np.ndarray, Dict[str, float]]:
    """
    Pick the first candidate that is symmetric (relative to tol) with
    positive-definite imaginary part.

    Returns the winner's name, its symmetrized value and the symmetry
    residual of every candidate.
    """
    table: Dict[str, float] = {}
    winner: Optional[Tuple[str, np.ndarray]] = None
    for name, tau in candidates.items():
        tau = np.asarray(tau, dtype=complex)
        if not np.all(np.isfinite(tau)):
            table[name] = float("inf")
            continue
        residual = symmetry_residual(tau) / max(1.0, float(np.abs(tau).max()))
        table[name] = residual
        symmetric = (tau + tau.T) / 2
        accepted = residual <= tol and positivity(symmetric) > 0
        logger.debug(f"tau candidate {name}: symmetry {residual:.2e}, accepted={accepted}")
        if accepted and winner is None:
            winner = (name, symmetric)
    if winner is None:
        raise PeriodError(f"No tau candidate is symmetric with positive imaginary part: {table}")
    return winner[0], winner[1], table
