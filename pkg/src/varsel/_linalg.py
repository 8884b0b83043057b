"""Shared linear-algebra helpers.

Symmetric positive-definite solves and log-determinants go through a Cholesky
factorization.  When the factorization fails, a diagonal jitter of
``1e-10 * trace(A) / n`` is added once and the factorization retried; a second
failure raises :class:`SpdFactorizationError` for the caller to translate into
its own error type.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_factor, cho_solve

JITTER_SCALE = 1e-10


class SpdFactorizationError(Exception):
    """Cholesky factorization failed even after the jitter retry."""


def _factor_with_jitter(matrix: np.ndarray):
    try:
        return cho_factor(matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        pass
    n = matrix.shape[0]
    jitter = JITTER_SCALE * float(np.trace(matrix)) / n
    try:
        return cho_factor(
            matrix + jitter * np.eye(n), lower=True, check_finite=False
        )
    except np.linalg.LinAlgError as exc:
        raise SpdFactorizationError(str(exc)) from exc


def spd_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Solve ``matrix @ x = rhs`` for symmetric positive-definite ``matrix``."""
    factor = _factor_with_jitter(np.asarray(matrix, dtype=float))
    return cho_solve(factor, np.asarray(rhs, dtype=float), check_finite=False)


def spd_logdet(matrix: np.ndarray) -> float:
    """Log-determinant of a symmetric positive-definite matrix."""
    factor, _ = _factor_with_jitter(np.asarray(matrix, dtype=float))
    return 2.0 * float(np.sum(np.log(np.diag(factor))))


def spd_inverse(matrix: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via Cholesky."""
    factor = _factor_with_jitter(np.asarray(matrix, dtype=float))
    return cho_solve(factor, np.eye(matrix.shape[0]), check_finite=False)
