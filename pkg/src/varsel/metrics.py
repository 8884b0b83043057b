"""Selection-quality metrics.

Covers the compression view (percentage variance explained and its curve
summaries), the frame-theoretic view (frame potential), and the
information-theoretic view (Gaussian mutual information between a selection
and its complement, plus the per-candidate gain ratio used for greedy
information-driven selection).

All selections are given as 1-based indices (an :class:`IndexSets` or any
integer sequence).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._linalg import SpdFactorizationError, spd_logdet, spd_solve
from .dataset import Dataset, IndexSets, project_onto, selection_tuple
from .errors import LengthMismatch, SingularCovariance, ThresholdNeverReached

#: VE values of rank-1 ties closer than this (percentage points) count as equal.
RANK_TIE_TOL = 1e-9


# =========================================================================
# Types
# =========================================================================


@dataclass(frozen=True)
class VECurve:
    """Variance explained (percent) after each selection step.

    ``values[j]`` is the VE of the first ``j + 1`` selected variables.
    """

    values: tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(x) for x in self.values)
        for x in values:
            if not (-1e-9 <= x <= 100.0 + 1e-9):
                raise ValueError(f"VE value {x} outside [0, 100]")
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, item):
        return self.values[item]


@dataclass(frozen=True)
class CovarianceModel:
    """A Gaussian model over the variables: covariance plus isotropic noise.

    Parameters
    ----------
    cov : ndarray, shape (v, v)
        Symmetric positive semi-definite covariance ``X^T X / m``.
    sigma_noise : float
        Non-negative observation-noise standard deviation; its square is
        added to the diagonal wherever the model conditions or marginalizes.
    """

    cov: np.ndarray
    sigma_noise: float

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float, copy=True)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise ValueError(f"covariance must be square, got {cov.shape}")
        if np.max(np.abs(cov - cov.T)) > 1e-10:
            raise ValueError("covariance must be symmetric within 1e-10")
        eigvals = np.linalg.eigvalsh(cov)
        floor = -1e-8 * max(float(eigvals[-1]), 1e-300)
        if eigvals[0] < floor:
            raise ValueError(f"covariance not positive semi-definite (min eig {eigvals[0]})")
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)
        sigma = float(self.sigma_noise)
        if sigma < 0.0 or not math.isfinite(sigma):
            raise ValueError(f"sigma_noise must be a non-negative real, got {sigma}")
        object.__setattr__(self, "sigma_noise", sigma)

    @property
    def v(self) -> int:
        return self.cov.shape[0]

    @classmethod
    def from_dataset(cls, data: Dataset, sigma: float | None = None) -> "CovarianceModel":
        """Build ``cov = X^T X / m`` from (typically centered) data.

        When ``sigma`` is omitted it defaults to 1% of the root-mean-square
        variable scale: ``0.01 * sqrt(mean(diag(cov)))``.
        """
        gram = data.values.T @ data.values
        cov = (gram + gram.T) / (2.0 * data.m)
        if sigma is None:
            sigma = default_sigma(cov)
        return cls(cov, sigma)


def default_sigma(cov: np.ndarray) -> float:
    """Default noise scale: ``0.01 * sqrt(mean(diag(cov)))``."""
    return 0.01 * math.sqrt(float(np.mean(np.diag(cov))))


# =========================================================================
# Variance explained
# =========================================================================


def variance_explained(data: Dataset, selected) -> float:
    """Percentage of total variance captured by projecting onto a selection.

    ``VE = (1 - ||X - Xhat||_F^2 / ||X||_F^2) * 100`` where ``Xhat`` is the
    least-squares reconstruction from the selected columns.  The empty
    selection scores 0.

    Requires centered data so that "variance" is the centered sum of squares.
    """
    if not data.centered:
        raise ValueError("variance_explained requires centered data")
    sel = selection_tuple(selected)
    if not sel:
        return 0.0
    approx = project_onto(data, sel)
    total = float(np.linalg.norm(data.values)) ** 2
    resid = float(np.linalg.norm(data.values - approx)) ** 2
    return (1.0 - resid / total) * 100.0


# =========================================================================
# Frame potential
# =========================================================================


def frame_potential(data: Dataset, selected) -> float:
    """Sum of squared pairwise inner products over the selected columns.

    ``FP(X_S) = sum_{i,j in S} <x_i, x_j>^2`` with both orders of each pair
    and the diagonal included; equivalently ``||X_S^T X_S||_F^2``.  Requires
    unit-norm columns so values are comparable across selections.
    """
    if not data.unit_norm:
        raise ValueError("frame_potential requires unit-norm columns")
    sel = selection_tuple(selected)
    if not sel:
        raise ValueError("frame_potential requires a non-empty selection")
    cols = np.array(sel, dtype=int) - 1
    x_s = data.values[:, cols]
    gram = x_s.T @ x_s
    return float(np.sum(gram * gram))


# =========================================================================
# Gaussian mutual information
# =========================================================================


def _partition(model: CovarianceModel, selected) -> tuple[np.ndarray, np.ndarray]:
    sel = selection_tuple(selected)
    sel0 = np.array(sel, dtype=int) - 1
    if sel0.size and (sel0.min() < 0 or sel0.max() >= model.v):
        raise ValueError(f"selection outside 1..{model.v}")
    mask = np.ones(model.v, dtype=bool)
    mask[sel0] = False
    return sel0, np.nonzero(mask)[0]


def mutual_information(model: CovarianceModel, selected) -> float:
    """Mutual information (nats) between the selection and its complement.

    For the Gaussian model, ``MI(S; U) = (log det(Sigma_UU + s^2 I)
    - log det(Sigma*)) / 2`` where ``Sigma*`` is the posterior covariance of
    the unselected block given the selected one, both blocks regularized by
    the noise variance ``s^2``.  Log-determinants are computed from Cholesky
    factorizations.

    Raises
    ------
    SingularCovariance
        If a required factorization fails even after the jitter retry.
    """
    sel0, unsel0 = _partition(model, selected)
    if sel0.size == 0:
        raise ValueError("mutual_information requires a non-empty selection")
    if unsel0.size == 0:
        raise ValueError("mutual_information requires a non-empty complement")
    s2 = model.sigma_noise**2
    cov = model.cov
    prior = cov[np.ix_(unsel0, unsel0)] + s2 * np.eye(unsel0.size)
    cross = cov[np.ix_(sel0, unsel0)]
    sel_block = cov[np.ix_(sel0, sel0)] + s2 * np.eye(sel0.size)
    try:
        posterior = prior - cross.T @ spd_solve(sel_block, cross)
        posterior = (posterior + posterior.T) / 2.0
        return 0.5 * (spd_logdet(prior) - spd_logdet(posterior))
    except SpdFactorizationError as exc:
        raise SingularCovariance(str(exc)) from exc


def _conditional_variance(cov: np.ndarray, s2: float, i0: int, given: np.ndarray) -> float:
    """Posterior variance of variable ``i0`` given the ``given`` block, with
    every block regularized by the noise variance."""
    base = float(cov[i0, i0]) + s2
    if given.size == 0:
        return base
    b = cov[given, i0]
    block = cov[np.ix_(given, given)] + s2 * np.eye(given.size)
    try:
        x = spd_solve(block, b)
    except SpdFactorizationError as exc:
        raise SingularCovariance(str(exc)) from exc
    return base - float(b @ x)


def delta_mi(model: CovarianceModel, sets: IndexSets, candidate: int) -> float:
    """Greedy information gain of adding ``candidate`` to the selection.

    Returns the ratio of the candidate's posterior variance given the
    current selection to its posterior variance given the rest of the
    unselected variables:

    ``delta(x_i) = var(x_i | S) / var(x_i | U \\ {x_i})``

    Both conditional variances carry the noise regularization, so with an
    empty selection the numerator is ``var(x_i) + s^2``.  Larger is better:
    the numerator favours candidates not yet explained by the selection, the
    denominator penalizes candidates the remaining variables explain well.
    """
    if candidate not in sets.unselected:
        raise ValueError(f"candidate {candidate} is not unselected")
    i0 = candidate - 1
    s2 = model.sigma_noise**2
    sel0 = np.array(sets.selected, dtype=int) - 1
    rest0 = np.array(sorted(sets.unselected - {candidate}), dtype=int) - 1
    numerator = _conditional_variance(model.cov, s2, i0, sel0)
    denominator = _conditional_variance(model.cov, s2, i0, rest0)
    return numerator / denominator


# =========================================================================
# Curve summaries
# =========================================================================


def _curve_values(curve) -> tuple[float, ...]:
    if isinstance(curve, VECurve):
        return curve.values
    return tuple(float(x) for x in curve)


def auc(curve, v: int) -> float:
    """Normalized area under a full VE curve.

    ``AUC = (0.01 / (v - 1)) * sum_{k=1}^{v-1} VE(k)``; the curve must have
    exactly ``v - 1`` entries.  A curve pinned at 100 gives 1.0.
    """
    values = _curve_values(curve)
    if len(values) != v - 1:
        raise LengthMismatch(
            f"AUC needs a curve of length v-1 = {v - 1}, got {len(values)}"
        )
    return 0.01 / (v - 1) * float(sum(values))


def k_at_threshold(curve, threshold: float) -> int:
    """Smallest k whose VE meets or exceeds ``threshold`` percent."""
    values = _curve_values(curve)
    for idx, value in enumerate(values):
        if value >= threshold:
            return idx + 1
    best = max(values) if values else 0.0
    raise ThresholdNeverReached(threshold, best)


def relative_performance(curves: Mapping[str, Sequence[float]]) -> dict[str, float]:
    """Percentage of steps on which each algorithm's VE curve is top-ranked.

    The comparison runs over ``k = 1 .. k*`` where ``k*`` is the smallest k
    at which every algorithm exceeds 99% VE.  At each k the best VE wins;
    curves within ``RANK_TIE_TOL`` percentage points of the best all receive
    credit.  Scores are ``100 * wins / k*``.

    Raises
    ------
    LengthMismatch
        If the curves differ in length.
    ThresholdNeverReached
        If some algorithm never exceeds 99% VE within the curves.
    """
    if not curves:
        raise ValueError("need at least one curve")
    names = list(curves)
    values = {name: _curve_values(curves[name]) for name in names}
    lengths = {len(vals) for vals in values.values()}
    if len(lengths) != 1:
        raise LengthMismatch(f"curves have differing lengths {sorted(lengths)}")
    length = lengths.pop()
    k_star = None
    for k in range(1, length + 1):
        if all(values[name][k - 1] > 99.0 for name in names):
            k_star = k
            break
    if k_star is None:
        worst = min(max(vals) for vals in values.values())
        raise ThresholdNeverReached(99.0, worst)
    wins = {name: 0 for name in names}
    for k in range(k_star):
        best = max(values[name][k] for name in names)
        for name in names:
            if values[name][k] >= best - RANK_TIE_TOL:
                wins[name] += 1
    return {name: 100.0 * wins[name] / k_star for name in names}
