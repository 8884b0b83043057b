"""The seven greedy unsupervised variable-selection algorithms.

Every selector is a gain function plus a preprocessing recipe wired into a
greedy engine:

====================  =======================================================
``fsca_select``       Forward selection component analysis: per step, pick
                      the residual column whose rank-one reconstruction
                      captures the most remaining variance, then deflate.
``lfsca_select``      The same gain driven through the lazy engine.
``fosmod_select``     Forward orthogonal search by maximal average squared
                      correlation between residual candidates and all
                      original columns; deflates like FSCA.
``pfs_select``        Principal-feature selection: per step, correlate the
                      residual columns with the residual's first principal
                      component (NIPALS) and pick the best-aligned one.
``itfs_select``       Information-theoretic selection under a Gaussian
                      model: maximize the posterior-variance ratio
                      ``var(x|S) / var(x|U\\x)``.
``fsfp_fsca_select``  Frame-potential minimization on unit-norm columns,
                      seeded with the first FSCA pick.
``ufs_select``        Unsupervised forward selection: start from the least
                      correlated column pair and repeatedly add the column
                      with the smallest squared multiple correlation with
                      the current selection's orthonormal basis.
====================  =======================================================

Selectors require explicitly centered input (none of them center silently).
The frame-potential and UFS selectors additionally scale columns to unit
norm themselves when the input is not already unit-norm, since that
normalization is part of those algorithms.

All results report 1-based variable indices.  The VE curve attached to each
result is always computed against the centered (not normalized) data, so
curves are comparable across algorithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from time import perf_counter

import numpy as np

from ._linalg import SpdFactorizationError, spd_inverse, spd_solve
from .dataset import DEGENERATE_REL_TOL, Dataset, normalize_unit
from .engine import (
    EXCLUDED,
    Cardinality,
    GainFunction,
    StoppingRule,
    Threshold,
    greedy_select,
    lazy_greedy_select,
)
from .errors import RankDeficient, SingularCovariance
from .metrics import CovarianceModel, VECurve, default_sigma

__all__ = [
    "SelectionResult",
    "OrthonormalBasis",
    "NipalsResult",
    "nipals_first_pc",
    "fsca_select",
    "lfsca_select",
    "fosmod_select",
    "pfs_select",
    "itfs_select",
    "fsfp_fsca_select",
    "ufs_select",
    "ALGORITHMS",
]


# =========================================================================
# Result types
# =========================================================================


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of one selector run.

    Attributes
    ----------
    algorithm : str
        Registry name of the selector.
    order : tuple of int
        Selected variables, 1-based, in selection order.
    ve_curve : VECurve
        Variance explained (percent, against the centered data) after each
        step.
    native_trace : tuple of float
        Per-step values of the algorithm's own criterion: the VE gain for
        FSCA variants, the average squared correlation for FOS-MOD, the
        absolute principal-component correlation for PFS, the
        posterior-variance ratio for ITFS, the frame potential of the
        selection for FSFP-FSCA, and the squared multiple correlation of
        the committed column for UFS (its first two entries hold the
        absolute inner product of the starting pair).
    eval_count : int
        Number of candidate-gain evaluations performed.
    elapsed : float
        Wall-clock seconds for the selection (preprocessing done inside the
        selector, such as unit-normalization, included).
    warnings : tuple of str
        Non-fatal anomalies (early exhaustion, non-converged NIPALS).
    """

    algorithm: str
    order: tuple[int, ...]
    ve_curve: VECurve
    native_trace: tuple[float, ...]
    eval_count: int
    elapsed: float
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        object.__setattr__(self, "order", order)
        if len(set(order)) != len(order):
            raise ValueError(f"duplicate indices in order {order}")
        native = tuple(float(x) for x in self.native_trace)
        object.__setattr__(self, "native_trace", native)
        if not (len(order) == len(self.ve_curve) == len(native)):
            raise ValueError("order, ve_curve and native_trace lengths differ")
        object.__setattr__(self, "warnings", tuple(str(w) for w in self.warnings))

    @property
    def k(self) -> int:
        return len(self.order)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "order": list(self.order),
            "ve_curve": list(self.ve_curve.values),
            "native_trace": list(self.native_trace),
            "eval_count": self.eval_count,
            "elapsed": self.elapsed,
            "warnings": list(self.warnings),
        }


class OrthonormalBasis:
    """An orthonormal basis grown one column at a time.

    Uses modified Gram-Schmidt with a second orthogonalization pass for
    numerical stability.  ``extend`` returns the new unit direction and
    raises :class:`RankDeficient` when the added column is numerically
    dependent on the current basis.
    """

    #: A candidate whose orthogonal part is below this fraction of its norm
    #: is considered dependent on the basis.
    DEPENDENT_TOL = 1e-10

    def __init__(self, m: int, capacity: int):
        self._store = np.zeros((m, capacity))
        self._count = 0

    @property
    def columns(self) -> np.ndarray:
        """The current m x j orthonormal matrix (read-only view)."""
        view = self._store[:, : self._count]
        view.flags.writeable = False
        return view

    @property
    def count(self) -> int:
        return self._count

    def extend(self, column: np.ndarray) -> np.ndarray:
        x = np.asarray(column, dtype=float)
        norm_x = float(np.linalg.norm(x))
        if norm_x == 0.0:
            raise RankDeficient(())
        c = x.copy()
        for _ in range(2):
            if self._count:
                basis = self._store[:, : self._count]
                c -= basis @ (basis.T @ c)
        norm_c = float(np.linalg.norm(c))
        if norm_c <= self.DEPENDENT_TOL * norm_x:
            raise RankDeficient(())
        c /= norm_c
        if self._count >= self._store.shape[1]:
            raise ValueError("basis capacity exceeded")
        self._store[:, self._count] = c
        self._count += 1
        return c

    @classmethod
    def from_columns(cls, columns: np.ndarray) -> "OrthonormalBasis":
        """Build a basis from the columns of a matrix, left to right."""
        m, j = columns.shape
        basis = cls(m, j)
        for idx in range(j):
            basis.extend(columns[:, idx])
        return basis


@dataclass(frozen=True)
class NipalsResult:
    """First principal component scores via NIPALS.

    ``scores`` is the m-vector of first-component scores, with its sign
    fixed so the largest-magnitude loading is positive.  ``converged`` is
    False when the iteration cap was reached before the relative change of
    the score vector fell below tolerance.
    """

    scores: np.ndarray
    iterations: int
    converged: bool


# =========================================================================
# Shared internals
# =========================================================================


def _require_centered(data: Dataset, name: str) -> None:
    if not data.centered:
        raise ValueError(f"{name} requires centered data (apply center_columns first)")


def _make_stop(k, tau, v: int, min_k: int = 1) -> StoppingRule:
    if (k is None) == (tau is None):
        raise ValueError("provide exactly one of k and tau")
    if k is not None:
        k = int(k)
        if not min_k <= k <= v:
            raise ValueError(f"k must be in {min_k}..{v}, got {k}")
        return Cardinality(k)
    return Threshold(float(tau))


def _clamp_ve(value: float) -> float:
    return min(max(value, 0.0), 100.0)


class _ResidualState:
    """Mutable residual of the data matrix plus variance-explained tracking.

    Energy captured by each deflation is accumulated, so the VE after step j
    is available in O(1) without re-projecting.
    """

    def __init__(self, data: Dataset):
        self.x = data.values
        self.r = data.values.copy()
        self.x_energy = float(np.linalg.norm(self.x)) ** 2
        self.degenerate_sq = (DEGENERATE_REL_TOL**2) * self.x_energy
        self.excluded = np.zeros(data.v, dtype=bool)
        self.captured = 0.0
        self.ve_trace: list[float] = []

    def residual_sqnorms(self) -> np.ndarray:
        return np.einsum("ij,ij->j", self.r, self.r)

    def mark_degenerate(self, sqnorms: np.ndarray) -> np.ndarray:
        """Permanently exclude columns whose residual energy is gone."""
        self.excluded |= sqnorms <= self.degenerate_sq
        return self.excluded

    def deflate(self, pivot0: int) -> None:
        r = self.r[:, pivot0].copy()
        rr = float(r @ r)
        coeffs = (r @ self.r) / rr
        self.r -= np.outer(r, coeffs)
        self.r[:, pivot0] = 0.0
        self.excluded[pivot0] = True
        self.captured += rr * float(coeffs @ coeffs)
        self.ve_trace.append(_clamp_ve(100.0 * self.captured / self.x_energy))


class _VeTracker:
    """Incremental VE tracking for selectors that do not deflate.

    Selected columns are orthonormalized one at a time; each new basis
    direction's captured energy against the centered data matrix is added
    to the running total.
    """

    def __init__(self, centered_values: np.ndarray):
        self.x = centered_values
        self.energy = float(np.linalg.norm(self.x)) ** 2
        self.basis = OrthonormalBasis(self.x.shape[0], self.x.shape[1])
        self.captured = 0.0
        self.ve_trace: list[float] = []

    def add_column(self, column: np.ndarray, strict: bool = False) -> np.ndarray | None:
        try:
            direction = self.basis.extend(column)
        except RankDeficient:
            if strict:
                raise
            direction = None
        if direction is not None:
            t = direction @ self.x
            self.captured += float(t @ t)
        self.ve_trace.append(_clamp_ve(100.0 * self.captured / self.energy))
        return direction


# =========================================================================
# FSCA and lazy FSCA
# =========================================================================


class _FscaGain(GainFunction):
    """VE gain of a residual column: ``100 ||R^T r||^2 / (r^T r ||X||^2)``.

    Every evaluation — full sweeps in the plain engine and head
    re-evaluations in the lazy engine — costs one matrix-vector product
    against the residual.  Keeping the two engines on the same evaluation
    primitive is what makes their wall-clock ratio measure the evaluation
    savings of lazy selection rather than a batching artifact.
    """

    def __init__(self, state: _ResidualState):
        self.state = state

    def gain(self, selected, candidate: int) -> float:
        state = self.state
        if state.excluded[candidate]:
            return EXCLUDED
        r = state.r[:, candidate]
        rr = float(r @ r)
        if rr <= state.degenerate_sq:
            state.excluded[candidate] = True
            return EXCLUDED
        t = r @ state.r
        return 100.0 * float(t @ t) / (rr * state.x_energy)

    def commit(self, candidate: int) -> None:
        self.state.deflate(candidate)

    def value(self) -> float:
        trace = self.state.ve_trace
        return trace[-1] if trace else 0.0


# =========================================================================
# FOS-MOD
# =========================================================================


class _FosModGain(GainFunction):
    """Average squared correlation of a residual column with all original
    columns: ``(1/v) sum_j (x_j^T r)^2 / (||x_j||^2 ||r||^2)``.

    Columns already selected contribute zero because the residual is
    orthogonal to them; original columns with zero norm are left out of the
    average and excluded from candidacy.
    """

    def __init__(self, state: _ResidualState):
        self.state = state
        sqnorms = np.einsum("ij,ij->j", state.x, state.x)
        self.inv_sqnorms = np.zeros_like(sqnorms)
        nonzero = sqnorms > 0.0
        self.inv_sqnorms[nonzero] = 1.0 / sqnorms[nonzero]
        state.excluded |= ~nonzero
        self.v = state.x.shape[1]

    def gain(self, selected, candidate: int) -> float:
        state = self.state
        if state.excluded[candidate]:
            return EXCLUDED
        r = state.r[:, candidate]
        rr = float(r @ r)
        if rr <= state.degenerate_sq:
            state.excluded[candidate] = True
            return EXCLUDED
        u = r @ state.x
        return float((u * u) @ self.inv_sqnorms) / (self.v * rr)

    def gain_all(self, selected, candidates):
        state = self.state
        sqnorms = state.residual_sqnorms()
        excluded = state.mark_degenerate(sqnorms)
        cross = state.r.T @ state.x
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = (cross * cross) @ self.inv_sqnorms / (self.v * sqnorms)
        scores[excluded] = EXCLUDED
        return scores[list(candidates)]

    def commit(self, candidate: int) -> None:
        self.state.deflate(candidate)

    def value(self) -> float:
        trace = self.state.ve_trace
        return trace[-1] if trace else 0.0


# =========================================================================
# NIPALS and PFS
# =========================================================================


def nipals_first_pc(data, tol: float = 1e-9, max_iter: int = 500) -> NipalsResult:
    """First principal-component scores of a matrix by NIPALS iteration.

    Starts from the largest-norm column, alternates loading and score
    updates, and stops when successive score vectors differ by at most
    ``tol`` in relative norm.  When ``max_iter`` is reached first, the best
    iterate is returned with ``converged=False``.

    Parameters
    ----------
    data : Dataset or ndarray
        Matrix whose first principal component is sought.
    """
    matrix = data.values if isinstance(data, Dataset) else np.asarray(data, dtype=float)
    sqnorms = np.einsum("ij,ij->j", matrix, matrix)
    start = int(np.argmax(sqnorms))
    if sqnorms[start] == 0.0:
        raise ValueError("matrix has no nonzero column")
    scores = matrix[:, start].copy()
    iterations = 0
    converged = False
    for iterations in range(1, max_iter + 1):
        loadings = matrix.T @ scores
        loadings /= float(np.linalg.norm(loadings))
        new_scores = matrix @ loadings
        delta = float(np.linalg.norm(new_scores - scores))
        scores = new_scores
        if delta <= tol * float(np.linalg.norm(new_scores)):
            converged = True
            break
    final_loadings = matrix.T @ scores
    peak = int(np.argmax(np.abs(final_loadings)))
    if final_loadings[peak] < 0.0:
        scores = -scores
    return NipalsResult(scores, iterations, converged)


class _PfsGain(GainFunction):
    """Absolute correlation of residual columns with the residual's first
    principal component; the component is recomputed once per step and the
    per-candidate scores cached."""

    def __init__(self, state: _ResidualState):
        self.state = state
        self._cached_step = -1
        self._scores: np.ndarray | None = None
        self.warnings: list[str] = []

    def _ensure_scores(self, selected) -> np.ndarray:
        step = len(selected)
        if step == self._cached_step:
            return self._scores
        state = self.state
        sqnorms = state.residual_sqnorms()
        excluded = state.mark_degenerate(sqnorms)
        scores = np.full(state.r.shape[1], EXCLUDED)
        if not excluded.all():
            component = nipals_first_pc(state.r)
            if not component.converged:
                self.warnings.append(
                    f"NIPALS stopped at {component.iterations} iterations without converging"
                )
            p1 = component.scores
            pp = float(p1 @ p1)
            u = p1 @ state.r
            with np.errstate(divide="ignore", invalid="ignore"):
                corr = np.abs(u) / np.sqrt(sqnorms * pp)
            scores[~excluded] = corr[~excluded]
        self._scores = scores
        self._cached_step = step
        return scores

    def gain(self, selected, candidate: int) -> float:
        return float(self._ensure_scores(selected)[candidate])

    def gain_all(self, selected, candidates):
        return self._ensure_scores(selected)[list(candidates)]

    def commit(self, candidate: int) -> None:
        self.state.deflate(candidate)
        self._cached_step = -1

    def value(self) -> float:
        trace = self.state.ve_trace
        return trace[-1] if trace else 0.0


# =========================================================================
# ITFS
# =========================================================================


class _ItfsGain(GainFunction):
    """Posterior-variance ratio ``var(x|S) / var(x|U\\x)`` under a Gaussian
    model with isotropic noise regularization.

    Per step, one factorization of the selected block serves every
    numerator and one inversion of the unselected block serves every
    denominator (the posterior variance of ``x_i`` given the rest of the
    unselected block is the reciprocal of the corresponding diagonal entry
    of the inverse).
    """

    def __init__(self, data: Dataset, sigma: float | None):
        model = CovarianceModel.from_dataset(data, sigma)
        self.cov = model.cov
        self.sigma = model.sigma_noise
        self.s2 = model.sigma_noise**2
        self.v = model.v
        self.committed: list[int] = []
        self.tracker = _VeTracker(data.values)
        self._cached_step = -1
        self._scores: np.ndarray | None = None

    def _ensure_scores(self) -> np.ndarray:
        step = len(self.committed)
        if step == self._cached_step:
            return self._scores
        cov = self.cov
        unsel = np.array(
            sorted(set(range(self.v)) - set(self.committed)), dtype=int
        )
        scores = np.full(self.v, EXCLUDED)
        try:
            block = cov[np.ix_(unsel, unsel)] + self.s2 * np.eye(unsel.size)
            inverse = spd_inverse(block)
            denominators = 1.0 / np.diag(inverse)
            numerators = np.diag(cov)[unsel] + self.s2
            if self.committed:
                sel = np.array(self.committed, dtype=int)
                sel_block = cov[np.ix_(sel, sel)] + self.s2 * np.eye(sel.size)
                cross = cov[np.ix_(sel, unsel)]
                solved = spd_solve(sel_block, cross)
                numerators = numerators - np.einsum("ij,ij->j", cross, solved)
        except SpdFactorizationError as exc:
            raise SingularCovariance(str(exc)) from exc
        scores[unsel] = numerators / denominators
        self._scores = scores
        self._cached_step = step
        return scores

    def gain(self, selected, candidate: int) -> float:
        return float(self._ensure_scores()[candidate])

    def gain_all(self, selected, candidates):
        return self._ensure_scores()[list(candidates)]

    def commit(self, candidate: int) -> None:
        self.committed.append(candidate)
        self._cached_step = -1
        self.tracker.add_column(self.tracker.x[:, candidate])

    def value(self) -> float:
        trace = self.tracker.ve_trace
        return trace[-1] if trace else 0.0


# =========================================================================
# FSFP-FSCA
# =========================================================================


class _FsfpGain(GainFunction):
    """Marginal frame-potential reduction of adding a unit-norm column.

    Adding ``x_i`` to the selection raises the frame potential by
    ``<x_i, x_i>^2 + 2 sum_{j in S} <x_i, x_j>^2``; the gain is the
    negative of that increment, and the per-candidate inner-product sums
    are maintained incrementally so each evaluation is O(1).
    """

    def __init__(self, normalized: Dataset, centered: Dataset):
        self.gram = normalized.values.T @ normalized.values
        self.diag_sq = np.diag(self.gram) ** 2
        self.pair_sums = np.zeros(normalized.v)
        self.tracker = _VeTracker(centered.values)
        self.fp = 0.0
        self.fp_trace: list[float] = []

    def gain(self, selected, candidate: int) -> float:
        return -(float(self.diag_sq[candidate]) + 2.0 * float(self.pair_sums[candidate]))

    def gain_all(self, selected, candidates):
        cand = list(candidates)
        return -(self.diag_sq[cand] + 2.0 * self.pair_sums[cand])

    def commit(self, candidate: int) -> None:
        self.fp += float(self.diag_sq[candidate]) + 2.0 * float(self.pair_sums[candidate])
        self.fp_trace.append(self.fp)
        self.pair_sums += self.gram[:, candidate] ** 2
        self.tracker.add_column(self.tracker.x[:, candidate])

    def value(self) -> float:
        trace = self.tracker.ve_trace
        return trace[-1] if trace else 0.0


# =========================================================================
# UFS
# =========================================================================


class _UfsGain(GainFunction):
    """Negated squared multiple correlation with the selection's basis.

    ``R^2(x_i, C_S) = sum_j (c_j^T x_i)^2`` is maintained incrementally:
    committing a column appends one orthonormal direction and adds its
    squared inner products with every column.
    """

    def __init__(self, normalized: Dataset, centered: Dataset):
        self.normalized = normalized.values
        self.r_squared = np.zeros(normalized.v)
        self.tracker = _VeTracker(centered.values)
        self.committed: list[int] = []

    def gain(self, selected, candidate: int) -> float:
        return -float(self.r_squared[candidate])

    def gain_all(self, selected, candidates):
        return -self.r_squared[list(candidates)]

    def commit(self, candidate: int) -> None:
        try:
            direction = self.tracker.add_column(self.normalized[:, candidate], strict=True)
        except RankDeficient:
            raise RankDeficient(
                tuple(i + 1 for i in self.committed) + (candidate + 1,)
            ) from None
        self.committed.append(candidate)
        self.r_squared += (direction @ self.normalized) ** 2

    def value(self) -> float:
        trace = self.tracker.ve_trace
        return trace[-1] if trace else 0.0


class _UfsRebuildGain(_UfsGain):
    """UFS gain that rebuilds the orthonormal basis from scratch each step
    instead of extending it; used to cross-check the incremental path."""

    def commit(self, candidate: int) -> None:
        try:
            self.tracker.add_column(self.normalized[:, candidate], strict=True)
        except RankDeficient:
            raise RankDeficient(
                tuple(i + 1 for i in self.committed) + (candidate + 1,)
            ) from None
        self.committed.append(candidate)
        basis = OrthonormalBasis.from_columns(self.normalized[:, self.committed])
        projections = basis.columns.T @ self.normalized
        self.r_squared = np.einsum("ij,ij->j", projections, projections)


def _least_correlated_pair(gram: np.ndarray) -> tuple[int, int]:
    """0-based (i, j), i < j, minimizing |gram[i, j]|; lexicographic ties."""
    v = gram.shape[0]
    magnitude = np.abs(gram).astype(float)
    magnitude[np.tril_indices(v)] = np.inf
    flat = int(np.argmin(magnitude))
    return flat // v, flat % v


# =========================================================================
# Selector fronts
# =========================================================================


def _engine_for(name: str):
    engines = {"greedy": greedy_select, "lazy": lazy_greedy_select}
    if name not in engines:
        raise ValueError(f"engine must be one of {sorted(engines)}, got {name!r}")
    return engines[name]


def _exhaustion_warnings(run) -> list[str]:
    if run.exhausted:
        return ["selection stopped early: every remaining column lies in the selected span"]
    return []


def _fsca_impl(data: Dataset, k, tau, lazy: bool) -> SelectionResult:
    name = "lfsca" if lazy else "fsca"
    _require_centered(data, name)
    started = perf_counter()
    stop = _make_stop(k, tau, data.v)
    state = _ResidualState(data)
    gain = _FscaGain(state)
    run = (lazy_greedy_select if lazy else greedy_select)(gain, data.v, stop)
    elapsed = perf_counter() - started
    return SelectionResult(
        algorithm=name,
        order=tuple(i + 1 for i in run.order),
        ve_curve=VECurve(tuple(state.ve_trace)),
        native_trace=run.gains,
        eval_count=run.eval_count,
        elapsed=elapsed,
        warnings=tuple(_exhaustion_warnings(run)),
    )


def fsca_select(data: Dataset, k: int | None = None, *, tau: float | None = None) -> SelectionResult:
    """Forward selection component analysis.

    Per step, every remaining residual column is scored by the variance its
    rank-one reconstruction captures, the best column (lowest index on
    ties) is selected, and the residual is deflated by it.  Stops after
    ``k`` selections, or, when ``tau`` is given instead, once the variance
    explained reaches ``tau`` percent.
    """
    return _fsca_impl(data, k, tau, lazy=False)


def lfsca_select(data: Dataset, k: int | None = None, *, tau: float | None = None) -> SelectionResult:
    """FSCA driven through the lazy engine.

    Bounds from earlier steps stand in for exact scores until the head of
    the bound list has been re-evaluated, which skips most evaluations per
    step; the VE gain is not exactly submodular, so sequences can deviate
    from plain FSCA, with VE differences that stay within a small fraction
    of a percentage point in practice.
    """
    return _fsca_impl(data, k, tau, lazy=True)


def fosmod_select(data: Dataset, k: int | None = None, *, tau: float | None = None) -> SelectionResult:
    """Forward orthogonal search by maximal average squared correlation.

    Per step, picks the residual column with the largest average squared
    correlation against all original columns, then deflates.  Threshold
    mode stops once variance explained reaches ``tau`` percent.
    """
    _require_centered(data, "fosmod")
    started = perf_counter()
    stop = _make_stop(k, tau, data.v)
    state = _ResidualState(data)
    gain = _FosModGain(state)
    run = greedy_select(gain, data.v, stop)
    elapsed = perf_counter() - started
    return SelectionResult(
        algorithm="fosmod",
        order=tuple(i + 1 for i in run.order),
        ve_curve=VECurve(tuple(state.ve_trace)),
        native_trace=run.gains,
        eval_count=run.eval_count,
        elapsed=elapsed,
        warnings=tuple(_exhaustion_warnings(run)),
    )


def pfs_select(data: Dataset, k: int | None = None, *, tau: float | None = None) -> SelectionResult:
    """Principal-feature selection.

    Per step, computes the first principal component of the residual by
    NIPALS and selects the residual column with the largest absolute
    correlation to it, then deflates.
    """
    _require_centered(data, "pfs")
    started = perf_counter()
    stop = _make_stop(k, tau, data.v)
    state = _ResidualState(data)
    gain = _PfsGain(state)
    run = greedy_select(gain, data.v, stop)
    elapsed = perf_counter() - started
    return SelectionResult(
        algorithm="pfs",
        order=tuple(i + 1 for i in run.order),
        ve_curve=VECurve(tuple(state.ve_trace)),
        native_trace=run.gains,
        eval_count=run.eval_count,
        elapsed=elapsed,
        warnings=tuple(_exhaustion_warnings(run) + gain.warnings),
    )


def itfs_select(
    data: Dataset,
    k: int | None = None,
    *,
    tau: float | None = None,
    sigma: float | None = None,
) -> SelectionResult:
    """Information-theoretic forward selection under a Gaussian model.

    Builds the covariance ``X^T X / m`` once, then per step selects the
    candidate maximizing the ratio of its posterior variance given the
    selection to its posterior variance given the other unselected
    variables, both regularized by the noise variance ``sigma**2``.

    ``sigma`` defaults to 1% of the root-mean-square variable scale.
    """
    _require_centered(data, "itfs")
    if sigma is not None and not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    started = perf_counter()
    stop = _make_stop(k, tau, data.v)
    gain = _ItfsGain(data, sigma)
    run = greedy_select(gain, data.v, stop)
    elapsed = perf_counter() - started
    return SelectionResult(
        algorithm="itfs",
        order=tuple(i + 1 for i in run.order),
        ve_curve=VECurve(tuple(gain.tracker.ve_trace)),
        native_trace=run.gains,
        eval_count=run.eval_count,
        elapsed=elapsed,
        warnings=tuple(_exhaustion_warnings(run)),
    )


def fsfp_fsca_select(
    data: Dataset,
    k: int | None = None,
    *,
    tau: float | None = None,
    engine: str = "greedy",
) -> SelectionResult:
    """Frame-potential minimization seeded with the first FSCA pick.

    Columns are scaled to unit norm (part of the algorithm; applied here
    when the input is not already unit-norm).  The first variable is the
    FSCA choice on the normalized data; each later step adds the candidate
    whose inclusion increases the frame potential of the selection least.
    The frame-potential gain is submodular, so ``engine="lazy"`` reproduces
    the plain sequence exactly.
    """
    _require_centered(data, "fsfp_fsca")
    started = perf_counter()
    run_engine = _engine_for(engine)
    normalized = data if data.unit_norm else normalize_unit(data)
    first = fsca_select(normalized, 1)
    first0 = first.order[0] - 1
    gain = _FsfpGain(normalized, data)
    gain.commit(first0)
    if k is not None and int(k) == 1 and tau is None:
        elapsed = perf_counter() - started
        return SelectionResult(
            algorithm="fsfp-fsca",
            order=(first.order[0],),
            ve_curve=VECurve(tuple(gain.tracker.ve_trace)),
            native_trace=tuple(gain.fp_trace),
            eval_count=first.eval_count,
            elapsed=elapsed,
        )
    stop = _make_stop(k, tau, data.v)
    run = run_engine(gain, data.v, stop, initial=(first0,))
    elapsed = perf_counter() - started
    return SelectionResult(
        algorithm="fsfp-fsca",
        order=tuple(i + 1 for i in run.order),
        ve_curve=VECurve(tuple(gain.tracker.ve_trace)),
        native_trace=tuple(gain.fp_trace),
        eval_count=first.eval_count + run.eval_count,
        elapsed=elapsed,
        warnings=tuple(_exhaustion_warnings(run)),
    )


def ufs_select(
    data: Dataset,
    k: int | None = None,
    *,
    tau: float | None = None,
    engine: str = "greedy",
    rebuild_basis: bool = False,
) -> SelectionResult:
    """Unsupervised forward selection.

    Columns are scaled to unit norm (applied here when needed).  The first
    two variables are the least-correlated column pair; each later step
    adds the candidate with the smallest squared multiple correlation
    against the orthonormal basis of the selection.  The underlying set
    function is submodular, so ``engine="lazy"`` reproduces the plain
    sequence exactly.  ``rebuild_basis=True`` recomputes the basis from
    scratch every step instead of extending it (slower; used for
    numerical cross-checks).

    Requires ``k >= 2`` in cardinality mode.
    """
    _require_centered(data, "ufs")
    if data.v < 2:
        raise ValueError("ufs needs at least two variables")
    started = perf_counter()
    run_engine = _engine_for(engine)
    normalized = data if data.unit_norm else normalize_unit(data)
    gram = normalized.values.T @ normalized.values
    i1, i2 = _least_correlated_pair(gram)
    pair_value = abs(float(gram[i1, i2]))
    gain_cls = _UfsRebuildGain if rebuild_basis else _UfsGain
    gain = gain_cls(normalized, data)
    gain.commit(i1)
    gain.commit(i2)
    native = [pair_value, pair_value]
    if k is not None and int(k) == 2 and tau is None:
        elapsed = perf_counter() - started
        return SelectionResult(
            algorithm="ufs",
            order=(i1 + 1, i2 + 1),
            ve_curve=VECurve(tuple(gain.tracker.ve_trace)),
            native_trace=tuple(native),
            eval_count=0,
            elapsed=elapsed,
        )
    stop = _make_stop(k, tau, data.v, min_k=2)
    run = run_engine(gain, data.v, stop, initial=(i1, i2))
    native.extend(-g for g in run.gains[2:])
    elapsed = perf_counter() - started
    return SelectionResult(
        algorithm="ufs",
        order=tuple(i + 1 for i in run.order),
        ve_curve=VECurve(tuple(gain.tracker.ve_trace)),
        native_trace=tuple(native),
        eval_count=run.eval_count,
        elapsed=elapsed,
        warnings=tuple(_exhaustion_warnings(run)),
    )


#: Registry of selector callables by their public names.
ALGORITHMS = {
    "fsca": fsca_select,
    "lfsca": lfsca_select,
    "fosmod": fosmod_select,
    "pfs": pfs_select,
    "itfs": itfs_select,
    "fsfp-fsca": fsfp_fsca_select,
    "ufs": ufs_select,
}
