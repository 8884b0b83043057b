"""Exhaustive-search baselines and greedy approximation diagnostics.

``exhaustive_optimal`` finds the best k-subset for a chosen metric by
enumerating every combination (guarded by a hard cap on the combination
count).  ``TabulatedSetFunction`` stores a set function's value for all
2^v subsets of a small ground set, which makes the structural quantities
computable exactly:

* ``curvature``: total curvature ``alpha`` in [0, 1] (0 for modular
  functions, approaching 1 when late gains collapse),
* ``submodularity_ratio``: ``gamma``, 1 for submodular functions and
  smaller when the sum of individual gains can undershoot a joint gain,
* ``bound_values``: the classical ``1 - ((k-1)/k)**k`` guarantee and its
  curvature-aware refinement
  ``(1/alpha) * (1 - ((k - alpha*gamma)/k)**k)``,
* ``bound_report``: runs the greedy engine on the tabulated function and
  packages the measured greedy/optimal ratio with the bounds that should
  floor it.

Enumeration here is deliberately brute force; it exists to check the fast
selectors, not to compete with them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, islice

import numpy as np

from .dataset import Dataset, normalize_unit
from .engine import Cardinality, GainFunction, greedy_select
from .errors import NotMonotone, TooLarge
from .metrics import CovarianceModel, frame_potential, mutual_information, variance_explained

__all__ = [
    "OptimalSubset",
    "OptimalComparison",
    "BoundReport",
    "TabulatedSetFunction",
    "exhaustive_optimal",
    "tabulated_optimal",
    "curvature",
    "submodularity_ratio",
    "bound_values",
    "bound_report",
    "compare_to_optimal",
]

#: Refuse exhaustive enumeration beyond this many combinations.
COMBINATION_CAP = 10_000_000

#: Ground sets above this size cannot be tabulated (2^v values).
TABULATION_LIMIT = 12

_CHUNK = 2048

#: Metrics supported by exhaustive search, mapped to their direction.
METRIC_MAXIMIZE = {"ve": True, "mi": True, "fp": False}


# =========================================================================
# Result types
# =========================================================================


@dataclass(frozen=True)
class OptimalSubset:
    """Best k-subset found by exhaustive enumeration.

    ``indices`` is a frozenset of 1-based variable indices; ``value`` is
    the metric value it achieves.  Among exactly tied subsets the
    lexicographically smallest index tuple is reported.
    """

    indices: frozenset[int]
    value: float
    metric: str

    @property
    def ordered(self) -> tuple[int, ...]:
        return tuple(sorted(self.indices))

    @property
    def k(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class OptimalComparison:
    """A greedy selection head measured against an exhaustive optimum.

    ``n_common`` counts shared variables.  ``achieved`` is the greedy
    head's metric value (None when no data/model was supplied to compute
    it) and ``ratio`` expresses it as a fraction of optimal, oriented so
    1.0 means parity for both maximized and minimized metrics.
    """

    n_common: int
    achieved: float | None
    optimal: float
    ratio: float | None


@dataclass(frozen=True)
class BoundReport:
    """Greedy performance on a tabulated function next to its guarantees.

    ``greedy_ratio`` is ``f(greedy k-set) / f(optimal k-set)``;
    ``b_n`` is the classical submodular guarantee and
    ``b_alpha_gamma`` the curvature-and-submodularity-ratio refinement.
    """

    k: int
    alpha: float
    gamma: float
    b_n: float
    b_alpha_gamma: float
    greedy_value: float
    optimal_value: float
    greedy_ratio: float


# =========================================================================
# Tabulated set functions
# =========================================================================


class _TabulatedGain(GainFunction):
    """Engine adapter: marginal gains read straight from the table."""

    def __init__(self, table: "TabulatedSetFunction"):
        self.table = table
        self.mask = 0

    def gain(self, selected, candidate: int) -> float:
        values = self.table.values
        return float(values[self.mask | (1 << candidate)] - values[self.mask])

    def commit(self, candidate: int) -> None:
        self.mask |= 1 << candidate

    def value(self) -> float:
        return float(self.table.values[self.mask])


class TabulatedSetFunction:
    """A set function on up to 12 variables stored as a 2^v value array.

    Index ``mask`` holds the value of the subset whose bits are set
    (bit ``i`` is variable ``i + 1``).  Construction validates monotone
    nondecrease by default and raises :class:`NotMonotone` with a witness
    ``(subset, added_index)`` when adding a variable decreases the value.
    """

    def __init__(self, v: int, values, validate: bool = True):
        v = int(v)
        if not 1 <= v <= TABULATION_LIMIT:
            raise TooLarge(2**v if v >= 1 else 0, 2**TABULATION_LIMIT)
        table = np.asarray(values, dtype=float).copy()
        if table.shape != (2**v,):
            raise ValueError(f"expected {2**v} values for v={v}, got shape {table.shape}")
        if not np.isfinite(table).all():
            raise ValueError("set-function values must be finite")
        table.flags.writeable = False
        self.v = v
        self.values = table
        if validate:
            self._check_monotone()

    @classmethod
    def from_callable(cls, v: int, fn, validate: bool = True) -> "TabulatedSetFunction":
        """Tabulate ``fn(subset_tuple)`` over all subsets.

        ``fn`` receives a sorted tuple of 1-based indices (empty for the
        empty set).
        """
        if not 1 <= v <= TABULATION_LIMIT:
            raise TooLarge(2**v if v >= 1 else 0, 2**TABULATION_LIMIT)
        table = np.empty(2**v)
        for mask in range(2**v):
            subset = tuple(i + 1 for i in range(v) if mask & (1 << i))
            table[mask] = fn(subset)
        return cls(v, table, validate=validate)

    def _check_monotone(self) -> None:
        scale = max(1.0, float(np.max(np.abs(self.values))))
        tol = 1e-9 * scale
        all_masks = np.arange(2**self.v)
        for i in range(self.v):
            bit = 1 << i
            without = all_masks[(all_masks & bit) == 0]
            drops = self.values[without] - self.values[without | bit]
            worst = int(np.argmax(drops))
            if drops[worst] > tol:
                mask = int(without[worst])
                subset = tuple(j + 1 for j in range(self.v) if mask & (1 << j))
                raise NotMonotone((subset, i + 1))

    def value_of(self, indices) -> float:
        """Value of a subset given as 1-based indices."""
        mask = 0
        for i in indices:
            i = int(i)
            if not 1 <= i <= self.v:
                raise ValueError(f"index {i} outside 1..{self.v}")
            mask |= 1 << (i - 1)
        return float(self.values[mask])

    def gain_function(self) -> GainFunction:
        """Fresh engine adapter positioned at the empty set."""
        return _TabulatedGain(self)


# =========================================================================
# Exhaustive search
# =========================================================================


def _combination_values_ve(gram: np.ndarray, energy: float, chunk: np.ndarray) -> np.ndarray:
    sub = gram[chunk[:, :, None], chunk[:, None, :]]
    cross = gram[chunk]
    try:
        solved = np.linalg.solve(sub, cross)
    except np.linalg.LinAlgError:
        solved = np.empty_like(cross)
        for row in range(chunk.shape[0]):
            solved[row] = np.linalg.lstsq(sub[row], cross[row], rcond=None)[0]
    captured = np.einsum("bkv,bkv->b", solved, cross)
    return 100.0 * captured / energy


def exhaustive_optimal(
    data: Dataset,
    k: int,
    metric: str = "ve",
    *,
    sigma: float | None = None,
    cap: int = COMBINATION_CAP,
) -> OptimalSubset:
    """Best k-subset of columns by brute-force enumeration.

    Parameters
    ----------
    data : Dataset
        Centered data.  For the frame-potential metric the columns are
        additionally scaled to unit norm internally when needed.
    k : int
        Subset size.
    metric : {"ve", "fp", "mi"}
        Variance explained (maximized), frame potential (minimized) or
        Gaussian mutual information (maximized).
    sigma : float, optional
        Noise scale for the mutual-information metric; defaults to 1% of
        the root-mean-square variable scale.
    cap : int
        Raise :class:`TooLarge` when ``C(v, k)`` exceeds this.
    """
    if metric not in METRIC_MAXIMIZE:
        raise ValueError(f"metric must be one of {sorted(METRIC_MAXIMIZE)}, got {metric!r}")
    if not data.centered:
        raise ValueError("exhaustive_optimal requires centered data")
    v = data.v
    k = int(k)
    if not 1 <= k <= v:
        raise ValueError(f"k must be in 1..{v}, got {k}")
    n_comb = math.comb(v, k)
    if n_comb > cap:
        raise TooLarge(n_comb, cap)

    maximize = METRIC_MAXIMIZE[metric]
    best_value = -math.inf if maximize else math.inf
    best_combo: tuple[int, ...] | None = None

    if metric == "mi":
        model = CovarianceModel.from_dataset(data, sigma)
        for combo in combinations(range(1, v + 1), k):
            value = mutual_information(model, combo)
            if value > best_value:
                best_value = value
                best_combo = combo
        return OptimalSubset(frozenset(best_combo), float(best_value), metric)

    if metric == "fp":
        unit = data if data.unit_norm else normalize_unit(data)
        gram_sq = (unit.values.T @ unit.values) ** 2
    else:
        gram = data.values.T @ data.values
        energy = float(np.trace(gram))

    combos = combinations(range(v), k)
    while True:
        chunk = list(islice(combos, _CHUNK))
        if not chunk:
            break
        idx = np.asarray(chunk, dtype=int)
        if metric == "fp":
            values = gram_sq[idx[:, :, None], idx[:, None, :]].sum(axis=(1, 2))
            pick = int(np.argmin(values))
            better = values[pick] < best_value
        else:
            values = _combination_values_ve(gram, energy, idx)
            pick = int(np.argmax(values))
            better = values[pick] > best_value
        if better:
            best_value = float(values[pick])
            best_combo = tuple(int(i) + 1 for i in idx[pick])
    return OptimalSubset(frozenset(best_combo), float(best_value), metric)


def tabulated_optimal(table: TabulatedSetFunction, k: int) -> OptimalSubset:
    """Best k-subset of a tabulated set function (maximization)."""
    k = int(k)
    if not 1 <= k <= table.v:
        raise ValueError(f"k must be in 1..{table.v}, got {k}")
    best_value = -math.inf
    best_combo: tuple[int, ...] | None = None
    for combo in combinations(range(table.v), k):
        mask = 0
        for i in combo:
            mask |= 1 << i
        value = float(table.values[mask])
        if value > best_value:
            best_value = value
            best_combo = tuple(i + 1 for i in combo)
    return OptimalSubset(frozenset(best_combo), best_value, "tabulated")


# =========================================================================
# Structural diagnostics
# =========================================================================


def curvature(table: TabulatedSetFunction) -> float:
    """Curvature ``alpha`` of a monotone tabulated function.

    ``alpha = max_{i, A subseteq B, i notin B} 1 - (f(B + i) - f(B)) / (f(A + i) - f(A))``

    evaluated exactly over the full lattice: for each variable the minimum
    marginal gain over all supersets of each ``A`` comes from a superset-min
    transform, so every (A, B) pair is covered in O(v^2 2^v).  Pairs whose
    denominator gain is numerically zero are skipped; the result is clamped
    to [0, 1].
    """
    values = table.values
    v = table.v
    scale = max(1.0, float(np.max(np.abs(values))))
    tol = 1e-12 * scale
    all_masks = np.arange(2**v)
    worst = math.inf
    for i in range(v):
        bit = 1 << i
        without = (all_masks & bit) == 0
        gains = np.full(2**v, math.inf)
        gains[without] = values[all_masks[without] | bit] - values[all_masks[without]]
        superset_min = gains.copy()
        for b in range(v):
            if b == i:
                continue
            other = 1 << b
            low_idx = all_masks[(all_masks & other) == 0]
            superset_min[low_idx] = np.minimum(
                superset_min[low_idx], superset_min[low_idx | other]
            )
        usable = without & (gains > tol)
        if not np.any(usable):
            continue
        worst = min(worst, float(np.min(superset_min[usable] / gains[usable])))
    if worst is math.inf:
        return 0.0
    return float(min(1.0, max(0.0, 1.0 - worst)))


def submodularity_ratio(table: TabulatedSetFunction) -> float:
    """Submodularity ratio ``gamma`` of a monotone tabulated function.

    The minimum over disjoint pairs (L, S), S nonempty, of
    ``sum_{x in S} (f(L + x) - f(L))  /  (f(L + S) - f(L))``.
    Pairs whose joint gain is numerically zero are vacuous and skipped;
    submodular functions give 1, and the singleton pairs keep the ratio
    from exceeding 1 whenever any informative pair exists.
    """
    values = table.values
    v = table.v
    scale = max(1.0, float(np.max(np.abs(values))))
    tol = 1e-12 * scale
    worst = math.inf
    for base in range(2**v):
        comp = [b for b in range(v) if not base & (1 << b)]
        if not comp:
            continue
        sub_masks = np.zeros(1, dtype=np.int64)
        numerators = np.zeros(1)
        for b in comp:
            single_gain = float(values[base | (1 << b)] - values[base])
            sub_masks = np.concatenate([sub_masks, sub_masks | (1 << b)])
            numerators = np.concatenate([numerators, numerators + single_gain])
        joint = values[base | sub_masks] - values[base]
        usable = joint > tol
        usable[0] = False
        if usable.any():
            worst = min(worst, float((numerators[usable] / joint[usable]).min()))
    if worst is math.inf:
        return 1.0
    return float(max(0.0, worst))


def bound_values(alpha: float, gamma: float, k: int) -> tuple[float, float]:
    """Greedy guarantees for a k-step run.

    Returns ``(b_n, b_alpha_gamma)``: the classical submodular bound
    ``1 - ((k-1)/k)**k`` and the refinement
    ``(1/alpha) * (1 - ((k - alpha*gamma)/k)**k)``, which approaches
    ``gamma`` as the curvature vanishes.
    """
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    b_n = 1.0 - ((k - 1) / k) ** k
    if alpha < 1e-12:
        b_ag = float(gamma)
    else:
        b_ag = (1.0 / alpha) * (1.0 - ((k - alpha * gamma) / k) ** k)
    return float(b_n), float(b_ag)


def bound_report(table: TabulatedSetFunction, k: int) -> BoundReport:
    """Run greedy on a tabulated function and report value versus bounds.

    The greedy k-set comes from the same engine the selectors use; the
    optimum from full enumeration.  For a monotone function the measured
    ``greedy_ratio`` should sit at or above ``b_alpha_gamma`` (and above
    ``b_n`` whenever the function is submodular).
    """
    optimal = tabulated_optimal(table, k)
    run = greedy_select(table.gain_function(), table.v, Cardinality(int(k)))
    greedy_value = table.value_of(tuple(i + 1 for i in run.order))
    alpha = curvature(table)
    gamma = submodularity_ratio(table)
    b_n, b_ag = bound_values(alpha, gamma, k)
    if optimal.value > 0.0:
        ratio = greedy_value / optimal.value
    else:
        ratio = 1.0
    return BoundReport(
        k=int(k),
        alpha=alpha,
        gamma=gamma,
        b_n=b_n,
        b_alpha_gamma=b_ag,
        greedy_value=float(greedy_value),
        optimal_value=float(optimal.value),
        greedy_ratio=float(ratio),
    )


def compare_to_optimal(
    order,
    optimal: OptimalSubset,
    *,
    data: Dataset | None = None,
    model: CovarianceModel | None = None,
) -> OptimalComparison:
    """Measure the head of a greedy order against an exhaustive optimum.

    The first ``optimal.k`` entries of ``order`` are compared.  When
    ``data`` (for "ve"/"fp") or ``model`` (for "mi") is provided, the
    head's metric value and its fraction-of-optimal ratio are included;
    the ratio is oriented so 1.0 is parity for minimized metrics too.
    """
    head = tuple(int(i) for i in order)[: optimal.k]
    if len(head) < optimal.k:
        raise ValueError(f"order has {len(head)} entries, optimum has {optimal.k}")
    n_common = len(set(head) & optimal.indices)
    achieved: float | None = None
    if optimal.metric == "ve" and data is not None:
        achieved = variance_explained(data, head)
    elif optimal.metric == "fp" and data is not None:
        unit = data if data.unit_norm else normalize_unit(data)
        achieved = frame_potential(unit, head)
    elif optimal.metric == "mi" and model is not None:
        achieved = mutual_information(model, head)
    ratio: float | None = None
    if achieved is not None:
        if optimal.metric == "fp":
            ratio = optimal.value / achieved if achieved > 0.0 else 1.0
        else:
            ratio = achieved / optimal.value if optimal.value > 0.0 else 1.0
    return OptimalComparison(
        n_common=n_common,
        achieved=achieved,
        optimal=float(optimal.value),
        ratio=ratio,
    )
