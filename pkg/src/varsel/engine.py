"""Greedy and lazy-greedy selection engines.

Both engines maximize a user-supplied gain function one candidate at a time.
The plain engine re-evaluates every remaining candidate each step.  The lazy
engine keeps a descending-sorted list of upper bounds (each candidate's most
recent gain), re-evaluates only the head of the list until the head is known
to be exact, and commits it; for submodular gains this reproduces the plain
sequence exactly with far fewer evaluations, since gains can only shrink as
the selection grows.

Candidates are identified by 0-based ids ``0 .. v-1`` at this layer; the
selector layer converts to the 1-based indices used everywhere else.

Tie-breaking: comparisons are exact float comparisons, and equal gains go to
the lowest candidate id, in both engines (the plain engine scans ascending
ids and replaces only on a strict improvement; the lazy list orders equal
bounds by ascending id).

A gain of ``-inf`` marks a candidate as permanently excluded (for example, a
column that has fallen inside the span of the selection); neither engine
will commit such a candidate.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ThresholdNeverReached

EXCLUDED = float("-inf")


# =========================================================================
# Stopping rules
# =========================================================================


@dataclass(frozen=True)
class Cardinality:
    """Stop when the selection (warm start included) reaches ``k`` items."""

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k}")
        object.__setattr__(self, "k", int(self.k))


@dataclass(frozen=True)
class Threshold:
    """Stop once the tracked criterion value reaches ``tau``."""

    tau: float

    def __post_init__(self):
        tau = float(self.tau)
        if not math.isfinite(tau):
            raise ValueError(f"tau must be finite, got {tau}")
        object.__setattr__(self, "tau", tau)


StoppingRule = Cardinality | Threshold


# =========================================================================
# Gain functions
# =========================================================================


class GainFunction(ABC):
    """Evaluator of candidate gains against the current selection.

    ``gain`` must be a pure function of ``(selected, candidate)``;
    ``commit`` notifies the function that a candidate was selected so it can
    update internal state (residuals, running sums, caches).
    """

    @abstractmethod
    def gain(self, selected: Sequence[int], candidate: int) -> float:
        """Gain of adding ``candidate`` (0-based) to ``selected``."""

    def gain_all(self, selected: Sequence[int], candidates: Sequence[int]):
        """Optional batch evaluation for full scans; return an array aligned
        with ``candidates`` or ``None`` to fall back to per-candidate calls."""
        return None

    def commit(self, candidate: int) -> None:
        """Accept ``candidate`` into the selection."""

    def value(self) -> float | None:
        """Current value of the criterion tracked for threshold stopping, or
        ``None`` to use the running sum of committed gains."""
        return None


# =========================================================================
# The sorted bound list
# =========================================================================


class GainEntry(NamedTuple):
    index: int
    bound: float
    exact: bool


def _entry_key(entry: GainEntry) -> tuple[float, int]:
    return (-entry.bound, entry.index)


@dataclass
class GainList:
    """Bound entries in descending bound order (ties: ascending id)."""

    entries: list[GainEntry] = field(default_factory=list)

    @classmethod
    def from_bounds(cls, indices: Sequence[int], bounds: Sequence[float], exact: bool = True) -> "GainList":
        entries = [GainEntry(int(i), float(b), exact) for i, b in zip(indices, bounds)]
        entries.sort(key=_entry_key)
        return cls(entries)

    @property
    def head(self) -> GainEntry:
        return self.entries[0]

    def pop_head(self) -> GainEntry:
        return self.entries.pop(0)

    def reset_exact(self) -> None:
        self.entries = [GainEntry(e.index, e.bound, False) for e in self.entries]

    def is_sorted(self) -> bool:
        keys = [_entry_key(e) for e in self.entries]
        return keys == sorted(keys)

    def __len__(self) -> int:
        return len(self.entries)


def reorder(gain_list: GainList, updated_head: GainEntry) -> GainList:
    """Replace the stale head with its updated entry at its sorted position.

    Binary search locates the insertion point (descending bound, ties by
    ascending id), so the cost is O(log n) comparisons plus the list shift.
    The list is modified in place and returned.
    """
    entries = gain_list.entries
    entries.pop(0)
    key = _entry_key(updated_head)
    lo, hi = 0, len(entries)
    while lo < hi:
        mid = (lo + hi) // 2
        if _entry_key(entries[mid]) < key:
            lo = mid + 1
        else:
            hi = mid
    entries.insert(lo, updated_head)
    return gain_list


# =========================================================================
# Engine result
# =========================================================================


@dataclass(frozen=True)
class GreedyRun:
    """Outcome of one engine run.

    ``order`` includes any warm-start ids first; ``gains`` aligns with
    ``order`` and holds NaN for warm-start positions (the engine did not
    evaluate them).  ``exhausted`` is set when the engine stopped early
    because every remaining candidate was excluded.
    """

    order: tuple[int, ...]
    gains: tuple[float, ...]
    eval_count: int
    exhausted: bool = False


# =========================================================================
# Engines
# =========================================================================


def _validate(v: int, stop: StoppingRule, initial: Sequence[int]) -> list[int]:
    if v < 1:
        raise ValueError("need at least one candidate")
    init = [int(i) for i in initial]
    if len(set(init)) != len(init):
        raise ValueError(f"duplicate ids in warm start {init}")
    for i in init:
        if not 0 <= i < v:
            raise ValueError(f"warm-start id {i} outside 0..{v - 1}")
    if isinstance(stop, Cardinality):
        if stop.k > v:
            raise ValueError(f"k={stop.k} exceeds the {v} candidates")
        if stop.k <= len(init):
            raise ValueError(f"k={stop.k} does not exceed the warm start size {len(init)}")
    return init


def _current_value(gain_fn: GainFunction, committed_sum: float) -> float:
    value = gain_fn.value()
    return committed_sum if value is None else value


def _stop_met(stop: StoppingRule, selected: list[int], gain_fn: GainFunction, committed: float) -> bool:
    if isinstance(stop, Cardinality):
        return len(selected) >= stop.k
    return _current_value(gain_fn, committed) >= stop.tau


def _finalize(stop, selected, gains, evals, exhausted, gain_fn, committed) -> GreedyRun:
    if isinstance(stop, Threshold) and _current_value(gain_fn, committed) < stop.tau:
        raise ThresholdNeverReached(stop.tau, _current_value(gain_fn, committed))
    return GreedyRun(tuple(selected), tuple(gains), evals, exhausted)


def _scan(gain_fn: GainFunction, selected: list[int], remaining: list[int]) -> np.ndarray:
    """Evaluate every remaining candidate, batched when supported."""
    batch = gain_fn.gain_all(selected, remaining)
    if batch is not None:
        return np.asarray(batch, dtype=float)
    return np.array([gain_fn.gain(selected, i) for i in remaining], dtype=float)


def greedy_select(
    gain_fn: GainFunction,
    v: int,
    stop: StoppingRule,
    initial: Sequence[int] = (),
) -> GreedyRun:
    """Forward greedy selection: per step, evaluate all remaining candidates
    and commit the best (lowest id on exact ties)."""
    selected = _validate(v, stop, initial)
    remaining = [i for i in range(v) if i not in set(selected)]
    gains: list[float] = [math.nan] * len(selected)
    evals = 0
    committed = 0.0
    exhausted = False
    while not _stop_met(stop, selected, gain_fn, committed) and remaining:
        scores = _scan(gain_fn, selected, remaining)
        evals += len(remaining)
        best_pos = -1
        best_gain = EXCLUDED
        for pos, score in enumerate(scores):
            if not math.isnan(score) and score > best_gain:
                best_gain = float(score)
                best_pos = pos
        if best_pos < 0 or best_gain == EXCLUDED:
            exhausted = True
            break
        chosen = remaining.pop(best_pos)
        gain_fn.commit(chosen)
        selected.append(chosen)
        gains.append(best_gain)
        committed += best_gain
    return _finalize(stop, selected, gains, evals, exhausted, gain_fn, committed)


def lazy_greedy_select(
    gain_fn: GainFunction,
    v: int,
    stop: StoppingRule,
    initial: Sequence[int] = (),
) -> GreedyRun:
    """Lazy greedy selection over a descending bound list.

    The first step scores every candidate and commits the top one outright
    (those bounds are exact).  Each later step marks all bounds stale,
    re-evaluates the head, reinserts it at its sorted position, and repeats
    until the head is exact, then commits the head.  For submodular gains
    the stale bounds are valid upper bounds, so the committed candidate is
    the true argmax; for non-submodular gains this is the usual lazy
    heuristic, applied exactly as stated with no safeguard re-scan.
    """
    selected = _validate(v, stop, initial)
    remaining = [i for i in range(v) if i not in set(selected)]
    gains: list[float] = [math.nan] * len(selected)
    evals = 0
    committed = 0.0
    exhausted = False

    def commit_head(entry: GainEntry) -> None:
        nonlocal committed
        gain_fn.commit(entry.index)
        selected.append(entry.index)
        gains.append(entry.bound)
        committed += entry.bound

    if not _stop_met(stop, selected, gain_fn, committed) and remaining:
        bounds = _scan(gain_fn, selected, remaining)
        evals += len(remaining)
        gain_list = GainList.from_bounds(remaining, bounds)
        head = gain_list.pop_head()
        if head.bound == EXCLUDED or math.isnan(head.bound):
            exhausted = True
        else:
            commit_head(head)
            while not _stop_met(stop, selected, gain_fn, committed) and len(gain_list):
                gain_list.reset_exact()
                while not gain_list.head.exact:
                    stale = gain_list.head
                    fresh = float(gain_fn.gain(selected, stale.index))
                    evals += 1
                    reorder(gain_list, GainEntry(stale.index, fresh, True))
                head = gain_list.pop_head()
                if head.bound == EXCLUDED or math.isnan(head.bound):
                    exhausted = True
                    break
                commit_head(head)
    return _finalize(stop, selected, gains, evals, exhausted, gain_fn, committed)
