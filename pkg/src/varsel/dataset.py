"""Data-matrix substrate: preprocessing, projection, deflation, CSV I/O.

A data matrix holds ``m`` observations (rows) of ``v`` variables (columns) as
float64.  All variable indices crossing the public boundary of this module,
and of the rest of the package, are 1-based; internal numpy work is 0-based.

Conventions
-----------
* Centering subtracts the column mean; unit-normalization divides each column
  by its Euclidean norm.
* ``project_onto(data, S)`` returns ``X_S (X_S^T X_S)^{-1} X_S^T X``, the
  least-squares reconstruction of every column from the selected columns.
* ``deflate(residual, p)`` removes the rank-one contribution of residual
  column ``p``: ``R_next = R - (r r^T / r^T r) R``.  Repeated deflation by a
  selection equals one projection-based residual against that selection, up
  to round-off.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._linalg import SpdFactorizationError, spd_solve
from .errors import (
    DegeneratePivot,
    EmptyFile,
    ParseError,
    RaggedRows,
    RankDeficient,
    ZeroColumn,
)

#: Relative tolerance for validating the ``centered`` / ``unit_norm`` flags.
FLAG_TOL = 1e-9

#: Columns with norm at or below this are treated as zero by normalization.
ZERO_NORM_TOL = 1e-12

#: A residual pivot with norm below ``DEGENERATE_REL_TOL * ||X||_F`` is
#: considered inside the span of the selection and cannot be deflated.
DEGENERATE_REL_TOL = 1e-10


def _as_readonly(values) -> np.ndarray:
    arr = np.array(values, dtype=float, order="C", copy=True)
    arr.setflags(write=False)
    return arr


# =========================================================================
# Core types
# =========================================================================


@dataclass(frozen=True)
class Dataset:
    """An immutable m x v data matrix with preprocessing flags.

    Parameters
    ----------
    values : ndarray, shape (m, v)
        Finite float64 data, copied and marked read-only on construction.
    labels : tuple of str, optional
        One label per column.
    centered : bool
        Declares that every column has (numerically) zero mean; validated.
    unit_norm : bool
        Declares that every column has unit Euclidean norm; validated.
    """

    values: np.ndarray
    labels: tuple[str, ...] | None = None
    centered: bool = False
    unit_norm: bool = False

    def __post_init__(self):
        arr = _as_readonly(self.values)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
        m, v = arr.shape
        if m < 2:
            raise ValueError(f"need at least 2 observations, got {m}")
        if v < 1:
            raise ValueError("need at least 1 variable")
        if not np.all(np.isfinite(arr)):
            raise ValueError("data contain non-finite entries")
        object.__setattr__(self, "values", arr)
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != v:
                raise ValueError(
                    f"{len(labels)} labels for {v} columns"
                )
            object.__setattr__(self, "labels", labels)
        if self.centered:
            col_scale = np.maximum(np.abs(arr).max(axis=0), 1.0)
            means = arr.mean(axis=0)
            if np.any(np.abs(means) > FLAG_TOL * col_scale):
                raise ValueError("centered=True but column means are not zero")
        if self.unit_norm:
            norms = np.linalg.norm(arr, axis=0)
            if np.any(np.abs(norms - 1.0) > FLAG_TOL):
                raise ValueError("unit_norm=True but column norms are not 1")

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @property
    def v(self) -> int:
        return self.values.shape[1]

    def column(self, index: int) -> np.ndarray:
        """Return the column with the given 1-based index."""
        if not 1 <= index <= self.v:
            raise ValueError(f"column index {index} outside 1..{self.v}")
        return self.values[:, index - 1]

    def label_for(self, index: int) -> str:
        """Label of a 1-based column index, falling back to ``x<index>``."""
        if self.labels is not None:
            return self.labels[index - 1]
        return f"x{index}"


@dataclass(frozen=True)
class IndexSets:
    """An ordered selection and its unselected complement over ``{1..v}``.

    ``selected`` preserves selection order; ``unselected`` is the set
    complement.  Together they partition ``{1..v}``.
    """

    selected: tuple[int, ...]
    unselected: frozenset[int]

    def __post_init__(self):
        selected = tuple(int(i) for i in self.selected)
        unselected = frozenset(int(i) for i in self.unselected)
        object.__setattr__(self, "selected", selected)
        object.__setattr__(self, "unselected", unselected)
        if len(set(selected)) != len(selected):
            raise ValueError(f"duplicate indices in selection {selected}")
        v = len(selected) + len(unselected)
        universe = set(range(1, v + 1))
        if set(selected) | unselected != universe or set(selected) & unselected:
            raise ValueError("selected and unselected must partition 1..v")

    @classmethod
    def from_selected(cls, selected: Sequence[int], v: int) -> "IndexSets":
        sel = tuple(int(i) for i in selected)
        for i in sel:
            if not 1 <= i <= v:
                raise ValueError(f"index {i} outside 1..{v}")
        return cls(sel, frozenset(range(1, v + 1)) - set(sel))

    @property
    def v(self) -> int:
        return len(self.selected) + len(self.unselected)

    @property
    def k(self) -> int:
        return len(self.selected)


@dataclass(frozen=True)
class ResidualMatrix:
    """A residual of a data matrix after deflation by an ordered pivot list.

    Parameters
    ----------
    values : ndarray, shape (m, v)
        The residual columns.  Columns at ``deflated_by`` positions are zero.
    deflated_by : tuple of int
        1-based pivot indices, in deflation order.
    origin_fnorm : float
        Frobenius norm of the matrix the deflation started from; used for the
        relative degenerate-pivot threshold.
    """

    values: np.ndarray
    deflated_by: tuple[int, ...] = ()
    origin_fnorm: float = 0.0

    def __post_init__(self):
        arr = _as_readonly(self.values)
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "deflated_by", tuple(int(i) for i in self.deflated_by))
        fnorm = float(self.origin_fnorm)
        if fnorm <= 0.0:
            fnorm = float(np.linalg.norm(arr))
        object.__setattr__(self, "origin_fnorm", fnorm)

    @classmethod
    def from_dataset(cls, data: Dataset) -> "ResidualMatrix":
        return cls(data.values, (), float(np.linalg.norm(data.values)))

    @property
    def v(self) -> int:
        return self.values.shape[1]


# =========================================================================
# Preprocessing
# =========================================================================


def center_columns(data: Dataset) -> Dataset:
    """Subtract each column's mean.  Idempotent on already-centered data."""
    if data.centered:
        return data
    values = data.values - data.values.mean(axis=0)
    return Dataset(values, labels=data.labels, centered=True, unit_norm=False)


def normalize_unit(data: Dataset) -> Dataset:
    """Scale each column to unit Euclidean norm.

    Raises
    ------
    ZeroColumn
        If any column norm is at or below ``ZERO_NORM_TOL`` (1-based index of
        the first offender).
    """
    if data.unit_norm:
        return data
    norms = np.linalg.norm(data.values, axis=0)
    bad = np.nonzero(norms <= ZERO_NORM_TOL)[0]
    if bad.size:
        raise ZeroColumn(int(bad[0]) + 1)
    values = data.values / norms
    return Dataset(values, labels=data.labels, centered=data.centered, unit_norm=True)


# =========================================================================
# Projection and deflation
# =========================================================================


def selection_tuple(selected) -> tuple[int, ...]:
    """Coerce an :class:`IndexSets` or a plain index sequence to a tuple."""
    if isinstance(selected, IndexSets):
        return selected.selected
    return tuple(int(i) for i in selected)


def project_onto(data: Dataset, selected) -> np.ndarray:
    """Least-squares reconstruction of all columns from the selected ones.

    Solves the normal equations on the selected Gram matrix with a
    symmetric positive-definite factorization (single jitter retry).

    Returns
    -------
    ndarray, shape (m, v)
        ``X_S (X_S^T X_S)^{-1} X_S^T X``.

    Raises
    ------
    RankDeficient
        If the selected Gram matrix cannot be factorized.
    """
    sel = selection_tuple(selected)
    if not sel:
        raise ValueError("cannot project onto an empty selection")
    cols = np.array(sel, dtype=int) - 1
    x_s = data.values[:, cols]
    singular = np.linalg.svd(x_s, compute_uv=False)
    if singular[-1] <= DEGENERATE_REL_TOL * singular[0]:
        raise RankDeficient(sel)
    gram = x_s.T @ x_s
    rhs = x_s.T @ data.values
    try:
        coeffs = spd_solve(gram, rhs)
    except SpdFactorizationError as exc:
        raise RankDeficient(sel) from exc
    return x_s @ coeffs


def deflate(residual: ResidualMatrix, pivot: int) -> ResidualMatrix:
    """Remove the rank-one contribution of residual column ``pivot``.

    The pivot column of the result is set to exactly zero and every other
    column loses its component along the pivot direction.

    Raises
    ------
    DegeneratePivot
        If ``pivot`` was already deflated or its residual norm is below
        ``DEGENERATE_REL_TOL * origin_fnorm``.
    """
    if pivot in residual.deflated_by:
        raise DegeneratePivot(pivot)
    if not 1 <= pivot <= residual.v:
        raise ValueError(f"pivot {pivot} outside 1..{residual.v}")
    p0 = pivot - 1
    r = residual.values[:, p0]
    norm = float(np.linalg.norm(r))
    if norm <= DEGENERATE_REL_TOL * residual.origin_fnorm:
        raise DegeneratePivot(pivot)
    coeffs = (r @ residual.values) / (norm * norm)
    values = residual.values - np.outer(r, coeffs)
    values[:, p0] = 0.0
    return ResidualMatrix(values, residual.deflated_by + (pivot,), residual.origin_fnorm)


# =========================================================================
# Construction helpers
# =========================================================================


def _ones_orthogonal_basis(m: int, v: int) -> np.ndarray:
    """An m x v matrix with orthonormal columns, each orthogonal to the
    all-ones vector (so any linear image of it is exactly centered)."""
    if m < v + 1:
        raise ValueError(f"need at least {v + 1} rows for {v} centered basis columns")
    basis = np.zeros((m, v))
    # Helmert-style columns: column j has j ones, then -j, then zeros.
    for j in range(1, v + 1):
        col = np.zeros(m)
        col[:j] = 1.0
        col[j] = -float(j)
        basis[:, j - 1] = col / math.sqrt(j * (j + 1))
    return basis


def dataset_from_gram(gram: np.ndarray, labels=None, m: int | None = None) -> Dataset:
    """Construct a centered dataset whose Gram matrix ``X^T X`` equals ``gram``.

    Useful for driving Gram-only analyses (variance explained, exhaustive
    search, information criteria) from a published correlation or covariance
    matrix.  Eigenvalues below zero are clipped, so a slightly indefinite
    input is repaired to its nearest factorizable neighbour.

    Parameters
    ----------
    gram : ndarray, shape (v, v)
        Symmetric positive semi-definite target Gram matrix.
    m : int, optional
        Number of rows of the constructed matrix (default ``v + 1``, the
        minimum that allows exactly centered columns).
    """
    g = np.asarray(gram, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError(f"gram matrix must be square, got shape {g.shape}")
    if not np.allclose(g, g.T, atol=1e-8):
        raise ValueError("gram matrix must be symmetric")
    v = g.shape[0]
    rows = m if m is not None else v + 1
    try:
        factor = np.linalg.cholesky(g).T  # v x v, factor.T @ factor == g
    except np.linalg.LinAlgError:
        eigvals, eigvecs = np.linalg.eigh((g + g.T) / 2.0)
        factor = (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))).T
    values = _ones_orthogonal_basis(rows, v) @ factor
    diag = np.diag(values.T @ values)
    unit = bool(np.all(np.abs(diag - 1.0) <= FLAG_TOL))
    return Dataset(values, labels=labels, centered=True, unit_norm=unit)


# =========================================================================
# CSV I/O
# =========================================================================


def load_csv(path, has_header: bool = False) -> Dataset:
    """Load a comma-separated numeric matrix.

    Lines starting with ``#`` are treated as comments and skipped, so files
    produced by :func:`save_csv` (which records generation metadata in a
    comment line) round-trip.  Blank lines are ignored.

    Parameters
    ----------
    path : str or Path
        File to read (UTF-8).
    has_header : bool
        When true, the first non-comment row provides column labels.

    Raises
    ------
    EmptyFile
        No data rows present.
    RaggedRows
        A row's field count differs from the first row's (physical 1-based
        line number reported).
    ParseError
        A cell does not parse as a finite float (line and 1-based column).
    """
    rows: list[list[float]] = []
    labels: tuple[str, ...] | None = None
    expected = None
    header_pending = has_header
    with open(path, "r", encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if row[0].lstrip().startswith("#"):
                continue
            if header_pending:
                labels = tuple(cell.strip() for cell in row)
                expected = len(row)
                header_pending = False
                continue
            if expected is None:
                expected = len(row)
            elif len(row) != expected:
                raise RaggedRows(lineno)
            parsed = []
            for col, cell in enumerate(row, start=1):
                try:
                    value = float(cell)
                except ValueError:
                    raise ParseError(lineno, col, cell.strip()) from None
                if not math.isfinite(value):
                    raise ParseError(lineno, col, cell.strip())
                parsed.append(value)
            rows.append(parsed)
    if not rows:
        raise EmptyFile(path)
    return Dataset(np.array(rows, dtype=float), labels=labels)


def save_csv(data: Dataset, path, comment: str | None = None) -> None:
    """Write a dataset as CSV with an optional leading ``#`` comment line and
    a header row when the dataset carries labels."""
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        if comment:
            handle.write(f"# {comment}\n")
        if data.labels is not None:
            writer.writerow(data.labels)
        for row in data.values:
            writer.writerow([repr(float(value)) for value in row])
