"""Profile ingestion, preprocessing, and similarity-matrix construction.

A :class:`ProfileSet` holds N equal-length time-series profiles (one per
row). From it the pipeline derives three flavours of N-by-N symmetric
matrix, distinguished by :class:`MatrixKind`:

* ``DISTANCE`` -- pairwise Euclidean distances,
* ``KERNEL`` -- Gaussian similarities of those distances,
* ``CENTERED`` -- kernel similarities re-expressed relative to the data
  mean (the matrix the kernel clustering objective consumes).

All operations are pure: they return new objects and never mutate their
inputs. Arrays inside the returned objects are marked read-only so
instances are safe to share across threads.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateRange,
    IndivisibleLength,
    KindMismatch,
    NonNumericCell,
    NonPositiveSigma,
    RaggedTable,
    TooFewProfiles,
)

__all__ = [
    "MatrixKind",
    "ProfileSet",
    "SimilarityMatrix",
    "load_profiles",
    "hourly_average",
    "distance_matrix",
    "kernel_matrix",
    "centered_similarity",
    "normalize_01",
    "save_matrix_csv",
]


class MatrixKind(Enum):
    """Role a symmetric profile-by-profile matrix plays in the pipeline."""

    DISTANCE = "distance"
    KERNEL = "kernel"
    CENTERED = "centered"


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ProfileSet:
    """N time-series profiles of identical length T, one per row.

    Raises ``TooFewProfiles`` for N < 2 and ``ValueError`` for an empty,
    non-rectangular, or non-finite value block.
    """

    values: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError(f"profile block must be 2-D, got shape {v.shape}")
        if v.shape[0] < 2:
            raise TooFewProfiles(f"need at least 2 profiles, got {v.shape[0]}")
        if v.shape[1] < 1:
            raise ValueError("profiles must have at least one sample")
        if not np.isfinite(v).all():
            raise ValueError("profiles contain non-finite values")
        if self.labels is not None and len(self.labels) != v.shape[0]:
            raise ValueError(
                f"{len(self.labels)} labels for {v.shape[0]} profiles"
            )
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n_profiles(self) -> int:
        return self.values.shape[0]

    @property
    def n_samples(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric N-by-N matrix tagged with its pipeline role.

    Construction enforces exact symmetry plus the per-kind range
    invariants (distance: zero diagonal, non-negative; kernel: unit
    diagonal, entries in (0, 1]). A ``normalized`` matrix instead
    guarantees all entries lie in [0, 1]; the kind-specific range checks
    are waived for it because an affine rescale may move them.
    """

    values: np.ndarray
    kind: MatrixKind
    normalized: bool = False

    def __post_init__(self) -> None:
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError(f"similarity matrix must be square, got {v.shape}")
        if not np.isfinite(v).all():
            raise ValueError("similarity matrix contains non-finite values")
        if not np.array_equal(v, v.T):
            raise ValueError("similarity matrix must be exactly symmetric")
        if self.normalized:
            if v.min() < 0.0 or v.max() > 1.0:
                raise ValueError("normalized matrix has entries outside [0, 1]")
        elif self.kind is MatrixKind.DISTANCE:
            if np.any(np.diag(v) != 0.0):
                raise ValueError("distance matrix must have a zero diagonal")
            if v.min() < 0.0:
                raise ValueError("distance matrix has negative entries")
        elif self.kind is MatrixKind.KERNEL:
            if np.any(np.diag(v) != 1.0):
                raise ValueError("kernel matrix must have a unit diagonal")
            if v.min() <= 0.0 or v.max() > 1.0:
                raise ValueError("kernel entries must lie in (0, 1]")
        object.__setattr__(self, "values", _frozen(v))

    @property
    def n(self) -> int:
        return self.values.shape[0]


# ----------------------------------------------------------------------
# ingestion
# ----------------------------------------------------------------------

def _parse_cell(text: str, row: int, col: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise NonNumericCell(
            f"cell ({row}, {col}) is not numeric: {text!r}"
        ) from None
    return value


def load_profiles(
    source: str | Path | IO[str],
    layout: str = "rows",
    header: bool = False,
) -> ProfileSet:
    """Read a rectangular numeric CSV table into a :class:`ProfileSet`.

    ``layout="rows"`` treats each CSV row as one profile; ``"columns"``
    treats each column as one profile (the table is transposed after
    parsing). With ``header=True`` the first row is skipped; in column
    layout its cells become profile labels.
    """
    if layout not in ("rows", "columns"):
        raise ValueError(f"layout must be 'rows' or 'columns', got {layout!r}")

    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_profiles(fh, layout=layout, header=header)

    reader = csv.reader(source)
    rows: list[list[float]] = []
    labels: tuple[str, ...] | None = None
    width: int | None = None
    for irow, record in enumerate(reader):
        if not record or (len(record) == 1 and not record[0].strip()):
            continue  # skip blank lines
        if header and not rows and labels is None:
            if layout == "columns":
                labels = tuple(cell.strip() for cell in record)
            continue
        if width is None:
            width = len(record)
        elif len(record) != width:
            raise RaggedTable(
                f"row {irow} has {len(record)} cells, expected {width}"
            )
        rows.append(
            [_parse_cell(cell, irow, icol) for icol, cell in enumerate(record)]
        )

    if not rows:
        raise TooFewProfiles("input table is empty")
    table = np.array(rows, dtype=np.float64)
    if layout == "columns":
        table = table.T
        if labels is not None and len(labels) != table.shape[0]:
            labels = None
    else:
        labels = None
    if table.shape[0] < 2:
        raise TooFewProfiles(f"need at least 2 profiles, got {table.shape[0]}")
    return ProfileSet(table, labels=labels)


def hourly_average(p: ProfileSet, samples_per_hour: int) -> ProfileSet:
    """Average consecutive blocks of ``samples_per_hour`` samples.

    A 288-sample day at 5-minute resolution becomes 24 hourly values
    with ``samples_per_hour=12``.
    """
    if samples_per_hour < 1:
        raise ValueError("samples_per_hour must be positive")
    n, t = p.values.shape
    if t % samples_per_hour != 0:
        raise IndivisibleLength(
            f"length {t} not divisible by {samples_per_hour}"
        )
    blocks = p.values.reshape(n, t // samples_per_hour, samples_per_hour)
    return ProfileSet(blocks.mean(axis=2), labels=p.labels)


# ----------------------------------------------------------------------
# similarity matrices
# ----------------------------------------------------------------------

def distance_matrix(p: ProfileSet) -> SimilarityMatrix:
    """Pairwise Euclidean distances between profiles."""
    diff = p.values[:, None, :] - p.values[None, :, :]
    d = np.sqrt(np.einsum("ijt,ijt->ij", diff, diff))
    np.fill_diagonal(d, 0.0)
    return SimilarityMatrix(d, MatrixKind.DISTANCE)


def kernel_matrix(
    d: SimilarityMatrix,
    sigma: float,
    squared_exponent: bool = False,
) -> SimilarityMatrix:
    """Gaussian similarity ``exp(-d / (2 sigma^2))`` of a distance matrix.

    The exponent uses the distance itself by default;
    ``squared_exponent=True`` switches to the conventional squared form
    ``exp(-d^2 / (2 sigma^2))``.
    """
    if d.kind is not MatrixKind.DISTANCE:
        raise KindMismatch(f"expected a distance matrix, got {d.kind}")
    if sigma <= 0:
        raise NonPositiveSigma(f"sigma must be > 0, got {sigma}")
    expo = d.values**2 if squared_exponent else d.values
    k = np.exp(-expo / (2.0 * sigma**2))
    return SimilarityMatrix(k, MatrixKind.KERNEL)


def centered_similarity(
    k: SimilarityMatrix,
    centering: str = "paper",
) -> SimilarityMatrix:
    """Re-express kernel similarities relative to the data mean.

    Each entry becomes ``k_ij - rowmean_i - colmean_j -/+ grandmean``.
    ``centering="paper"`` subtracts the grand-mean correction along with
    the row and column means; ``"standard"`` adds it back (classical Gram
    centering, which zeroes row and column sums). Both outputs are exactly
    symmetric.
    """
    if k.kind is not MatrixKind.KERNEL:
        raise KindMismatch(f"expected a kernel matrix, got {k.kind}")
    if centering not in ("paper", "standard"):
        raise ValueError(f"centering must be 'paper' or 'standard', got {centering!r}")
    kv = k.values
    # row means equal column means for a symmetric kernel; reusing one
    # vector keeps the result exactly symmetric.
    m = kv.mean(axis=1)
    grand = kv.mean()
    g = kv - (m[:, None] + m[None, :])
    g = g - grand if centering == "paper" else g + grand
    return SimilarityMatrix(g, MatrixKind.CENTERED)


def normalize_01(m: SimilarityMatrix) -> SimilarityMatrix:
    """Affinely map matrix entries onto [0, 1] (min to 0, max to 1)."""
    lo = m.values.min()
    hi = m.values.max()
    if hi == lo:
        raise DegenerateRange("matrix is constant; cannot normalize to [0, 1]")
    scaled = (m.values - lo) / (hi - lo)
    return SimilarityMatrix(scaled, m.kind, normalized=True)


def save_matrix_csv(m: SimilarityMatrix, dest: str | Path | IO[str]) -> None:
    """Write the full symmetric matrix as plain CSV for inspection."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            save_matrix_csv(m, fh)
        return
    writer = csv.writer(dest)
    for row in m.values:
        writer.writerow([format(x, ".17g") for x in row])
