"""QUBO and Ising model types, their isomorphism, and clustering encoders.

A :class:`QuboModel` stores an upper-triangular coefficient matrix ``q``
(diagonal entries are the linear coefficients, folded in via ``x^2 = x``)
plus a constant ``offset``; its energy is ``x' Q x + offset`` over binary
``x``. An :class:`IsingModel` stores strict-upper couplings ``j``, fields
``h``, and an offset; its energy is ``sum_{i<j} J_ij s_i s_j + sum_i
h_i s_i + offset`` over spins ``s`` in {-1, +1}.

The two forms are isomorphic under ``s = 2x - 1``. Both conversion
directions here keep the constant bookkeeping exact, so energies are
preserved on every assignment, not just at the optimum.

The two ``build_*`` functions encode profile clustering over ``N * G``
one-hot bits ordered profile-major (all group bits of profile 0 first).
Both add the same penalty block ``Lambda (x) (2O - I)`` that prices
violations of the one-in-G constraint, and both retain the completed
constant ``sum_i lambda_i`` in the offset so that on feasible one-hot
vectors the model energy equals the clustering objective exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterator, Sequence

import numpy as np

from .errors import (
    GroupCountExceedsProfiles,
    KindMismatch,
    LengthMismatch,
    NonPositiveLambda,
)
from .profiles import MatrixKind, SimilarityMatrix

__all__ = [
    "QuboModel",
    "IsingModel",
    "as_bits",
    "as_spins",
    "bits_to_spins",
    "spins_to_bits",
    "qubo_energy",
    "qubo_energies",
    "ising_energy",
    "ising_from_qubo",
    "qubo_from_ising",
    "penalty_lower_bound",
    "kernel_penalty_bound",
    "build_distance_qubo",
    "build_kernel_qubo",
    "save_qubo",
    "load_qubo",
    "save_ising",
    "load_ising",
]


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class QuboModel:
    """Upper-triangular QUBO coefficients plus a constant offset."""

    q: np.ndarray
    offset: float = 0.0

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=np.float64)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"coefficient matrix must be square, got {q.shape}")
        if not np.isfinite(q).all() or not np.isfinite(self.offset):
            raise ValueError("model coefficients must be finite")
        if q.shape[0] > 0 and np.any(q[np.tril_indices(q.shape[0], -1)] != 0.0):
            raise ValueError("coefficients below the diagonal must be zero")
        object.__setattr__(self, "q", _frozen(q))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.q.shape[0]


@dataclass(frozen=True)
class IsingModel:
    """Strict-upper couplings, per-spin fields, and a constant offset."""

    j: np.ndarray
    h: np.ndarray
    offset: float = 0.0

    def __post_init__(self) -> None:
        j = np.asarray(self.j, dtype=np.float64)
        h = np.asarray(self.h, dtype=np.float64)
        if j.ndim != 2 or j.shape[0] != j.shape[1]:
            raise ValueError(f"coupling matrix must be square, got {j.shape}")
        if h.shape != (j.shape[0],):
            raise ValueError(
                f"field vector shape {h.shape} does not match {j.shape[0]} spins"
            )
        if not np.isfinite(j).all() or not np.isfinite(h).all():
            raise ValueError("model coefficients must be finite")
        if not np.isfinite(self.offset):
            raise ValueError("offset must be finite")
        if j.shape[0] > 0 and np.any(j[np.tril_indices(j.shape[0], 0)] != 0.0):
            raise ValueError("couplings on or below the diagonal must be zero")
        object.__setattr__(self, "j", _frozen(j))
        object.__setattr__(self, "h", _frozen(h))
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.j.shape[0]


# ----------------------------------------------------------------------
# assignments and energies
# ----------------------------------------------------------------------

def as_bits(x: Sequence[int] | np.ndarray, n: int) -> np.ndarray:
    """Validate a length-``n`` 0/1 vector and return it as float64."""
    arr = np.asarray(x)
    if arr.shape != (n,):
        raise LengthMismatch(f"expected {n} bits, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("bit vector entries must be 0 or 1")
    return arr.astype(np.float64)


def as_spins(s: Sequence[int] | np.ndarray, n: int) -> np.ndarray:
    """Validate a length-``n`` +/-1 vector and return it as float64."""
    arr = np.asarray(s)
    if arr.shape != (n,):
        raise LengthMismatch(f"expected {n} spins, got shape {arr.shape}")
    if not np.isin(arr, (-1, 1)).all():
        raise ValueError("spin vector entries must be -1 or +1")
    return arr.astype(np.float64)


def bits_to_spins(x: np.ndarray) -> np.ndarray:
    """Map bits in {0, 1} to spins in {-1, +1}."""
    return (2 * np.asarray(x) - 1).astype(np.int64)


def spins_to_bits(s: np.ndarray) -> np.ndarray:
    """Map spins in {-1, +1} to bits in {0, 1}."""
    return ((np.asarray(s) + 1) // 2).astype(np.int64)


def qubo_energy(m: QuboModel, x: Sequence[int] | np.ndarray) -> float:
    """Energy ``x' Q x + offset`` of one bit vector."""
    xv = as_bits(x, m.n)
    return float(xv @ m.q @ xv + m.offset)


def qubo_energies(m: QuboModel, xs: np.ndarray) -> np.ndarray:
    """Energies of a batch of bit vectors (one per row)."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != m.n:
        raise LengthMismatch(f"expected rows of {m.n} bits, got shape {xs.shape}")
    return ((xs @ m.q) * xs).sum(axis=1) + m.offset


def ising_energy(m: IsingModel, s: Sequence[int] | np.ndarray) -> float:
    """Energy ``sum_{i<j} J_ij s_i s_j + h . s + offset`` of one spin vector."""
    sv = as_spins(s, m.n)
    return float(sv @ m.j @ sv + m.h @ sv + m.offset)


# ----------------------------------------------------------------------
# QUBO <-> Ising isomorphism
# ----------------------------------------------------------------------

def ising_from_qubo(m: QuboModel) -> IsingModel:
    """Rewrite a QUBO over spins via ``x = (s + 1) / 2``.

    Energies match the source model on every assignment: couplings are
    ``q_ij / 4``, each field collects half the linear term plus a quarter
    of all incident quadratic terms, and the offset absorbs the rest.
    """
    q = m.q
    upper = np.triu(q, 1)
    diag = np.diag(q)
    j = upper / 4.0
    incident = upper.sum(axis=1) + upper.sum(axis=0)  # row + column = all neighbors
    h = diag / 2.0 + incident / 4.0
    offset = m.offset + upper.sum() / 4.0 + diag.sum() / 2.0
    return IsingModel(j, h, offset)


def qubo_from_ising(m: IsingModel) -> QuboModel:
    """Rewrite an Ising model over bits via ``s = 2x - 1``.

    Quadratic terms become ``4 J_ij``; each linear term collects the field
    contribution minus the incident couplings; the constant generated by
    the substitution is retained in the offset so energies are preserved
    exactly (not merely up to a constant).
    """
    j = m.j
    incident = j.sum(axis=1) + j.sum(axis=0)
    q = 4.0 * j
    q = q + np.diag(2.0 * m.h - 2.0 * incident)
    offset = m.offset + j.sum() - m.h.sum()
    return QuboModel(q, offset)


# ----------------------------------------------------------------------
# clustering encoders
# ----------------------------------------------------------------------

def _lambda_vector(lam: float | Sequence[float] | np.ndarray, n: int) -> np.ndarray:
    vec = np.asarray(lam, dtype=np.float64)
    if vec.ndim == 0:
        vec = np.full(n, float(vec))
    if vec.shape != (n,):
        raise ValueError(f"lambda must be scalar or length {n}, got shape {vec.shape}")
    if np.any(vec <= 0.0) or not np.isfinite(vec).all():
        raise NonPositiveLambda("penalty coefficients must be positive and finite")
    return vec


def _penalty_block(n_groups: int) -> np.ndarray:
    # 2O - I over one profile's group bits: -1 diagonal, +2 strict upper.
    return 2.0 * np.triu(np.ones((n_groups, n_groups)), 1) - np.eye(n_groups)


def penalty_lower_bound(
    d: SimilarityMatrix,
    n_profiles: int,
    n_groups: int,
) -> float:
    """Smallest penalty weight proved to keep distance-QUBO optima one-hot.

    Returns ``(N - G) * d_max``. Only meaningful for the distance
    encoding; kernel inputs are refused.
    """
    if d.kind is not MatrixKind.DISTANCE:
        raise KindMismatch(f"penalty bound applies to distance matrices, got {d.kind}")
    if n_groups < 1 or n_profiles <= n_groups:
        raise GroupCountExceedsProfiles(
            f"need n_profiles > n_groups >= 1, got N={n_profiles}, G={n_groups}"
        )
    return float((n_profiles - n_groups) * d.values.max())


def kernel_penalty_bound(g: SimilarityMatrix) -> np.ndarray:
    """Per-profile penalty weights that keep kernel-QUBO optima one-hot.

    ``lambda_i = |g_ii| + 2 sum_{j != i} |g_ij|`` outweighs any objective
    change from repairing profile ``i``'s one-hot violation, so repairs
    always pay: every global minimizer of the resulting model is feasible.
    """
    if g.kind is not MatrixKind.CENTERED:
        raise KindMismatch(
            f"kernel penalty bound applies to centered matrices, got {g.kind}"
        )
    a = np.abs(g.values)
    diag = np.diag(a)
    return diag + 2.0 * (a.sum(axis=1) - diag)


def build_distance_qubo(
    d: SimilarityMatrix,
    n_groups: int,
    lam: float | Sequence[float] | np.ndarray,
) -> QuboModel:
    """Encode minimum intra-group distance clustering over one-hot bits.

    ``Q = (D_u (x) I) + (Lambda (x) (2O - I))`` with ``D_u`` the strict
    upper triangle of the distance matrix; the offset is ``sum_i
    lambda_i``. On a feasible one-hot vector the energy equals the sum of
    distances over same-group pairs.
    """
    if d.kind is not MatrixKind.DISTANCE:
        raise KindMismatch(f"expected a distance matrix, got {d.kind}")
    if n_groups < 1:
        raise ValueError(f"n_groups must be >= 1, got {n_groups}")
    n = d.n
    lam_vec = _lambda_vector(lam, n)
    q = np.kron(np.triu(d.values, 1), np.eye(n_groups))
    q += np.kron(np.diag(lam_vec), _penalty_block(n_groups))
    return QuboModel(q, offset=float(lam_vec.sum()))


def build_kernel_qubo(
    g: SimilarityMatrix,
    n_groups: int,
    lam: float | Sequence[float] | np.ndarray,
) -> QuboModel:
    """Encode maximum intra-group similarity clustering over one-hot bits.

    ``Q = ((-G_diag - 2 G_u) (x) I) + (Lambda (x) (2O - I))`` with
    ``G_diag``/``G_u`` the diagonal and strict upper triangle of the
    centered similarity matrix; offset ``sum_i lambda_i``. On a feasible
    one-hot vector the energy equals minus the total similarity over
    same-group ordered pairs.
    """
    if g.kind is not MatrixKind.CENTERED:
        raise KindMismatch(f"expected a centered similarity matrix, got {g.kind}")
    if n_groups < 1:
        raise ValueError(f"n_groups must be >= 1, got {n_groups}")
    n = g.n
    lam_vec = _lambda_vector(lam, n)
    objective = -np.diag(np.diag(g.values)) - 2.0 * np.triu(g.values, 1)
    q = np.kron(objective, np.eye(n_groups))
    q += np.kron(np.diag(lam_vec), _penalty_block(n_groups))
    return QuboModel(q, offset=float(lam_vec.sum()))


# ----------------------------------------------------------------------
# triplet text serialization
# ----------------------------------------------------------------------
# QUBO files: one header line "n offset", then one "i j value" line per
# stored nonzero (0-based, i <= j). Ising files use the same triplet
# syntax with a "J" section for couplings and an "h" section of
# "i value" lines. Values carry 17 significant digits, which round-trips
# float64 exactly.

def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_qubo(m: QuboModel, dest: str | Path | IO[str]) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as fh:
            save_qubo(m, fh)
        return
    dest.write(f"{m.n} {_fmt(m.offset)}\n")
    rows, cols = np.nonzero(m.q)
    for i, j in zip(rows.tolist(), cols.tolist()):
        dest.write(f"{i} {j} {_fmt(m.q[i, j])}\n")


def load_qubo(src: str | Path | IO[str]) -> QuboModel:
    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as fh:
            return load_qubo(fh)
    lines = _content_lines(src)
    if not lines:
        raise ValueError("empty QUBO file")
    n, offset = lines[0].split()
    n = int(n)
    q = np.zeros((n, n))
    for line in lines[1:]:
        i, j, value = line.split()
        i, j = int(i), int(j)
        if i > j:
            raise ValueError(f"lower-triangular entry ({i}, {j}) in QUBO file")
        q[i, j] = float(value)
    return QuboModel(q, float(offset))


def save_ising(m: IsingModel, dest: str | Path | IO[str]) -> None:
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8") as fh:
            save_ising(m, fh)
        return
    dest.write(f"{m.n} {_fmt(m.offset)}\n")
    dest.write("J\n")
    rows, cols = np.nonzero(m.j)
    for i, j in zip(rows.tolist(), cols.tolist()):
        dest.write(f"{i} {j} {_fmt(m.j[i, j])}\n")
    dest.write("h\n")
    for i in np.nonzero(m.h)[0].tolist():
        dest.write(f"{i} {_fmt(m.h[i])}\n")


def load_ising(src: str | Path | IO[str]) -> IsingModel:
    if isinstance(src, (str, Path)):
        with open(src, "r", encoding="utf-8") as fh:
            return load_ising(fh)
    lines = _content_lines(src)
    if not lines:
        raise ValueError("empty Ising file")
    n, offset = lines[0].split()
    n = int(n)
    j = np.zeros((n, n))
    h = np.zeros(n)
    section = None
    for line in lines[1:]:
        if line == "J" or line == "h":
            section = line
            continue
        parts = line.split()
        if section == "J":
            a, b, value = parts
            j[int(a), int(b)] = float(value)
        elif section == "h":
            a, value = parts
            h[int(a)] = float(value)
        else:
            raise ValueError(f"triplet line before section marker: {line!r}")
    return IsingModel(j, h, float(offset))


def _content_lines(src: IO[str]) -> list[str]:
    return [ln.strip() for ln in src if ln.strip() and not ln.lstrip().startswith("#")]
