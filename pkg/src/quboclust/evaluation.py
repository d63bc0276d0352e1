"""Decoding solver outputs into cluster assignments and scoring them.

The decoder maps an ``N * G`` one-hot bit vector back to group labels,
counting (never hiding) constraint violations. Quality metrics are the
summed intra-group distance, the mean silhouette coefficient, and the
relative gap against a known optimal energy; :func:`evaluate` bundles
them into one report.

Silhouette here follows Rousseeuw's conventions: cohesion ``a(i)`` is the
mean distance to the other members of ``i``'s group (0 for a singleton),
separation ``b(i)`` is the smallest mean distance to any other non-empty
group, the per-point score is ``(b - a) / max(a, b)``, and members of
singleton groups score 0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, LengthMismatch, SingleCluster
from .profiles import MatrixKind, SimilarityMatrix
from .qubo import QuboModel, qubo_energy

__all__ = [
    "Assignment",
    "EvalReport",
    "decode_assignment",
    "one_hot_bits",
    "intra_group_distance",
    "silhouette",
    "evaluate",
]


@dataclass(frozen=True)
class Assignment:
    """Group label (1-based, in [1, n_groups]) for each of N profiles."""

    groups: np.ndarray
    n_groups: int

    def __post_init__(self) -> None:
        g = np.asarray(self.groups, dtype=np.int64)
        if g.ndim != 1 or g.size < 1:
            raise ValueError(f"groups must be a non-empty vector, got shape {g.shape}")
        if self.n_groups < 1:
            raise ValueError(f"n_groups must be >= 1, got {self.n_groups}")
        if g.min() < 1 or g.max() > self.n_groups:
            raise ValueError(f"group labels must lie in [1, {self.n_groups}]")
        g = g.copy()
        g.flags.writeable = False
        object.__setattr__(self, "groups", g)

    @property
    def n_profiles(self) -> int:
        return self.groups.shape[0]


@dataclass(frozen=True)
class EvalReport:
    """Feasibility and quality summary for one decoded solution."""

    silhouette: float
    intra_group_distance: float
    feasible: bool
    violations: int
    energy: float
    gap_vs_oracle: float | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "silhouette": self.silhouette,
                "intra_group_distance": self.intra_group_distance,
                "feasible": self.feasible,
                "violations": self.violations,
                "energy": self.energy,
                "gap_vs_oracle_pct": self.gap_vs_oracle,
            },
            indent=2,
        )


def decode_assignment(
    x: Sequence[int] | np.ndarray,
    n_profiles: int,
    n_groups: int,
) -> tuple[Assignment, int]:
    """Decode one-hot bits to labels, counting one-hot violations.

    Profiles with exactly one set bit get that group. A profile with
    several set bits takes the lowest-index one; a profile with none
    takes group 1. Both cases count as one violation each.
    """
    bits = np.asarray(x)
    if bits.shape != (n_profiles * n_groups,):
        raise LengthMismatch(
            f"expected {n_profiles * n_groups} bits, got shape {bits.shape}"
        )
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("bit vector entries must be 0 or 1")
    block = bits.reshape(n_profiles, n_groups).astype(np.int64)
    set_counts = block.sum(axis=1)
    # argmax picks the first set bit; all-zero rows also map to group 1
    labels = block.argmax(axis=1) + 1
    violations = int((set_counts != 1).sum())
    return Assignment(labels, n_groups), violations


def one_hot_bits(a: Assignment) -> np.ndarray:
    """Re-encode an assignment as the flat one-hot bit vector."""
    bits = np.zeros((a.n_profiles, a.n_groups), dtype=np.int64)
    bits[np.arange(a.n_profiles), a.groups - 1] = 1
    return bits.reshape(-1)


def _check_distance(a: Assignment, d: SimilarityMatrix) -> None:
    if d.kind is not MatrixKind.DISTANCE:
        raise DimensionMismatch(f"expected a distance matrix, got {d.kind}")
    if d.n != a.n_profiles:
        raise DimensionMismatch(
            f"assignment covers {a.n_profiles} profiles, matrix is {d.n}x{d.n}"
        )


def intra_group_distance(a: Assignment, d: SimilarityMatrix) -> float:
    """Sum of distances over unordered same-group pairs."""
    _check_distance(a, d)
    iu = np.triu_indices(d.n, 1)
    same = a.groups[iu[0]] == a.groups[iu[1]]
    return float(d.values[iu][same].sum())


def silhouette(a: Assignment, d: SimilarityMatrix) -> float:
    """Mean silhouette coefficient of an assignment on a distance matrix."""
    _check_distance(a, d)
    n = a.n_profiles
    labels = a.groups
    occupied = [g for g in range(1, a.n_groups + 1) if (labels == g).any()]
    if len(occupied) < 2:
        raise SingleCluster(
            f"silhouette needs >= 2 non-empty groups, got {len(occupied)}"
        )
    members = {g: np.flatnonzero(labels == g) for g in occupied}
    scores = np.zeros(n)
    for i in range(n):
        own = members[labels[i]]
        if own.size == 1:
            continue  # singleton-group member scores 0
        a_i = d.values[i, own[own != i]].mean()
        b_i = min(
            d.values[i, members[g]].mean() for g in occupied if g != labels[i]
        )
        denom = max(a_i, b_i)
        scores[i] = 0.0 if denom == 0.0 else (b_i - a_i) / denom
    return float(scores.mean())


def evaluate(
    x: Sequence[int] | np.ndarray,
    d: SimilarityMatrix,
    model: QuboModel,
    oracle_energy: float | None = None,
) -> EvalReport:
    """Decode, check feasibility, and score one solver output.

    The one-hot shape is inferred from the distance matrix (N) and the
    model (N * G variables). The silhouette is always computed on the
    decoded assignment, even when infeasible; a degenerate single-cluster
    assignment is reported with score 0. The gap against
    ``oracle_energy`` is a signed percentage of ``|oracle|`` and is left
    undefined (None) when the oracle energy is 0.
    """
    n = d.n
    if model.n % n != 0:
        raise DimensionMismatch(
            f"model has {model.n} variables, not a multiple of {n} profiles"
        )
    n_groups = model.n // n
    assignment, violations = decode_assignment(x, n, n_groups)
    energy = qubo_energy(model, x)
    try:
        score = silhouette(assignment, d)
    except SingleCluster:
        score = 0.0
    gap: float | None = None
    if oracle_energy is not None and oracle_energy != 0.0:
        gap = (energy - oracle_energy) / abs(oracle_energy) * 100.0
    return EvalReport(
        silhouette=score,
        intra_group_distance=intra_group_distance(assignment, d),
        feasible=violations == 0,
        violations=violations,
        energy=energy,
        gap_vs_oracle=gap,
    )
