"""Synthetic datasets for tests and benchmarks.

The PV generator produces per-unit daily generation curves (24 hourly
values in [0, 1]) drawn from five archetypes: three "clear-sky" shapes
that differ in peak hour and width, and two "overcast" shapes with much
lower amplitude. Archetypes are interleaved round-robin so any prefix of
the rows keeps all archetypes represented, which is what the benchmark
cases rely on when they take the first 50/60/70 profiles of an
80-profile file.

The rings generator produces the classic two-concentric-rings point set
(2-D points treated as length-2 profiles) on which mean-based clustering
fails but similarity-based clustering can recover the rings.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import IO

import numpy as np

from .profiles import ProfileSet

__all__ = [
    "PV_FIXTURE_SEED",
    "synthetic_pv_profiles",
    "write_profiles_csv",
    "concentric_rings",
]

PV_FIXTURE_SEED = 20240817

# (amplitude, peak hour, width hours, overcast dip depth)
# Three clear-sky shapes and two overcast shapes. The clear/overcast gap
# is much wider than the spread inside either family, so two groups
# separate cleanly and finer groupings split progressively blurrier
# sub-structure.
_ARCHETYPES = (
    (0.95, 11.2, 2.4, 0.0),   # clear sky, morning-leaning peak
    (0.90, 12.0, 3.0, 0.0),   # clear sky, symmetric noon dome
    (0.88, 12.9, 2.3, 0.0),   # clear sky, afternoon-leaning peak
    (0.32, 12.4, 2.9, 0.35),  # overcast, midday cloud dip
    (0.21, 11.7, 3.5, 0.0),   # heavy overcast, flat low dome
)


def synthetic_pv_profiles(
    n_profiles: int = 80,
    n_hours: int = 24,
    seed: int = PV_FIXTURE_SEED,
    noise: float = 0.02,
) -> ProfileSet:
    """Generate per-unit PV-like daily profiles from five archetypes."""
    if n_profiles < 2:
        raise ValueError("need at least 2 profiles")
    rng = np.random.default_rng(seed)
    hours = np.arange(n_hours, dtype=np.float64)
    rows = np.empty((n_profiles, n_hours))
    for i in range(n_profiles):
        amp, peak, width, dip = _ARCHETYPES[i % len(_ARCHETYPES)]
        amp = amp * (1.0 + 0.04 * rng.standard_normal())
        peak = peak + 0.25 * rng.standard_normal()
        width = width * (1.0 + 0.05 * rng.standard_normal())
        curve = amp * np.exp(-((hours - peak) ** 2) / (2.0 * width**2))
        if dip > 0.0:
            dip_at = peak + 1.5 * rng.standard_normal()
            curve *= 1.0 - dip * np.exp(-((hours - dip_at) ** 2) / 2.0)
        daylight = curve > 1e-3
        curve += noise * rng.standard_normal(n_hours) * daylight
        rows[i] = np.clip(curve, 0.0, 1.0)
    labels = tuple(f"pv{i:03d}" for i in range(n_profiles))
    return ProfileSet(rows, labels=labels)


def write_profiles_csv(p: ProfileSet, dest: str | Path | IO[str]) -> None:
    """Write profiles one per row, matching the ingestion format."""
    if isinstance(dest, (str, Path)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            write_profiles_csv(p, fh)
        return
    writer = csv.writer(dest)
    for row in p.values:
        writer.writerow([format(v, ".6f") for v in row])


def concentric_rings(
    n_inner: int = 12,
    n_outer: int = 20,
    r_inner: float = 1.0,
    r_outer: float = 3.0,
    radial_noise: float = 0.04,
    seed: int = 0,
) -> tuple[ProfileSet, np.ndarray]:
    """Two concentric rings of 2-D points; returns (points, ring labels).

    Points are evenly spaced in angle with jitter; labels are 1 (inner)
    and 2 (outer).
    """
    rng = np.random.default_rng(seed)
    points = []
    labels = []
    for label, (count, radius) in enumerate(
        ((n_inner, r_inner), (n_outer, r_outer)), start=1
    ):
        angles = np.linspace(0.0, 2.0 * np.pi, count, endpoint=False)
        angles += rng.uniform(-0.5, 0.5, count) * (2.0 * np.pi / count) * 0.3
        radii = radius + radial_noise * rng.standard_normal(count)
        points.append(np.column_stack((radii * np.cos(angles), radii * np.sin(angles))))
        labels.extend([label] * count)
    return ProfileSet(np.vstack(points)), np.asarray(labels, dtype=np.int64)
