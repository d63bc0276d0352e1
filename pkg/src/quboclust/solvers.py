"""Interchangeable QUBO minimizers plus classical clustering baselines.

Four solver families share one config and result type:

* :func:`brute_force_solve` -- exhaustive enumeration, the exact oracle
  (capped at 24 variables by default).
* :func:`anneal_solve` -- single-flip Metropolis with a geometric
  temperature schedule and independent restarts.
* :func:`cim_solve` -- a mean-field simulation of a degenerate-optical-
  parametric-oscillator network: amplitudes evolve under a linearly
  ramped pump with symmetrized, negated Ising couplings injected, so the
  network settles into sign patterns of low Ising energy; spins are read
  out as amplitude signs.
* :func:`baseline_cluster` -- K-means (Lloyd with k-means++ seeding) and
  K-medoids (PAM-style swap descent on the distance matrix).

Every solver is deterministic given ``(model, config, seed)``: all
randomness is drawn from generators derived from the config seed via a
fixed spawning rule. Reported wall time covers only the core solve loop.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .errors import (
    BadGroupCount,
    DivergedAmplitudes,
    InvalidSchedule,
    TooManyVariables,
)
from .evaluation import Assignment
from .profiles import ProfileSet, distance_matrix
from .qubo import QuboModel, ising_from_qubo, qubo_energies, qubo_energy

__all__ = [
    "SolverKind",
    "SolverConfig",
    "SolveResult",
    "brute_force_solve",
    "anneal_solve",
    "cim_solve",
    "baseline_cluster",
]


class SolverKind(Enum):
    BRUTE_FORCE = "brute_force"
    ANNEAL = "anneal"
    SIM_CIM = "sim_cim"
    KMEANS = "kmeans"
    KMEDOIDS = "kmedoids"


@dataclass(frozen=True)
class SolverConfig:
    """Solver selection plus per-kind tuning knobs.

    Annealer: ``sweeps`` single-flip sweeps per restart, temperatures
    falling geometrically from ``t_start`` (default: the largest
    coefficient magnitude) to ``t_final_ratio`` times it, ``restarts``
    independent chains merged by lowest energy.

    Simulated Ising machine: ``steps`` Euler steps of size ``dt``, pump
    ramped linearly ``pump_start -> pump_end``, injection strength
    ``coupling`` (default ``0.07 / sqrt(n)``), amplitudes clamped to
    ``amplitude_clamp``; exceeding the clamp budget (fraction of all
    step-amplitude slots) aborts with :class:`DivergedAmplitudes`.

    Baselines: ``restarts`` seedings, at most ``max_iterations``
    improvement rounds each.
    """

    kind: SolverKind
    seed: int = 0
    # annealer
    sweeps: int = 1000
    restarts: int = 10
    t_start: float | None = None
    t_end: float | None = None
    t_final_ratio: float = 1e-3
    # simulated Ising machine
    steps: int = 2000
    dt: float = 0.01
    pump_start: float = 0.0
    pump_end: float = 2.0
    coupling: float | None = None
    feedback: str = "measured"
    amplitude_clamp: float = 1.5
    clamp_budget: float = 0.9
    init_noise: float = 1e-3
    # baselines
    max_iterations: int = 300
    # oracle
    brute_force_cap: int = 24
    record_trajectory: bool = False

    def __post_init__(self) -> None:
        if min(self.sweeps, self.restarts, self.steps, self.max_iterations) < 1:
            raise InvalidSchedule("iteration counts must be positive")
        if self.brute_force_cap < 1:
            raise InvalidSchedule("brute_force_cap must be positive")
        if self.t_start is not None and self.t_start <= 0:
            raise InvalidSchedule("t_start must be positive")
        if self.t_end is not None:
            if self.t_end <= 0:
                raise InvalidSchedule("t_end must be positive")
            if self.t_start is not None and self.t_start < self.t_end:
                raise InvalidSchedule("annealing needs t_start >= t_end")
        if not 0.0 < self.t_final_ratio <= 1.0:
            raise InvalidSchedule("t_final_ratio must lie in (0, 1]")
        if self.pump_end < self.pump_start:
            raise InvalidSchedule("pump ramp must be non-decreasing")
        if self.dt <= 0 or self.amplitude_clamp <= 0 or self.init_noise <= 0:
            raise InvalidSchedule("dt, amplitude_clamp, and init_noise must be positive")
        if not 0.0 < self.clamp_budget <= 1.0:
            raise InvalidSchedule("clamp_budget must lie in (0, 1]")
        if self.feedback not in ("measured", "analog"):
            raise InvalidSchedule(
                f"feedback must be 'measured' or 'analog', got {self.feedback!r}"
            )


@dataclass(frozen=True)
class SolveResult:
    """Best assignment found by a solver, with timing and provenance."""

    best_bits: np.ndarray
    best_energy: float
    wall_time: float
    trajectory: np.ndarray | None = None
    solver_meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        bits = np.asarray(self.best_bits, dtype=np.int64)
        bits = bits.copy()
        bits.flags.writeable = False
        object.__setattr__(self, "best_bits", bits)
        if self.trajectory is not None:
            traj = np.asarray(self.trajectory, dtype=np.float64).copy()
            traj.flags.writeable = False
            object.__setattr__(self, "trajectory", traj)

    def to_json(self) -> str:
        payload: dict[str, Any] = {
            "bits": "".join(str(int(b)) for b in self.best_bits),
            "energy": self.best_energy,
            "wall_time_seconds": self.wall_time,
            "solver_meta": self.solver_meta,
        }
        if self.trajectory is not None:
            payload["trajectory"] = self.trajectory.tolist()
        return json.dumps(payload, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SolveResult":
        payload = json.loads(text)
        traj = payload.get("trajectory")
        return cls(
            best_bits=np.array([int(c) for c in payload["bits"]], dtype=np.int64),
            best_energy=float(payload["energy"]),
            wall_time=float(payload["wall_time_seconds"]),
            trajectory=None if traj is None else np.asarray(traj),
            solver_meta=payload.get("solver_meta", {}),
        )


def _require_kind(cfg: SolverConfig, kind: SolverKind) -> None:
    if cfg.kind is not kind:
        raise ValueError(f"config kind is {cfg.kind}, expected {kind}")


def _restart_rngs(seed: int, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


# ----------------------------------------------------------------------
# exact oracle
# ----------------------------------------------------------------------

def brute_force_solve(m: QuboModel, cfg: SolverConfig | None = None) -> SolveResult:
    """Exact minimum over all 2^n assignments.

    Ties are broken toward the lowest binary value of the bit vector read
    most-significant-bit-first from index 0.
    """
    cap = cfg.brute_force_cap if cfg is not None else 24
    if m.n > cap:
        raise TooManyVariables(f"{m.n} variables exceeds the exhaustive cap of {cap}")
    n = m.n
    total = 1 << n
    shifts = (n - 1 - np.arange(n)).astype(np.uint64)
    chunk = min(total, 1 << 16)
    best_energy = math.inf
    best_state = 0
    start = time.perf_counter()
    for lo in range(0, total, chunk):
        states = np.arange(lo, min(lo + chunk, total), dtype=np.uint64)
        bits = ((states[:, None] >> shifts[None, :]) & 1).astype(np.float64)
        energies = qubo_energies(m, bits)
        k = int(energies.argmin())  # first occurrence = lowest binary value
        if energies[k] < best_energy:
            best_energy = float(energies[k])
            best_state = int(states[k])
    wall = time.perf_counter() - start
    best_bits = ((best_state >> shifts.astype(np.int64)) & 1).astype(np.int64)
    return SolveResult(
        best_bits=best_bits,
        best_energy=best_energy,
        wall_time=wall,
        solver_meta={"solver": "brute_force", "states": total},
    )


# ----------------------------------------------------------------------
# simulated annealing
# ----------------------------------------------------------------------

def _geometric_temps(t0: float, t_end: float, sweeps: int) -> np.ndarray:
    if sweeps == 1:
        return np.array([t0])
    ratio = (t_end / t0) ** (1.0 / (sweeps - 1))
    return t0 * ratio ** np.arange(sweeps)


def anneal_solve(m: QuboModel, cfg: SolverConfig) -> SolveResult:
    """Single-flip Metropolis descent with a geometric cooling schedule."""
    _require_kind(cfg, SolverKind.ANNEAL)
    n = m.n
    scale = float(np.abs(m.q).max()) if n else 0.0
    t0 = cfg.t_start if cfg.t_start is not None else (scale if scale > 0 else 1.0)
    t_end = cfg.t_end if cfg.t_end is not None else cfg.t_final_ratio * t0
    if t_end > t0:
        raise InvalidSchedule(f"t_start {t0} below t_end {t_end}")
    temps = _geometric_temps(t0, t_end, cfg.sweeps)

    upper = np.triu(m.q, 1)
    sym = upper + upper.T + np.diag(np.diag(m.q))  # S @ x gives flip fields
    diag = np.diag(m.q).copy()
    rngs = _restart_rngs(cfg.seed, cfg.restarts)

    best_bits: np.ndarray | None = None
    best_energy = math.inf
    trajectory: list[float] = []
    exp = math.exp
    start = time.perf_counter()
    for rng in rngs:
        x = rng.integers(0, 2, size=n).astype(np.int8)
        f = sym @ x.astype(np.float64)
        energy = qubo_energy(m, x)
        run_best = energy
        run_best_x = x.copy()
        for t in temps:
            order = rng.integers(0, n, size=n)
            us = rng.random(n)
            for k in range(n):
                i = order[k]
                if x[i]:
                    delta = -f[i]
                else:
                    delta = f[i] + diag[i]
                if delta <= 0.0 or us[k] < exp(-delta / t):
                    if x[i]:
                        x[i] = 0
                        f -= sym[:, i]
                    else:
                        x[i] = 1
                        f += sym[:, i]
                    energy += delta
                    if energy < run_best:
                        run_best = energy
                        run_best_x = x.copy()
            if cfg.record_trajectory:
                trajectory.append(min(best_energy, run_best))
        if run_best < best_energy:
            best_energy = run_best
            best_bits = run_best_x
    wall = time.perf_counter() - start

    assert best_bits is not None
    best_energy = qubo_energy(m, best_bits)  # discard incremental drift
    return SolveResult(
        best_bits=best_bits.astype(np.int64),
        best_energy=best_energy,
        wall_time=wall,
        trajectory=np.asarray(trajectory) if cfg.record_trajectory else None,
        solver_meta={
            "solver": "anneal",
            "restarts": cfg.restarts,
            "sweeps": cfg.sweeps,
            "t_start": t0,
            "t_end": t_end,
        },
    )


# ----------------------------------------------------------------------
# simulated coherent Ising machine
# ----------------------------------------------------------------------

def _cim_trajectory(
    m: QuboModel,
    couplings: np.ndarray,
    use_aux: bool,
    eps: float,
    cfg: SolverConfig,
    rng: np.random.Generator,
    best_energy: float,
    trajectory: list[float] | None,
) -> tuple[np.ndarray | None, float, int]:
    """One pump ramp from seeded noise; returns (best bits, energy, clamps)."""
    n = m.n
    n_ext = couplings.shape[0]
    a = cfg.init_noise * rng.standard_normal(n_ext)
    pumps = np.linspace(cfg.pump_start, cfg.pump_end, cfg.steps)
    clamp = cfg.amplitude_clamp
    budget = cfg.clamp_budget * cfg.steps * n_ext
    clamped = 0
    measured = cfg.feedback == "measured"

    best_bits: np.ndarray | None = None
    last_bits: np.ndarray | None = None
    last_energy = math.inf
    for step in range(cfg.steps):
        feed = np.where(a >= 0.0, 1.0, -1.0) if measured else a
        a += cfg.dt * ((pumps[step] - 1.0 - a * a) * a + eps * (couplings @ feed))
        if not np.isfinite(a).all():
            raise DivergedAmplitudes("amplitudes became non-finite")
        over = np.abs(a) > clamp
        if over.any():
            clamped += int(over.sum())
            if clamped > budget:
                raise DivergedAmplitudes(
                    f"{clamped} clamped amplitude updates exceed budget {budget:.0f}"
                )
            np.clip(a, -clamp, clamp, out=a)
        spins = np.where(a >= 0.0, 1, -1)
        if use_aux:
            spins = spins[:n] * spins[n]
        bits = (spins + 1) // 2
        if last_bits is None or not np.array_equal(bits, last_bits):
            last_bits = bits
            last_energy = qubo_energy(m, bits)
        if last_energy < best_energy:
            best_energy = last_energy
            best_bits = bits.copy()
        if trajectory is not None:
            trajectory.append(best_energy)
    return best_bits, best_energy, clamped


def cim_solve(m: QuboModel, cfg: SolverConfig) -> SolveResult:
    """Mean-field oscillator-network relaxation of the model's Ising form.

    The network couplings are the symmetrized, negated Ising couplings,
    rescaled to unit maximum magnitude so the injection strength is
    independent of the model's coefficient scale. Linear Ising fields are
    carried by one auxiliary spin coupled to every other; the
    coupling-only network is invariant under a global spin flip, so the
    readout gauges the auxiliary spin back to +1 instead of biasing the
    dynamics. With ``feedback="measured"`` (default) the injected signal
    is computed from the measured spin signs, mirroring
    measurement-feedback hardware; ``"analog"`` injects the raw
    amplitudes. Independent restarts are merged by lowest energy.
    """
    _require_kind(cfg, SolverKind.SIM_CIM)
    if not (cfg.pump_start < 1.0 < cfg.pump_end):
        raise InvalidSchedule(
            f"pump must ramp from below 1 to above 1, got "
            f"[{cfg.pump_start}, {cfg.pump_end}]"
        )
    ising = ising_from_qubo(m)
    n = m.n
    use_aux = bool(np.any(ising.h != 0.0))
    n_ext = n + 1 if use_aux else n

    couplings = np.zeros((n_ext, n_ext))
    couplings[:n, :n] = -(ising.j + ising.j.T)
    if use_aux:
        couplings[:n, n] = -ising.h
        couplings[n, :n] = -ising.h
    scale = np.abs(couplings).max()
    if scale > 0.0:
        couplings /= scale

    eps = cfg.coupling if cfg.coupling is not None else 0.07 / math.sqrt(max(n_ext, 1))
    rngs = _restart_rngs(cfg.seed, cfg.restarts)

    best_bits: np.ndarray | None = None
    best_energy = math.inf
    trajectory: list[float] | None = [] if cfg.record_trajectory else None
    clamped_total = 0
    start = time.perf_counter()
    for rng in rngs:
        bits, energy, clamped = _cim_trajectory(
            m, couplings, use_aux, eps, cfg, rng, best_energy, trajectory
        )
        clamped_total += clamped
        if bits is not None and energy < best_energy:
            best_energy = energy
            best_bits = bits
    wall = time.perf_counter() - start

    assert best_bits is not None
    return SolveResult(
        best_bits=best_bits.astype(np.int64),
        best_energy=best_energy,
        wall_time=wall,
        trajectory=np.asarray(trajectory) if trajectory is not None else None,
        solver_meta={
            "solver": "sim_cim",
            "restarts": cfg.restarts,
            "steps": cfg.steps,
            "coupling": eps,
            "feedback": cfg.feedback,
            "clamped_updates": clamped_total,
            "auxiliary_spin": use_aux,
        },
    )


# ----------------------------------------------------------------------
# classical baselines
# ----------------------------------------------------------------------

def _kmeans_plus_plus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = np.empty((k, x.shape[1]))
    centers[0] = x[rng.integers(len(x))]
    closest_sq = ((x - centers[0]) ** 2).sum(axis=1)
    for c in range(1, k):
        total = closest_sq.sum()
        if total == 0.0:
            centers[c] = x[rng.integers(len(x))]
        else:
            centers[c] = x[rng.choice(len(x), p=closest_sq / total)]
        closest_sq = np.minimum(closest_sq, ((x - centers[c]) ** 2).sum(axis=1))
    return centers


def _kmeans_once(
    x: np.ndarray, k: int, rng: np.random.Generator, max_iter: int
) -> tuple[np.ndarray, float]:
    centers = _kmeans_plus_plus(x, k, rng)
    labels = np.full(len(x), -1)
    for _ in range(max_iter):
        d2 = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        for c in range(k):  # re-seed any emptied cluster on its farthest point
            if not (new_labels == c).any():
                new_labels[d2[np.arange(len(x)), new_labels].argmax()] = c
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            centers[c] = x[labels == c].mean(axis=0)
    sse = float(((x - centers[labels]) ** 2).sum())
    return labels, sse


def _kmedoids_once(
    d: np.ndarray, k: int, rng: np.random.Generator, max_iter: int
) -> tuple[np.ndarray, float]:
    n = d.shape[0]
    medoids = np.sort(rng.choice(n, size=k, replace=False))
    cost = float(d[:, medoids].min(axis=1).sum())
    for _ in range(max_iter):
        best_cost, best_swap = cost, None
        for slot in range(k):
            keep = np.delete(medoids, slot)
            rest = d[:, keep].min(axis=1) if keep.size else np.full(n, np.inf)
            candidates = np.setdiff1d(np.arange(n), medoids)
            trial_costs = np.minimum(rest[:, None], d[:, candidates]).sum(axis=0)
            j = int(trial_costs.argmin())
            if trial_costs[j] < best_cost:
                best_cost, best_swap = float(trial_costs[j]), (slot, candidates[j])
        if best_swap is None:
            break
        medoids[best_swap[0]] = best_swap[1]
        medoids = np.sort(medoids)
        cost = best_cost
    labels = d[:, medoids].argmin(axis=1)
    return labels, cost


def baseline_cluster(
    p: ProfileSet,
    n_groups: int,
    method: SolverKind | str,
    cfg: SolverConfig,
) -> Assignment:
    """Cluster profiles with K-means or K-medoids (restarted, seeded)."""
    kind = SolverKind(method) if isinstance(method, str) else method
    if kind not in (SolverKind.KMEANS, SolverKind.KMEDOIDS):
        raise ValueError(f"baseline method must be kmeans or kmedoids, got {kind}")
    n = p.n_profiles
    if not 1 <= n_groups <= n:
        raise BadGroupCount(f"n_groups must lie in [1, {n}], got {n_groups}")

    rngs = _restart_rngs(cfg.seed, cfg.restarts)
    best_labels: np.ndarray | None = None
    best_cost = math.inf
    if kind is SolverKind.KMEDOIDS:
        d = distance_matrix(p).values
    for rng in rngs:
        if kind is SolverKind.KMEANS:
            labels, cost = _kmeans_once(p.values, n_groups, rng, cfg.max_iterations)
        else:
            labels, cost = _kmedoids_once(d, n_groups, rng, cfg.max_iterations)
        if cost < best_cost:
            best_cost = cost
            best_labels = labels
    assert best_labels is not None
    return Assignment(best_labels + 1, n_groups)
