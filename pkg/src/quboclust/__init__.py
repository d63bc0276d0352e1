"""QUBO/Ising encodings of time-series profile clustering, with solvers.

The pipeline: load profiles, derive a distance or centered-kernel
similarity matrix, encode the grouping problem over one-hot binary
variables with penalty-weighted constraints, minimize with an exact,
annealing, or simulated Ising-machine back-end, and score the decoded
clustering.
"""

from .errors import QuboClustError
from .evaluation import (
    Assignment,
    EvalReport,
    decode_assignment,
    evaluate,
    intra_group_distance,
    one_hot_bits,
    silhouette,
)
from .profiles import (
    MatrixKind,
    ProfileSet,
    SimilarityMatrix,
    centered_similarity,
    distance_matrix,
    hourly_average,
    kernel_matrix,
    load_profiles,
    normalize_01,
    save_matrix_csv,
)
from .qubo import (
    IsingModel,
    QuboModel,
    build_distance_qubo,
    build_kernel_qubo,
    ising_energy,
    ising_from_qubo,
    kernel_penalty_bound,
    load_ising,
    load_qubo,
    penalty_lower_bound,
    qubo_energy,
    qubo_from_ising,
    save_ising,
    save_qubo,
)
from .solvers import (
    SolveResult,
    SolverConfig,
    SolverKind,
    anneal_solve,
    baseline_cluster,
    brute_force_solve,
    cim_solve,
)

__version__ = "0.1.0"

__all__ = [
    "QuboClustError",
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
    "QuboModel",
    "IsingModel",
    "qubo_energy",
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
    "SolverKind",
    "SolverConfig",
    "SolveResult",
    "brute_force_solve",
    "anneal_solve",
    "cim_solve",
    "baseline_cluster",
    "Assignment",
    "EvalReport",
    "decode_assignment",
    "one_hot_bits",
    "intra_group_distance",
    "silhouette",
    "evaluate",
]
