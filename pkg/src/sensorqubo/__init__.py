"""Sensor placement by mutual information, compiled to QUBO form."""
from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    EmptyMatrix,
    IndexOutOfRange,
    InconsistentAuxiliary,
    InsufficientSamples,
    InvalidCardinality,
    NotPositiveDefinite,
    ParseError,
    ProblemTooLarge,
    SensorQuboError,
    ValidationError,
)
from .expansion import expand_objective, masked_determinant, masking_value, reduce_monomial
from .model import (
    BooleanPolynomial,
    CovarianceMatrix,
    SensorSelection,
    SpinPolynomial,
    evaluate_polynomial,
    selection_from_spins,
    validate_covariance,
)
from .oracle import (
    brute_force_optimum,
    entropy,
    interpolate_polynomial,
    mutual_information,
    subset_objective,
)
from .quadratize import (
    QuboModel,
    add_cardinality_penalty,
    build_qubo,
    quadratize,
    qubo_to_ising,
    spin_to_boolean,
)
from .solve import AnnealSchedule, SolveResult, project_solution, solve_annealing, solve_exhaustive

__version__ = "0.1.0"
