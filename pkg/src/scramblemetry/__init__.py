"""Scrambling measures for operators and unitaries.

Operator side: average Pauli weight, quantum Fourier entropy and their sum,
the operator complexity, together with the closed-form maximizer and the
exact weight/entropy trade-off frontier. Unitary side: the exact weight-1
complexity growth and certified lower bounds for the entanglement, magic
and complexity growths.
"""
from .circuit import Circuit, Gate
from .circuit_io import build_unitary, circuit_to_tableau, classify, load_circuit, parse_circuit
from .errors import (
    DimensionError,
    LimitError,
    NormalizationError,
    NotUnitaryError,
    ParseError,
    ScrambleError,
)
from .growth import (
    GrowthKind,
    GrowthMethod,
    GrowthReport,
    SearchConfig,
    growth_search,
    growth_tilde,
    maxitivity_check,
    seed_growth,
)
from .measures import (
    MeasureParams,
    MeasureReport,
    PlanePoint,
    avg_weight,
    complexity,
    fourier_entropy,
    frontier_max_entropy,
    landmark_points,
    o_max_closed,
    o_max_spectrum,
    sn_identity_check,
    weight_census,
)
from .pauli import (
    CliffordTableau,
    FreeUnitaryKind,
    PauliString,
    SignedPauli,
    commutes,
    multiply,
    random_free_unitary,
    tableau_conjugate,
    weight,
)
from .spectrum import (
    DenseOperator,
    PauliSpectrum,
    TransferMatrix,
    conjugate,
    decompose,
    normalize,
    reconstruct,
    transfer_matrix,
)

__version__ = "0.1.0"
