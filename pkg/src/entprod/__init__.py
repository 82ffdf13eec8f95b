"""Entanglement production by operators on tensor-product Hilbert spaces."""
from .errors import (
    DomainError,
    EntanglementError,
    NotHermitianError,
    NumericalInstability,
    TracelessOperator,
)
from .linalg import (
    INF,
    EigenSystem,
    evolve_operator,
    hermitian_eig,
    hilbert_schmidt_norm,
    imaginary_time_operator,
    kron,
    kron_all,
    schatten_norm,
    singular_values,
    trace,
)
from .measure import (
    MeasureResult,
    ThermalResult,
    entanglement_probability,
    entanglement_production,
    evolutional_measure,
    nonentangling_counterpart,
    short_time_mu,
    thermal_measure_direct,
    thermal_measure_partition,
)
from .models import (
    Ising2Params,
    PeriodClass,
    classify_periodicity,
    ising2_hamiltonian,
    ising2_measure_closed_form,
    ising2_short_time,
    ising_chain_hamiltonian,
    random_operator,
)
from .space import (
    OperatorOnSpace,
    SpaceStructure,
    StateVector,
    embed_local,
    partial_trace_keep,
    product_state,
)

__version__ = "0.1.0"
