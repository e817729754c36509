from latticecft.vertex.bigraded import BigradedSeries, SectorField, TensorBlock, TensorMatrix, fourier_component
from latticecft.vertex.relations import (
    verify_comm_E,
    verify_locality_phase,
    verify_parity_conjugation,
    verify_primary,
)
from latticecft.vertex.series import (
    ANNIHILATION,
    CREATION,
    PreVertexImages,
    SeriesOperator,
    exp_half,
    generalized_binomial,
    pre_vertex,
)

__all__ = [
    "ANNIHILATION",
    "BigradedSeries",
    "CREATION",
    "PreVertexImages",
    "SectorField",
    "SeriesOperator",
    "TensorBlock",
    "TensorMatrix",
    "exp_half",
    "fourier_component",
    "generalized_binomial",
    "pre_vertex",
    "verify_comm_E",
    "verify_locality_phase",
    "verify_parity_conjugation",
    "verify_primary",
]
