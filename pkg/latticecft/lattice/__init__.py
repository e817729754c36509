from latticecft.lattice.core import (
    AmbientVector,
    Lattice,
    SplitSpace,
    antichiral_pairing,
    build_lattice,
    check_even,
    chiral_norms,
    chiral_pairing,
    coordinates_of,
    enumerate_box,
    indef_pairing,
    integer_coordinates_of,
    spin,
    unimodular_change,
)
from latticecft.lattice.discriminant import DiscriminantData, MaximalityVerdict, discriminant_data, is_maximal_even
from latticecft.lattice.family import (
    RANK2_GENERATORS,
    SublatticeCertificate,
    build_rank2_family,
    rational_sublattice_vector,
)
from latticecft.lattice.recognize import looks_discrete, recognize_lattice

__all__ = [
    "AmbientVector",
    "DiscriminantData",
    "Lattice",
    "MaximalityVerdict",
    "RANK2_GENERATORS",
    "SplitSpace",
    "SublatticeCertificate",
    "antichiral_pairing",
    "build_lattice",
    "build_rank2_family",
    "check_even",
    "chiral_norms",
    "chiral_pairing",
    "coordinates_of",
    "discriminant_data",
    "enumerate_box",
    "indef_pairing",
    "integer_coordinates_of",
    "is_maximal_even",
    "looks_discrete",
    "rational_sublattice_vector",
    "recognize_lattice",
    "spin",
    "unimodular_change",
]
