from latticecft.fock.module import FockModule, Vector, build_module, state_budget
from latticecft.fock.modes import mode_operator, parity_operator, unit_vector
from latticecft.fock.operators import GradedOperator, identity, scalar_operator, zero_operator
from latticecft.fock.partitions import State, colored_partition_counts, colored_partitions, energy, particle_number
from latticecft.fock.relations import verify_algebra_relations
from latticecft.fock.smearing import (
    EnergyBoundResult,
    SmearedField,
    energy_bound_ratios,
    smear_field,
    smeared_commutator_value,
    verify_smeared_commutator,
)
from latticecft.fock.virasoro import central_term, sugawara

__all__ = [
    "EnergyBoundResult",
    "FockModule",
    "GradedOperator",
    "SmearedField",
    "State",
    "Vector",
    "build_module",
    "central_term",
    "colored_partition_counts",
    "colored_partitions",
    "energy",
    "energy_bound_ratios",
    "identity",
    "mode_operator",
    "parity_operator",
    "particle_number",
    "scalar_operator",
    "smear_field",
    "smeared_commutator_value",
    "state_budget",
    "sugawara",
    "unit_vector",
    "verify_algebra_relations",
    "verify_smeared_commutator",
    "zero_operator",
]
