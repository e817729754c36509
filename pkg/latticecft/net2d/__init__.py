from latticecft.net2d.classify import STAGES, Verdict, classify_charges
from latticecft.net2d.extension import ExtensionSpace, Sector, SpaceVector, build_extension
from latticecft.net2d.fields import (
    full_field,
    smear_full_field,
    smear_on_sector,
    verify_full_field,
    verify_offset_grid,
)
from latticecft.net2d.shifts import (
    ShiftOperator,
    flip_lattice,
    shift_operator,
    verify_L_shift,
    verify_parity_equivalence,
    verify_shift_laws,
)
from latticecft.net2d.spectrum import character, character_oracle, spin_spectrum, verify_character

__all__ = [
    "ExtensionSpace",
    "STAGES",
    "Sector",
    "ShiftOperator",
    "SpaceVector",
    "Verdict",
    "build_extension",
    "character",
    "character_oracle",
    "classify_charges",
    "flip_lattice",
    "full_field",
    "shift_operator",
    "smear_full_field",
    "smear_on_sector",
    "spin_spectrum",
    "verify_L_shift",
    "verify_character",
    "verify_full_field",
    "verify_offset_grid",
    "verify_parity_equivalence",
    "verify_shift_laws",
]
