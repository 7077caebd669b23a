"""coxrack: reflection racks of finite Coxeter groups, exactly.

Builds finite Coxeter groups with exact cyclotomic root data, the rack
of reflections and its sign cocycles, the index-two central extension
with its canonical section (certifying twist equivalence of the two
cocycles), and Hilbert-series coefficients of the associated Nichols
algebras via quantum symmetrizer ranks.
"""

__version__ = "0.1.0"

from .cyclo import CycloNumber, cos_of_pi_over
from .coxeter import CoxeterMatrix, GroupTable, build_group, preset_matrix

__all__ = [
    "CycloNumber",
    "cos_of_pi_over",
    "CoxeterMatrix",
    "GroupTable",
    "build_group",
    "preset_matrix",
    "__version__",
]
