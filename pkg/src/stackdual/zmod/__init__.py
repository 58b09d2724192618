"""Integer lattices, finite abelian groups, and exact-sequence duals."""

from .groups import (CokernelData, FinAbGroup, FinAbHom, Pairing, Phase, TorIdentification,
                     cokernel, cokernel_data, double_dual_evaluation,
                     invariant_factors_from_counts, pontryagin_dual, relation_matrix,
                     tor1_with_circle)
from .lattice import (Lattice, LatticeQuotient, finite_quotient, finite_quotient_data, hnf,
                      inclusion_matrix, lattice_intersection, lattice_sum, saturation)
from .matrix import IntMatrix
from .normal_forms import (hermite_columns, in_column_span, integer_kernel, smith_normal_form,
                           solve_integer, unimodular_inverse)
from .sequences import DualSequence, check_exact, dualize_ses, exactness_report

__all__ = [
    "CokernelData", "DualSequence", "FinAbGroup", "FinAbHom", "IntMatrix", "Lattice",
    "LatticeQuotient", "Pairing", "Phase", "TorIdentification", "check_exact", "cokernel",
    "cokernel_data", "double_dual_evaluation", "dualize_ses", "exactness_report",
    "finite_quotient", "finite_quotient_data", "hermite_columns", "hnf", "in_column_span",
    "inclusion_matrix", "integer_kernel", "invariant_factors_from_counts", "lattice_intersection",
    "lattice_sum", "pontryagin_dual", "relation_matrix", "saturation", "smith_normal_form",
    "solve_integer", "tor1_with_circle", "unimodular_inverse",
]
