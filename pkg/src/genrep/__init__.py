"""genrep: exact dimension and character data for generic representations of finite rings."""

__version__ = "0.1.0"

from .errors import CapExceeded, GenrepError, InvariantViolation, SpecError  # noqa: E402
from .rings import FiniteRing, build_ring, gf, poly_quot, product, units, verify_axioms, zn  # noqa: E402
from .modules import (FiniteModule, aut_group, direct_sum, dual_module, free_module,  # noqa: E402
                      hom_set, iso_test, quotient_module, submodule_generated,
                      surjection_count_bruteforce)
from .catalog import catalog, get_catalog  # noqa: E402
from .dimension import ChiPolynomial, DimensionFunction, chi_polynomial  # noqa: E402
from .calculus import (context, dim_Q_of_A, dim_QA_via_resolution, dim_QAM,  # noqa: E402
                       dim_Qupper, dim_simple, fd_membership, g0_linearization,
                       g0_to_simple_basis, s_count, simple_census)

__all__ = [
    "CapExceeded", "GenrepError", "InvariantViolation", "SpecError",
    "FiniteRing", "build_ring", "gf", "poly_quot", "product", "units", "verify_axioms", "zn",
    "FiniteModule", "aut_group", "direct_sum", "dual_module", "free_module", "hom_set",
    "iso_test", "quotient_module", "submodule_generated", "surjection_count_bruteforce",
    "catalog", "get_catalog", "ChiPolynomial", "DimensionFunction", "chi_polynomial",
    "context", "dim_Q_of_A", "dim_QA_via_resolution", "dim_QAM", "dim_Qupper", "dim_simple",
    "fd_membership", "g0_linearization", "g0_to_simple_basis", "s_count", "simple_census",
]
