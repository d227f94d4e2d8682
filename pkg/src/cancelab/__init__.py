"""Exact computer algebra for stably isomorphic but non-isomorphic reflexive modules.

Layers, bottom up: :mod:`scalar` (fields), :mod:`polyring` (polynomials),
:mod:`groebner` (Buchberger, membership, dimension), :mod:`linalg` and
:mod:`fpmod` (presented modules), :mod:`seqcalc` (exact sequences),
:mod:`suslin` and :mod:`obstruction` (transvections, phi-matrix isomorphisms and unit
equations), and :mod:`lab` (example pairs and certificates).
"""

from .scalar import QQ, GF, parse_field, rational_nth_power_test, extension_norm
from .polyring import PolynomialRing, Polynomial, parse_ring, parse_polynomial, LEX, GREVLEX
from .groebner import Ideal, buchberger, ideal_member, ideal_equal, krull_dim, power_in_ideal, ResourceLimitError
from .linalg import Matrix, FreeModuleElement, syzygies
from .fpmod import PresentedModule, ModuleMap, present_cokernel, free_module, dual_module, ext1, is_isomorphism
from .lab import Certificate, build_example, run_full_certificate

__all__ = [
    "QQ", "GF", "parse_field", "rational_nth_power_test", "extension_norm",
    "PolynomialRing", "Polynomial", "parse_ring", "parse_polynomial", "LEX", "GREVLEX",
    "Ideal", "buchberger", "ideal_member", "ideal_equal", "krull_dim", "power_in_ideal",
    "ResourceLimitError", "Matrix", "FreeModuleElement", "syzygies",
    "PresentedModule", "ModuleMap", "present_cokernel", "free_module", "dual_module", "ext1",
    "is_isomorphism", "Certificate", "build_example", "run_full_certificate",
]

__version__ = "0.1.0"
