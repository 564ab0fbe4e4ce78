"""Monomial bases, minimal resolutions, the K2 criterion and canonical
A-infinity structures on Yoneda algebras of finitely presented graded
algebras."""

from .field import QQ, PrimeField, Rationals
from .freealg import Poly, Presentation, compare_words, make_presentation, poly_arith
from .rewrite import (Algebra, CertificateError, NotConfluentError, RewriteRule,
                      RewriteSystem, build_rewrite_system, enumerate_basis, hilbert,
                      normal_form)

__all__ = [
    "QQ", "PrimeField", "Rationals", "Poly", "Presentation", "compare_words",
    "make_presentation", "poly_arith", "Algebra", "CertificateError",
    "NotConfluentError", "RewriteRule", "RewriteSystem", "build_rewrite_system",
    "enumerate_basis", "hilbert", "normal_form",
]
from .gradedmod import (Complex, GradedFreeModule, ModuleMap, kernel_generators,
                        locality_degree, verify_complex)
from .resolve import left_annihilator, minimal_resolution, preset, star
from .k2 import k2_check
from .ainfty import Merkulov, build_sdr, m_table, stasheff_check

__all__ += [
    "Complex", "GradedFreeModule", "ModuleMap", "kernel_generators", "locality_degree",
    "verify_complex", "left_annihilator", "minimal_resolution", "preset", "star",
    "k2_check", "Merkulov", "build_sdr", "m_table", "stasheff_check",
]
