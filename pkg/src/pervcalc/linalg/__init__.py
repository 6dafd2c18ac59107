"""Exact linear algebra over Q, F_p and Z."""

from .matrix import Matrix, block_diag, determinant
from .modules import (
    DirectSum,
    FGModule,
    MapFactorization,
    ModuleMap,
    Presentation,
    canonical_decomposition,
    direct_sum_maps,
    direct_sum_module,
    direct_sum_modules,
    eigen_kernel,
    elementary_divisors,
    exactness_check,
    field_rank,
    map_factorization,
    module_leq,
)
from .rings import QQ, ZZ, Ring
from .snf import SmithForm, smith_form, smith_normal_form

__all__ = [
    "QQ", "ZZ", "Ring", "Matrix", "block_diag", "determinant",
    "SmithForm", "smith_form", "smith_normal_form",
    "FGModule", "ModuleMap", "Presentation", "MapFactorization", "DirectSum",
    "canonical_decomposition", "direct_sum_maps", "direct_sum_module", "direct_sum_modules",
    "eigen_kernel", "elementary_divisors", "exactness_check", "field_rank",
    "map_factorization", "module_leq",
]
