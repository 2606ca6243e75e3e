"""Free-free-Boolean independence: IBNC partition lattices, cumulants and a Fock model."""
from .chi import ChiMap, chi_order, enumerate_ibnc, is_ibnc, render_diagram
from .cumulants import (
    cumulant,
    ffb_convolve,
    moment_recursion_star,
    moments_from_cumulants,
    one_block_cumulant,
    vanishing_mixed_cumulants_report,
)
from .climit import CovMatrix, gamma_c_moment
from .errors import DomainError, FFBError, MissingMomentError, SizeLimitError, TruncationError
from .fock import FockBasis, fock_model, vacuum_expectation
from .lattice import compose, decompose, get_lattice
from .mobius import mobius_bruteforce, mobius_product
from .moments import Letter, TableMoments
from .partitions import Partition

__all__ = [
    "ChiMap", "chi_order", "enumerate_ibnc", "is_ibnc", "render_diagram",
    "cumulant", "ffb_convolve", "moment_recursion_star", "moments_from_cumulants",
    "one_block_cumulant", "vanishing_mixed_cumulants_report",
    "DomainError", "FFBError", "MissingMomentError", "SizeLimitError", "TruncationError",
    "compose", "decompose", "get_lattice", "mobius_bruteforce", "mobius_product",
    "Letter", "TableMoments", "Partition",
    "CovMatrix", "gamma_c_moment", "FockBasis", "fock_model", "vacuum_expectation",
]
