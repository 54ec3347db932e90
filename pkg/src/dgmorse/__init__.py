"""Exact Morse homology and cohomology with differential graded coefficients."""
from .algebra import DGAPresentation, DGModulePresentation, RegularModule, validate_dga, validate_module
from .bundle import parse_bundle, render_bundle
from .complexes import ChainComplex, homology
from .corpus import CATALOG, check_expectations, expected_homology, load_example
from .errors import DGMorseError
from .twisted import CocycleMatrix, CriticalBasis, build_twisted_complex, check_maurer_cartan

__all__ = ["DGAPresentation", "DGModulePresentation", "RegularModule", "validate_dga", "validate_module",
           "parse_bundle", "render_bundle", "ChainComplex", "homology", "CATALOG", "check_expectations",
           "expected_homology", "load_example", "DGMorseError", "CocycleMatrix", "CriticalBasis",
           "build_twisted_complex", "check_maurer_cartan"]
__version__ = "0.1.0"
