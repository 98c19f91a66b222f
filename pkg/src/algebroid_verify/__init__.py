"""Exact symbolic verification of generalized Lie bialgebroids, their Courant doubles and Dirac structures."""
from .ring import RatioElem, RingElem
from .expr import parse_expr, render
from .exterior import AForm, Multivector, wedge, interior, pairing
from .algebroid import AlgebroidStructure, tangent_algebroid, zero_algebroid
from .bialgebroid import GenLieBialgebroid, JacobiStructure, check_genbialgebroid, check_theorem1
from .courant import CourantDouble, DoubleSection
from .dirac import DiracSubbundle, is_admissible, bracket_L
from .document import parse_document, render_document
from .checks import run_checks, emit_report

__version__ = "0.1.0"

__all__ = [
    "RingElem", "RatioElem", "parse_expr", "render",
    "Multivector", "AForm", "wedge", "interior", "pairing",
    "AlgebroidStructure", "tangent_algebroid", "zero_algebroid",
    "GenLieBialgebroid", "JacobiStructure", "check_genbialgebroid", "check_theorem1",
    "CourantDouble", "DoubleSection", "DiracSubbundle", "is_admissible", "bracket_L",
    "parse_document", "render_document", "run_checks", "emit_report",
]
