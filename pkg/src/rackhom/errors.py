"""
Exception hierarchy for rackhom
Each class carries the CLI exit code it maps to
"""

from typing import Optional, Tuple


class RackHomError(ValueError):
    """Base class for every error raised by rackhom"""
    exit_code = 1


class ParseError(RackHomError):
    """Malformed rack, module or group input"""
    exit_code = 2


class PreconditionError(RackHomError):
    """An operation was called outside its precondition"""
    exit_code = 3


class BudgetExceededError(PreconditionError):
    """A configured budget (degree, order, oracle candidates) was exceeded"""


class VarianceMismatchError(PreconditionError):
    """Left module given where a right module is required, or vice versa"""


class InfiniteGroupError(PreconditionError):
    """An enumeration was requested on an infinite group"""


class ShapeError(RackHomError):
    """Matrix or hom shapes do not fit together"""


class HomomorphismError(RackHomError):
    """A matrix does not define a homomorphism of presented groups"""

    def __init__(self, message: str, relator: Optional[int] = None):
        super().__init__(message)
        self.relator = relator


class RackAxiomError(RackHomError):
    """A table violates R1, R2 or has out-of-range entries"""

    def __init__(self, axiom: str, witness: Tuple[int, ...], message: str):
        super().__init__(message)
        self.axiom = axiom
        self.witness = witness


class ModuleAxiomError(RackHomError):
    """Module data fails its axiom set"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class IncompatibleBasesError(RackHomError):
    """Wring elements whose bases do not compose"""


class ChainComplexError(RackHomError):
    """Assembled maps do not form a chain complex"""


class OracleMismatchError(RackHomError):
    """Two independent computations disagree"""

    def __init__(self, message: str, details=None):
        super().__init__(message)
        self.details = details
