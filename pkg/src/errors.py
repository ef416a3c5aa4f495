"""
Error types for DialecticKernel
"""

from typing import Optional


class KernelError(Exception):
    """Base class for every error raised by the kernel"""


class ShapeMismatchError(KernelError):
    """Maps or terms are not arranged between the expected carriers"""


class TypeMismatchError(KernelError):
    """Terms are not composable, parallel or opposed as required"""


class CapabilityError(KernelError):
    """The model lacks a structure (joins, meets, biproducts, separator) the operation needs"""


class SizeBoundError(KernelError):
    """A carrier exceeds the configured size bound"""


class NotAdjointError(KernelError):
    pass


class NotFunctionalError(KernelError):
    pass


class StandardizationError(KernelError):
    """Tensor product of two comonoids is not a comonoid"""


class InvalidTopotypeError(KernelError):
    pass


class FrameMismatchError(KernelError):
    """Hoare triples whose intermediate assertions disagree"""


class ModelConstructionError(KernelError):
    """A constructed model failed its post-construction audit"""


class SeparatorError(CapabilityError):
    pass


class UnmappedSymbolError(KernelError):
    pass


class IllTypedFormulaError(KernelError):
    pass


class UnknownRuleError(KernelError):
    pass


class NonGroundClauseError(KernelError):
    pass


class UnknownDescriptorError(KernelError):
    pass


class ParseError(KernelError):
    """Input file does not follow its grammar"""

    def __init__(self, message: str, line: int = 0, column: int = 0, source: Optional[str] = None):
        self.message = message
        self.line = line
        self.column = column
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{line}:{column}: {message}")
