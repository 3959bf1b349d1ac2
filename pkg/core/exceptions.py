"""
###############################################################################
# Custom Exceptions for the CSD toolkit
###############################################################################
"""


class CsdError(Exception):
    """Base class for every error raised by the toolkit"""
    pass


class NoSolutionError(CsdError):
    """Raised when a GF(2) linear system has no solution"""
    pass


class InvalidCodeError(CsdError):
    """Raised when a code object violates its structural invariants"""
    pass


class CommutationError(InvalidCodeError):
    """Raised when stabilizer checks do not mutually commute"""
    pass


class InvalidDualityError(InvalidCodeError):
    """Raised when a ZX-duality is not a fixed-point-free involution"""
    pass


class UnknownSeedError(CsdError):
    """Raised when a seed code name is not in the library"""
    pass


class NotALogicalGateError(CsdError):
    """Raised when a circuit does not normalize the stabilizer group"""
    pass


class BudgetExceededError(CsdError):
    """Raised when a brute-force search exceeds its size budget"""
    pass


class CapExceededError(CsdError):
    """Raised when a group closure grows past its element cap"""
    pass


class NotInGroupError(CsdError):
    """Raised when a compilation target is not reachable from the generators"""
    pass


class MissingRealizationError(CsdError):
    """Raised when a free group element has no physical circuit attached"""
    pass


class CircuitError(CsdError):
    """Raised when a circuit instruction is malformed"""
    pass


class NonCliffordError(CircuitError):
    """Raised when a simulator meets an instruction it cannot evolve"""
    pass


class NondeterministicDetectorError(CsdError):
    """Raised when a detector or observable is not deterministic without noise"""
    pass


class InconsistentSyndromeError(CsdError):
    """Raised when a syndrome lies outside the column space of the check matrix"""
    pass


class ProtocolError(CsdError):
    """Raised when a protocol builder is asked for an invalid construction"""
    pass


class FormatError(CsdError):
    """Raised when a text or JSON input cannot be parsed"""
    pass
