"""
Everything that can go wrong while analysing or simulating a modular
architecture. Modeled outcomes such as a fail-fast abort are values and
never show up here.
"""


class ModularQCError(Exception):
    """
    The root of all errors raised by this package.
    """


class ConfigError(ModularQCError):
    """
    The scenario file or the command line is not valid. Nothing has been
    executed yet when this is raised.
    """


class InvariantViolation(ModularQCError):
    """
    An internal invariant broke during a run, for example a tuple that went
    missing from the conservation count. These must never be silent.
    """


class ProtocolViolationError(InvariantViolation):
    """
    Somebody tried an illegal ledger or transaction transition, for example
    consuming a tuple that is held by another transaction.
    """


class UnknownTupleError(ModularQCError):
    """
    The ledger has never seen this tuple id.
    """


class UnknownModuleError(ModularQCError):
    """
    The module is not part of the topology.
    """


class NoPositiveRadiusError(ModularQCError):
    """
    The decode and feedforward latencies already eat the whole coherence
    deadline so there is no control radius left.
    """
    def __init__(self, deficit_ns):
        self.deficit_ns = deficit_ns
        super().__init__('Coherence budget violated by {} ns, no positive control radius'.format(deficit_ns))


class InfeasibleWallError(ModularQCError):
    """
    The coordination wall sits below a single qubit, the architecture is
    infeasible at any scale.
    """
    def __init__(self, residual_ns, message=None):
        self.residual_ns = residual_ns
        super().__init__(message or 'Coordination wall at N < 1 (residual budget {} ns)'.format(residual_ns))


class NoGateTimeError(ModularQCError):
    """
    A memory-only platform has no gate time, hence no operation count.
    """
