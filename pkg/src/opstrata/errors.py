"""Exception hierarchy.

Every error raised on purpose by the package derives from
:class:`StratumError`.  Errors describing an obstruction that no valid input
can work around (a disconnected stratum, an impossible chain hop) derive from
:class:`Infeasible` so that callers such as the CLI can tell them apart from
plain bad input.
"""


class StratumError(ValueError):
    """Base class for all package errors."""


class Infeasible(StratumError):
    """The requested object does not exist for these inputs."""


class SingularMatrix(StratumError):
    pass


class NumericallySingular(StratumError):
    pass


class NotComplementary(StratumError):
    pass


class AmbientMismatch(StratumError):
    pass


class DimensionMismatch(StratumError):
    pass


class ShapeMismatch(StratumError):
    pass


class OutOfDomain(StratumError):
    pass


class OutOfRange(StratumError):
    pass


class NotInRange(StratumError):
    pass


class NumericalDegeneracy(StratumError):
    pass


class RankMismatch(StratumError):
    pass


class FredholmDataMismatch(StratumError):
    pass


class ChainInvalid(StratumError):
    pass


class NoSpareDirection(Infeasible):
    pass


class StratumDisconnected(Infeasible):
    pass


class InfeasibleHop(Infeasible):
    pass


class HypothesisViolated(Infeasible):
    pass
