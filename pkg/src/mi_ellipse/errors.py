"""Exception hierarchy.

Errors split into two families so the command line can map them to exit
codes: bad or out-of-contract input (``InputError``, exit 2) and numerical
procedures that failed to deliver (``NumericalError``, exit 3).
"""


class MIEllipseError(Exception):
    exit_code = 3


class InputError(MIEllipseError, ValueError):
    exit_code = 2


class NumericalError(MIEllipseError, ArithmeticError):
    exit_code = 3


# body
class NotConvex(InputError):
    pass


class NotCentrallySymmetric(InputError):
    pass


class TooFewVertices(InputError):
    pass


class RayRootNotFound(InputError):
    pass


class NotUnimodular(InputError):
    pass


# crossings / derivatives
class UnresolvedRoot(NumericalError):
    pass


class TangencyPresent(InputError):
    pass


class NoCrossings(InputError):
    pass


class DegenerateAngle(NumericalError):
    pass


class DomainError(InputError):
    pass


# extremal / solver
class IterationLimit(NumericalError):
    pass


class LambdaOutOfRange(InputError):
    pass


class NoConvergence(NumericalError):
    pass


# position
class NotStationary(InputError):
    pass


class InfeasibleHull(NumericalError):
    pass


# output
class IoError(InputError):
    pass
