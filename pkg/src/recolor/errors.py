"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``ParameterError`` and ``ParseError``
give 2, ``BudgetExceeded`` gives 3.
"""


class RecolorError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(RecolorError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ParameterError(RecolorError):
    """A precondition or hypothesis of an operation does not hold."""


class ImproperColoring(ParameterError):
    def __init__(self, u, v, color):
        self.edge = (u, v)
        self.color = color
        super().__init__(f"improper coloring: edge ({u}, {v}) has both ends colored {color}")


class LadderError(RecolorError):
    """A ladder could not be applied (frozen start or blocked shift)."""

    def __init__(self, message, index=None):
        self.index = index
        super().__init__(message)


class InvariantViolation(RecolorError):
    """Something the constructions guarantee did not hold. Always a bug."""


class BudgetExceeded(RecolorError):
    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"enumeration needs {required} candidates, budget is {budget}")


class SimulationTimeout(RecolorError):
    def __init__(self, rounds, trace=None):
        self.rounds = rounds
        self.trace = trace
        super().__init__(f"node program did not halt within {rounds} rounds")


class ProbeInconclusive(RecolorError):
    pass
