"""Exception types raised across the package."""


class WXZError(Exception):
    """Base class for all package errors."""


class DivisionByZero(WXZError, ZeroDivisionError):
    pass


class DimensionMismatch(WXZError, ValueError):
    pass


class SingularMatrix(WXZError, ArithmeticError):
    pass


class HypothesisViolated(WXZError):
    """A conditional symmetry was applied to a triple that does not meet its hypotheses."""

    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        msg = f"hypothesis violated: {hypothesis}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class PreconditionViolated(WXZError):
    def __init__(self, condition: str, detail: str = ""):
        self.condition = condition
        msg = f"precondition violated: {condition}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ConstraintViolated(WXZError, ValueError):
    def __init__(self, constraint: str, where: str = ""):
        self.constraint = constraint
        msg = f"constraint violated: {constraint}"
        if where:
            msg += f" in {where}"
        super().__init__(msg)


class IncompleteAssignment(WXZError, KeyError):
    def __init__(self, missing, where: str = ""):
        self.missing = tuple(missing)
        msg = f"missing parameters {list(self.missing)}"
        if where:
            msg += f" for {where}"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class Unsatisfiable(WXZError):
    pass


class ParseError(WXZError, ValueError):
    def __init__(self, message: str, position: str = ""):
        self.position = position
        super().__init__(f"{message} at {position}" if position else message)
