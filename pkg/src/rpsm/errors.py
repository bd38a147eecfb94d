class RpsmError(Exception):
    """Base class for all errors raised by rpsm."""


class ValidationError(RpsmError, ValueError):
    """A parameter or configuration value is out of its allowed range."""


class ParseError(RpsmError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class DegenerateDarkPort(RpsmError, ArithmeticError):
    """The dark port receives (almost) no light, so P_V is 0/0."""


class EmptyEnsemble(RpsmError, ArithmeticError):
    pass


class EmptySample(RpsmError, ArithmeticError):
    pass


class NoConvergence(RpsmError, RuntimeError):
    pass
