__all__ = [
    "ParseError",
    "UnknownIdentifierError",
    "DerivativeVariableError",
    "DivisionByZeroError",
    "SubstitutionCycleError",
    "UnboundAtomError",
    "PoleError",
]


class ParseError(ValueError):
    """
    Raised for malformed expression text.

    Attributes:
        message: what went wrong.
        line: 1-based line of the offending token.
        col: 1-based column of the offending token.
        pos: 0-based offset of the offending token in the source.
    """

    def __init__(self, message: str, line: int, col: int, pos: int = 0) -> None:
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col
        self.pos = pos


class UnknownIdentifierError(ParseError):
    pass


class DerivativeVariableError(ParseError):
    pass


class DivisionByZeroError(ZeroDivisionError):
    pass


class SubstitutionCycleError(ValueError):
    pass


class UnboundAtomError(KeyError):
    def __init__(self, atoms) -> None:
        names = ", ".join(sorted(str(a) for a in atoms))
        super().__init__(f"no value bound for {names}")
        self.atoms = atoms

    def __str__(self) -> str:
        return self.args[0]


class PoleError(ZeroDivisionError):
    pass
