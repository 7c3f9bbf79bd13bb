"""
HeckMort - Engine Errors
Exception hierarchy shared by the series engine, the identity parser and the CLI.
"""

from typing import Any, Iterable, Optional, Tuple

Position = Tuple[int, int]


class HeckMortError(Exception):
    """Base class for every error raised by the engine or the CLI"""

    exit_code = 3

    def __init__(self, message: str, position: Optional[Position] = None):
        super().__init__(message)
        self.message = message
        self.position = position

    def __reduce__(self) -> Tuple[Any, ...]:
        return (self.__class__, (self.message, self.position))

    def tagged(self, position: Position) -> "HeckMortError":
        """Attach an AST position if none is recorded yet"""
        if self.position is None:
            self.position = position
        return self

    def __str__(self) -> str:
        if self.position is None:
            return self.message
        line, column = self.position
        return f"{self.message} (at line {line}, column {column})"


class InsufficientPrecision(HeckMortError, ArithmeticError):
    """No nonzero term below the horizon where one is required"""


class HalfPowerOfNegative(HeckMortError, ArithmeticError):
    """Non-integral power of a monomial with negative coefficient"""


class IrrationalPower(HeckMortError, ArithmeticError):
    """Non-integral power whose coefficient root is not rational"""


class PoleAtSpecialization(HeckMortError, ArithmeticError):
    """Appell-Lerch sum evaluated where z or xz is an integral power of the base"""


class WindowViolation(HeckMortError, ValueError):
    """A q-order window precondition does not hold"""


class NonterminatingEnumeration(HeckMortError, ArithmeticError):
    """A lattice scan failed to find the edge of the sub-horizon support"""


class NonGenericSpecialization(HeckMortError, ArithmeticError):
    """A theta function in a denominator vanishes identically"""


class NonUnitFactor(HeckMortError, ArithmeticError):
    """A Pochhammer factor is zero and cannot be inverted"""


class UnknownBuiltin(HeckMortError, KeyError):
    """Builtin series or catalog identity name not registered"""

    def __str__(self) -> str:
        return HeckMortError.__str__(self)


class ParseError(HeckMortError, ValueError):
    """Identity DSL syntax error"""

    exit_code = 2

    def __init__(
        self,
        message: str,
        position: Optional[Position] = None,
        expected: Iterable[str] = (),
    ):
        super().__init__(message, position)
        self.expected = tuple(sorted(set(expected)))

    def __reduce__(self) -> Tuple[Any, ...]:
        return (self.__class__, (self.message, self.position, self.expected))

    def __str__(self) -> str:
        text = HeckMortError.__str__(self)
        if self.expected:
            text += f"; expected one of: {', '.join(self.expected)}"
        return text


class ConfigError(HeckMortError, ValueError):
    """Invalid run or file configuration"""

    exit_code = 2


class ArgumentError(HeckMortError, ValueError):
    """Well-formed call whose argument values the engine rejects"""

    exit_code = 2
