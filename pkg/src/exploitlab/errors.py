"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ExploitLabError(Exception):
    """Base class for all package errors."""


# -- alphabets and words ------------------------------------------------------

class EmptyAlphabet(ExploitLabError):
    pass


class EmptyToken(ExploitLabError):
    pass


class DuplicateToken(ExploitLabError):
    def __init__(self, token: str):
        super().__init__(f"duplicate token {token!r}")
        self.token = token


class UnknownSymbol(ExploitLabError):
    """A symbol is not a member of the relevant alphabet.

    ``position`` is the offending index when the symbol occurred inside a
    word, otherwise None.
    """

    def __init__(self, token: str, position: int | None = None):
        at = "" if position is None else f" at position {position}"
        super().__init__(f"unknown symbol {token!r}{at}")
        self.token = token
        self.position = position


# -- system loading -----------------------------------------------------------

class ParseError(ExploitLabError):
    pass


class UnknownState(ExploitLabError):
    def __init__(self, state: str):
        super().__init__(f"unknown state {state!r}")
        self.state = state


class NoInitial(ExploitLabError):
    pass


class UnknownFixture(ExploitLabError):
    def __init__(self, name: str):
        super().__init__(f"unknown fixture {name!r}")
        self.name = name


class NondeterministicChoice(ExploitLabError):
    """An exhaustive resolver was asked to pick among several alternatives."""


# -- policy DSL ---------------------------------------------------------------

class PolicySyntaxError(ExploitLabError):
    """Malformed policy DSL line (name avoids shadowing builtin SyntaxError)."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UnknownList(ExploitLabError):
    def __init__(self, name: str, line: int):
        super().__init__(f"line {line}: unknown list {name!r}")
        self.name = name
        self.line = line


class EmptyRuleSet(ExploitLabError):
    pass


# -- external policies --------------------------------------------------------

class LaunchFailure(ExploitLabError):
    pass


class HandshakeTimeout(ExploitLabError):
    pass


class VersionMismatch(ExploitLabError):
    pass


class ProtocolViolation(ExploitLabError):
    pass


# -- engine -------------------------------------------------------------------

class AlphabetMismatch(ExploitLabError):
    pass


class OutputMismatch(ExploitLabError):
    """Replay produced a different output word than the transcript records."""

    def __init__(self, turn: int):
        super().__init__(f"output mismatch at turn {turn}")
        self.turn = turn


class UndefinedInput(ExploitLabError):
    """Replay hit a (state, symbol) pair with no transition entry."""

    def __init__(self, turn: int):
        super().__init__(f"undefined input at turn {turn}")
        self.turn = turn


# -- codec --------------------------------------------------------------------

class MalformedGamma(ExploitLabError):
    def __init__(self, position: int, message: str = ""):
        detail = f": {message}" if message else ""
        super().__init__(f"malformed gamma string at position {position}{detail}")
        self.position = position


class EscapeError(ExploitLabError):
    def __init__(self, position: int, message: str = ""):
        detail = f": {message}" if message else ""
        super().__init__(f"bad escape at position {position}{detail}")
        self.position = position


class MalformedStream(ExploitLabError):
    pass


class IndexOutOfRange(ExploitLabError):
    def __init__(self, index: int, size: int):
        super().__init__(f"code {index} out of range for alphabet of size {size}")
        self.index = index
        self.size = size


# -- search -------------------------------------------------------------------

class BudgetExceeded(ExploitLabError):
    pass
