"""Exception hierarchy shared by all viphone modules."""

from __future__ import annotations


class ViphoneError(Exception):
    """Base class for data errors raised by the library."""


class UnknownToken(ViphoneError):
    def __init__(self, symbol: str, position: int | None = None) -> None:
        self.symbol = symbol
        self.position = position
        where = "" if position is None else f" at token {position}"
        super().__init__(f"unknown phone token {symbol!r}{where}")


class MalformedSyllable(ViphoneError):
    pass


class MultipleToneMarks(ViphoneError):
    pass


class NotAVietnameseSyllable(ViphoneError):
    pass


class IllegalCombination(ViphoneError):
    pass


class UnmappedGrapheme(ViphoneError):
    pass


class OOVEnglishWord(ViphoneError):
    def __init__(self, token: str) -> None:
        self.token = token
        super().__init__(f"English word {token!r} has no lexicon entry")


class UnsupportedSegment(ViphoneError):
    pass


class UnmappedCluster(ViphoneError):
    pass


class UnmappedRime(ViphoneError):
    pass


class EmptyCorpus(ViphoneError):
    pass
