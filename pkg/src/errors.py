"""
Exception hierarchy for udense.

Input problems derive from ValueError so callers that only care about
"bad input" can catch that; computation limits derive from UdenseError alone.
"""

from typing import List, Optional


class UdenseError(Exception):
    """Base class for all udense errors."""


class GraphFormatError(UdenseError, ValueError):
    """Malformed graph, pattern or labels file."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        location = ''
        if path is not None:
            location = f"{path}"
        if line_number is not None:
            location = f"{location}:{line_number}" if location else f"line {line_number}"
        super().__init__(f"{location}: {message}" if location else message)
        self._message = message

    def __reduce__(self):
        return GraphFormatError, (self._message, self.path, self.line_number)


class PatternTooLargeError(UdenseError, ValueError):
    """Pattern has more nodes than the configured matching cap."""


class GraphTooLargeError(UdenseError):
    """Graph exceeds the exhaustive oracle's limits."""


class EnumerationCapError(UdenseError):
    """
    More densest subgraphs than the configured cap.

    Carries the sets enumerated before the cap was hit and, when raised
    from a sampling estimator, the round that produced the world.
    """

    def __init__(self, message: str, partial: Optional[List] = None, round_index: Optional[int] = None):
        self.partial = list(partial or [])
        self.round_index = round_index
        super().__init__(message)

    def at_round(self, round_index: int) -> 'EnumerationCapError':
        return EnumerationCapError(f"round {round_index}: {self.args[0]}", self.partial, round_index)

    def __reduce__(self):
        return EnumerationCapError, (self.args[0], self.partial, self.round_index)


class MiningCapError(UdenseError):
    """Closed-itemset search explored more sets than allowed."""


class FlowOverflowError(UdenseError):
    """Scaled flow capacities do not fit a signed 64-bit integer."""
