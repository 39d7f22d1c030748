"""Exception hierarchy shared by every migraph module."""

from __future__ import annotations

__all__ = [
    "MigraphError",
    "GraphError",
    "InvalidId",
    "DuplicateId",
    "UnknownEndpoint",
    "SelfLoop",
    "DuplicateEdge",
    "UnknownComponent",
    "TooLarge",
    "OutOfRange",
    "BoundExceeded",
    "InvalidPartition",
    "TooManyBlocks",
    "NoConvergence",
    "ParseError",
    "DocumentSyntaxError",
    "SchemaError",
]


class MigraphError(Exception):
    """Base class for all errors raised by migraph."""


# ---- graph construction -------------------------------------------------


class GraphError(MigraphError, ValueError):
    """A graph could not be built because an invariant was violated."""


class InvalidId(GraphError):
    pass


class DuplicateId(GraphError):
    pass


class UnknownEndpoint(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class UnknownComponent(MigraphError, LookupError):
    """A component id was referenced that is not present in the graph."""

    def __init__(self, component: str, context: str = "") -> None:
        self.component = component
        msg = f"unknown component {component!r}"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)

    def __str__(self) -> str:
        # LookupError would otherwise repr() the message
        return self.args[0]


# ---- strategies ----------------------------------------------------------


class TooLarge(MigraphError):
    """Enumeration would exceed the caller's limit."""


# ---- numerics -------------------------------------------------------------


class OutOfRange(MigraphError, ValueError):
    """A numeric argument lies outside the domain of the operation."""


class BoundExceeded(OutOfRange):
    """An exact combinatorial quantity was requested beyond the configured bound."""


class InvalidPartition(MigraphError, ValueError):
    pass


class TooManyBlocks(MigraphError, ValueError):
    pass


class NoConvergence(MigraphError, ArithmeticError):
    pass


# ---- serialization ------------------------------------------------------


class ParseError(MigraphError, ValueError):
    """A graph document could not be read."""


class DocumentSyntaxError(ParseError):
    """The document is not well-formed UTF-8 JSON."""


class SchemaError(ParseError):
    """The document is valid JSON but does not match the graph document schema."""
