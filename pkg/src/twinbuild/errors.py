"""Exception hierarchy.

Every error carries an optional ``witness`` so that verification reports can
name a concrete counterexample.
"""

from __future__ import annotations


class TwinBuildError(Exception):
    """Base class for all package errors."""

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


class InvalidInput(TwinBuildError, ValueError):
    pass


# coxeter
class GroupTooLarge(TwinBuildError):
    pass


class InfiniteOrderEntry(TwinBuildError):
    pass


class NotSpherical(TwinBuildError):
    pass


# building / twin axioms
class AxiomViolation(TwinBuildError):
    """A named axiom fails; ``axiom`` is e.g. ``"Bu2"`` or ``"Tw1"``."""

    def __init__(self, axiom: str, witness=None, detail: str = ""):
        msg = f"axiom {axiom} violated at {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg, witness)
        self.axiom = axiom
        self.detail = detail


class PanelTooSmall(AxiomViolation):
    def __init__(self, witness=None, detail: str = "panel has fewer than 2 chambers"):
        super().__init__("Bu3", witness, detail)


class InconsistentDistance(AxiomViolation):
    def __init__(self, witness=None, detail: str = "minimal galleries disagree"):
        super().__init__("Bu2", witness, detail)


class GateNotUnique(TwinBuildError):
    pass


class InvariantBroken(TwinBuildError):
    """A property guaranteed after validation failed; indicates a bug."""


# chamber systems
class NotConnected(TwinBuildError):
    pass


# twin
class NotOpposite(TwinBuildError):
    pass


class TypeMismatch(TwinBuildError):
    pass


class PreconditionViolated(TwinBuildError):
    pass


# isometries
class NotInjective(TwinBuildError):
    pass


class SignViolation(TwinBuildError):
    pass


class DistanceViolation(TwinBuildError):
    pass


class DomainOverlap(TwinBuildError):
    pass


class AdmissibilityFailure(TwinBuildError):
    pass


class NotOppositeResidues(TwinBuildError):
    pass


class NoExtension(TwinBuildError):
    pass


class MultipleExtensions(TwinBuildError):
    pass


class InconsistentTransport(TwinBuildError):
    pass


class HypothesisViolation(TwinBuildError):
    pass


# workbench
class UnknownCatalogId(TwinBuildError, ValueError):
    pass


class ParseError(TwinBuildError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class SchemaError(TwinBuildError):
    def __init__(self, path: str, message: str = ""):
        super().__init__(f"{path}: {message}" if message else path)
        self.path = path
