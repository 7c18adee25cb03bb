"""Error hierarchy shared by all modules.

Every error carries a stable ``code`` (the class name) so the CLI can report
it and map it to an exit status without parsing messages.
"""

from __future__ import annotations


class SpeiserError(Exception):
    """Base class. ``details`` is a JSON-friendly payload for reports."""

    def __init__(self, message: str = "", **details):
        super().__init__(message)
        self.details = details

    @property
    def code(self) -> str:
        return type(self).__name__

    def as_dict(self) -> dict:
        return {"error": self.code, "message": str(self), **self.details}


class InputError(SpeiserError):
    """Malformed or invalid input (CLI exit 2)."""


class DomainFailure(SpeiserError):
    """A well-formed question with a negative answer (CLI exit 1)."""


# graph-core
class NotBipartite(InputError): ...
class Disconnected(InputError): ...
class BadTwinPairing(InputError): ...
class BadRotation(InputError): ...
class UnknownVertex(InputError): ...


# labelling
class ValenceTooSmall(InputError): ...
class NotRegular(InputError): ...
class PropagationConflict(DomainFailure): ...
class LabelHasNonDigonFace(DomainFailure): ...
class InconsistentFaceBoundary(DomainFailure): ...


# extension
class QBelowMinValence(InputError): ...
class GloballyUnbalanced(DomainFailure): ...
class PlanMismatch(InputError): ...
class TooLarge(InputError): ...


class Infeasible(DomainFailure):
    def __init__(self, message: str, witness):
        super().__init__(message, witness=witness.as_dict())
        self.witness = witness


# duality
class NotTwoColorable(InputError): ...
class LabellingInconsistent(DomainFailure): ...
class UnsupportedInfinite(InputError): ...


# decomposition
class OddFace(DomainFailure): ...
class EndConditionViolated(InputError): ...


# balance-lab
class NotHomogeneous(InputError): ...


# rendering / corpus
class UnsupportedPeriodic(InputError): ...
class ManifestMalformed(InputError): ...


class WouldCreateLoop(InputError):
    """Forgetting a valence-2 vertex whose two edges are parallel."""


class BoundTooSmall(UserWarning):
    """An enumeration stopped at its bound; a verdict may be incomplete."""
