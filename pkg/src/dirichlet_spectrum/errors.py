"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries the code it
should produce when it escapes a subcommand.
"""


class ArtifactError(Exception):
    exit_code = 1


class InvalidArgument(ArtifactError, ValueError):
    exit_code = 2


class RangeError(ArtifactError, IndexError):
    """A height or block index lies outside the built range."""

    exit_code = 3


class DepthError(RangeError):
    """The requested truncation level needs more blocks than were built."""


class ConstructionIntegrityError(ArtifactError):
    """A structural fact about the sequence failed an exact check."""


class IndecisiveEnclosure(ArtifactError):
    exit_code = 3


class PreconditionViolation(ArtifactError):
    pass


class CertificateRefused(ArtifactError):
    def __init__(self, check, detail=""):
        self.check = check
        super().__init__(f"certificate refused: {check} failed" + (f" ({detail})" if detail else ""))


class BudgetExceeded(ArtifactError):
    exit_code = 3

    def __init__(self, required, budget):
        self.required = required
        self.budget = budget
        super().__init__(f"search needs {required} candidate forms, budget is {budget}")
