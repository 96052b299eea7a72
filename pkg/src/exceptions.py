"""
Exception hierarchy shared by every module.
"""


class DuelabError(Exception):
    """Base class for all errors raised by this package."""


class ContractError(DuelabError, ValueError):
    """A precondition of a public operation was violated."""


class DimensionError(ContractError):
    """Operand shapes are incompatible."""

    def __init__(self, message: str, left: tuple = (), right: tuple = ()):
        super().__init__(f"{message}: {tuple(left)} vs {tuple(right)}")
        self.left = tuple(left)
        self.right = tuple(right)


class NotReadyError(DuelabError, RuntimeError):
    """Not enough experience collected yet; act more before retrying."""


class CheckpointError(DuelabError, ValueError):
    """A checkpoint or binary trace could not be decoded."""
