"""Exception types shared across the package."""


class RejectedInputError(ValueError):
    """An argument violates an operation's precondition."""


class DegenerateCorpusError(ValueError):
    """A training corpus does not contain both sentiment classes.

    ``model`` holds whatever was counted before the check failed.
    """

    def __init__(self, message: str, model=None):
        super().__init__(message)
        self.model = model


class CorpusFormatError(ValueError):
    """A corpus file is mostly unparseable."""


class FrozenStoreError(RuntimeError):
    """Mutation attempted on a store after ``freeze()``."""
