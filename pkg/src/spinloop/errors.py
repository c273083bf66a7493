class ContractError(ValueError):
    """An operation was called outside its precondition."""


class UnsupportedSizeError(ContractError):
    """A size parameter lies outside the range an operation supports."""


class NotExpressibleError(ContractError):
    """An element is not in the image of the Stiefel-Whitney subalgebra."""
