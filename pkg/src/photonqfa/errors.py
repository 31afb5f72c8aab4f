class DomainError(ValueError):
    """Raised when an argument lies outside the model's domain."""


class SearchCapError(RuntimeError):
    """Raised when a photon-budget scan exceeds its search cap."""
